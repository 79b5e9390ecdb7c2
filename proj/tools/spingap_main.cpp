#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spingap/aklt.hpp"
#include "spingap/harness.hpp"
#include "spingap/pvbs.hpp"
#include "spingap/so_models.hpp"
#include "spingap/verify.hpp"

namespace {

using nlohmann::json;
using namespace spingap;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCertification = 3;
constexpr int kExitSolver = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = kDefaultSeed;
  std::string solver = "auto";
  double tol = 1e-10;
  bool as_json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--out", opts.out_path, "CSV output path");
  cmd->add_option("--seed", opts.seed, "RNG seed");
  cmd->add_option("--solver", opts.solver, "dense|krylov|auto")
      ->check(CLI::IsMember({"dense", "krylov", "auto"}));
  cmd->add_option("--tol", opts.tol, "solver tolerance");
  cmd->add_flag("--json", opts.as_json, "machine-readable stdout");
}

SolverConfig solver_config(const CommonOpts& opts) {
  SolverConfig cfg;
  cfg.seed = opts.seed;
  cfg.tol = opts.tol;
  if (opts.solver == "dense") cfg.kind = SolverKind::Dense;
  if (opts.solver == "krylov") cfg.kind = SolverKind::Krylov;
  return cfg;
}

json load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) throw ValidationError("missing --config");
  std::ifstream in(opts.config_path);
  if (!in) throw ValidationError("cannot open config '" + opts.config_path + "'");
  json j;
  in >> j;
  return j;
}

void emit_table(const CsvTable& table, const CommonOpts& opts) {
  if (!opts.out_path.empty()) {
    table.write(opts.out_path);
    std::cerr << "wrote " << table.rows.size() << " rows to " << opts.out_path << "\n";
  } else {
    std::cout << table.to_string();
  }
}

json report_json(const SpectrumReport& rep) {
  return json{{"model", rep.model_id},     {"N", rep.n_sites},
              {"ground_energy", rep.ground_energy}, {"kernel_dim", rep.kernel_dim},
              {"gap", rep.gap},            {"solver", rep.solver},
              {"tol", rep.tol},            {"cluster_tol", rep.cluster_tol},
              {"wall_time_s", rep.wall_time_s}};
}

int cmd_pvbs_gap(const CommonOpts& opts, int n_sites, bool no_expect) {
  const PvbsParams p = PvbsParams::from_json(load_config(opts));
  const auto op = assemble_hamiltonian(pvbs_interaction(p), n_sites);
  std::optional<Index> expected;
  if (!no_expect && p.gapped_admissible()) expected = Index(1) << p.n();
  SpectrumReport rep = spectral_gap(op, expected, solver_config(opts));
  rep.n_sites = n_sites;
  const auto bound = gap_upper_bound(p, n_sites);
  if (opts.as_json) {
    json j = report_json(rep);
    if (bound.finite) j["gap_upper_bound"] = bound.value;
    j["critical"] = bound.critical;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "model " << rep.model_id << ", N=" << n_sites << "\n"
              << "  ground energy  " << format_double(rep.ground_energy) << "\n"
              << "  kernel dim     " << rep.kernel_dim << "\n"
              << "  gap            " << format_double(rep.gap) << "\n";
    if (bound.finite) std::cout << "  upper bound    " << format_double(bound.value) << "\n";
    if (bound.critical) std::cout << "  critical model (some lambda_i = 1)\n";
  }
  return kExitOk;
}

int cmd_pvbs_classify(const CommonOpts& opts) {
  const PvbsParams p = PvbsParams::from_json(load_config(opts));
  const PhaseLabel label = classify(p);
  if (opts.as_json) {
    std::cout << json{{"n_left", label.n_left}, {"n_right", label.n_right}}.dump(2) << "\n";
  } else {
    std::cout << "(n_L, n_R) = (" << label.n_left << ", " << label.n_right << ")\n";
  }
  return kExitOk;
}

int cmd_pvbs_one_particle(const CommonOpts& opts, double lambda, int n_max) {
  const auto cert = one_particle_gap_certificate(lambda, n_max);
  if (opts.as_json) {
    std::cout << json{{"pass", cert.pass},
                      {"lambda", cert.lambda},
                      {"limit_gap", cert.limit_gap},
                      {"min_gap", cert.min_gap},
                      {"max_top_error", cert.max_top_error},
                      {"min_interval_clearance", cert.min_interval_clearance},
                      {"max_recursion_residual", cert.max_recursion_residual},
                      {"failure", cert.failure}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "one-particle certificate, lambda=" << format_double(lambda) << ", N<="
              << n_max << "\n"
              << "  limit gap 1-2/(lambda+1/lambda) = " << format_double(cert.limit_gap) << "\n"
              << "  min gap over N                  = " << format_double(cert.min_gap) << "\n"
              << "  top eigenvalue error            = " << format_double(cert.max_top_error) << "\n"
              << "  clearance below 2               = "
              << format_double(cert.min_interval_clearance) << "\n"
              << "  recursion residual              = "
              << format_double(cert.max_recursion_residual) << "\n"
              << (cert.pass ? "  PASS" : "  FAIL: " + cert.failure) << "\n";
  }
  return cert.pass ? kExitOk : kExitCertification;
}

int cmd_transfer_spectrum(const CommonOpts& opts) {
  const PvbsParams p = PvbsParams::from_json(load_config(opts));
  const auto closed = pvbs_transfer_spectrum_closed_form(p);
  const auto spec = transfer_spectrum(pvbs_mps(p));
  std::vector<Complex> numeric(spec.eigenvalues.data(),
                               spec.eigenvalues.data() + spec.eigenvalues.size());
  const double dist = spectrum_multiset_distance(closed.values, numeric);
  if (opts.as_json) {
    json vals = json::array();
    for (const auto& t : numeric) vals.push_back(format_complex(t));
    std::cout << json{{"eigenvalues", vals},
                      {"closed_form_distance", dist},
                      {"top", format_complex(closed.top)},
                      {"top_simple", closed.top_simple}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "transfer spectrum (modulus-sorted), closed-form distance "
              << format_double(dist) << "\n";
    for (const auto& t : numeric) std::cout << "  " << format_complex(t) << "\n";
  }
  return dist <= 1e-9 ? kExitOk : kExitCertification;
}

int cmd_aklt_path(const CommonOpts& opts, int n_sites, int grid, int martingale_k) {
  json j{{"model", "aklt-path"}, {"N", n_sites}, {"grid", grid}, {"seed", opts.seed},
         {"solver", opts.solver}};
  if (martingale_k >= 2) j["martingale_k"] = martingale_k;
  const CsvTable table = run_sweep(SweepConfig::from_json(j));
  emit_table(table, opts);
  return kExitOk;
}

int cmd_martingale(const CommonOpts& opts, const std::string& model, int k, int n_sites,
                   double s) {
  double g = 0.0;
  if (model == "aklt") {
    const auto sched = PathSchedule::standard();
    g = martingale_along_path(s < 0 ? sched.s0 : s, k, n_sites, sched);
  } else if (model == "pvbs") {
    const PvbsParams p = PvbsParams::from_json(load_config(opts));
    g = martingale_coefficient(pvbs_interaction(p), pvbs_mps(p), k, n_sites);
  } else {
    throw ValidationError("martingale: model must be aklt or pvbs");
  }
  const double inv_sqrt_k = 1.0 / std::sqrt(double(k));
  if (opts.as_json) {
    std::cout << json{{"g", g}, {"g_squared", g * g}, {"threshold", inv_sqrt_k}}.dump(2) << "\n";
  } else {
    std::cout << "g_{" << k << "," << n_sites << "} = " << format_double(g)
              << "  (usable iff < 1/sqrt(k) = " << format_double(inv_sqrt_k) << ")\n";
  }
  return kExitOk;
}

int cmd_so_models(const CommonOpts& opts, int j_max, int n_sites, int grid) {
  json j{{"model", "so-path"}, {"J", j_max}, {"N", n_sites}, {"grid", grid},
         {"seed", opts.seed}, {"solver", opts.solver}};
  if (!opts.config_path.empty()) {
    const json user = load_config(opts);
    for (const auto& [key, value] : user.items()) j[key] = value;
  }
  const CsvTable table = run_sweep(SweepConfig::from_json(j));
  emit_table(table, opts);
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
  json j = load_config(opts);
  if (!j.contains("seed")) j["seed"] = opts.seed;
  if (!j.contains("solver")) j["solver"] = opts.solver;
  const CsvTable table = run_sweep(SweepConfig::from_json(j));
  if (!opts.out_path.empty()) {
    table.write(opts.out_path);
    std::cerr << "wrote " << table.rows.size() << " rows to " << opts.out_path << "\n";
  } else if (j.contains("out")) {
    table.write(j.at("out").get<std::string>());
  } else {
    std::cout << table.to_string();
  }
  return kExitOk;
}

int cmd_verify(const CommonOpts& opts, const std::string& bundle) {
  const auto results = run_acceptance(bundle);
  if (opts.as_json) {
    json arr = json::array();
    for (const auto& r : results) {
      arr.push_back(json{{"id", r.id},
                         {"name", r.name},
                         {"pass", r.pass},
                         {"detail", r.detail},
                         {"seconds", r.seconds}});
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.name;
      if (!r.detail.empty()) std::cout << " -- " << r.detail;
      std::cout << " (" << format_double(r.seconds) << "s)\n";
    }
  }
  return all_passed(results) ? kExitOk : kExitCertification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-chain gap certification toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  int n_sites = 6;
  int n_max = 100;
  int grid = 11;
  int martingale_k = 0;
  int j_max = 1;
  double lambda = 0.5;
  double s_value = -1.0;
  bool no_expect = false;
  std::string model = "aklt";
  std::string bundle = "all";

  auto* gap = app.add_subcommand("pvbs-gap", "kernel dimension and spectral gap");
  add_common(gap, opts);
  gap->add_option("--N", n_sites, "chain length");
  gap->add_flag("--no-expect", no_expect, "do not certify the kernel dimension");

  auto* cls = app.add_subcommand("pvbs-classify", "phase label (n_L, n_R)");
  add_common(cls, opts);

  auto* onep = app.add_subcommand("pvbs-one-particle", "one-particle gap certificate");
  add_common(onep, opts);
  onep->add_option("--lambda", lambda, "hopping weight")->required();
  onep->add_option("--N-max", n_max, "largest chain length");

  auto* tsp = app.add_subcommand("transfer-spectrum", "transfer operator vs closed form");
  add_common(tsp, opts);

  auto* ak = app.add_subcommand("aklt-path", "gap table along the interpolation path");
  add_common(ak, opts);
  ak->add_option("--N", n_sites, "chain length");
  ak->add_option("--grid", grid, "number of s points");
  ak->add_option("--martingale-k", martingale_k, "add a g_{k,N} column");

  auto* mart = app.add_subcommand("martingale", "martingale coefficient g_{k,N}");
  add_common(mart, opts);
  int mart_k = 3;
  int mart_n = 5;
  mart->add_option("--model", model, "aklt|pvbs");
  mart->add_option("--k", mart_k, "window length");
  mart->add_option("--N", mart_n, "chain length (N+1 sites are used)");
  mart->add_option("--s", s_value, "path parameter (aklt; default s0)");

  auto* so = app.add_subcommand("so-models", "SO(2J+1) path certificates");
  add_common(so, opts);
  so->add_option("--J", j_max, "half the number of particle types");
  so->add_option("--N", n_sites, "chain length");
  so->add_option("--grid", grid, "number of s points");

  auto* sw = app.add_subcommand("sweep", "parameter sweep to CSV");
  add_common(sw, opts);

  auto* ver = app.add_subcommand("verify", "acceptance bundle");
  add_common(ver, opts);
  ver->add_option("--bundle", bundle, "pvbs|aklt|so|all")
      ->check(CLI::IsMember({"pvbs", "aklt", "so", "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (gap->parsed()) return cmd_pvbs_gap(opts, n_sites, no_expect);
    if (cls->parsed()) return cmd_pvbs_classify(opts);
    if (onep->parsed()) return cmd_pvbs_one_particle(opts, lambda, n_max);
    if (tsp->parsed()) return cmd_transfer_spectrum(opts);
    if (ak->parsed()) return cmd_aklt_path(opts, n_sites, grid, martingale_k);
    if (mart->parsed()) return cmd_martingale(opts, model, mart_k, mart_n, s_value);
    if (so->parsed()) return cmd_so_models(opts, j_max, n_sites, grid);
    if (sw->parsed()) return cmd_sweep(opts);
    if (ver->parsed()) return cmd_verify(opts, bundle);
  } catch (const PhaseObstructionError& e) {
    std::cerr << "phase obstruction: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return kExitCertification;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
