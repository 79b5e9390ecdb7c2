#include "spingap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "spingap/aklt.hpp"
#include "spingap/pvbs.hpp"
#include "spingap/so_models.hpp"

namespace spingap {

ChainOperator assemble_hamiltonian(const NearestNeighborInteraction& h, int n_sites,
                                   Index dense_ceiling, Index matvec_ceiling) {
  h.validate();
  if (n_sites < 2) throw ValidationError("assemble_hamiltonian: need N >= 2");
  const Index d = h.d;
  Index total = 1;
  for (int i = 0; i < n_sites; ++i) {
    if (total > matvec_ceiling / d) {
      throw SizeError("assemble_hamiltonian: d^N exceeds ceiling " +
                      std::to_string(matvec_ceiling));
    }
    total *= d;
  }

  ChainOperator op;
  op.dim = total;
  op.norm_bound = double(n_sites - 1);  // sum of N-1 projectors
  op.model = h.model;

  const Index d2 = d * d;
  const Matrix hmat = h.matrix;
  const int sites = n_sites;
  op.apply = [hmat, d, d2, total, sites](const Vector& x) {
    Vector y = Vector::Zero(total);
    Index left = 1;
    for (int site = 0; site + 2 <= sites; ++site) {
      const Index right = total / (left * d2);
      for (Index a = 0; a < left; ++a) {
        const Index base = a * d2 * right;
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            xb(x.data() + base, d2, right);
        Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> yb(
            y.data() + base, d2, right);
        yb += hmat * xb;
      }
      left *= d;
    }
    return y;
  };

  if (total <= dense_ceiling) {
    Matrix ham = Matrix::Zero(total, total);
    Index left = 1;
    for (int site = 0; site + 2 <= n_sites; ++site) {
      const Index right = total / (left * d2);
      for (Index a = 0; a < left; ++a) {
        const Index base = a * d2 * right;
        for (Index r1 = 0; r1 < d2; ++r1) {
          for (Index r2 = 0; r2 < d2; ++r2) {
            const Complex c = hmat(r1, r2);
            if (c == 0.0) continue;
            for (Index b = 0; b < right; ++b) {
              ham(base + r1 * right + b, base + r2 * right + b) += c;
            }
          }
        }
      }
      left *= d;
    }
    op.dense = std::move(ham);
  }
  return op;
}

namespace {

struct ClusterResult {
  double ground = 0.0;
  Index kernel = 0;
  double gap = 0.0;
};

// Kernel cluster: chain of eigenvalues starting at the bottom with consecutive
// spacings below thr; the gap is the first eigenvalue above the cluster.
ClusterResult cluster_kernel(const std::vector<double>& ascending, double thr) {
  ClusterResult res;
  res.ground = ascending.front();
  std::size_t m = 1;
  while (m < ascending.size() && ascending[m] - ascending[m - 1] <= thr) ++m;
  res.kernel = static_cast<Index>(m);
  res.gap = m < ascending.size() ? ascending[m] : 0.0;
  return res;
}

}  // namespace

SpectrumReport spectral_gap(const ChainOperator& op, std::optional<Index> expected_kernel_dim,
                            const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SpectrumReport rep;
  rep.model_id = op.model;
  rep.tol = cfg.tol;

  // Auto prefers the dense solver only while the cubic cost is negligible;
  // above that the Lanczos path resolves the kernel cluster much faster.
  const bool dense = cfg.kind == SolverKind::Dense ||
                     (cfg.kind == SolverKind::Auto && op.dense.has_value() && op.dim <= 1536);
  if (dense && !op.dense.has_value()) {
    throw ValidationError("spectral_gap: dense solve requested but no dense matrix assembled");
  }

  std::vector<double> eigs;
  double norm_est = op.norm_bound;
  if (dense) {
    rep.solver = "dense";
    auto es = hermitian_eigensystem(*op.dense);
    eigs.assign(es.eigenvalues.data(), es.eigenvalues.data() + es.eigenvalues.size());
    norm_est = std::max(std::abs(eigs.front()), std::abs(eigs.back()));
  } else {
    rep.solver = "krylov";
    Index want = (expected_kernel_dim ? *expected_kernel_dim : cfg.kernel_hint) + cfg.extra;
    want = std::min(want, op.dim);
    for (;;) {
      eigs = krylov_lowest_eigs(op.apply, op.dim, static_cast<int>(want), cfg.tol, cfg.seed);
      const double thr = cfg.cluster_rel * std::max(1.0, norm_est);
      const auto probe = cluster_kernel(eigs, thr);
      if (probe.kernel < static_cast<Index>(eigs.size()) || want == op.dim) break;
      want = std::min(op.dim, want * 2);  // whole batch sat in the cluster; look deeper
    }
  }

  const double thr = cfg.cluster_rel * std::max(1.0, norm_est);
  rep.cluster_tol = thr;
  const auto clu = cluster_kernel(eigs, thr);
  rep.ground_energy = clu.ground;
  rep.kernel_dim = clu.kernel;
  rep.gap = clu.gap;

  if (expected_kernel_dim && clu.kernel != *expected_kernel_dim) {
    throw CertificationError("spectral_gap: kernel dimension " + std::to_string(clu.kernel) +
                             " does not match expected " + std::to_string(*expected_kernel_dim) +
                             " for " + op.model);
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, ptr);
}

std::string format_complex(Complex v) {
  std::string out = format_double(v.real());
  out += v.imag() < 0 ? "-" : "+";
  out += format_double(std::abs(v.imag()));
  out += "i";
  return out;
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  };
  emit_row(header);
  for (const auto& row : rows) emit_row(row);
  return os.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_string();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  cfg.model = j.at("model").get<std::string>();
  cfg.raw = j;
  return cfg;
}

namespace {

std::vector<double> grid_values(const nlohmann::json& j, double lo, double hi) {
  if (j.contains("values")) return j.at("values").get<std::vector<double>>();
  const int count = j.contains("grid") ? j.at("grid").get<int>() : 11;
  if (count < 1) throw ValidationError("sweep: grid must be nonempty");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  }
  return out;
}

SolverConfig sweep_solver(const nlohmann::json& j) {
  SolverConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("solver")) {
    const std::string s = j.at("solver").get<std::string>();
    if (s == "dense")
      cfg.kind = SolverKind::Dense;
    else if (s == "krylov")
      cfg.kind = SolverKind::Krylov;
    else if (s == "auto")
      cfg.kind = SolverKind::Auto;
    else
      throw ValidationError("sweep: unknown solver '" + s + "'");
  }
  return cfg;
}

template <typename RowFn>
std::vector<std::vector<std::string>> run_rows(std::size_t count, int workers, RowFn&& fn) {
  std::vector<std::vector<std::string>> rows(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = fn(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      rows[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers - 1; ++w) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace

CsvTable run_sweep(const SweepConfig& cfg) {
  const nlohmann::json& j = cfg.raw;
  const int n_sites = j.value("N", 6);
  const int workers = j.value("workers", 1);
  const SolverConfig solver = sweep_solver(j);
  CsvTable table;

  if (cfg.model == "pvbs-lambda") {
    const PvbsParams base = PvbsParams::from_json(j);
    const int vary = j.value("vary_index", 1);
    if (vary < 1 || vary > base.n()) throw ValidationError("sweep: vary_index out of range");
    const auto values = grid_values(j, 0.2, 2.0);
    if (values.empty()) throw ValidationError("sweep: empty grid");
    table.header = {"lambda_" + std::to_string(vary), "N",   "ground_energy", "kernel_dim",
                    "gap",                            "solver", "wall_time_s",   "status"};
    table.rows = run_rows(values.size(), workers, [&](std::size_t i) -> std::vector<std::string> {
      std::vector<double> lambdas = base.lambdas();
      lambdas[static_cast<std::size_t>(vary) - 1] = values[i];
      try {
        const PvbsParams p(lambdas);
        const auto op = assemble_hamiltonian(pvbs_interaction(p), n_sites);
        const auto rep = spectral_gap(op, std::nullopt, solver);
        return {format_double(values[i]),      std::to_string(n_sites),
                format_double(rep.ground_energy), std::to_string(rep.kernel_dim),
                format_double(rep.gap),        rep.solver,
                format_double(rep.wall_time_s), "ok"};
      } catch (const std::exception& e) {
        return {format_double(values[i]), std::to_string(n_sites), "", "", "", "", "",
                std::string("error: ") + e.what()};
      }
    });
  } else if (cfg.model == "aklt-path") {
    const PathSchedule sched = PathSchedule::standard();
    const auto values = grid_values(j, 0.0, sched.s0);
    if (values.empty()) throw ValidationError("sweep: empty grid");
    const int mk = j.value("martingale_k", 0);
    const int mn = j.value("martingale_N", mk > 0 ? 2 * mk - 2 : 0);
    table.header = {"s",   "f",          "g",          "t2",     "t4",
                    "gap", "kernel_dim", "g_{k,N}",    "solver", "status"};
    table.rows = run_rows(values.size(), workers, [&](std::size_t i) -> std::vector<std::string> {
      const double s = values[i];
      try {
        const double fs = sched.f(s);
        const double gs = sched.g(s);
        const double t2 = -fs * std::cos(s) * std::cos(s);
        const double t4 = fs * fs * std::cos(s) * std::cos(s) - std::sin(s) * std::sin(s);
        const auto op = assemble_hamiltonian(path_interaction(s, sched), n_sites);
        const auto rep = spectral_gap(op, Index{4}, solver);
        std::string g_kn;
        if (mk >= 2) g_kn = format_double(martingale_along_path(s, mk, std::max(mn, mk), sched));
        return {format_double(s),       format_double(fs),        format_double(gs),
                format_double(t2),      format_double(t4),        format_double(rep.gap),
                std::to_string(rep.kernel_dim), g_kn,             rep.solver,
                "ok"};
      } catch (const std::exception& e) {
        return {format_double(s), "", "", "", "", "", "", "", "", std::string("error: ") + e.what()};
      }
    });
  } else if (cfg.model == "so-path") {
    const int j_max = j.value("J", 1);
    std::vector<double> lambda0(static_cast<std::size_t>(j_max), 0.5);
    if (j.contains("lambda0")) lambda0 = j.at("lambda0").get<std::vector<double>>();
    if (static_cast<int>(lambda0.size()) != j_max) {
      throw ValidationError("sweep: lambda0 must have J entries");
    }
    const double s0 = so_s0(j_max);
    const LambdaProfile profile = [j_max, lambda0, s0](double s) {
      std::vector<double> l(static_cast<std::size_t>(j_max));
      for (int a = 0; a < j_max; ++a) {
        l[static_cast<std::size_t>(a)] =
            lambda0[static_cast<std::size_t>(a)] +
            (1.0 - lambda0[static_cast<std::size_t>(a)]) * s / s0;
      }
      return l;
    };
    auto values = grid_values(j, 0.0, s0);
    if (values.empty()) throw ValidationError("sweep: empty grid");
    table.header = {"s",          "top_error",  "subdominant_margin", "irreducible",
                    "kernel_dim", "gap",        "solver",             "status"};
    table.rows = run_rows(values.size(), workers, [&](std::size_t i) -> std::vector<std::string> {
      const double s = values[i];
      try {
        const auto cert = so_transfer_check(j_max, s, profile);
        const auto op = assemble_hamiltonian(so_path_interaction(j_max, s, profile), n_sites);
        const auto rep = spectral_gap(op, std::nullopt, solver);
        return {format_double(s),
                format_double(cert.top_error),
                format_double(cert.subdominant_margin),
                cert.irreducible ? "1" : "0",
                std::to_string(rep.kernel_dim),
                format_double(rep.gap),
                rep.solver,
                "ok"};
      } catch (const std::exception& e) {
        return {format_double(s), "", "", "", "", "", "", std::string("error: ") + e.what()};
      }
    });
  } else {
    throw ValidationError("sweep: unknown model '" + cfg.model + "'");
  }
  return table;
}

}  // namespace spingap
