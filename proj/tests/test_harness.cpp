#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "spingap/aklt.hpp"
#include "spingap/harness.hpp"
#include "spingap/pvbs.hpp"
#include "spingap/so_models.hpp"

using namespace spingap;

TEST_CASE("assemble_hamiltonian: two sites give the bare interaction") {
  const auto h = pvbs_interaction(PvbsParams(std::vector<double>{0.5}));
  const auto op = assemble_hamiltonian(h, 2);
  REQUIRE(op.dense.has_value());
  CHECK((*op.dense - h.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assemble_hamiltonian: dense assembly equals the kron sum") {
  const auto h = pvbs_interaction(PvbsParams(std::vector<double>{0.5}));
  const auto op = assemble_hamiltonian(h, 3);
  REQUIRE(op.dense.has_value());
  const Matrix expected = kron(h.matrix, Matrix::Identity(2, 2)) +
                          kron(Matrix::Identity(2, 2), h.matrix);
  CHECK((*op.dense - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("assemble_hamiltonian: dense and matvec agree on seeded vectors") {
  std::mt19937_64 rng(kDefaultSeed);
  std::normal_distribution<double> gauss;
  const auto sched = PathSchedule::standard();
  const std::vector<NearestNeighborInteraction> models = {
      pvbs_interaction(PvbsParams({0.5, 2.0})),
      path_interaction(sched.s0 / 2.0, sched),
      so_interaction_mps_basis(1),
  };
  for (const auto& h : models) {
    for (int n_sites = 3; n_sites <= 6; ++n_sites) {
      const auto op = assemble_hamiltonian(h, n_sites);
      if (!op.dense.has_value()) continue;
      for (int t = 0; t < 20; ++t) {
        Vector x(op.dim);
        for (Index i = 0; i < op.dim; ++i) x(i) = Complex(gauss(rng), gauss(rng));
        const Vector via_dense = *op.dense * x;
        const Vector via_apply = op.apply(x);
        CHECK((via_dense - via_apply).norm() <= 1e-12 * op.norm_bound * x.norm());
      }
    }
  }
}

TEST_CASE("assemble_hamiltonian: matvec path beyond the dense ceiling") {
  const auto h = pvbs_interaction(PvbsParams(std::vector<double>{0.5}));
  const auto op = assemble_hamiltonian(h, 13);  // 8192 > 4096
  CHECK_FALSE(op.dense.has_value());
  CHECK(op.dim == 8192);
  // Hermiticity through the closure: <x, Hy> = <Hx, y>.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Vector x(op.dim), y(op.dim);
  for (Index i = 0; i < op.dim; ++i) {
    x(i) = Complex(gauss(rng), gauss(rng));
    y(i) = Complex(gauss(rng), gauss(rng));
  }
  CHECK(std::abs(x.dot(op.apply(y)) - op.apply(x).dot(y)) < 1e-10 * x.norm() * y.norm());

  CHECK_THROWS_AS(assemble_hamiltonian(h, 40), SizeError);
}

TEST_CASE("spectral_gap: frustration-free models and kernel certification") {
  const PvbsParams p(std::vector<double>{0.5});
  const auto op = assemble_hamiltonian(pvbs_interaction(p), 6);
  const auto rep = spectral_gap(op, Index{2});
  CHECK(rep.solver == "dense");
  CHECK(rep.kernel_dim == 2);
  CHECK(rep.ground_energy >= -1e-9);
  CHECK(rep.ground_energy <= 1e-9);
  CHECK(rep.gap > 0.0);
  CHECK(rep.gap <= gap_upper_bound(p, 6).value + 1e-9);

  CHECK_THROWS_AS(spectral_gap(op, Index{3}), CertificationError);

  // Krylov agrees with the dense result.
  SolverConfig krylov;
  krylov.kind = SolverKind::Krylov;
  const auto rep_k = spectral_gap(op, Index{2}, krylov);
  CHECK(rep_k.solver == "krylov");
  CHECK(rep_k.kernel_dim == 2);
  CHECK(std::abs(rep_k.gap - rep.gap) < 1e-8);
}

TEST_CASE("spectral_gap: aklt chain has kernel four and a positive gap") {
  const auto op = assemble_hamiltonian(aklt_interaction(), 6);
  const auto rep = spectral_gap(op, Index{4});
  CHECK(rep.kernel_dim == 4);
  CHECK(rep.gap > 0.1);
}

TEST_CASE("spectral_gap: iterative solver resolves the degenerate kernel at N=8") {
  const auto op = assemble_hamiltonian(pvbs_interaction(PvbsParams(std::vector<double>{0.5})), 8);
  SolverConfig cfg;
  cfg.kind = SolverKind::Krylov;
  const auto rep = spectral_gap(op, Index{2}, cfg);
  CHECK(rep.kernel_dim == 2);
  CHECK(rep.ground_energy >= -1e-9);
  CHECK(rep.gap > 0.0);
}

TEST_CASE("sector consistency: full gap equals the minimum over sectors") {
  const PvbsParams p({0.5, 2.0}, {{{0, 1}, 0.3}});
  const int n_sites = 4;
  const auto op = assemble_hamiltonian(pvbs_interaction(p), n_sites);
  REQUIRE(op.dense.has_value());
  const auto full = hermitian_eigensystem(*op.dense);

  const auto dec = sector_decomposition(p, n_sites);
  std::vector<double> all;
  for (const auto& sector : dec.sectors) {
    Matrix sub(sector.size(), sector.size());
    for (std::size_t r = 0; r < sector.size(); ++r)
      for (std::size_t c = 0; c < sector.size(); ++c)
        sub(static_cast<Index>(r), static_cast<Index>(c)) =
            (*op.dense)(sector[r], sector[c]);
    const auto es = hermitian_eigensystem(sub);
    for (Index i = 0; i < es.eigenvalues.size(); ++i) all.push_back(es.eigenvalues(i));
  }
  std::sort(all.begin(), all.end());
  for (Index i = 0; i < full.eigenvalues.size(); ++i) {
    CHECK(std::abs(all[static_cast<std::size_t>(i)] - full.eigenvalues(i)) < 1e-10);
  }
}

TEST_CASE("csv: shortest round-trip formatting and file round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_complex(Complex(1.5, 0.25)) == "1.5+0.25i");
  CHECK(format_complex(Complex(1.5, -0.25)) == "1.5-0.25i");

  CsvTable t;
  t.header = {"a", "b", "c"};
  t.rows = {{format_double(0.1), format_complex(Complex(0, -1)), "ok"},
            {format_double(1e-300), format_double(12345.6789), "x"}};
  const std::string path = "harness_csv_test.csv";
  t.write(path);
  const auto back = CsvTable::read(path);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  std::remove(path.c_str());
}

TEST_CASE("run_sweep: aklt grid rows, pvbs dip near the critical point") {
  nlohmann::json aklt_cfg{{"model", "aklt-path"}, {"N", 4}, {"grid", 5}};
  const auto table = run_sweep(SweepConfig::from_json(aklt_cfg));
  CHECK(table.rows.size() == 5);
  for (const auto& row : table.rows) {
    CHECK(row.back() == "ok");
    CHECK(row[6] == "4");  // kernel_dim column
  }

  nlohmann::json pvbs_cfg{{"model", "pvbs-lambda"},
                          {"lambda", {0.5}},
                          {"vary_index", 1},
                          {"values", {0.6, 0.8, 1.0, 1.25, 1.6}},
                          {"N", 6}};
  const auto dip = run_sweep(SweepConfig::from_json(pvbs_cfg));
  REQUIRE(dip.rows.size() == 5);
  std::vector<double> gaps;
  for (const auto& row : dip.rows) gaps.push_back(std::stod(row[4]));
  CHECK(*std::min_element(gaps.begin(), gaps.end()) == gaps[2]);  // lambda = 1

  nlohmann::json empty_cfg{{"model", "pvbs-lambda"}, {"lambda", {0.5}},
                           {"values", nlohmann::json::array()}};
  CHECK_THROWS_AS(run_sweep(SweepConfig::from_json(empty_cfg)), ValidationError);
}

TEST_CASE("run_sweep: worker count does not change the table") {
  nlohmann::json cfg{{"model", "aklt-path"}, {"N", 3}, {"grid", 4}};
  const auto serial = run_sweep(SweepConfig::from_json(cfg));
  cfg["workers"] = 3;
  const auto parallel = run_sweep(SweepConfig::from_json(cfg));
  CHECK(serial.to_string() == parallel.to_string());
}
