#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spingap/aklt.hpp"
#include "spingap/harness.hpp"

using namespace spingap;

TEST_CASE("PathSchedule: standard profile and validation") {
  const auto sched = PathSchedule::standard();
  sched.validate();
  CHECK(sched.s0 == doctest::Approx(std::asin(std::sqrt(2.0 / 3.0))));
  CHECK(sched.delta == doctest::Approx(sched.s0 / 2.0));  // s0/2 is the binding constraint
  CHECK(sched.f(0.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sched.f(sched.s0) == doctest::Approx(1.0));
  CHECK(sched.f(sched.delta / 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  // Non-monotone profile is rejected.
  PathSchedule bad = sched;
  bad.f = [&sched](double s) { return sched.f(sched.s0 - s); };
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("aklt_interaction: spin-2 projector") {
  const auto h = aklt_interaction();
  CHECK(std::abs(h.matrix.trace().real() - 5.0) < 1e-12);
  CHECK((h.matrix * h.matrix - h.matrix).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(h.rank() == 5);

  const auto sched = PathSchedule::standard();
  CHECK(operator_norm(h.matrix - path_interaction(sched.s0, sched).matrix) < 1e-12);

  // Annihilates the two-site ground vectors at the AKLT point.
  const auto basis = zeta_basis(sched.s0, 2, sched);
  for (const auto& zeta : basis.vectors) {
    CHECK((h.matrix * zeta).norm() < 1e-12 * zeta.norm());
  }
}

TEST_CASE("path_interaction: endpoint identities and regularity") {
  const auto sched = PathSchedule::standard();
  CHECK(operator_norm(path_interaction(0.0, sched).matrix -
                      path_endpoint_pvbs_interaction().matrix) < 1e-12);

  // Finite Lipschitz constant along the path.
  const double eps = 1e-6;
  double max_slope = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double s = (sched.s0 - eps) * i / 20.0;
    const double slope =
        operator_norm(path_interaction(s + eps, sched).matrix -
                      path_interaction(s, sched).matrix) /
        eps;
    max_slope = std::max(max_slope, slope);
  }
  CHECK(max_slope < 100.0);

  CHECK_THROWS_AS(path_interaction(-0.1, sched), ValidationError);
  CHECK_THROWS_AS(path_interaction(sched.s0 + 0.1, sched), ValidationError);

  // The two-site kernel is spanned by the zeta vectors for all s > 0.
  for (int i = 1; i <= 5; ++i) {
    const double s = sched.s0 * i / 5.0;
    const auto h = path_interaction(s, sched);
    const auto basis = zeta_basis(s, 2, sched);
    Matrix cols(9, 4);
    for (int mu = 0; mu < 4; ++mu) cols.col(mu) = basis.vectors[static_cast<std::size_t>(mu)];
    const auto zeta_frame = orthonormal_frame_of_span(cols);
    const auto es = hermitian_eigensystem(h.matrix);
    Frame kernel{9, es.eigenvectors.leftCols(4)};
    CHECK(es.eigenvalues(3) < 1e-12);
    CHECK(subspace_distance(zeta_frame, kernel) < 1e-10);
  }
}

TEST_CASE("path_mps: endpoints and isometry") {
  const auto sched = PathSchedule::standard();
  const auto at_top = path_mps(sched.s0, sched);
  const auto ref = aklt_mps();
  for (int i = 0; i < 3; ++i) {
    CHECK((at_top.matrices[static_cast<std::size_t>(i)] -
           ref.matrices[static_cast<std::size_t>(i)])
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }
  const auto at_zero = path_mps(0.0, sched);
  CHECK(at_zero.matrices[2].cwiseAbs().maxCoeff() == 0.0);  // w_+(0) = 0

  for (int i = 0; i <= 8; ++i) {
    const double s = sched.s0 * i / 8.0;
    const auto f = path_mps(s, sched);
    Matrix acc = Matrix::Zero(2, 2);
    for (const auto& w : f.matrices) acc += w.adjoint() * w;
    CHECK((acc - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("path_transfer_data: closed forms, left state, eigenvector structure") {
  const auto sched = PathSchedule::standard();

  const auto top = path_transfer_data(sched.s0, sched);
  CHECK(top.closed_form_distance < 1e-12);
  CHECK(top.rho1 == doctest::Approx(0.5));
  CHECK(std::abs(top.spectrum.eigenvalues(0) - 1.0) < 1e-12);
  for (int j = 1; j < 4; ++j) CHECK(std::abs(top.spectrum.eigenvalues(j) + 1.0 / 3.0) < 1e-12);

  for (int i = 1; i <= 50; ++i) {
    const double s = sched.s0 * i / 50.0;
    CHECK(path_transfer_data(s, sched).closed_form_distance < 1e-12);
  }

  // At an interior point with t4 separated: L_1 = rho, R_4 = rho2 P - rho1 Q,
  // L_4 = sigma_z up to the biorthonormal pairing.
  const double s = sched.s0 / 2.0;
  const auto data = path_transfer_data(s, sched);
  CHECK(data.faithful);
  const Matrix l1 = data.spectrum.left[0];
  CHECK(std::abs(l1(0, 0) - data.rho1) < 1e-10);
  CHECK(std::abs(l1(1, 1) - data.rho2) < 1e-10);
  CHECK(std::abs(l1(0, 1)) < 1e-10);

  const double t4 = std::real(data.closed_form[3]);
  Index which = -1;
  for (Index j = 0; j < 4; ++j) {
    if (std::abs(data.spectrum.eigenvalues(j) - t4) < 1e-9) which = j;
  }
  REQUIRE(which >= 0);
  Matrix r4_expected(2, 2);
  r4_expected << data.rho2, 0.0, 0.0, -data.rho1;
  const Matrix& r4 = data.spectrum.right[which];
  const Complex scale = r4_expected(0, 0) / r4(0, 0);
  CHECK((scale * r4 - r4_expected).cwiseAbs().maxCoeff() < 1e-10);
  Matrix l4_expected(2, 2);
  l4_expected << 1.0, 0.0, 0.0, -1.0;
  const Matrix& l4 = data.spectrum.left[which];
  CHECK((l4 / scale - l4_expected).cwiseAbs().maxCoeff() < 1e-10);

  const auto at_zero = path_transfer_data(0.0, sched);
  CHECK_FALSE(at_zero.faithful);

  // Constant small-f profile: t_2 -> -f as s -> 0, top stays simple.
  PathSchedule flat;
  flat.s0 = sched.s0;
  flat.delta = sched.s0 / 2.0;
  flat.f = [](double) { return 1.0 / std::sqrt(2.0); };
  const auto near_zero = path_transfer_data(1e-3, flat);
  CHECK(std::real(near_zero.closed_form[1]) ==
        doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(std::abs(near_zero.spectrum.eigenvalues(0) - 1.0) < 1e-9);
  CHECK(std::abs(near_zero.spectrum.eigenvalues(1)) < 1.0 - 1e-3);
}

TEST_CASE("zeta_basis: two-site vectors, q_2 identity, gram structure") {
  const auto sched = PathSchedule::standard();
  for (double s : {sched.s0 / 3.0, sched.s0}) {
    const double f = sched.f(s);
    const double g = sched.g(s);
    const auto basis = zeta_basis(s, 2, sched);
    CHECK(basis.q_n == doctest::Approx(f * f).epsilon(1e-12));

    // zeta^2_2 = -f e_0 e_- + e_- e_0 and zeta^3_2 = -f e_+ e_0 + e_0 e_+,
    // up to a common scale fixed by the generating matrices.
    Vector z2 = Vector::Zero(9);
    z2(3) = -f;  // e_0 (x) e_-
    z2(1) = 1.0; // e_- (x) e_0
    const Vector& got2 = basis.vectors[1];
    const Complex scale2 = got2(1) / z2(1);
    CHECK((got2 - scale2 * z2).norm() < 1e-12);

    Vector z3 = Vector::Zero(9);
    z3(7) = -f;  // e_+ (x) e_0
    z3(5) = 1.0; // e_0 (x) e_+
    const Vector& got3 = basis.vectors[2];
    const Complex scale3 = got3(5) / z3(5);
    CHECK((got3 - scale3 * z3).norm() < 1e-12);

    // zeta^1_2 with q_2 = f^2: -f^2 g sin e_- e_+ + cos^2 (1+f^4) e_0 e_0 - g sin e_+ e_-.
    Vector z1 = Vector::Zero(9);
    z1(2) = -f * f * g * std::sin(s);
    z1(4) = std::cos(s) * std::cos(s) * (1.0 + f * f * f * f);
    z1(6) = -g * std::sin(s);
    const Vector& got1 = basis.vectors[0];
    const Complex scale1 = got1(4) / z1(4);
    CHECK((got1 - scale1 * z1).norm() < 1e-11);
  }

  const auto basis6 = zeta_basis(sched.s0, 6, sched);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      const auto& a = basis6.vectors[static_cast<std::size_t>(mu)];
      const auto& b = basis6.vectors[static_cast<std::size_t>(nu)];
      CHECK(std::abs(a.dot(b)) / (a.norm() * b.norm()) < 1e-10);
    }
  }

  // The transfer-contracted overlap reproduces the Gram structure on a chain
  // far beyond dense reach.
  const double s = sched.s0 / 2.0;
  const int n_sites = 40;
  const auto f = path_mps(s, sched);
  const auto z = zeta_norms_closed_form(s, n_sites, sched);
  const Matrix p = (Matrix(2, 2) << 1, 0, 0, 0).finished();
  const Matrix q = (Matrix(2, 2) << 0, 0, 0, 1).finished();
  const double fs = sched.f(s);
  const double gs = sched.g(s);
  std::array<Matrix, 4> a_mats = {
      Matrix(p + z.q_n * q), (Matrix(2, 2) << 0, 0, 1, 0).finished(),
      Matrix((gs / std::sin(s)) * (Matrix(2, 2) << 0, 1, 0, 0).finished()),
      Matrix((gs / std::sin(s)) * (std::pow(-fs, n_sites) * p - q))};
  for (int mu = 0; mu < 4; ++mu) {
    const Complex nsq = mps_overlap(f, a_mats[static_cast<std::size_t>(mu)],
                                    a_mats[static_cast<std::size_t>(mu)], n_sites);
    CHECK(std::abs(nsq - z.norm_sq[static_cast<std::size_t>(mu)]) <
          1e-10 * std::max(1.0, z.norm_sq[static_cast<std::size_t>(mu)]));
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Complex ip = mps_overlap(f, a_mats[static_cast<std::size_t>(mu)],
                                     a_mats[static_cast<std::size_t>(nu)], n_sites);
      CHECK(std::abs(ip) < 1e-10);
    }
  }
}

TEST_CASE("zeta norms: endpoint limits and the continuity extension") {
  const auto sched = PathSchedule::standard();
  // Both iterated limits give unit norms.
  for (double s : {1e-3, 1e-5}) {
    const auto z = zeta_norms_closed_form(s, 200, sched);
    for (double nsq : z.norm_sq) CHECK(std::abs(std::sqrt(nsq) - 1.0) < 1e-3);
  }
  // s = 0 evaluation is stable against the epsilon choice.
  const auto a = zeta_basis(0.0, 4, sched);
  PathSchedule copy = sched;
  const auto b = zeta_basis(1e-6, 4, copy);
  for (int mu = 0; mu < 4; ++mu) {
    const Vector va = a.vectors[static_cast<std::size_t>(mu)].normalized();
    const Vector vb = b.vectors[static_cast<std::size_t>(mu)].normalized();
    CHECK(std::min((va - vb).norm(), (va + vb).norm()) < 1e-3);
  }
}

TEST_CASE("gap_along_path: kernel four, positive gaps") {
  const auto sched = PathSchedule::standard();
  const auto rows = gap_along_path(4, {0.0, sched.s0 / 2.0, sched.s0}, sched);
  for (const auto& row : rows) {
    CHECK(row.kernel_ok);
    CHECK(row.kernel_dim == 4);
    CHECK(row.gap > 0.0);
  }
  // At the PVBS endpoint the gap matches the cross-module construction.
  const auto op = assemble_hamiltonian(path_endpoint_pvbs_interaction(), 4);
  const auto rep = spectral_gap(op, Index{4});
  CHECK(rows.front().gap == doctest::Approx(rep.gap).epsilon(1e-10));
}

TEST_CASE("martingale_along_path: decay in k and the flat regime") {
  const auto sched = PathSchedule::standard();
  const double g3 = martingale_along_path(sched.s0, 3, 5, sched);
  const double g4 = martingale_along_path(sched.s0, 4, 7, sched);
  CHECK(g3 > 0.0);
  CHECK(g4 < g3);
  CHECK((g4 * g4) / (g3 * g3) <= 1.0 / 3.0 + 0.1);

  // Near the PVBS endpoint, g^2 < 1/k sets in at small k; record the first k.
  int first_k = -1;
  for (int k = 2; k <= 5 && first_k < 0; ++k) {
    const double g = martingale_along_path(sched.delta / 2.0, k, std::max(2 * k - 2, k), sched);
    if (g * g < 1.0 / k) first_k = k;
  }
  CHECK(first_k > 0);
  MESSAGE("g^2 < 1/k first holds at k = ", first_k, " (s = delta/2)");
}

TEST_CASE("algebra_no_go_checks: no counterexamples, algebra identities") {
  const auto rep = algebra_no_go_checks(PathSchedule::standard(), 10000, 2024);
  CHECK(rep.pass);
  CHECK(rep.counterexamples == 0);
  CHECK(rep.trials == 10000);
  CHECK(rep.max_commutator_residual <= 1e-12);
  CHECK(rep.c_product_error <= 1e-12);
}
