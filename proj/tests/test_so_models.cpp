#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spingap/aklt.hpp"
#include "spingap/harness.hpp"
#include "spingap/so_models.hpp"

using namespace spingap;

namespace {

// Random special orthogonal matrix through the exponential of an antisymmetric
// generator.
Matrix random_so(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  RealMatrix a = RealMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = gauss(rng);
      a(i, j) = v;
      a(j, i) = -v;
    }
  const Matrix herm = Complex(0, 1) * a.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  Matrix diag = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) diag(i, i) = std::exp(Complex(0, -es.eigenvalues()(i)));
  Matrix o = es.eigenvectors() * diag * es.eigenvectors().adjoint();
  return o;
}

}  // namespace

TEST_CASE("clifford_rep: J=1 Pauli realization and general anticommutators") {
  const auto rep = clifford_rep(1);
  Matrix sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  CHECK((rep.z[0] - sz).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((rep.z[1] - sx).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(std::abs(rep.z[2](0, 1)) - 1.0) < 1e-15);  // sigma_y up to overall sign

  for (int j = 1; j <= 4; ++j) {
    const auto r = clifford_rep(j);
    CHECK(r.z.size() == static_cast<std::size_t>(2 * j + 1));
    CHECK(r.z[0].rows() == (Index(1) << j));
    CHECK(clifford_residual(r) < 1e-12);
    for (const auto& z : r.z) {
      CHECK((z - z.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((z * z - Matrix::Identity(z.rows(), z.cols())).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("so_interaction: rank, invariance, spin-1 dictionary") {
  const auto h3 = so_interaction(3);
  CHECK(h3.rank() == 5);
  const auto h5 = so_interaction(5);
  CHECK(h5.rank() == 14);
  CHECK_THROWS_AS(so_interaction(4), ValidationError);
  CHECK_THROWS_AS(so_interaction(1), ValidationError);

  std::mt19937_64 rng(31);
  for (int d : {3, 5}) {
    const auto h = so_interaction(d);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix o = random_so(d, rng);
      CHECK((o * o.transpose() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
      const Matrix oo = kron(o, o);
      CHECK(operator_norm(h.matrix * oo - oo * h.matrix) < 1e-12);
    }
  }

  const Matrix s = spherical_basis_unitary();
  CHECK((s * s.adjoint() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix ss = kron(s, s);
  CHECK(operator_norm(ss.adjoint() * h3.matrix * ss - aklt_interaction().matrix) < 1e-12);
}

TEST_CASE("so_mps: isometry and the parent-kernel identification") {
  for (int j = 1; j <= 4; ++j) {
    const auto f = so_mps(j);
    Matrix acc = Matrix::Zero(f.k, f.k);
    for (const auto& v : f.matrices) acc += v.adjoint() * v;
    CHECK((acc - Matrix::Identity(f.k, f.k)).cwiseAbs().maxCoeff() < 1e-14);
  }

  for (int j = 1; j <= 2; ++j) {
    const auto h = so_interaction_mps_basis(j);
    const auto g2 = ground_space(so_mps(j), 2);
    const auto es = hermitian_eigensystem(h.matrix);
    Index ker = 0;
    while (ker < es.eigenvalues.size() && es.eigenvalues(ker) < 0.5) ++ker;
    CHECK(ker == g2.rank());
    Frame kernel{h.matrix.rows(), es.eigenvectors.leftCols(ker)};
    CHECK(subspace_distance(g2, kernel) <= 1e-10);
  }

  // J=1 generating matrices are exactly the spin-1 reference set.
  const auto v = so_mps(1);
  const auto w = aklt_mps();
  CHECK((v.matrices[0] - w.matrices[1]).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((v.matrices[1] - w.matrices[2]).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((v.matrices[2] - w.matrices[0]).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("twisted_car: untwisted limit and deformed relations") {
  const auto plain = twisted_car(2, {1.0, 1.0});
  CHECK(twisted_car_residual(plain) < 1e-14);
  CHECK((plain.a0 * plain.a0 - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  const auto f = twisted_car(2, {0.5, 1.0 / 3.0});
  CHECK(twisted_car_residual(f) < 1e-13);
  for (const auto& ad : f.a_dag) {
    CHECK((ad * ad).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(twisted_car(2, {0.5}), ValidationError);
  CHECK_THROWS_AS(twisted_car(2, {0.5, 1.5}), ValidationError);
}

TEST_CASE("so_path_mps: endpoints, isometry, and the J=1 dictionary") {
  for (int j = 1; j <= 2; ++j) {
    const double s0 = so_s0(j);
    const auto profile = default_lambda_profile(j);
    const auto top = so_path_mps(j, s0, profile);
    const auto ref = so_mps(j);
    for (std::size_t a = 0; a < ref.matrices.size(); ++a) {
      CHECK((top.matrices[a] - ref.matrices[a]).cwiseAbs().maxCoeff() < 1e-14);
    }
    const auto zero = so_path_mps(j, 0.0, profile);
    for (int a = 1; a <= j; ++a) {
      CHECK(zero.matrices[static_cast<std::size_t>(2 * a - 1)].cwiseAbs().maxCoeff() == 0.0);
      CHECK(zero.matrices[static_cast<std::size_t>(2 * a)].cwiseAbs().maxCoeff() > 0.1);
    }
    for (int i = 0; i <= 6; ++i) {
      const auto f = so_path_mps(j, s0 * i / 6.0, profile);
      if (j == 1) {
        // The J = 1 strings give an exact isometry for every s.
        Matrix acc = Matrix::Zero(f.k, f.k);
        for (const auto& m : f.matrices) acc += m.adjoint() * m;
        CHECK((acc - Matrix::Identity(f.k, f.k)).cwiseAbs().maxCoeff() < 1e-13);
      }
      // Normalization pins the top transfer eigenvalue at 1 for every J.
      const auto spec = transfer_spectrum(f);
      CHECK(std::abs(spec.eigenvalues(0) - 1.0) < 1e-12);
    }
  }

  // With the lambda profile tied to the spin-1 ramp, the J=1 path reproduces
  // the deformed spin-1 matrices site for site.
  const auto sched = PathSchedule::standard();
  const LambdaProfile matched = [&sched](double s) { return std::vector<double>{sched.f(s)}; };
  for (double frac : {0.2, 0.5, 0.9}) {
    const double s = sched.s0 * frac;
    const auto so_f = so_path_mps(1, s, matched);
    const auto w = path_mps(s, sched);
    CHECK((so_f.matrices[0] - w.matrices[1]).cwiseAbs().maxCoeff() < 1e-14);  // V_0 = w_0
    CHECK((so_f.matrices[1] - w.matrices[2]).cwiseAbs().maxCoeff() < 1e-14);  // V_1 = w_+
    CHECK((so_f.matrices[2] - w.matrices[0]).cwiseAbs().maxCoeff() < 1e-14);  // V_2 = w_-
  }
}

TEST_CASE("so_path_relations: algebra closes along the path") {
  for (int j = 1; j <= 2; ++j) {
    const auto profile = default_lambda_profile(j);
    const double s0 = so_s0(j);
    for (int i = 1; i <= 5; ++i) {
      const double s = s0 * i / 5.0;
      const auto f = so_path_mps(j, s, profile);
      CHECK(check_quadratic_relations(f, so_path_relations(j, s, profile)) < 1e-12);
    }
  }
}

TEST_CASE("so_transfer_check: certificates away from the endpoint, reducible at zero") {
  const auto cert = so_transfer_check(1, so_s0(1) / 2.0, default_lambda_profile(1));
  CHECK(cert.pass);
  CHECK(cert.irreducible);
  CHECK(cert.top_error < 1e-10);
  CHECK(cert.subdominant_margin > 0.01);

  for (int i = 1; i <= 11; ++i) {
    const auto c = so_transfer_check(2, so_s0(2) * i / 11.0, default_lambda_profile(2));
    CHECK(c.pass);
  }

  const auto zero = so_transfer_check(2, 0.0, default_lambda_profile(2));
  CHECK_FALSE(zero.pass);
  CHECK_FALSE(zero.irreducible);
  CHECK(zero.lower_triangular);
}

TEST_CASE("so_ground_space_dim: 4^J once the chain is long enough") {
  CHECK(so_ground_space_dim(1, 6) == 4);
  CHECK(so_ground_space_dim(2, 4) == 16);
}

TEST_CASE("so path: kernel 16 and positive gap along the grid at J=2") {
  const auto profile = default_lambda_profile(2);
  const double s0 = so_s0(2);
  for (double frac : {0.25, 0.5, 0.75}) {
    const auto op = assemble_hamiltonian(so_path_interaction(2, frac * s0, profile), 4);
    SolverConfig cfg;
    cfg.kernel_hint = 16;
    const auto rep = spectral_gap(op, Index{16}, cfg);
    CHECK(rep.kernel_dim == 16);
    CHECK(rep.gap > 0.0);
  }
  SolverConfig cfg;
  cfg.kind = SolverKind::Krylov;  // 5^5 is inside the dense ceiling but slow there
  cfg.kernel_hint = 16;
  const auto op5 = assemble_hamiltonian(so_path_interaction(2, 0.5 * s0, profile), 5);
  const auto rep5 = spectral_gap(op5, Index{16}, cfg);
  CHECK(rep5.kernel_dim == 16);
  CHECK(rep5.gap > 0.0);
}
