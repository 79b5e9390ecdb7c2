#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spingap/aklt.hpp"
#include "spingap/mps.hpp"
#include "spingap/pvbs.hpp"
#include "spingap/so_models.hpp"

using namespace spingap;

namespace {

MpsFamily random_family(int d, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  MpsFamily f;
  f.d = d;
  f.k = k;
  for (int i = 0; i < d; ++i) {
    Matrix m(k, k);
    for (Index r = 0; r < k; ++r)
      for (Index c = 0; c < k; ++c) m(r, c) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0 * k);
    f.matrices.push_back(std::move(m));
  }
  return f;
}

std::vector<Complex> eigen_list(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> ces(m);
  return {ces.eigenvalues().data(), ces.eigenvalues().data() + ces.eigenvalues().size()};
}

}  // namespace

TEST_CASE("transfer_operator: scalar and model spectra") {
  MpsFamily scalar{1, 1, {Matrix::Identity(1, 1)}};
  CHECK(transfer_operator(scalar)(0, 0) == Complex(1.0));

  const PvbsParams p(std::vector<double>{0.5});
  const auto spec = eigen_list(transfer_operator(pvbs_mps(p)));
  CHECK(spectrum_multiset_distance(spec, {Complex(1.0), Complex(0.5), Complex(0.5),
                                          Complex(0.25)}) < 1e-12);

  const auto aklt_spec = eigen_list(transfer_operator(aklt_mps()));
  CHECK(spectrum_multiset_distance(aklt_spec,
                                   {Complex(1.0), Complex(-1.0 / 3.0), Complex(-1.0 / 3.0),
                                    Complex(-1.0 / 3.0)}) < 1e-12);
}

TEST_CASE("transfer_spectrum: scalar family") {
  const Complex c(0.6, 0.3);
  MpsFamily f{1, 1, {c * Matrix::Identity(1, 1)}};
  const auto spec = transfer_spectrum(f);
  CHECK(std::abs(spec.eigenvalues(0) - std::norm(c)) < 1e-14);
}

TEST_CASE("transfer_spectrum: aklt top pair and biorthonormality") {
  const auto spec = transfer_spectrum(aklt_mps());
  CHECK(std::abs(spec.eigenvalues(0) - 1.0) < 1e-12);
  for (int j = 1; j < 4; ++j) CHECK(std::abs(spec.eigenvalues(j) + 1.0 / 3.0) < 1e-12);
  CHECK(spec.biorthonormal);
  CHECK(spec.residual < 1e-10);
  // R_1 = identity, L_1 = rho = diag(1/2, 1/2).
  CHECK((spec.right[0] - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(spec.left[0](0, 0) - 0.5) < 1e-10);
  CHECK(std::abs(spec.left[0](1, 1) - 0.5) < 1e-10);
  CHECK(std::abs(spec.left[0](0, 1)) < 1e-10);
}

TEST_CASE("transfer_spectrum: closed forms for a constant-f deformation") {
  // f fixed at 1, evaluated off the AKLT point.
  PathSchedule sched;
  sched.s0 = std::asin(std::sqrt(2.0 / 3.0));
  sched.delta = sched.s0 / 2.0;
  sched.f = [](double) { return 1.0; };
  const double s = sched.s0 / 2.0;
  const double c2 = std::cos(s) * std::cos(s);
  const double s2 = std::sin(s) * std::sin(s);
  const auto spec = transfer_spectrum(path_mps(s, sched));
  std::vector<Complex> numeric(spec.eigenvalues.data(), spec.eigenvalues.data() + 4);
  CHECK(spectrum_multiset_distance(numeric, {Complex(1.0), Complex(-c2), Complex(-c2),
                                             Complex(c2 - s2)}) < 1e-12);
}

TEST_CASE("transfer_spectrum: biorthonormal pairs on a generic family") {
  const auto f = random_family(3, 3, 21);
  const auto spec = transfer_spectrum(f);
  for (std::size_t i = 0; i < spec.left.size(); ++i) {
    for (std::size_t j = 0; j < spec.right.size(); ++j) {
      const Complex tr = (spec.left[i] * spec.right[j]).trace();
      CHECK(std::abs(tr - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("gamma_map: trace oracle, zero boundary, pattern") {
  const PvbsParams p(std::vector<double>{0.5});
  const auto f = pvbs_mps(p);
  const Vector one_site = gamma_map(f, 1, Matrix::Identity(2, 2));
  CHECK(std::abs(one_site(0) - f.matrices[0].trace()) < 1e-14);
  CHECK(std::abs(one_site(1) - f.matrices[1].trace()) < 1e-14);

  CHECK(gamma_map(f, 3, Matrix::Zero(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(gamma_map(f, 40, Matrix::Identity(2, 2)), SizeError);

  // Two-site AKLT state from sigma^-: nonzero only on e_0 e_- and e_- e_0,
  // with ratio -1.
  Matrix sm = Matrix::Zero(2, 2);
  sm(1, 0) = 1.0;
  const Vector zeta2 = gamma_map(aklt_mps(), 2, sm);
  CHECK(std::abs(zeta2(3)) > 0.1);              // e_0 (x) e_-
  CHECK(std::abs(zeta2(1)) > 0.1);              // e_- (x) e_0
  CHECK(std::abs(zeta2(3) / zeta2(1) + 1.0) < 1e-14);
  for (Index i : {0, 2, 4, 5, 6, 7, 8}) CHECK(std::abs(zeta2(i)) < 1e-15);
}

TEST_CASE("mps_overlap: equals the dense inner product") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  auto rand_b = [&](int k) {
    Matrix b(k, k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) b(i, j) = Complex(gauss(rng), gauss(rng));
    return b;
  };

  const auto aklt = aklt_mps();
  const Matrix b = rand_b(2);
  const Complex fast = mps_overlap(aklt, b, b, 2);
  const double dense = gamma_map(aklt, 2, b).squaredNorm();
  CHECK(std::abs(fast - dense) < 1e-12);

  for (int n_sites = 2; n_sites <= 6; ++n_sites) {
    const auto f = random_family(2, 2, 100 + static_cast<std::uint64_t>(n_sites));
    const Matrix bl = rand_b(2), br = rand_b(2);
    const Complex fast_n = mps_overlap(f, bl, br, n_sites);
    const Complex dense_n = gamma_map(f, n_sites, bl).dot(gamma_map(f, n_sites, br));
    CHECK(std::abs(fast_n - dense_n) < 1e-10 * (1.0 + std::abs(dense_n)));
  }
}

TEST_CASE("mps_overlap: single-site observables against dense application") {
  const auto f = random_family(3, 2, 7);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  Matrix a(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  const int n_sites = 4;
  const int site = 2;
  const Matrix b = Matrix::Identity(2, 2);
  const Complex fast = mps_overlap(f, b, b, n_sites, {{site, a}});

  const Vector psi = gamma_map(f, n_sites, b);
  const Matrix full = kron(kron(Matrix::Identity(3, 3), a), Matrix::Identity(9, 9));
  const Complex dense = psi.dot(full * psi);
  CHECK(std::abs(fast - dense) < 1e-10 * (1.0 + std::abs(dense)));
}

TEST_CASE("ground_space dimensions across the three model families") {
  CHECK(ground_space(pvbs_mps(PvbsParams(std::vector<double>{0.5})), 3).rank() == 2);
  CHECK(ground_space(aklt_mps(), 4).rank() == 4);
  CHECK(ground_space(so_mps(2), 4).rank() == 16);
}

TEST_CASE("ground_space dimension stabilizes once the chain covers the particles") {
  const auto f2 = pvbs_mps(PvbsParams({0.5, 2.0}));
  std::vector<Index> dims;
  for (int n_sites = 1; n_sites <= 5; ++n_sites) dims.push_back(ground_space(f2, n_sites).rank());
  CHECK(dims == std::vector<Index>{3, 4, 4, 4, 4});  // sum of binomials, then 2^n

  const auto aklt = aklt_mps();
  for (int n_sites = 2; n_sites <= 5; ++n_sites) {
    CHECK(ground_space(aklt, n_sites).rank() == 4);
  }
}

TEST_CASE("isometry: path families satisfy sum v^* v = 1") {
  const auto sched = PathSchedule::standard();
  for (int i = 0; i <= 10; ++i) {
    const double s = sched.s0 * i / 10.0;
    const auto f = path_mps(s, sched);
    Matrix acc = Matrix::Zero(2, 2);
    for (const auto& w : f.matrices) acc += w.adjoint() * w;
    CHECK((acc - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    // E(1) = 1 in matrix form.
    const Matrix e = transfer_operator(f);
    Vector vec_id(4);
    vec_id << 1.0, 0.0, 0.0, 1.0;
    CHECK((e * vec_id - vec_id).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("check_intersection_property: holds for models, breaks under perturbation") {
  const PvbsParams p(std::vector<double>{0.5});
  const auto rep = check_intersection_property(pvbs_interaction(p), pvbs_mps(p), 4);
  CHECK(rep.holds);
  CHECK(rep.distance <= 1e-10);
  CHECK(rep.precondition_ok);

  const auto sched = PathSchedule::standard();
  const double s = sched.s0 / 2.0;
  const auto rep2 = check_intersection_property(path_interaction(s, sched), path_mps(s, sched), 5);
  CHECK(rep2.holds);

  auto broken = pvbs_mps(p);
  broken.matrices[1](0, 0) += 0.1;
  const auto rep3 = check_intersection_property(pvbs_interaction(p), broken, 4);
  CHECK_FALSE(rep3.holds);
}

TEST_CASE("check_quadratic_relations: model algebras close") {
  const PvbsParams p({0.5, 2.0}, {{{0, 1}, 0.7}, {{0, 2}, -0.3}, {{1, 2}, 1.9}});
  CHECK(check_quadratic_relations(pvbs_mps(p), pvbs_relations(p)) < 1e-12);

  const auto sched = PathSchedule::standard();
  CHECK(check_quadratic_relations(aklt_mps(), path_relations(sched.s0, sched)) < 1e-12);
  const double s = sched.s0 / 3.0;
  CHECK(check_quadratic_relations(path_mps(s, sched), path_relations(s, sched)) < 1e-12);

  // A violated relation reports a positive residual (w_0^2 != 0).
  QuadraticRelation wrong;
  wrong.lhs = {{Complex(1.0), 1, 1}};
  CHECK(check_quadratic_relations(aklt_mps(), {wrong}) > 0.1);
}

TEST_CASE("martingale_coefficient: trivial family and bounds") {
  MpsFamily trivial{1, 1, {Matrix::Identity(1, 1)}};
  NearestNeighborInteraction h0;
  h0.d = 1;
  h0.matrix = Matrix::Zero(1, 1);
  h0.model = "trivial";
  for (int k = 2; k <= 3; ++k) {
    for (int n_sites = k; n_sites <= k + 2; ++n_sites) {
      CHECK(martingale_coefficient(h0, trivial, k, n_sites) < 1e-12);
    }
  }

  const PvbsParams p(std::vector<double>{0.5});
  const double g = martingale_coefficient(pvbs_interaction(p), pvbs_mps(p), 4, 7);
  CHECK(g >= 0.0);
  CHECK(g <= 1.0);
  CHECK(g * g < 0.25);  // below 1/k for k = 4

  CHECK_THROWS_AS(martingale_coefficient(h0, trivial, 1, 3), ValidationError);
  CHECK_THROWS_AS(martingale_coefficient(h0, trivial, 4, 3), ValidationError);
}

TEST_CASE("martingale_gap_bound: plug-in values") {
  const auto b = martingale_gap_bound(1.0, 4, 0.0);
  CHECK(b.valid);
  CHECK(b.value == doctest::Approx(1.0 / 3.0));

  const auto boundary = martingale_gap_bound(1.0, 4, 0.5);  // eps = 1/sqrt(4)
  CHECK_FALSE(boundary.valid);
  CHECK(boundary.value == 0.0);
}
