#include "spingap/aklt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spingap/harness.hpp"

namespace spingap {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kF0 = 1.0 / std::sqrt(2.0);

Matrix mat2(Complex a00, Complex a01, Complex a10, Complex a11) {
  Matrix m(2, 2);
  m << a00, a01, a10, a11;
  return m;
}

}  // namespace

double PathSchedule::g(double s) const {
  const double c = std::cos(s);
  const double fs = f(s);
  return std::sqrt(std::max(0.0, 1.0 - fs * fs * c * c));
}

PathSchedule PathSchedule::standard() {
  PathSchedule sched;
  sched.s0 = std::asin(std::sqrt(2.0 / 3.0));
  const double f0 = kF0;
  const double s1 = std::asin(std::sqrt((1.0 - f0 * f0) / (1.0 + f0 * f0)));
  const double s2 =
      std::asin(std::sqrt(f0 * f0 * (1.0 - 2.0 * std::log(f0)) / (1.0 + f0 * f0)));
  sched.delta = std::min({s1, s2, sched.s0 / 2.0});
  const double delta = sched.delta;
  const double s0 = sched.s0;
  sched.f = [f0, delta, s0](double s) {
    if (s <= delta) return f0;
    const double u = std::min(1.0, (s - delta) / (s0 - delta));
    return f0 + (1.0 - f0) * (3.0 * u * u - 2.0 * u * u * u);
  };
  return sched;
}

void PathSchedule::validate() const {
  if (!(s0 > 0.0) || !(delta > 0.0) || delta >= s0) {
    throw ValidationError("PathSchedule: need 0 < delta < s0");
  }
  if (!f) throw ValidationError("PathSchedule: missing f profile");
  if (std::abs(f(0.0) - kF0) > 1e-12 || std::abs(f(s0) - 1.0) > 1e-12) {
    throw ValidationError("PathSchedule: f must run from 1/sqrt(2) to 1");
  }
  const int samples = 257;
  double prev = f(0.0);
  for (int i = 1; i < samples; ++i) {
    const double s = s0 * i / (samples - 1);
    const double fs = f(s);
    if (fs < prev - 1e-12) throw ValidationError("PathSchedule: f must be nondecreasing");
    if (std::abs(fs) > 1.0 + 1e-12) throw ValidationError("PathSchedule: |f| must stay <= 1");
    if (s <= delta && std::abs(fs - kF0) > 1e-12) {
      throw ValidationError("PathSchedule: f must be constant on [0, delta]");
    }
    const double gs = g(s);
    if (std::abs(gs * gs + fs * fs * std::cos(s) * std::cos(s) - 1.0) > 1e-14) {
      throw ValidationError("PathSchedule: isometry condition violated");
    }
    prev = fs;
  }
}

NearestNeighborInteraction aklt_interaction() {
  // Spin-1 operators in the basis (e_-, e_0, e_+).
  Matrix sz = Matrix::Zero(3, 3);
  sz(0, 0) = -1.0;
  sz(2, 2) = 1.0;
  Matrix sp = Matrix::Zero(3, 3);
  sp(1, 0) = std::sqrt(2.0);
  sp(2, 1) = std::sqrt(2.0);
  const Matrix sx = (sp + sp.adjoint()) / 2.0;
  const Matrix sy = (sp - sp.adjoint()) / (2.0 * kI);

  Matrix ss = Matrix::Zero(9, 9);
  ss += kron(sx, sx);
  ss += kron(sy, sy);
  ss += kron(sz, sz);

  NearestNeighborInteraction h;
  h.d = 3;
  h.matrix = 0.5 * ss + (ss * ss) / 6.0 + Matrix::Identity(9, 9) / 3.0;
  h.model = "aklt";
  h.validate();
  return h;
}

MpsFamily aklt_mps() {
  const double r = std::sqrt(2.0 / 3.0);
  const double c = 1.0 / std::sqrt(3.0);
  MpsFamily f;
  f.d = 3;
  f.k = 2;
  f.matrices = {mat2(0, -r, 0, 0), mat2(-c, 0, 0, c), mat2(0, 0, r, 0)};
  return f;
}

NearestNeighborInteraction path_interaction(double s, const PathSchedule& sched) {
  if (s < 0.0 || s > sched.s0 + 1e-15) {
    throw ValidationError("path_interaction: s outside [0, s0]");
  }
  const double fs = sched.f(s);
  const double gs = sched.g(s);
  const double sn = std::sin(s);
  const double cs = std::cos(s);

  auto unit = [](int a, int b) {
    Vector v = Vector::Zero(9);
    v(3 * a + b) = 1.0;
    return v;
  };
  // Basis letters: 0 = '-', 1 = '0', 2 = '+'.
  Matrix cols(9, 5);
  cols.col(0) = unit(2, 2);
  cols.col(1) = unit(0, 0);
  cols.col(2) = unit(2, 1) + fs * unit(1, 2);
  cols.col(3) = unit(1, 0) + fs * unit(0, 1);
  cols.col(4) = unit(2, 0) + (gs * sn / (cs * cs)) * unit(1, 1) + fs * fs * unit(0, 2);

  NearestNeighborInteraction h;
  h.d = 3;
  h.matrix = projector_onto(orthonormal_frame_of_span(cols, 1e-13));
  h.model = "aklt-path(s=" + std::to_string(s) + ")";
  return h;
}

MpsFamily path_mps(double s, const PathSchedule& sched) {
  if (s < 0.0 || s > sched.s0 + 1e-15) throw ValidationError("path_mps: s outside [0, s0]");
  const double fs = sched.f(s);
  const double gs = sched.g(s);
  MpsFamily f;
  f.d = 3;
  f.k = 2;
  f.matrices = {mat2(0, -gs, 0, 0), mat2(-std::cos(s), 0, 0, fs * std::cos(s)),
                mat2(0, 0, std::sin(s), 0)};
  return f;
}

std::vector<QuadraticRelation> path_relations(double s, const PathSchedule& sched) {
  const double fs = sched.f(s);
  const double gs = sched.g(s);
  const double cs = std::cos(s);
  // Letters: 0 = w_-, 1 = w_0, 2 = w_+.
  std::vector<QuadraticRelation> rels(4);
  rels[0].lhs = {{Complex(fs), 1, 0}};
  rels[0].rhs = {{Complex(-1.0), 0, 1}};
  rels[0].description = "f w0 w- = -w- w0";
  rels[1].lhs = {{Complex(1.0), 1, 2}};
  rels[1].rhs = {{Complex(-fs), 2, 1}};
  rels[1].description = "w0 w+ = -f w+ w0";
  rels[2].lhs = {{Complex(1.0), 0, 0}};
  rels[2].description = "w-^2 = 0";
  QuadraticRelation sq;
  sq.lhs = {{Complex(1.0), 2, 2}};
  sq.description = "w+^2 = 0";
  rels[3] = sq;
  QuadraticRelation pair;
  pair.lhs = {{Complex(1.0), 0, 2}, {Complex(fs * fs), 2, 0}};
  pair.rhs = {{Complex(-gs * std::sin(s) / (cs * cs)), 1, 1}};
  pair.description = "w- w+ + f^2 w+ w- = -(g sin/cos^2) w0^2";
  rels.push_back(std::move(pair));
  return rels;
}

PvbsParams path_endpoint_pvbs_params() {
  const double pi = std::acos(-1.0);
  return PvbsParams({std::sqrt(2.0), 1.0 / std::sqrt(2.0)},
                    {{{0, 1}, pi}, {{0, 2}, pi}, {{1, 2}, pi}});
}

NearestNeighborInteraction path_endpoint_pvbs_interaction() {
  NearestNeighborInteraction h = pvbs_interaction(path_endpoint_pvbs_params());
  // Vacuum -> e_0 (index 1), particle 1 -> e_+ (index 2), particle 2 -> e_- (index 0).
  Matrix m = Matrix::Zero(3, 3);
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  m(0, 2) = 1.0;
  const Matrix mm = kron(m, m);
  h.matrix = mm * h.matrix * mm.adjoint();
  h.model = "pvbs-endpoint(spin basis)";
  return h;
}

PathTransferData path_transfer_data(double s, const PathSchedule& sched) {
  PathTransferData out;
  const double fs = sched.f(s);
  const double gs = sched.g(s);
  const double sn2 = std::sin(s) * std::sin(s);
  const double cs2 = std::cos(s) * std::cos(s);
  out.spectrum = transfer_spectrum(path_mps(s, sched));
  out.closed_form = {Complex(1.0), Complex(-fs * cs2), Complex(-fs * cs2),
                     Complex(fs * fs * cs2 - sn2)};
  out.rho1 = gs * gs / (gs * gs + sn2);
  out.rho2 = 1.0 - out.rho1;
  out.faithful = s > 0.0;
  std::vector<Complex> numeric(out.spectrum.eigenvalues.data(),
                               out.spectrum.eigenvalues.data() + 4);
  out.closed_form_distance = spectrum_multiset_distance(
      numeric, {out.closed_form.begin(), out.closed_form.end()});
  return out;
}

ZetaNorms zeta_norms_closed_form(double s, int n_sites, const PathSchedule& sched) {
  if (s <= 0.0) throw ValidationError("zeta_norms_closed_form: need s > 0");
  const double fs = sched.f(s);
  const double gs = sched.g(s);
  const double sn2 = std::sin(s) * std::sin(s);
  const double cs2 = std::cos(s) * std::cos(s);
  const double rho1 = gs * gs / (gs * gs + sn2);
  const double rho2 = 1.0 - rho1;

  ZetaNorms z;
  z.t2 = -fs * cs2;
  z.t4 = fs * fs * cs2 - sn2;
  const double t2n = std::pow(z.t2, n_sites);
  const double t4n = std::pow(z.t4, n_sites);
  const double mfn = std::pow(-fs, n_sites);
  z.q_n = (t2n - mfn * (rho1 + rho2 * t4n)) / (t2n * mfn - (rho2 + rho1 * t4n));
  z.norm_sq[0] =
      (rho1 + rho2 * t4n) + 2.0 * z.q_n * t2n + z.q_n * z.q_n * (rho2 + rho1 * t4n);
  z.norm_sq[1] = rho1 * (1.0 - t4n);
  z.norm_sq[2] = z.norm_sq[1];
  z.norm_sq[3] = gs * gs / sn2 *
                 ((rho2 + rho1 * t4n) + std::pow(fs, 2 * n_sites) * (rho1 + rho2 * t4n) -
                  2.0 * mfn * t2n);
  return z;
}

ZetaBasis zeta_basis(double s, int n_sites, const PathSchedule& sched, Index max_dim) {
  if (s < 0.0 || s > sched.s0 + 1e-15) throw ValidationError("zeta_basis: s outside [0, s0]");
  const double seff = s == 0.0 ? 1e-8 : s;  // continuity extension at the endpoint
  const double fs = sched.f(seff);
  const double gs = sched.g(seff);
  const double sn = std::sin(seff);
  const ZetaNorms z = zeta_norms_closed_form(seff, n_sites, sched);

  ZetaBasis basis;
  basis.s = s;
  basis.n_sites = n_sites;
  basis.q_n = z.q_n;
  const Matrix p = mat2(1, 0, 0, 0);
  const Matrix q = mat2(0, 0, 0, 1);
  basis.a[0] = p + z.q_n * q;
  basis.a[1] = mat2(0, 0, 1, 0);                  // sigma^-
  basis.a[2] = (gs / sn) * mat2(0, 1, 0, 0);      // (g/sin) sigma^+
  basis.a[3] = (gs / sn) * (std::pow(-fs, n_sites) * p - q);

  const MpsFamily f = path_mps(seff, sched);
  for (int mu = 0; mu < 4; ++mu) {
    basis.vectors[static_cast<std::size_t>(mu)] =
        gamma_map(f, n_sites, basis.a[static_cast<std::size_t>(mu)], max_dim);
  }
  return basis;
}

std::vector<PathGapRow> gap_along_path(int n_sites, const std::vector<double>& grid,
                                       const PathSchedule& sched, std::uint64_t seed) {
  std::vector<PathGapRow> rows;
  rows.reserve(grid.size());
  for (double s : grid) {
    PathGapRow row;
    row.s = s;
    row.f = sched.f(s);
    row.g = sched.g(s);
    const auto h = path_interaction(s, sched);
    const auto op = assemble_hamiltonian(h, n_sites);
    SolverConfig cfg;
    cfg.seed = seed;
    try {
      const auto rep = spectral_gap(op, Index{4}, cfg);
      row.gap = rep.gap;
      row.kernel_dim = rep.kernel_dim;
      row.kernel_ok = true;
    } catch (const CertificationError&) {
      const auto rep = spectral_gap(op, std::nullopt, cfg);
      row.gap = rep.gap;
      row.kernel_dim = rep.kernel_dim;
      row.kernel_ok = false;
    }
    rows.push_back(row);
  }
  return rows;
}

double martingale_along_path(double s, int k, int n_sites, const PathSchedule& sched) {
  return martingale_coefficient(path_interaction(s, sched), path_mps(s, sched), k, n_sites);
}

NoGoReport algebra_no_go_checks(const PathSchedule& sched, int trials, std::uint64_t seed) {
  NoGoReport rep;
  rep.trials = trials;

  // (a) Random nonzero nilpotent pairs with distinct weights must violate the
  // exchange algebra somewhere.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto random_unitary = [&]() {
    Matrix a(2, 2);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(a);
    return Matrix(qr.householderQ());
  };
  const Matrix sp = mat2(0, 1, 0, 0);
  for (int t = 0; t < trials; ++t) {
    const double lm = 0.1 + 2.0 * unif(rng);
    double lp = 0.1 + 2.0 * unif(rng);
    if (std::abs(lp - lm) < 0.05) lp += 0.1;  // hypothesis: distinct weights
    const double two_pi = 2.0 * std::acos(-1.0);
    const double th_m0 = two_pi * unif(rng);
    const double th_p0 = two_pi * unif(rng);
    const double th_mp = two_pi * unif(rng);
    const Matrix um = random_unitary();
    const Matrix up = random_unitary();
    const Complex am(gauss(rng), gauss(rng));
    const Complex ap(gauss(rng), gauss(rng));
    const Matrix vm = am * um.adjoint() * sp * um;
    const Matrix vp = ap * up.adjoint() * sp * up;
    Matrix v0(2, 2);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j) v0(i, j) = Complex(gauss(rng), gauss(rng));
    if (vm.norm() < 0.1 || vp.norm() < 0.1) continue;

    const double r1 = (vm * v0 - std::exp(kI * th_m0) * lm * v0 * vm).norm();
    const double r2 = (vp * v0 - std::exp(kI * th_p0) * lp * v0 * vp).norm();
    const double r3 = (vm * vp - std::exp(kI * th_mp) * (lm / lp) * vp * vm).norm();
    const double scale = std::max({1.0, vm.norm() * v0.norm(), vp.norm() * v0.norm()});
    if (r1 <= 1e-8 * scale && r2 <= 1e-8 * scale && r3 <= 1e-8 * scale) {
      ++rep.counterexamples;
    }
  }

  // (b) [w+ w-, w0] = 0 along the path, the representation-level face of the
  // reciprocal-coefficient identity. (The products w+ w- and w- w+ are
  // diagonal, so they cannot commute with the nilpotent generators.)
  for (int i = 0; i <= 10; ++i) {
    const double s = sched.s0 * (i + 1) / 11.0;  // s > 0
    const auto f = path_mps(s, sched);
    const Matrix wp_wm = f.matrices[2] * f.matrices[0];
    const Matrix& w0 = f.matrices[1];
    rep.max_commutator_residual =
        std::max(rep.max_commutator_residual, (wp_wm * w0 - w0 * wp_wm).norm());
  }

  // (c) C_{+0} C_{-0} = 1, with the coefficients extracted by least squares
  // from the represented algebra at a generic interior point.
  {
    const double s = 0.7 * sched.s0;
    const auto f = path_mps(s, sched);
    auto coeff = [](const Matrix& lhs, const Matrix& rhs) {
      // lhs = c * rhs in the least-squares sense.
      const Complex num = (rhs.adjoint() * lhs).trace();
      const Complex den = (rhs.adjoint() * rhs).trace();
      return num / den;
    };
    const Complex c_m0 = coeff(f.matrices[0] * f.matrices[1], f.matrices[1] * f.matrices[0]);
    const Complex c_p0 = coeff(f.matrices[2] * f.matrices[1], f.matrices[1] * f.matrices[2]);
    rep.c_product_error = std::abs(c_m0 * c_p0 - 1.0);
  }

  rep.pass = rep.counterexamples == 0 && rep.max_commutator_residual <= 1e-12 &&
             rep.c_product_error <= 1e-12;
  return rep;
}

}  // namespace spingap
