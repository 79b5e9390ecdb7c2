#include "spingap/so_models.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spingap/harness.hpp"

namespace spingap {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// (x)^Q = diag(1, x) on the occupation basis (empty, filled).
Matrix power_q(Complex x) { return diag2(1.0, x); }

std::vector<Matrix> jordan_wigner_creation(int j_max, const std::vector<Complex>& string_weight,
                                           const std::vector<Complex>& tail_weight) {
  // a_j^+ = (w_1)^Q (x) ... (x) (w_{j-1})^Q (x) sigma^+ (x) (t_{j+1})^Q (x) ... (x) (t_J)^Q
  std::vector<Matrix> out;
  for (int site = 1; site <= j_max; ++site) {
    Matrix m = Matrix::Identity(1, 1);
    for (int f = 1; f <= j_max; ++f) {
      if (f < site)
        m = kron(m, power_q(string_weight[static_cast<std::size_t>(f) - 1]));
      else if (f == site)
        m = kron(m, sigma_plus());
      else
        m = kron(m, power_q(tail_weight[static_cast<std::size_t>(f) - 1]));
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

CliffordRep clifford_rep(int j) {
  if (j < 1) throw ValidationError("clifford_rep: J must be >= 1");
  CliffordRep rep;
  rep.j_max = j;
  const std::vector<Complex> minus_one(static_cast<std::size_t>(j), Complex(-1.0));
  const std::vector<Complex> one(static_cast<std::size_t>(j), Complex(1.0));
  rep.a_dag = jordan_wigner_creation(j, minus_one, one);
  for (const auto& ad : rep.a_dag) rep.a.push_back(ad.adjoint());

  Matrix z0 = Matrix::Identity(1, 1);
  for (int f = 0; f < j; ++f) z0 = kron(z0, power_q(-1.0));
  rep.z.push_back(std::move(z0));
  for (int jj = 1; jj <= j; ++jj) {
    const auto& a = rep.a[static_cast<std::size_t>(jj) - 1];
    const auto& ad = rep.a_dag[static_cast<std::size_t>(jj) - 1];
    rep.z.push_back(a + ad);
    rep.z.push_back(kI * (a - ad));
  }
  return rep;
}

double clifford_residual(const CliffordRep& rep) {
  const Index dim = rep.z.front().rows();
  double worst = 0.0;
  for (std::size_t a = 0; a < rep.z.size(); ++a) {
    for (std::size_t b = a; b < rep.z.size(); ++b) {
      const Matrix anti = rep.z[a] * rep.z[b] + rep.z[b] * rep.z[a];
      const Matrix expect = (a == b) ? Matrix(2.0 * Matrix::Identity(dim, dim))
                                     : Matrix(Matrix::Zero(dim, dim));
      worst = std::max(worst, (anti - expect).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

NearestNeighborInteraction so_interaction(int d) {
  if (d < 3 || d % 2 == 0) throw ValidationError("so_interaction: need odd d >= 3");
  const Index dd = static_cast<Index>(d) * d;
  Matrix swap = Matrix::Zero(dd, dd);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  Vector omega = Vector::Zero(dd);
  for (Index i = 0; i < d; ++i) omega(i * d + i) = 1.0 / std::sqrt(double(d));

  NearestNeighborInteraction h;
  h.d = d;
  h.matrix = (Matrix::Identity(dd, dd) + swap) / 2.0 - omega * omega.adjoint();
  h.model = "so(" + std::to_string(d) + ")";
  h.validate();
  return h;
}

MpsFamily so_mps(int j) {
  const CliffordRep rep = clifford_rep(j);
  const double root = std::sqrt(2.0 / (2.0 * j + 1.0));
  MpsFamily f;
  f.d = 2 * j + 1;
  f.k = 1 << j;
  f.matrices.push_back(-1.0 / std::sqrt(2.0 * j + 1.0) * rep.z[0]);
  for (int jj = 1; jj <= j; ++jj) {
    f.matrices.push_back(root * rep.a[static_cast<std::size_t>(jj) - 1]);
    f.matrices.push_back(-root * rep.a_dag[static_cast<std::size_t>(jj) - 1]);
  }
  f.validate();
  return f;
}

Matrix so_basis_unitary(int j) {
  const CliffordRep rep = clifford_rep(j);
  const MpsFamily f = so_mps(j);
  const int d = 2 * j + 1;
  const Index k2 = static_cast<Index>(f.k) * f.k;
  const Complex gamma = -1.0 / std::sqrt(2.0 * j + 1.0);

  Matrix zmat(k2, d);
  for (int alpha = 0; alpha < d; ++alpha) {
    const Matrix zz = gamma * rep.z[static_cast<std::size_t>(alpha)];
    zmat.col(alpha) = Eigen::Map<const Vector>(zz.data(), k2);
  }
  Matrix conj_u(d, d);
  for (int beta = 0; beta < d; ++beta) {
    const Vector v = Eigen::Map<const Vector>(f.matrices[static_cast<std::size_t>(beta)].data(), k2);
    conj_u.row(beta) = zmat.colPivHouseholderQr().solve(v).transpose();
  }
  const Matrix u = conj_u.conjugate();
  if ((u * u.adjoint() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw SolverError("so_basis_unitary: basis change is not unitary");
  }
  return u;
}

NearestNeighborInteraction so_interaction_mps_basis(int j) {
  NearestNeighborInteraction h = so_interaction(2 * j + 1);
  const Matrix cu = so_basis_unitary(j).conjugate();
  const Matrix w = kron(cu, cu);
  h.matrix = w * h.matrix * w.adjoint();
  h.model = "so(" + std::to_string(2 * j + 1) + ") in mps basis";
  h.validate();
  return h;
}

Matrix spherical_basis_unitary() {
  // Columns: coordinates of (e_-, e_0, e_+) in the label order (z, x, y).
  const double r = 1.0 / std::sqrt(2.0);
  Matrix s(3, 3);
  s.col(0) << 0.0, r, -r * kI;
  s.col(1) << 1.0, 0.0, 0.0;
  s.col(2) << 0.0, -r, -r * kI;
  return s;
}

TwistedCarFamily twisted_car(int j, const std::vector<double>& lambda) {
  if (j < 1) throw ValidationError("twisted_car: J must be >= 1");
  if (static_cast<int>(lambda.size()) != j) {
    throw ValidationError("twisted_car: expected J lambdas");
  }
  for (double l : lambda) {
    if (!(l > 0.0) || l > 1.0 + 1e-12) throw ValidationError("twisted_car: lambda_j in (0, 1]");
  }
  TwistedCarFamily f;
  f.j_max = j;
  f.lambda = lambda;
  std::vector<Complex> string_weight;
  std::vector<Complex> tail_weight;
  for (double l : lambda) {
    string_weight.push_back(Complex(-l));
    tail_weight.push_back(Complex(l));
  }
  f.a_dag = jordan_wigner_creation(j, string_weight, tail_weight);
  for (const auto& ad : f.a_dag) f.a.push_back(ad.adjoint());
  Matrix a0 = Matrix::Identity(1, 1);
  for (double l : lambda) a0 = kron(a0, power_q(Complex(-l)));
  f.a0 = std::move(a0);
  return f;
}

double twisted_car_residual(const TwistedCarFamily& f) {
  double worst = 0.0;
  const Matrix a0_sq = f.a0 * f.a0;
  for (int jj = 0; jj < f.j_max; ++jj) {
    const auto& a = f.a[static_cast<std::size_t>(jj)];
    const auto& ad = f.a_dag[static_cast<std::size_t>(jj)];
    const double l = f.lambda[static_cast<std::size_t>(jj)];
    worst = std::max(worst, (ad * a + l * l * a * ad - a0_sq).cwiseAbs().maxCoeff());
    worst = std::max(worst, (ad * f.a0 + l * f.a0 * ad).cwiseAbs().maxCoeff());
    worst = std::max(worst, (ad * ad).cwiseAbs().maxCoeff());
    for (int kk = 0; kk < f.j_max; ++kk) {
      if (kk == jj) continue;
      const auto& ak = f.a[static_cast<std::size_t>(kk)];
      const auto& adk = f.a_dag[static_cast<std::size_t>(kk)];
      const double lk = f.lambda[static_cast<std::size_t>(kk)];
      worst = std::max(worst, (ad * ak + l * lk * ak * ad).cwiseAbs().maxCoeff());
      if (kk > jj) {
        worst = std::max(worst, (ad * adk + (l / lk) * adk * ad).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

double so_s0(int j) { return std::acos(1.0 / std::sqrt(2.0 * j + 1.0)); }

LambdaProfile default_lambda_profile(int j, double lambda0) {
  if (!(lambda0 > 0.0) || lambda0 >= 1.0) {
    throw ValidationError("default_lambda_profile: lambda0 in (0, 1)");
  }
  const double s0 = so_s0(j);
  return [j, lambda0, s0](double s) {
    return std::vector<double>(static_cast<std::size_t>(j),
                               lambda0 + (1.0 - lambda0) * s / s0);
  };
}

SoPathPoint so_path_point(int j, double s, const LambdaProfile& profile) {
  const double s0 = so_s0(j);
  if (s < 0.0 || s > s0 + 1e-15) throw ValidationError("so_path_point: s outside [0, s0]");
  SoPathPoint pt;
  pt.j_max = j;
  pt.s = s;
  pt.lambda = profile(s);
  if (static_cast<int>(pt.lambda.size()) != j) {
    throw ValidationError("so_path_point: profile returned wrong length");
  }
  for (double l : pt.lambda) {
    if (!(l > 0.0) || l > 1.0 + 1e-12) {
      throw ValidationError("so_path_point: lambda_j(s) must stay in (0, 1]");
    }
  }
  pt.gamma = -std::cos(s);
  const double alpha = std::sin(s) / std::sqrt(double(j));
  pt.alpha.assign(static_cast<std::size_t>(j), alpha);
  for (double l : pt.lambda) {
    // Negative root so that s = s0 lands exactly on so_mps.
    pt.beta.push_back(-std::sqrt(1.0 - l * l * (1.0 - alpha * alpha)));
  }
  return pt;
}

MpsFamily so_path_mps(int j, double s, const LambdaProfile& profile) {
  const SoPathPoint pt = so_path_point(j, s, profile);
  const TwistedCarFamily car = twisted_car(j, pt.lambda);
  MpsFamily f;
  f.d = 2 * j + 1;
  f.k = 1 << j;
  f.matrices.push_back(pt.gamma * car.a0);
  for (int jj = 0; jj < j; ++jj) {
    f.matrices.push_back(pt.alpha[static_cast<std::size_t>(jj)] * car.a[static_cast<std::size_t>(jj)]);
    f.matrices.push_back(pt.beta[static_cast<std::size_t>(jj)] * car.a_dag[static_cast<std::size_t>(jj)]);
  }
  f.validate();

  // For J >= 2 the twisted strings cannot make the generating map an exact
  // isometry at multiply-occupied weights; the family is normalized by the
  // Perron root of the diagonal transfer sector instead, which is exactly 1
  // at s = s0 and for every s when J = 1.
  RealMatrix mdiag = RealMatrix::Zero(f.k, f.k);
  for (const auto& v : f.matrices) {
    for (Index p = 0; p < f.k; ++p)
      for (Index q = 0; q < f.k; ++q) mdiag(p, q) += std::norm(v(q, p));
  }
  Eigen::EigenSolver<RealMatrix> es(mdiag);
  double rho = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    rho = std::max(rho, std::abs(es.eigenvalues()(i)));
  }
  if (std::abs(rho - 1.0) > 1e-12) {
    const double scale = 1.0 / std::sqrt(rho);
    for (auto& v : f.matrices) v *= scale;
  }
  return f;
}

NearestNeighborInteraction so_path_interaction(int j, double s, const LambdaProfile& profile) {
  const MpsFamily f = so_path_mps(j, s, profile);
  const Frame g2 = ground_space(f, 2);
  NearestNeighborInteraction h;
  h.d = f.d;
  h.matrix = Matrix::Identity(g2.dim, g2.dim) - projector_onto(g2);
  h.model = "so-path(J=" + std::to_string(j) + ", s=" + std::to_string(s) + ")";
  h.validate();
  return h;
}

std::vector<QuadraticRelation> so_path_relations(int j, double s, const LambdaProfile& profile) {
  const SoPathPoint pt = so_path_point(j, s, profile);
  // Letters: 0 = V_0, 2j-1 = V_{2j-1} ~ a_j, 2j = V_{2j} ~ a_j^+.
  std::vector<QuadraticRelation> rels;
  for (int a = 1; a <= j; ++a) {
    const double l = pt.lambda[static_cast<std::size_t>(a) - 1];
    QuadraticRelation pair;
    pair.lhs = {{Complex(1.0), 2 * a, 2 * a - 1}, {Complex(l * l), 2 * a - 1, 2 * a}};
    pair.rhs = {{Complex(pt.alpha[static_cast<std::size_t>(a) - 1] *
                         pt.beta[static_cast<std::size_t>(a) - 1] / (pt.gamma * pt.gamma)),
                 0, 0}};
    pair.description = "pair-addition relation, j=" + std::to_string(a);
    rels.push_back(std::move(pair));

    QuadraticRelation with_a0;
    with_a0.lhs = {{Complex(1.0), 2 * a, 0}};
    with_a0.rhs = {{Complex(-l), 0, 2 * a}};
    with_a0.description = "V_{2j} V_0 = -lambda_j V_0 V_{2j}";
    rels.push_back(std::move(with_a0));

    QuadraticRelation nilpotent;
    nilpotent.lhs = {{Complex(1.0), 2 * a, 2 * a}};
    nilpotent.description = "V_{2j}^2 = 0";
    rels.push_back(std::move(nilpotent));

    for (int b = 1; b <= j; ++b) {
      if (b == a) continue;
      const double lb = pt.lambda[static_cast<std::size_t>(b) - 1];
      QuadraticRelation mixed;
      mixed.lhs = {{Complex(1.0), 2 * a, 2 * b - 1}};
      mixed.rhs = {{Complex(-l * lb), 2 * b - 1, 2 * a}};
      mixed.description = "twisted mixed relation";
      rels.push_back(std::move(mixed));
      if (b > a) {
        QuadraticRelation cc;
        cc.lhs = {{Complex(1.0), 2 * a, 2 * b}};
        cc.rhs = {{Complex(-l / lb), 2 * b, 2 * a}};
        cc.description = "creation exchange";
        rels.push_back(std::move(cc));
      }
    }
  }
  return rels;
}

SoTransferCertificate so_transfer_check(int j, double s, const LambdaProfile& profile) {
  const MpsFamily f = so_path_mps(j, s, profile);
  const Index k = f.k;
  SoTransferCertificate cert;

  const TransferSpectrum spec = transfer_spectrum(f);
  cert.top_error = std::abs(spec.eigenvalues(0) - 1.0);
  cert.subdominant_margin = 1.0 - std::abs(spec.eigenvalues(1));

  auto diagonal_positivity = [&](const Matrix& m, double& min_entry) {
    Matrix scaled = m;
    Index pk = 0, qk = 0;
    scaled.cwiseAbs().maxCoeff(&pk, &qk);
    scaled /= scaled(pk, qk);  // largest-modulus entry -> real 1
    double offdiag = 0.0;
    min_entry = std::numeric_limits<double>::infinity();
    for (Index p = 0; p < k; ++p) {
      for (Index q = 0; q < k; ++q) {
        if (p == q) {
          min_entry = std::min(min_entry, std::real(scaled(p, q)));
          offdiag = std::max(offdiag, std::abs(std::imag(scaled(p, q))));
        } else {
          offdiag = std::max(offdiag, std::abs(scaled(p, q)));
        }
      }
    }
    return offdiag;
  };
  cert.offdiag_residual = diagonal_positivity(spec.right[0], cert.min_right_entry);
  cert.offdiag_residual =
      std::max(cert.offdiag_residual, diagonal_positivity(spec.left[0], cert.min_left_entry));

  // Nonnegative matrix of the transfer operator restricted to diagonal
  // matrices: M[p][q] = sum_alpha |V_alpha(q,p)|^2.
  RealMatrix mdiag = RealMatrix::Zero(k, k);
  for (const auto& v : f.matrices) {
    for (Index p = 0; p < k; ++p)
      for (Index q = 0; q < k; ++q) mdiag(p, q) += std::norm(v(q, p));
  }
  RealMatrix reach = RealMatrix::Identity(k, k) + mdiag;
  RealMatrix power = RealMatrix::Identity(k, k);
  for (Index i = 0; i + 1 < k; ++i) power = power * reach;
  cert.irreducible = power.minCoeff() > 1e-14;
  double upper = 0.0;
  for (Index p = 0; p < k; ++p)
    for (Index q = p + 1; q < k; ++q) upper = std::max(upper, mdiag(p, q));
  cert.lower_triangular = upper <= 1e-14;

  cert.pass = cert.top_error <= 1e-10 && cert.subdominant_margin > 1e-8 &&
              cert.offdiag_residual <= 1e-10 && cert.min_right_entry > -1e-10 &&
              cert.min_left_entry > -1e-10 && cert.min_right_entry > 1e-12 &&
              cert.min_left_entry > 1e-12 && cert.irreducible;
  if (!cert.irreducible) {
    cert.detail = cert.lower_triangular
                      ? "diagonal-sector matrix is reducible (lower triangular)"
                      : "diagonal-sector matrix is reducible";
  }
  return cert;
}

Index so_ground_space_dim(int j, int n_sites, std::uint64_t seed) {
  const NearestNeighborInteraction h = so_interaction_mps_basis(j);
  const ChainOperator op = assemble_hamiltonian(h, n_sites);
  SolverConfig cfg;
  cfg.kind = SolverKind::Krylov;
  cfg.seed = seed;
  cfg.kernel_hint = Index(1) << (2 * j);
  return spectral_gap(op, std::nullopt, cfg).kernel_dim;
}

}  // namespace spingap
