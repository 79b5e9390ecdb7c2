#include "spingap/mps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace spingap {

namespace {

Index checked_power(Index base, int exp, Index max_dim) {
  Index out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > max_dim / base) {
      throw SizeError("chain dimension " + std::to_string(base) + "^" + std::to_string(exp) +
                      " exceeds ceiling " + std::to_string(max_dim));
    }
    out *= base;
  }
  return out;
}

Matrix unvec_row_major(const Vector& x, Index k) {
  Matrix m(k, k);
  for (Index p = 0; p < k; ++p)
    for (Index q = 0; q < k; ++q) m(p, q) = x(p * k + q);
  return m;
}

}  // namespace

void MpsFamily::validate() const {
  if (d < 1 || k < 1) throw ValidationError("MpsFamily: d and k must be >= 1");
  if (static_cast<int>(matrices.size()) != d) {
    throw ValidationError("MpsFamily: expected " + std::to_string(d) + " matrices");
  }
  for (const auto& m : matrices) {
    if (m.rows() != k || m.cols() != k) throw ValidationError("MpsFamily: matrix is not k x k");
    if (!m.allFinite()) throw ValidationError("MpsFamily: non-finite entry");
  }
}

void NearestNeighborInteraction::validate(double tol) const {
  const Index dim = static_cast<Index>(d) * d;
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw ValidationError("interaction '" + model + "': matrix is not d^2 x d^2");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw ValidationError("interaction '" + model + "': not Hermitian");
  }
  if ((matrix * matrix - matrix).cwiseAbs().maxCoeff() > tol * scale) {
    throw ValidationError("interaction '" + model + "': not idempotent");
  }
}

Index NearestNeighborInteraction::rank() const {
  return static_cast<Index>(std::llround(std::real(matrix.trace())));
}

Matrix transfer_operator(const MpsFamily& f) {
  f.validate();
  const Index k = f.k;
  Matrix out = Matrix::Zero(k * k, k * k);
  for (const auto& v : f.matrices) {
    out += kron(v.adjoint(), v.transpose());
  }
  return out;
}

TransferSpectrum transfer_spectrum(const MpsFamily& f) {
  const Index k = f.k;
  const Matrix m = transfer_operator(f);
  Eigen::ComplexEigenSolver<Matrix> ces(m);
  if (ces.info() != Eigen::Success) {
    throw SolverError("transfer_spectrum: eigensolver failed");
  }
  const Vector t = ces.eigenvalues();
  const Matrix v = ces.eigenvectors();

  std::vector<Index> order(t.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(t(a)), mb = std::abs(t(b));
    if (std::abs(ma - mb) > 1e-14 * std::max(1.0, std::max(ma, mb))) return ma > mb;
    return std::arg(t(a)) < std::arg(t(b));
  });

  Matrix vs(v.rows(), v.cols());
  Vector ts(t.size());
  for (Index j = 0; j < t.size(); ++j) {
    vs.col(j) = v.col(order[j]);
    ts(j) = t(order[j]);
  }

  Eigen::JacobiSVD<Matrix> svd(vs);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-12 * sv(0)) {
    // Find the tightest eigenvalue pair to name the offending cluster.
    double best = std::numeric_limits<double>::infinity();
    Complex c1 = ts(0), c2 = ts(0);
    for (Index a = 0; a < ts.size(); ++a)
      for (Index b = a + 1; b < ts.size(); ++b)
        if (std::abs(ts(a) - ts(b)) < best) {
          best = std::abs(ts(a) - ts(b));
          c1 = ts(a);
          c2 = ts(b);
        }
    throw SolverError("transfer_spectrum: operator is defective beyond tolerance near the "
                      "eigenvalue cluster {" +
                      std::to_string(c1.real()) + "+" + std::to_string(c1.imag()) + "i, " +
                      std::to_string(c2.real()) + "+" + std::to_string(c2.imag()) + "i}");
  }
  const Matrix vinv = vs.inverse();

  TransferSpectrum spec;
  spec.eigenvalues = ts;
  spec.right.reserve(t.size());
  spec.left.reserve(t.size());
  for (Index j = 0; j < t.size(); ++j) {
    Matrix r = unvec_row_major(vs.col(j), k);
    // Rows of V^{-1} are the trace-pairing left eigenvectors: row j unvecs to L_j^T.
    Matrix l = unvec_row_major(vinv.row(j).transpose(), k).transpose();
    Index pk = 0, qk = 0;
    r.cwiseAbs().maxCoeff(&pk, &qk);
    const Complex pivot = r(pk, qk);
    r /= pivot;
    l *= pivot;
    spec.right.push_back(std::move(r));
    spec.left.push_back(std::move(l));
  }

  double resid = 0.0;
  double biorth = 0.0;
  for (Index j = 0; j < t.size(); ++j) {
    Matrix er = Matrix::Zero(k, k);
    for (const auto& vi : f.matrices) er += vi.adjoint() * spec.right[j] * vi;
    resid = std::max(resid, (er - ts(j) * spec.right[j]).norm());
    for (Index i = 0; i < t.size(); ++i) {
      const Complex tr = (spec.left[i] * spec.right[j]).trace();
      biorth = std::max(biorth, std::abs(tr - (i == j ? 1.0 : 0.0)));
    }
  }
  spec.residual = resid;
  spec.biorthonormal = biorth <= 1e-10;
  return spec;
}

double spectrum_multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  // Moduli within 1e-8 count as ties and are ordered by phase, so eigensolver
  // noise cannot scramble the pairing; the reported distance stays exact.
  auto sorted = [](std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](Complex x, Complex y) {
      const double mx = std::abs(x), my = std::abs(y);
      if (std::abs(mx - my) > 1e-8 * std::max(1.0, std::max(mx, my))) return mx > my;
      return std::arg(x) < std::arg(y);
    });
    return v;
  };
  const auto sa = sorted(a);
  const auto sb = sorted(b);
  double dist = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) dist = std::max(dist, std::abs(sa[i] - sb[i]));
  return dist;
}

Vector gamma_map(const MpsFamily& f, int n_sites, const Matrix& b, Index max_dim) {
  f.validate();
  if (b.rows() != f.k || b.cols() != f.k) throw ValidationError("gamma_map: B must be k x k");
  if (n_sites < 1) throw ValidationError("gamma_map: need at least one site");
  const Index total = checked_power(f.d, n_sites, max_dim);

  Vector out(total);
  // Depth-first over words with a stack of prefix products
  // P_m = v_{i_m} ... v_{i_1}; digit i_1 is the most significant.
  std::vector<Matrix> stack(static_cast<std::size_t>(n_sites) + 1);
  std::vector<int> digit(static_cast<std::size_t>(n_sites), 0);
  stack[0] = Matrix::Identity(f.k, f.k);
  for (int m = 1; m <= n_sites; ++m) stack[m] = f.matrices[0] * stack[m - 1];

  Index idx = 0;
  while (true) {
    out(idx) = (b * stack[n_sites]).trace();
    int pos = n_sites - 1;
    while (pos >= 0 && digit[pos] == f.d - 1) --pos;
    if (pos < 0) break;
    ++digit[pos];
    for (int j = pos + 1; j < n_sites; ++j) digit[j] = 0;
    for (int j = pos; j < n_sites; ++j) stack[j + 1] = f.matrices[digit[j]] * stack[j];
    idx = 0;
    for (int j = 0; j < n_sites; ++j) idx = idx * f.d + digit[j];
  }
  return out;
}

Complex mps_overlap(const MpsFamily& f, const Matrix& b_left, const Matrix& b_right, int n_sites,
                    const std::vector<std::pair<int, Matrix>>& site_ops) {
  f.validate();
  if (b_left.rows() != f.k || b_right.rows() != f.k) {
    throw ValidationError("mps_overlap: boundary matrices must be k x k");
  }
  const Index k2 = static_cast<Index>(f.k) * f.k;
  Matrix w_identity = Matrix::Zero(k2, k2);
  for (const auto& v : f.matrices) w_identity += kron(v.conjugate(), v);

  auto doubled = [&](const Matrix& a) {
    if (a.rows() != f.d || a.cols() != f.d) {
      throw ValidationError("mps_overlap: site observable must be d x d");
    }
    Matrix w = Matrix::Zero(k2, k2);
    for (int i = 0; i < f.d; ++i)
      for (int j = 0; j < f.d; ++j)
        if (a(i, j) != 0.0) w += a(i, j) * kron(f.matrices[i].conjugate(), f.matrices[j]);
    return w;
  };

  std::vector<const Matrix*> per_site(static_cast<std::size_t>(n_sites), nullptr);
  std::vector<Matrix> owned;
  owned.reserve(site_ops.size());
  for (const auto& [site, a] : site_ops) {
    if (site < 1 || site > n_sites) throw ValidationError("mps_overlap: site index out of range");
    owned.push_back(doubled(a));
  }
  for (std::size_t i = 0; i < site_ops.size(); ++i) per_site[site_ops[i].first - 1] = &owned[i];

  // <Gamma(B_L), A Gamma(B_R)> = Tr[(conj(B_L) (x) B_R) W_N W_{N-1} ... W_1].
  Matrix acc = Matrix::Identity(k2, k2);
  for (int x = n_sites; x >= 1; --x) {
    const Matrix& w = per_site[x - 1] ? *per_site[x - 1] : w_identity;
    acc = (x == n_sites) ? w : Matrix(acc * w);
  }
  return (kron(b_left.conjugate(), b_right) * acc).trace();
}

Frame ground_space(const MpsFamily& f, int n_sites, double rank_tol, Index max_dim) {
  f.validate();
  const Index total = checked_power(f.d, n_sites, max_dim);
  const Index k2 = static_cast<Index>(f.k) * f.k;
  Matrix images(total, k2);
  Matrix unit = Matrix::Zero(f.k, f.k);
  for (Index p = 0; p < f.k; ++p) {
    for (Index q = 0; q < f.k; ++q) {
      unit(p, q) = 1.0;
      images.col(p * f.k + q) = gamma_map(f, n_sites, unit, max_dim);
      unit(p, q) = 0.0;
    }
  }
  return orthonormal_frame_of_span(images, rank_tol);
}

namespace {

// Efficient in-place dense assembly of sum_x 1 (x) h (x) 1 on n_sites sites.
Matrix dense_chain_hamiltonian(const NearestNeighborInteraction& h, int n_sites, Index total) {
  const Index d = h.d;
  const Index d2 = d * d;
  Matrix ham = Matrix::Zero(total, total);
  Index left = 1;
  for (int x = 0; x + 2 <= n_sites; ++x) {
    const Index right = total / (left * d2);
    for (Index a = 0; a < left; ++a) {
      const Index base = a * d2 * right;
      for (Index r1 = 0; r1 < d2; ++r1) {
        for (Index r2 = 0; r2 < d2; ++r2) {
          const Complex c = h.matrix(r1, r2);
          if (c == 0.0) continue;
          for (Index b = 0; b < right; ++b) {
            ham(base + r1 * right + b, base + r2 * right + b) += c;
          }
        }
      }
    }
    left *= d;
  }
  return ham;
}

// Kernel frame of H = sum_x h_{x,x+1} on n_sites sites; dense only while the
// cubic eigensolve stays cheap, Lanczos eigenvectors beyond.
Frame chain_kernel_frame(const NearestNeighborInteraction& h, int n_sites, Index expected_hint) {
  const Index d = h.d;
  const Index total = checked_power(d, n_sites, Index(1) << 22);
  if (total <= 1024) {
    Matrix ham = dense_chain_hamiltonian(h, n_sites, total);
    auto es = hermitian_eigensystem(ham);
    const double thr = 1e-9 * std::max(1.0, es.eigenvalues.cwiseAbs().maxCoeff());
    Index m = 0;
    while (m < total && es.eigenvalues(m) <= thr) ++m;
    Frame f;
    f.dim = total;
    f.vectors = es.eigenvectors.leftCols(m);
    return f;
  }
  // Matvec route: low-lying eigenvectors through the Lanczos solver.
  const Index d2 = d * d;
  auto apply = [&](const Vector& x) {
    Vector y = Vector::Zero(total);
    Index left = 1;
    for (int site = 0; site + 2 <= n_sites; ++site) {
      const Index right = total / (left * d2);
      for (Index a = 0; a < left; ++a) {
        const Index base = a * d2 * right;
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            xb(x.data() + base, d2, right);
        Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> yb(
            y.data() + base, d2, right);
        yb += h.matrix * xb;
      }
      left *= d;
    }
    return y;
  };
  KrylovOptions opts;
  opts.how_many = static_cast<int>(std::min(total, expected_hint + 4));
  opts.want_vectors = true;
  KrylovResult res = krylov_lowest(apply, total, opts);
  const double thr = 1e-9 * std::max(1.0, double(n_sites - 1));
  Index m = 0;
  while (m < static_cast<Index>(res.eigenvalues.size()) && res.eigenvalues[m] <= thr) ++m;
  Frame f;
  f.dim = total;
  f.vectors = res.eigenvectors.leftCols(m);
  return f;
}

}  // namespace

IntersectionReport check_intersection_property(const NearestNeighborInteraction& h,
                                               const MpsFamily& f, int n_sites, double tol) {
  h.validate();
  IntersectionReport rep;

  // Precondition: the two-site ground space generates the interaction kernel.
  const Frame g2 = ground_space(f, 2);
  auto es = hermitian_eigensystem(h.matrix);
  Index ker2 = 0;
  while (ker2 < es.eigenvalues.size() && es.eigenvalues(ker2) < 0.5) ++ker2;
  Frame k2{h.matrix.rows(), es.eigenvectors.leftCols(ker2)};
  rep.precondition_distance =
      (g2.rank() == k2.rank()) ? subspace_distance(g2, k2) : 1.0;
  rep.precondition_ok = g2.rank() == k2.rank() && rep.precondition_distance <= tol;

  const Frame gn = ground_space(f, n_sites);
  const Frame kn = chain_kernel_frame(h, n_sites, gn.rank());
  rep.gamma_dim = gn.rank();
  rep.kernel_dim = kn.rank();
  rep.distance = (gn.rank() == kn.rank()) ? subspace_distance(gn, kn) : 1.0;
  rep.holds = rep.precondition_ok && gn.rank() == kn.rank() && rep.distance <= tol;
  return rep;
}

double check_quadratic_relations(const MpsFamily& f, const std::vector<QuadraticRelation>& rels) {
  f.validate();
  double worst = 0.0;
  for (const auto& rel : rels) {
    Matrix acc = Matrix::Zero(f.k, f.k);
    for (const auto& t : rel.lhs) acc += t.coeff * f.matrices.at(t.first) * f.matrices.at(t.second);
    for (const auto& t : rel.rhs) acc -= t.coeff * f.matrices.at(t.first) * f.matrices.at(t.second);
    worst = std::max(worst, operator_norm(acc));
  }
  return worst;
}

double martingale_coefficient(const NearestNeighborInteraction&, const MpsFamily& f, int k,
                              int n_sites, double rank_tol, Index max_dim) {
  if (k < 2 || n_sites < k) throw ValidationError("martingale_coefficient: need N >= k >= 2");
  f.validate();
  const Index d = f.d;
  const Index total = checked_power(d, n_sites + 1, max_dim);

  const Frame yn = ground_space(f, n_sites, rank_tol, max_dim);
  const Frame yn1 = ground_space(f, n_sites + 1, rank_tol, max_dim);
  const Frame yk = ground_space(f, k, rank_tol, max_dim);

  // Frame of G_{[1,N]} (x) C^d: columns gamma_N(E_pq) (x) e_i stay orthonormal.
  const Index ra = yn.rank() * d;
  Matrix a(total, ra);
  for (Index c = 0; c < yn.rank(); ++c) {
    for (Index i = 0; i < d; ++i) {
      Vector col = Vector::Zero(total);
      for (Index r = 0; r < yn.dim; ++r) col(r * d + i) = yn.vectors(r, c);
      a.col(c * d + i) = col;
    }
  }

  // Orthonormal basis Q of Ran A + Ran B with A's columns first. Columns of B
  // already inside Ran A project to numerical noise and must be dropped before
  // the rank cut (which is relative to the largest survivor).
  Matrix bperp = yn1.vectors - a * (a.adjoint() * yn1.vectors);
  Index n_keep = 0;
  for (Index c = 0; c < bperp.cols(); ++c) {
    if (bperp.col(c).norm() > 1e-10) bperp.col(n_keep++) = bperp.col(c);
  }
  Frame extra{total, Matrix(total, 0)};
  if (n_keep > 0) {
    extra = orthonormal_frame_of_span(bperp.leftCols(n_keep), 1e-12);
    extra.vectors -= a * (a.adjoint() * extra.vectors);
    extra = orthonormal_frame_of_span(extra.vectors, 1e-12);
  }
  const Index r = ra + extra.rank();
  Matrix q(total, r);
  q << a, extra.vectors;

  // D = P_A - P_B restricted to span Q.
  Matrix dmat = Matrix::Zero(r, r);
  dmat.topLeftCorner(ra, ra) = Matrix::Identity(ra, ra);
  const Matrix bq = q.adjoint() * yn1.vectors;  // r x rank(B)
  dmat -= bq * bq.adjoint();

  // C = Q^* (1 (x) G_k) Q via the reshape trick on the last k sites.
  const Index dk = checked_power(d, k, max_dim);
  const Index dl = total / dk;
  Matrix z(total, r);
  const Matrix ykc = yk.vectors.conjugate();
  for (Index j = 0; j < r; ++j) {
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        q.col(j).data(), dl, dk);
    const Matrix tmp = m * ykc;                       // dl x rank(Gk)
    const Matrix proj = tmp * yk.vectors.transpose(); // dl x dk
    Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> zj(
        z.col(j).data(), dl, dk);
    zj = proj;
  }
  const Matrix c = q.adjoint() * z;

  const Matrix dcd = dmat * c * dmat;
  Eigen::SelfAdjointEigenSolver<Matrix> esol((dcd + dcd.adjoint()) / 2.0);
  const double top = esol.eigenvalues().size() ? esol.eigenvalues().maxCoeff() : 0.0;
  return std::sqrt(std::max(0.0, top));
}

MartingaleBound martingale_gap_bound(double gamma_k, int k, double eps_k) {
  if (k < 2) throw ValidationError("martingale_gap_bound: k must be >= 2");
  MartingaleBound b;
  const double root = eps_k * std::sqrt(double(k));
  if (root >= 1.0) {
    b.value = 0.0;
    b.valid = false;
    return b;
  }
  b.value = gamma_k / double(k - 1) * (1.0 - root) * (1.0 - root);
  b.valid = true;
  return b;
}

}  // namespace spingap
