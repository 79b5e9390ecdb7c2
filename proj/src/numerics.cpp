#include "spingap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spingap {

Matrix kron(const Matrix& a, const Matrix& b, Index max_dim) {
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (a.rows() > 0 && b.rows() > 0 && (rows > max_dim || cols > max_dim)) {
    throw SizeError("kron: product dimension " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " exceeds ceiling " + std::to_string(max_dim));
  }
  Matrix out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigensystem hermitian_eigensystem(const Matrix& h, double herm_tol) {
  if (h.rows() != h.cols()) {
    throw ValidationError("hermitian_eigensystem: matrix is not square");
  }
  const double scale = h.cwiseAbs().maxCoeff();
  const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (dev > herm_tol * std::max(1.0, scale)) {
    throw ValidationError("hermitian_eigensystem: input not Hermitian, |A - A^*| = " +
                          std::to_string(dev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw SolverError("hermitian_eigensystem: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Frame orthonormal_frame_of_span(const Matrix& columns, double rank_tol) {
  if (columns.rows() == 0) throw ValidationError("orthonormal_frame_of_span: empty ambient space");
  Frame f;
  f.dim = columns.rows();
  if (columns.cols() == 0) {
    f.vectors = Matrix(f.dim, 0);
    return f;
  }
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? sv(0) * rank_tol : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  }
  f.vectors = svd.matrixU().leftCols(rank);
  return f;
}

Matrix projector_onto(const Frame& f) {
  if (f.rank() == 0) return Matrix::Zero(f.dim, f.dim);
  return f.vectors * f.vectors.adjoint();
}

double subspace_distance(const Frame& a, const Frame& b) {
  if (a.dim != b.dim) {
    throw ValidationError("subspace_distance: ambient dimensions differ");
  }
  // ||P_a - P_b|| without forming dim x dim projectors: work in the joint span.
  if (a.rank() == 0 && b.rank() == 0) return 0.0;
  Matrix joint(a.dim, a.rank() + b.rank());
  joint << a.vectors, b.vectors;
  Frame q = orthonormal_frame_of_span(joint, 1e-13);
  const Matrix qa = q.vectors.adjoint() * a.vectors;  // r x ra
  const Matrix qb = q.vectors.adjoint() * b.vectors;
  const Matrix diff = qa * qa.adjoint() - qb * qb.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

Vector random_complex_vector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

void project_out(Vector& w, const Matrix& q) {
  if (q.cols() > 0) w -= q * (q.adjoint() * w);
}

// Dense fallback when the requested count is a sizable fraction of the space.
KrylovResult dense_lowest(const LinearMap& apply, Index dim, const KrylovOptions& opts) {
  Matrix h(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    Vector e = Vector::Zero(dim);
    e(j) = 1.0;
    h.col(j) = apply(e);
  }
  h = ((h + h.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  KrylovResult res;
  const Index want = std::min<Index>(opts.how_many, dim);
  res.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + want);
  if (opts.want_vectors) res.eigenvectors = es.eigenvectors().leftCols(want);
  res.matvecs = static_cast<int>(dim);
  return res;
}

}  // namespace

KrylovResult krylov_lowest(const LinearMap& apply, Index dim, const KrylovOptions& opts) {
  if (dim <= 0) throw ValidationError("krylov_lowest: empty space");
  if (opts.how_many <= 0) throw ValidationError("krylov_lowest: how_many must be positive");
  if (opts.how_many > dim) throw ValidationError("krylov_lowest: how_many exceeds dimension");
  if (dim <= 32 || 2 * opts.how_many >= dim) return dense_lowest(apply, dim, opts);

  const Index want = opts.how_many;
  std::mt19937_64 rng(opts.seed);

  std::vector<double> vals;
  Matrix conv(dim, 0);
  int matvecs = 0;
  int restarts = 0;
  Index fallback_basis = 0;
  double scale = 0.0;
  bool verified = false;
  int max_basis =
      opts.max_basis > 0 ? opts.max_basis
                         : static_cast<int>(std::min<Index>(dim, std::max<Index>(2 * want + 40, 64)));

  while (!verified) {
    if (conv.cols() >= dim) break;
    if (++restarts > opts.max_restarts) {
      throw SolverError("krylov_lowest: no convergence after " + std::to_string(restarts - 1) +
                        " restarts (" + std::to_string(matvecs) + " matvecs)");
    }
    Vector v = random_complex_vector(dim, rng);
    project_out(v, conv);
    project_out(v, conv);
    double nv = v.norm();
    while (nv < 1e-8 && fallback_basis < dim) {
      v = Vector::Unit(dim, fallback_basis++);
      project_out(v, conv);
      project_out(v, conv);
      nv = v.norm();
    }
    if (nv < 1e-8) break;  // complement exhausted

    const int cap = static_cast<int>(std::min<Index>(max_basis, dim - conv.cols()));
    Matrix basis(dim, cap);
    basis.col(0) = v / nv;
    std::vector<double> alpha;
    std::vector<double> beta;
    double last_beta = 0.0;
    bool breakdown = false;
    int m = 0;
    for (int j = 0; j < cap; ++j) {
      Vector w = apply(basis.col(j));
      ++matvecs;
      project_out(w, conv);
      alpha.push_back(std::real(basis.col(j).dot(w)));
      auto cur = basis.leftCols(j + 1);
      w -= cur * (cur.adjoint() * w);
      w -= cur * (cur.adjoint() * w);
      project_out(w, conv);
      const double b = w.norm();
      m = j + 1;
      scale = std::max({scale, std::abs(alpha.back()), b});
      if (b < 1e-13 * std::max(1.0, scale)) {
        breakdown = true;
        break;
      }
      if (j + 1 == cap) {
        last_beta = b;
        break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
    if (m == 0) continue;

    RealMatrix tri = RealMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) tri(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) {
      tri(i, i + 1) = beta[i];
      tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> tes(tri);
    const RealVector theta = tes.eigenvalues();
    const RealMatrix s = tes.eigenvectors();
    const double tol_eff = opts.tol * std::max(1.0, scale);

    const bool have_enough = static_cast<Index>(vals.size()) >= want;
    double cutoff = std::numeric_limits<double>::infinity();
    if (have_enough) {
      std::vector<double> sorted = vals;
      std::sort(sorted.begin(), sorted.end());
      cutoff = sorted[want - 1];
    }

    // Harvest the ascending prefix of converged Ritz pairs; stopping at the
    // first unconverged one keeps the deflated ordering sound. Once enough
    // eigenvalues are known, only values that undercut the current cutoff
    // still matter.
    int harvested = 0;
    for (int i = 0; i < m; ++i) {
      const double resid = breakdown ? 0.0 : std::abs(last_beta * s(m - 1, i));
      if (resid > tol_eff) break;
      if (theta(i) > cutoff + 10.0 * tol_eff) break;
      Vector ritz = basis.leftCols(m) * s.col(i).cast<Complex>();
      project_out(ritz, conv);
      const double nr = ritz.norm();
      if (nr < 1e-8) continue;  // already represented
      ritz /= nr;
      conv.conservativeResize(Eigen::NoChange, conv.cols() + 1);
      conv.col(conv.cols() - 1) = ritz;
      vals.push_back(theta(i));
      ++harvested;
    }

    if (harvested == 0) {
      const double resid0 = breakdown ? 0.0 : std::abs(last_beta * s(m - 1, 0));
      if (have_enough && resid0 <= tol_eff && theta(0) >= cutoff - 10.0 * tol_eff) {
        verified = true;  // nothing below the reported set remains
      } else if (resid0 > tol_eff) {
        max_basis = static_cast<int>(std::min<Index>(dim, 2 * max_basis));
      }
    }
  }

  if (static_cast<Index>(vals.size()) < want) {
    throw SolverError("krylov_lowest: converged only " + std::to_string(vals.size()) + " of " +
                      std::to_string(want) + " eigenvalues (" + std::to_string(matvecs) +
                      " matvecs)");
  }

  std::vector<Index> order(vals.size());
  for (Index i = 0; i < static_cast<Index>(order.size()); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return vals[a] < vals[b]; });

  KrylovResult res;
  res.matvecs = matvecs;
  res.eigenvalues.resize(want);
  if (opts.want_vectors) res.eigenvectors.resize(dim, want);
  for (Index i = 0; i < want; ++i) {
    res.eigenvalues[i] = vals[order[i]];
    if (opts.want_vectors) res.eigenvectors.col(i) = conv.col(order[i]);
  }
  return res;
}

std::vector<double> krylov_lowest_eigs(const LinearMap& apply, Index dim, int how_many, double tol,
                                       std::uint64_t seed) {
  KrylovOptions opts;
  opts.how_many = how_many;
  opts.tol = tol;
  opts.seed = seed;
  return krylov_lowest(apply, dim, opts).eigenvalues;
}

}  // namespace spingap
