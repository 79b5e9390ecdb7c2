#ifndef SPINGAP_NUMERICS_HPP
#define SPINGAP_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "spingap/types.hpp"

namespace spingap {

/// Default relative rank tolerance for subspace extraction. Kernel detection of
/// frustration-free Hamiltonians is sensitive to this; it is a knob everywhere
/// it matters.
inline constexpr double kRankTol = 1e-10;

/// Kronecker product. Throws SizeError if rows(a)*rows(b) or cols(a)*cols(b)
/// exceeds max_dim.
Matrix kron(const Matrix& a, const Matrix& b, Index max_dim = Index(1) << 24);

/// An orthonormal set of vectors of a common ambient dimension, stored as the
/// columns of `vectors`.
struct Frame {
  Index dim = 0;
  Matrix vectors;  // dim x rank, orthonormal columns

  Index rank() const { return vectors.cols(); }
};

struct Eigensystem {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, paired with eigenvalues
};

/// Dense Hermitian eigendecomposition. The input must be Hermitian within
/// herm_tol * max|entry|; eigenvalues come out ascending.
Eigensystem hermitian_eigensystem(const Matrix& h, double herm_tol = 1e-10);

using LinearMap = std::function<Vector(const Vector&)>;

struct KrylovOptions {
  int how_many = 1;
  double tol = 1e-10;
  std::uint64_t seed = 0xC0FFEE;
  int max_basis = 0;      // 0: pick automatically
  int max_restarts = 200;
  bool want_vectors = false;
};

struct KrylovResult {
  std::vector<double> eigenvalues;  // ascending, size how_many
  Matrix eigenvectors;              // only if want_vectors
  int matvecs = 0;
};

/// Lowest eigenvalues of a Hermitian operator given only as a matvec closure.
/// Lanczos with full reorthogonalization and deflation against converged
/// vectors; deterministic for fixed (seed, tol). Degenerate eigenvalues are
/// resolved by restarting on the deflated complement, so multiplicities are
/// counted correctly.
KrylovResult krylov_lowest(const LinearMap& apply, Index dim, const KrylovOptions& opts);

std::vector<double> krylov_lowest_eigs(const LinearMap& apply, Index dim, int how_many,
                                       double tol = 1e-10, std::uint64_t seed = 0xC0FFEE);

/// Orthonormal frame spanning the column span of `columns`. Numerical rank is
/// the number of singular values >= rank_tol * s_max. All-zero input yields an
/// empty frame.
Frame orthonormal_frame_of_span(const Matrix& columns, double rank_tol = kRankTol);

/// Hermitian idempotent projector onto the span of a frame.
Matrix projector_onto(const Frame& f);

/// Operator norm of the projector difference; 0 iff the frames span the same
/// subspace, 1 if some direction of one is orthogonal to all of the other.
double subspace_distance(const Frame& a, const Frame& b);

/// Largest singular value.
double operator_norm(const Matrix& a);

}  // namespace spingap

#endif
