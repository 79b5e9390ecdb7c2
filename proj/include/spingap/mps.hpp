#ifndef SPINGAP_MPS_HPP
#define SPINGAP_MPS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spingap/numerics.hpp"
#include "spingap/types.hpp"

namespace spingap {

/// A translation-invariant matrix product family: d physical states, bond
/// dimension k, and the d generating matrices v_0..v_{d-1}.
struct MpsFamily {
  int d = 0;
  int k = 0;
  std::vector<Matrix> matrices;

  void validate() const;
};

/// A Hermitian idempotent on the two-site space (C^d otimes C^d).
struct NearestNeighborInteraction {
  int d = 0;
  Matrix matrix;  // d^2 x d^2
  std::string model;

  void validate(double tol = 1e-10) const;
  Index rank() const;  // trace rounded; projector eigenvalues are 0/1
};

/// Full spectral data of the transfer operator E: B -> sum_i v_i^* B v_i.
/// Eigenvalues are sorted by (modulus descending, phase ascending). Left/right
/// pairs satisfy Tr(L_i R_j) = delta_ij; each right eigenvector is scaled so
/// its largest-modulus entry is 1.
struct TransferSpectrum {
  Vector eigenvalues;
  std::vector<Matrix> right;
  std::vector<Matrix> left;
  bool biorthonormal = false;
  double residual = 0.0;  // max_j ||E(R_j) - t_j R_j||_F
};

/// A two-site algebra relation sum_a c_a v_{i_a} v_{j_a} = sum_b c'_b v_{k_b} v_{l_b}.
struct QuadraticRelation {
  struct Term {
    Complex coeff;
    int first = 0;
    int second = 0;
  };
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  std::string description;
};

/// Matrix of the transfer operator in the basis E_{pq} of M_k, enumerated
/// row-major (index p*k + q). With that convention the matrix is
/// sum_i v_i^+ (x) v_i^T.
Matrix transfer_operator(const MpsFamily& f);

TransferSpectrum transfer_spectrum(const MpsFamily& f);

/// Eigenvalue multiset comparison after sorting by (modulus desc, phase asc).
double spectrum_multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// The matrix product map: component of the output on the basis word
/// (i_1..i_N) is Tr(B v_{i_N} ... v_{i_1}); word index is i_1-major.
Vector gamma_map(const MpsFamily& f, int n_sites, const Matrix& b,
                 Index max_dim = Index(1) << 22);

/// <Gamma_N(b_left), A Gamma_N(b_right)> contracted through the doubled
/// transfer operator, never materializing d^N vectors. `site_ops` carries
/// optional single-site observables as (site, matrix) pairs, sites 1-based;
/// every unlisted site gets the identity.
Complex mps_overlap(const MpsFamily& f, const Matrix& b_left, const Matrix& b_right, int n_sites,
                    const std::vector<std::pair<int, Matrix>>& site_ops = {});

/// Orthonormal frame of Ran Gamma_N, built by mapping a full matrix-unit basis
/// of M_k through gamma_map.
Frame ground_space(const MpsFamily& f, int n_sites, double rank_tol = kRankTol,
                   Index max_dim = Index(1) << 22);

struct IntersectionReport {
  bool holds = false;
  double distance = 0.0;
  Index gamma_dim = 0;
  Index kernel_dim = 0;
  bool precondition_ok = false;   // ker h == G_2
  double precondition_distance = 0.0;
};

/// Compares Ran Gamma_N with the intersection of the shifted two-site kernels,
/// i.e. the kernel of sum_x h_{x,x+1}. The precondition ker h = G_2 is checked
/// first and reported rather than thrown.
IntersectionReport check_intersection_property(const NearestNeighborInteraction& h,
                                               const MpsFamily& f, int n_sites,
                                               double tol = 1e-8);

/// Max over relations of the operator norm of (sum lhs - sum rhs).
double check_quadratic_relations(const MpsFamily& f, const std::vector<QuadraticRelation>& rels);

/// g_{k,N} = || G_{[N-k+2,N+1]} (G_{[1,N]} - G_{[1,N+1]}) ||, evaluated on the
/// low-rank span of the ground frames instead of d^{N+1} dense projectors.
double martingale_coefficient(const NearestNeighborInteraction& h, const MpsFamily& f, int k,
                              int n_sites, double rank_tol = kRankTol,
                              Index max_dim = Index(1) << 22);

struct MartingaleBound {
  double value = 0.0;
  bool valid = false;  // requires eps_k < 1/sqrt(k)
};

/// Lower bound gamma_N >= (gamma_k/(k-1)) (1 - eps_k sqrt(k))^2; returns 0 with
/// valid=false when eps_k >= 1/sqrt(k).
MartingaleBound martingale_gap_bound(double gamma_k, int k, double eps_k);

}  // namespace spingap

#endif
