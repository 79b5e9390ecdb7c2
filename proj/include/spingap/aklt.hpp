#ifndef SPINGAP_AKLT_HPP
#define SPINGAP_AKLT_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spingap/mps.hpp"
#include "spingap/pvbs.hpp"

namespace spingap {

// Physical basis order of the spin-1 path module is (e_-, e_0, e_+) = (0, 1, 2).

/// Interpolation schedule between the deformed model at s = 0 and the AKLT
/// point at s0 = asin(sqrt(2/3)). f ramps from 1/sqrt(2) to 1, is constant on
/// [0, delta], and g(s) = +sqrt(1 - f(s)^2 cos^2(s)) keeps the generating map
/// an isometry.
struct PathSchedule {
  double s0 = 0.0;
  double delta = 0.0;
  std::function<double(double)> f;

  double g(double s) const;

  /// f constant at 1/sqrt(2) up to delta = min{s1, s2, s0/2}, then the unique
  /// monotone cubic ramp with flat ends reaching 1 at s0.
  static PathSchedule standard();

  void validate() const;
};

/// The spin-2 projector on two spin-1 sites, assembled from the Heisenberg
/// polynomial (1/2) S.S + (1/6) (S.S)^2 + 1/3.
NearestNeighborInteraction aklt_interaction();

/// The AKLT generating matrices (basis order w_-, w_0, w_+).
MpsFamily aklt_mps();

/// Rank-5 projector onto the five interpolating two-site vectors at parameter s.
NearestNeighborInteraction path_interaction(double s, const PathSchedule& sched);

/// The 2x2 generating matrices w_-(s), w_0(s), w_+(s).
MpsFamily path_mps(double s, const PathSchedule& sched);

/// Deformed two-site algebra: f w0 w- = -w- w0, w0 w+ = -f w+ w0, w+-^2 = 0,
/// w- w+ + f^2 w+ w- = -(g sin/cos^2) w0^2.
std::vector<QuadraticRelation> path_relations(double s, const PathSchedule& sched);

/// PVBS endpoint of the path: lambda_+ = sqrt(2), lambda_- = 1/sqrt(2), all
/// thetas = pi; particle 1 is '+', particle 2 is '-'.
PvbsParams path_endpoint_pvbs_params();

/// The endpoint PVBS interaction carried into the spin-1 basis order
/// (vacuum e_1 <-> e_0, particle 1 <-> e_+, particle 2 <-> e_-).
NearestNeighborInteraction path_endpoint_pvbs_interaction();

struct PathTransferData {
  TransferSpectrum spectrum;
  std::array<Complex, 4> closed_form;  // {1, -f cos^2, -f cos^2, f^2 cos^2 - sin^2}
  double rho1 = 0.0;                   // g^2 / (g^2 + sin^2)
  double rho2 = 0.0;
  bool faithful = false;               // rho invertible, i.e. s > 0
  double closed_form_distance = 0.0;
};

PathTransferData path_transfer_data(double s, const PathSchedule& sched);

struct ZetaNorms {
  double q_n = 0.0;
  std::array<double, 4> norm_sq{};  // closed forms for ||zeta^mu_N||^2
  double t2 = 0.0;
  double t4 = 0.0;
};

/// Closed-form norms of the zeta basis; valid for any N without touching 3^N.
ZetaNorms zeta_norms_closed_form(double s, int n_sites, const PathSchedule& sched);

struct ZetaBasis {
  double s = 0.0;
  int n_sites = 0;
  double q_n = 0.0;
  std::array<Matrix, 4> a;       // the 2x2 boundary matrices
  std::array<Vector, 4> vectors; // zeta^mu = Gamma_N(A^mu)
};

/// Materializes the four zeta vectors (3^N components). s = 0 is handled by
/// the continuity extension, evaluating the boundary matrices at s = 1e-8.
ZetaBasis zeta_basis(double s, int n_sites, const PathSchedule& sched,
                     Index max_dim = Index(1) << 22);

struct PathGapRow {
  double s = 0.0;
  double f = 0.0;
  double g = 0.0;
  double gap = 0.0;
  Index kernel_dim = 0;
  bool kernel_ok = false;
};

/// Dense/Krylov gap of sum_x h(s)_{x,x+1} on N sites for each grid value;
/// kernel dimension is certified against 4.
std::vector<PathGapRow> gap_along_path(int n_sites, const std::vector<double>& grid,
                                       const PathSchedule& sched, std::uint64_t seed = 0xC0FFEE);

/// g_{k,N}(s) through the low-rank martingale machinery.
double martingale_along_path(double s, int k, int n_sites, const PathSchedule& sched);

struct NoGoReport {
  int trials = 0;
  int counterexamples = 0;
  double max_commutator_residual = 0.0;  // [w+ w-, w_i] on the grid
  double c_product_error = 0.0;          // |C_{+0} C_{-0} - 1|
  bool pass = false;
};

/// (a) Seeded random search for a two-dimensional nonzero nilpotent pair
/// satisfying the deformed exchange algebra with distinct weights (none must
/// exist); (b) commutation of w+ w- with w0 along the path; (c) the
/// reciprocal-coefficient identity C_{+0} C_{-0} = 1 read off the algebra.
NoGoReport algebra_no_go_checks(const PathSchedule& sched, int trials = 10000,
                                std::uint64_t seed = 0xC0FFEE);

}  // namespace spingap

#endif
