#ifndef SPINGAP_PVBS_HPP
#define SPINGAP_PVBS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spingap/mps.hpp"

namespace spingap {

/// Parameters of a product-vacua-with-boundary-states model: n particle types
/// with hopping weights lambda_1..lambda_n (lambda_0 = 1 implied) and exchange
/// phases theta_ij for 0 <= i < j <= n (antisymmetric extension implied).
class PvbsParams {
 public:
  PvbsParams() = default;
  PvbsParams(std::vector<double> lambdas, std::map<std::pair<int, int>, double> thetas = {});

  int n() const { return static_cast<int>(lambdas_.size()); }
  int d() const { return n() + 1; }
  double lambda(int i) const;            // lambda_0 = 1
  double theta(int i, int j) const;      // antisymmetric, defaults to 0
  const std::vector<double>& lambdas() const { return lambdas_; }

  /// All lambda_i != 1 for i >= 1; the closed-form gap machinery needs this.
  bool gapped_admissible() const;

  static PvbsParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::vector<double> lambdas_;
  std::map<std::pair<int, int>, double> thetas_;  // keys i < j
};

struct PhaseLabel {
  int n_left = 0;   // count of lambda_i < 1
  int n_right = 0;  // count of lambda_i > 1

  bool operator==(const PhaseLabel&) const = default;
};

/// Projector onto span{phi_ij (i<j), phi_ii (1<=i<=n)} with
/// phi_ij = e_i e_j - exp(i theta_ij) lambda_i^{-1} lambda_j e_j e_i and
/// phi_ii = e_i e_i. Rank n + n(n+1)/2; its kernel is the two-site ground
/// space.
NearestNeighborInteraction pvbs_interaction(const PvbsParams& p);

/// The 2^n-dimensional generating matrices: v_0 a tensor product of phase
/// times diag(1, lambda_i) factors, v_i with a raising operator in slot i.
MpsFamily pvbs_mps(const PvbsParams& p);

/// The defining two-site algebra: v_i v_j = exp(i theta_ij) lambda_i/lambda_j v_j v_i
/// and v_i^2 = 0 for i >= 1.
std::vector<QuadraticRelation> pvbs_relations(const PvbsParams& p);

/// Ground vector with particle content S on the chain [a,b], normalized so the
/// amplitude of a particle of type i at position x is (exp(i theta_i0) lambda_i)^{x-a+1}.
Vector pvbs_ground_vector(const PvbsParams& p, int a, int b, const std::set<int>& s,
                          Index max_dim = Index(1) << 22);

struct ClosedFormSpectrum {
  std::vector<Complex> values;  // 4^n entries
  Complex top;
  bool top_simple = false;
};

/// Closed-form transfer spectrum {prod_j lambda_j^{n_j} exp(+-i delta_{n_j,1} theta_0j)}.
ClosedFormSpectrum pvbs_transfer_spectrum_closed_form(const PvbsParams& p);

struct GapBound {
  double value = 0.0;
  bool finite = false;    // false when N <= max C_i (bound vacuous)
  bool critical = false;  // some lambda_i == 1
};

/// Variational upper bound min_i (1 - 2/(lambda_i + 1/lambda_i)) (1 + (C_i-1)/(N-C_i))
/// with C_i = (1+lambda_i)/|1-lambda_i|.
GapBound gap_upper_bound(const PvbsParams& p, int n_sites);

/// The centered/rescaled one-particle matrix K on N sites: tridiagonal with
/// hopping phases exp(-+i theta_i0) and boundary weights 1/lambda and lambda on
/// the diagonal corners.
Matrix one_particle_hamiltonian(double lambda, double theta_i0, int n_sites);

/// H restricted to the one-particle sector: 1 - K/(lambda + 1/lambda).
Matrix one_particle_sector_hamiltonian(double lambda, double theta_i0, int n_sites);

struct OneParticleCertificate {
  bool pass = false;
  double lambda = 0.0;
  double limit_gap = 0.0;             // 1 - 2/(lambda + 1/lambda)
  double min_gap = 0.0;
  double max_top_error = 0.0;         // |max eig K - (lambda + 1/lambda)|
  double min_interval_clearance = 0.0;  // distance of the rest of spec(K) below 2
  double max_recursion_residual = 0.0;  // Chebyshev three-term recursion at E = lambda+1/lambda
  std::vector<double> gaps;           // gap of H for N = 2..N_max
  std::string failure;
};

/// Certifies, for N = 2..n_max: top of K is lambda + 1/lambda (simple), no
/// spectrum in [2, lambda + 1/lambda), and the one-particle gap stays above
/// the closed-form limit. Refuses lambda = 1.
OneParticleCertificate one_particle_gap_certificate(double lambda, int n_max);

/// Counts of left-binding (lambda < 1) and right-binding (lambda > 1)
/// particles. Throws on a critical model.
PhaseLabel classify(const PvbsParams& p);

struct EquivalencePathPoint {
  NearestNeighborInteraction interaction;  // u(s)-conjugated interaction
  PvbsParams params;                       // slot parameters at s
  Matrix unitary;                          // single-site u(s)
};

/// Interpolating interaction between two models in the same phase:
/// h(0) = interaction of p1, h(1) = interaction of p2, with slotwise linear
/// lambda/theta paths (so |lambda_j(s) - 1| > 0 throughout) conjugated by a
/// smooth unitary path between the two label permutations. Refuses models
/// with different phase labels.
EquivalencePathPoint equivalence_path(const PvbsParams& p1, const PvbsParams& p2, double s);

struct SectorDecomposition {
  std::vector<std::vector<int>> occupations;   // per sector: counts of types 1..n
  std::vector<std::vector<Index>> sectors;     // basis indices per sector
};

/// Partition of the product basis of d^N by particle occupation numbers; the
/// chain Hamiltonian is block-diagonal across it.
SectorDecomposition sector_decomposition(const PvbsParams& p, int n_sites,
                                         Index max_dim = Index(1) << 22);

}  // namespace spingap

#endif
