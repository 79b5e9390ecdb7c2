#ifndef SPINGAP_SO_MODELS_HPP
#define SPINGAP_SO_MODELS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spingap/mps.hpp"

namespace spingap {

/// Clifford generators Z_0..Z_2J on 2^J dimensions, built from fermionic
/// creation/annihilation operators with Jordan-Wigner strings.
struct CliffordRep {
  int j_max = 0;               // J
  std::vector<Matrix> z;       // 2J+1 Hermitian generators
  std::vector<Matrix> a;       // annihilation a_1..a_J
  std::vector<Matrix> a_dag;   // creation
};

CliffordRep clifford_rep(int j);

/// max |Z_a Z_b + Z_b Z_a - 2 delta_ab|.
double clifford_residual(const CliffordRep& rep);

/// SO(d)-invariant interaction P_S = (symmetrizer) - |omega><omega| with the
/// normalized diagonal singlet omega; d odd and >= 3.
NearestNeighborInteraction so_interaction(int d);

/// Ground-state generating matrices of the SO(2J+1) chain in the paired
/// (a_j, a_j^+) basis: V_0 = -(2J+1)^{-1/2} Z_0, V_{2j-1} ~ a_j, V_{2j} ~ -a_j^+.
MpsFamily so_mps(int j);

/// Local basis change U relating the Clifford-label family {gamma Z_alpha} to
/// so_mps(J): V_beta = sum_alpha conj(U_{beta alpha}) gamma Z_alpha. The
/// SO-invariant interaction transfers to the so_mps basis by conjugation with
/// conj(U) (x) conj(U).
Matrix so_basis_unitary(int j);

/// so_interaction(2J+1) expressed in the so_mps basis.
NearestNeighborInteraction so_interaction_mps_basis(int j);

/// Fixed 3x3 unitary taking the SO(3) labels (z, x, y) to the spin-1 basis
/// (e_-, e_0, e_+) with e_+- = -+(e_x +- i e_y)/sqrt(2), e_0 = e_z.
Matrix spherical_basis_unitary();

/// lambda-twisted fermionic operators; lambda = (1,...,1) recovers the CAR.
struct TwistedCarFamily {
  int j_max = 0;
  std::vector<double> lambda;
  std::vector<Matrix> a;
  std::vector<Matrix> a_dag;
  Matrix a0;
};

TwistedCarFamily twisted_car(int j, const std::vector<double>& lambda);

/// Max residual of the twisted commutation relations (pair, mixed, a0, and
/// creation-creation exchange).
double twisted_car_residual(const TwistedCarFamily& f);

using LambdaProfile = std::function<std::vector<double>(double)>;

double so_s0(int j);  // acos((2J+1)^{-1/2})

/// lambda_j(s) = lambda0 + (1 - lambda0) s/s0 for all j.
LambdaProfile default_lambda_profile(int j, double lambda0 = 0.5);

struct SoPathPoint {
  int j_max = 0;
  double s = 0.0;
  std::vector<double> lambda;
  std::vector<double> alpha;  // sin(s)/sqrt(J)
  std::vector<double> beta;   // -sqrt(1 - lambda^2 (1 - alpha^2))
  double gamma = 0.0;         // -cos(s)
};

SoPathPoint so_path_point(int j, double s, const LambdaProfile& profile);

/// Deformation path of generating matrices; equals so_mps(J) at s = s0 and
/// loses the V_{2j} directions at s = 0.
MpsFamily so_path_mps(int j, double s, const LambdaProfile& profile);

/// Parent interaction of the path family: the projector complementary to its
/// two-site ground space.
NearestNeighborInteraction so_path_interaction(int j, double s, const LambdaProfile& profile);

/// The path algebra with s-dependent coefficients: V_{2j}V_{2j-1} +
/// lambda_j^2 V_{2j-1}V_{2j} = (alpha_j beta_j / gamma^2) V_0^2 plus the
/// exchange relations inherited from the twisted operators.
std::vector<QuadraticRelation> so_path_relations(int j, double s, const LambdaProfile& profile);

struct SoTransferCertificate {
  bool pass = false;
  bool irreducible = false;
  bool lower_triangular = false;  // diagonal-sector matrix at the PVBS endpoint
  double top_error = 0.0;         // |t_1 - 1|
  double subdominant_margin = 0.0;  // 1 - |t_2|
  double offdiag_residual = 0.0;  // top eigenvectors should be diagonal
  double min_right_entry = 0.0;
  double min_left_entry = 0.0;
  std::string detail;
};

/// Certifies the transfer operator of the path family: simple top eigenvalue
/// 1 with entrywise-positive diagonal left/right eigenvectors and a strict
/// subdominant margin. At s = 0 it reports the reducible triangular structure
/// instead of passing.
SoTransferCertificate so_transfer_check(int j, double s, const LambdaProfile& profile);

/// dim ker of the SO(2J+1) chain Hamiltonian on N sites (4^J for long chains).
Index so_ground_space_dim(int j, int n_sites, std::uint64_t seed = 0xC0FFEE);

}  // namespace spingap

#endif
