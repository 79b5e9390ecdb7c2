#ifndef SPINGAP_HARNESS_HPP
#define SPINGAP_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spingap/mps.hpp"

namespace spingap {

inline constexpr Index kDenseCeiling = 4096;
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// A Hermitian operator on d^N, dense when small enough, otherwise a matvec
/// closure applying the two-site terms through tensor-index arithmetic.
struct ChainOperator {
  Index dim = 0;
  LinearMap apply;
  std::optional<Matrix> dense;
  double norm_bound = 0.0;  // cheap upper bound on the operator norm
  std::string model;
};

/// H = sum_{x=1}^{N-1} h_{x,x+1} with open boundary conditions.
ChainOperator assemble_hamiltonian(const NearestNeighborInteraction& h, int n_sites,
                                   Index dense_ceiling = kDenseCeiling,
                                   Index matvec_ceiling = Index(1) << 22);

enum class SolverKind { Auto, Dense, Krylov };

struct SolverConfig {
  SolverKind kind = SolverKind::Auto;
  double tol = 1e-10;
  std::uint64_t seed = kDefaultSeed;
  double cluster_rel = 1e-9;  // kernel clustering threshold, relative to ||H||
  int extra = 6;              // eigenvalues to resolve beyond the expected kernel
  Index kernel_hint = 8;      // iterative-solver sizing when no expectation is given
};

struct SpectrumReport {
  std::string model_id;
  int n_sites = 0;
  double ground_energy = 0.0;
  Index kernel_dim = 0;
  double gap = 0.0;
  std::string solver;
  double tol = 0.0;
  double cluster_tol = 0.0;
  double wall_time_s = 0.0;
};

/// Ground energy, kernel dimension (eigenvalue cluster at the bottom of the
/// spectrum) and the gap to the first level above it. If expected_kernel_dim
/// is given, a mismatch is a hard CertificationError.
SpectrumReport spectral_gap(const ChainOperator& op, std::optional<Index> expected_kernel_dim,
                            const SolverConfig& cfg = {});

std::string format_double(double v);
std::string format_complex(Complex v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);
};

struct SweepConfig {
  std::string model;  // "pvbs-lambda" | "aklt-path" | "so-path"
  nlohmann::json raw;

  static SweepConfig from_json(const nlohmann::json& j);
};

/// One row per grid point; failures are recorded per row and the run
/// continues. Deterministic for a fixed seed, also with workers > 1.
CsvTable run_sweep(const SweepConfig& cfg);

}  // namespace spingap

#endif
