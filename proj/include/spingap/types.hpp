#ifndef SPINGAP_TYPES_HPP
#define SPINGAP_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spingap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Bad input (dimension mismatch, out-of-range parameter, malformed config).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested problem exceeds a configured size ceiling.
struct SizeError : ValidationError {
  using ValidationError::ValidationError;
};

// Iterative or dense solver failed to produce a usable result.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A certified property (kernel dimension, spectral structure, ...) did not hold.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two models sit in different gapped phases; no gapped path exists between them.
struct PhaseObstructionError : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace spingap

#endif
