#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace plurirank {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Largest supported ambient complex dimension (dense storage envelope).
inline constexpr int kMaxDim = 8;

// Numerical policy, shared across modules.
namespace tol {
inline constexpr double hermitian = 1e-12;       // relative Hermitian-symmetry defect
inline constexpr double rank_rel = 1e-9;         // singular values <= rank_rel * sigma_max count as zero
inline constexpr double psd_floor = -1e-10;      // eigenvalue floor relative to spectral norm
inline constexpr double trace_one = 1e-10;       // |trace - 1| bound for normalized vectors
inline constexpr double ortho = 1e-10;           // tangent-vector orthogonality defect
inline constexpr double unit_norm = 1e-12;       // | |z| - 1 | bound for projective representatives
inline constexpr double center = 1e-8;           // default |P z| cutoff near the projection center
inline constexpr double direct_sum = 1e-8;       // sigma_min of stacked subspace bases
inline constexpr double projector = 1e-10;       // || P^2 - P || bound
inline constexpr double cluster_delta = 1e-9;    // default fiber-clustering radius
inline constexpr double degenerate_trace = 1e-12;// pushed vectors with smaller trace count as zero
inline constexpr double greedy = 1e-9;           // residual threshold for greedy vector selection
}  // namespace tol

/// Precondition or argument violation (maps to CLI exit 2).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed dataset or report input; message names the offending atom.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point (or atom) sits on or numerically near the projection center.
class CenterIncidenceError : public std::runtime_error {
 public:
  explicit CenterIncidenceError(std::string msg, std::vector<std::size_t> atoms = {})
      : std::runtime_error(std::move(msg)), atoms_(std::move(atoms)) {}
  const std::vector<std::size_t>& atoms() const { return atoms_; }

 private:
  std::vector<std::size_t> atoms_;
};

/// Numerical rank: number of singular values strictly above rank_rel * sigma_max.
/// A value exactly at the threshold counts as zero (ranks resolve downward).
int numerical_rank(const MatrixXcd& m, double rel_tol = tol::rank_rel);

/// Orthonormal basis of the column range of m (numerical rank many columns).
MatrixXcd range_basis(const MatrixXcd& m, double rel_tol = tol::rank_rel);

/// Spectral-norm distance between the subspaces spanned by two orthonormal bases.
double subspace_distance(const MatrixXcd& basis_a, const MatrixXcd& basis_b);

/// Deterministic pairwise (tree) summation; more accurate than running sums
/// and independent of accumulation chunking.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

}  // namespace plurirank
