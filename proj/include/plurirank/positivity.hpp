#pragma once

#include <vector>

#include "plurirank/exterior.hpp"
#include "plurirank/types.hpp"

namespace plurirank {

/// One decomposable term: nonnegative weight times the wedge of a p-frame.
struct SPTerm {
  double lambda = 0.0;
  MatrixXcd frame;  // dim x p columns
};

/// Strongly positive (p,p)-vector, stored as an explicit nonnegative
/// combination of decomposable terms. Values are immutable after
/// construction; the coefficient matrix sum(lambda_i w_i w_i*) is cached and
/// is PSD by construction.
class SPVector {
 public:
  static SPVector from_terms(int dim, int p, std::vector<SPTerm> terms);
  /// Single-term convenience: lambda * wedge of `frame`.
  static SPVector decomposable(const MatrixXcd& frame, double lambda = 1.0);
  static SPVector zero(int dim, int p);

  int dim() const { return dim_; }
  int p() const { return p_; }
  const std::vector<SPTerm>& terms() const { return terms_; }
  const PPMatrix& cached() const { return cached_; }
  double trace() const;
  bool is_zero() const;

  /// Plucker norm of term i (0 for vanishing wedges); cached at construction.
  double term_plucker_norm(std::size_t i) const { return term_norms_[i]; }

 private:
  SPVector() = default;
  int dim_ = 0;
  int p_ = 0;
  std::vector<SPTerm> terms_;
  std::vector<double> term_norms_;
  PPMatrix cached_;
};

/// Columns of all frames with positive weight and nonvanishing wedge,
/// stacked into one dim x (p * #terms) matrix.
MatrixXcd stacked_span(const SPVector& t);

/// Applies a linear map of the ambient space to every constituent frame.
/// A mapped wedge that is negligible against the map's wedge gain times the
/// input wedge is an exact kill of the map, not data; such frames are stored
/// as zeros so they drop from ranks and traces.
SPVector map_frames(const SPVector& t, const MatrixXcd& a);

/// dim Span(t): numerical rank of the stacked constituent vectors.
int rank_via_span(const SPVector& t);

/// Independent route: numerical rank of contract_beta(t.cached()).
/// Agrees with rank_via_span on strongly positive inputs.
int rank_via_contraction(const SPVector& t);

/// True iff rank equals p. Undefined (throws) for the zero vector.
bool is_decomposable_by_rank(const SPVector& t);

/// Scales weights so trace becomes 1. Throws on zero trace.
SPVector normalize_trace(const SPVector& t);

/// Weighted average of a family of trace-1 vectors: term lists concatenate
/// with weights scaled by mu. mu must be a probability vector.
SPVector average(const std::vector<SPVector>& family, const std::vector<double>& mu);

struct AverageRankReport {
  int avg_rank = 0;
  double fraction_full_rank = 0.0;  // mu-mass of positively weighted full-rank members
  bool consistent = true;           // avg_rank < dim forces fraction_full_rank == 0
};

/// Atomic form of the averaging principle: if the average has deficient rank,
/// no positively weighted member may have full rank (PSD kernels intersect).
AverageRankReport average_rank_check(const std::vector<SPVector>& family,
                                     const std::vector<double>& mu);

}  // namespace plurirank
