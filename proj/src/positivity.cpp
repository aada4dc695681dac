#include "plurirank/positivity.hpp"

#include <cmath>

namespace plurirank {

namespace {

// A wedge counts as vanishing when its Plucker norm is negligible against
// the Hadamard bound (product of column norms) of the frame.
bool wedge_vanishes(double plucker_norm, const MatrixXcd& frame) {
  double hadamard = 1.0;
  for (Eigen::Index c = 0; c < frame.cols(); ++c) hadamard *= frame.col(c).norm();
  return plucker_norm <= 1e-12 * hadamard;
}

}  // namespace

SPVector SPVector::from_terms(int dim, int p, std::vector<SPTerm> terms) {
  if (dim < 1 || dim > kMaxDim || p < 0 || p > dim)
    throw DomainError("SPVector: need 0 <= p <= dim <= 8");
  SPVector v;
  v.dim_ = dim;
  v.p_ = p;
  v.cached_ = PPMatrix::zero(dim, p);
  v.terms_ = std::move(terms);
  v.term_norms_.reserve(v.terms_.size());
  for (const auto& term : v.terms_) {
    if (!(term.lambda >= 0.0) || !std::isfinite(term.lambda))
      throw DomainError("SPVector: term weight must be a finite nonnegative real");
    if (term.frame.rows() != dim || term.frame.cols() != p)
      throw DomainError("SPVector: frame shape mismatch");
    if (!term.frame.allFinite()) throw DomainError("SPVector: frame entries must be finite");
    const PluckerVector w = plucker_from_frame(term.frame);
    v.term_norms_.push_back(w.coeffs.norm());
    if (term.lambda > 0.0) v.cached_.h += term.lambda * (w.coeffs * w.coeffs.adjoint());
  }
  return v;
}

SPVector SPVector::decomposable(const MatrixXcd& frame, double lambda) {
  return from_terms(static_cast<int>(frame.rows()), static_cast<int>(frame.cols()),
                    {SPTerm{lambda, frame}});
}

SPVector SPVector::zero(int dim, int p) { return from_terms(dim, p, {}); }

double SPVector::trace() const { return cached_.h.diagonal().sum().real(); }

bool SPVector::is_zero() const {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].lambda > 0.0 && !wedge_vanishes(term_norms_[i], terms_[i].frame)) return false;
  return true;
}

MatrixXcd stacked_span(const SPVector& t) {
  Eigen::Index cols = 0;
  const auto& terms = t.terms();
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i].lambda > 0.0 && !wedge_vanishes(t.term_plucker_norm(i), terms[i].frame))
      cols += t.p();
  MatrixXcd out(t.dim(), cols);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].lambda > 0.0 && !wedge_vanishes(t.term_plucker_norm(i), terms[i].frame)) {
      out.middleCols(at, t.p()) = terms[i].frame;
      at += t.p();
    }
  }
  return out;
}

int rank_via_span(const SPVector& t) { return numerical_rank(stacked_span(t)); }

SPVector map_frames(const SPVector& t, const MatrixXcd& a) {
  if (a.rows() != t.dim() || a.cols() != t.dim())
    throw DomainError("map_frames: map must act on the ambient space");
  const double gain = std::pow(std::max(1.0, a.norm()), t.p());
  std::vector<SPTerm> mapped;
  mapped.reserve(t.terms().size());
  for (std::size_t i = 0; i < t.terms().size(); ++i) {
    const auto& term = t.terms()[i];
    MatrixXcd frame = a * term.frame;
    const double out_wedge = plucker_from_frame(frame).coeffs.norm();
    if (out_wedge <= 1e-12 * gain * t.term_plucker_norm(i)) frame.setZero();
    mapped.push_back(SPTerm{term.lambda, std::move(frame)});
  }
  return SPVector::from_terms(t.dim(), t.p(), std::move(mapped));
}

int rank_via_contraction(const SPVector& t) {
  if (t.p() < 1) throw DomainError("rank_via_contraction: undefined for p = 0");
  return numerical_rank(contract_beta(t.cached()));
}

bool is_decomposable_by_rank(const SPVector& t) {
  if (t.is_zero()) throw DomainError("is_decomposable_by_rank: zero vector has no rank criterion");
  return rank_via_span(t) == t.p();
}

SPVector normalize_trace(const SPVector& t) {
  const double tr = t.trace();
  if (!(tr > 0.0)) throw DomainError("normalize_trace: trace must be positive");
  std::vector<SPTerm> terms = t.terms();
  for (auto& term : terms) term.lambda /= tr;
  return SPVector::from_terms(t.dim(), t.p(), std::move(terms));
}

SPVector average(const std::vector<SPVector>& family, const std::vector<double>& mu) {
  if (family.empty()) throw DomainError("average: empty family");
  if (mu.size() != family.size()) throw DomainError("average: weight count mismatch");
  const int dim = family.front().dim();
  const int p = family.front().p();
  double mass = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i].dim() != dim || family[i].p() != p)
      throw DomainError("average: family members must share (dim, p)");
    if (std::abs(family[i].trace() - 1.0) > tol::trace_one)
      throw DomainError("average: family members must have trace 1");
    if (!(mu[i] >= 0.0)) throw DomainError("average: weights must be nonnegative");
    mass += mu[i];
  }
  if (std::abs(mass - 1.0) > 1e-12) throw DomainError("average: weights must sum to 1");
  std::vector<SPTerm> terms;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (const auto& term : family[i].terms())
      terms.push_back(SPTerm{mu[i] * term.lambda, term.frame});
  return SPVector::from_terms(dim, p, std::move(terms));
}

AverageRankReport average_rank_check(const std::vector<SPVector>& family,
                                     const std::vector<double>& mu) {
  const SPVector avg = average(family, mu);
  AverageRankReport report;
  report.avg_rank = rank_via_span(avg);
  double full_mass = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (mu[i] > 0.0 && rank_via_span(family[i]) == family[i].dim()) full_mass += mu[i];
  }
  report.fraction_full_rank = full_mass;
  report.consistent = !(report.avg_rank < avg.dim() && report.fraction_full_rank > 0.0);
  return report;
}

}  // namespace plurirank
