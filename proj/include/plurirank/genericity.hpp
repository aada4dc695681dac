#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plurirank/currents.hpp"
#include "plurirank/positivity.hpp"

namespace plurirank {

// Linear-space genericity experiments: projections pi_{K,L} of V = C^dimV
// onto a fixed ell-dimensional subspace L along a kernel K, with K drawn
// Haar-at-random from the Grassmannian. Kept separate from the projective
// machinery, which works on P^k.

/// Orthonormal basis of a (dimV - ell)-dimensional kernel paired with a
/// fixed target L.
struct KernelSample {
  MatrixXcd basis;  // dimV x (dimV - ell), orthonormal
  std::uint64_t seed = 0;
  int retries = 0;  // re-draws needed to clear the direct-sum check
};

/// Oblique projector onto span(target) along span(kernel).
MatrixXcd oblique_projector(const MatrixXcd& kernel_basis, const MatrixXcd& target_basis);

/// Haar-random kernel transversal to L; re-drawn (bounded, counted) if the
/// stacked bases fall below the direct-sum conditioning threshold.
KernelSample haar_kernel(int dim_v, int ell, const MatrixXcd& target_basis, std::uint64_t seed);

/// True iff pi_{K,L} restricted to the subspace spanned by `w_basis`
/// (dimV x p, p <= ell) is injective: the projected basis keeps rank p.
bool injectivity_trial(const MatrixXcd& w_basis, const KernelSample& kernel,
                       const MatrixXcd& target_basis);

/// Rank of the pushforward of t under pi_{K,L}. Requires p < ell <= rank(t);
/// the result never exceeds ell. Also reproduces the constructive step of
/// picking ell linearly independent vectors among the constituent frames
/// (greedy, in frame order) and throws if that fails.
int projected_rank_trial(const SPVector& t, const KernelSample& kernel,
                         const MatrixXcd& target_basis);

/// Greedy selection (in order, threshold tol::greedy) of up to `count`
/// linearly independent columns; returns the selected column indices.
std::vector<Eigen::Index> greedy_independent_columns(const MatrixXcd& columns, int count);

enum class ExceptionalRoute { kRankDrop, kInjectivityFailure };

struct AdversarialCertificate {
  KernelSample kernel;
  ExceptionalRoute route = ExceptionalRoute::kRankDrop;
  int projected_rank = 0;
};

/// Kernel containing a constituent frame vector of t, completed transversal
/// to L. Certifies membership in the exceptional set: either the projected
/// rank drops below ell or injectivity fails on that term's span.
AdversarialCertificate adversarial_kernel(const SPVector& t, int ell,
                                          const MatrixXcd& target_basis, std::uint64_t seed);

/// Outcome of a Monte Carlo experiment; failure_indices lists the failing
/// trial indices.
struct TrialReport {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  std::vector<std::int64_t> failure_indices;
  std::uint64_t seed = 0;
  std::int64_t total_atom_failures = 0;  // transversality runs: failing (trial, atom) count
};

/// For each trial draws a fresh Haar projection of P^k onto dimension ell
/// and counts atoms whose tangent span fails to be transverse to the fiber.
/// Expected zero failures when every atom rank is at most ell. An optional
/// injected projection is evaluated as trial 0.
TrialReport transversality_montecarlo(const DiscreteCurrent& current, int ell,
                                      std::int64_t trials, std::uint64_t seed,
                                      const std::optional<Projection>& injected = std::nullopt,
                                      double tol_center = tol::center);

}  // namespace plurirank
