#include "plurirank/genericity.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "plurirank/rng.hpp"

namespace plurirank {

namespace {

double stacked_min_singular(const MatrixXcd& kernel_basis, const MatrixXcd& target_basis) {
  MatrixXcd stacked(kernel_basis.rows(), kernel_basis.cols() + target_basis.cols());
  stacked.leftCols(kernel_basis.cols()) = kernel_basis;
  stacked.rightCols(target_basis.cols()) = target_basis;
  Eigen::JacobiSVD<MatrixXcd> svd(stacked);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

MatrixXcd oblique_projector(const MatrixXcd& kernel_basis, const MatrixXcd& target_basis) {
  const Eigen::Index n = kernel_basis.rows();
  if (target_basis.rows() != n || kernel_basis.cols() + target_basis.cols() != n)
    throw DomainError("oblique_projector: kernel and target must decompose the space");
  MatrixXcd stacked(n, n);
  stacked.leftCols(target_basis.cols()) = target_basis;
  stacked.rightCols(kernel_basis.cols()) = kernel_basis;
  MatrixXcd selector = MatrixXcd::Zero(n, n);
  selector.topLeftCorner(target_basis.cols(), target_basis.cols()).setIdentity();
  return stacked * selector * stacked.inverse();
}

KernelSample haar_kernel(int dim_v, int ell, const MatrixXcd& target_basis, std::uint64_t seed) {
  if (ell < 1 || ell >= dim_v) throw DomainError("haar_kernel: need 1 <= ell < dimV");
  if (target_basis.rows() != dim_v || target_basis.cols() != ell)
    throw DomainError("haar_kernel: target basis must be dimV x ell");
  constexpr int kMaxRetries = 64;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    RngStream rng = RngStream::derived(seed, static_cast<std::uint64_t>(attempt));
    MatrixXcd k_basis = haar_unitary(dim_v, rng).leftCols(dim_v - ell);
    if (stacked_min_singular(k_basis, target_basis) > tol::direct_sum)
      return KernelSample{std::move(k_basis), seed, attempt};
  }
  throw DomainError("haar_kernel: retry budget exhausted (target nearly degenerate)");
}

bool injectivity_trial(const MatrixXcd& w_basis, const KernelSample& kernel,
                       const MatrixXcd& target_basis) {
  const int p = static_cast<int>(w_basis.cols());
  const int ell = static_cast<int>(target_basis.cols());
  if (p > ell) throw DomainError("injectivity_trial: requires p <= ell");
  const MatrixXcd proj = oblique_projector(kernel.basis, target_basis);
  return numerical_rank(proj * w_basis) == p;
}

std::vector<Eigen::Index> greedy_independent_columns(const MatrixXcd& columns, int count) {
  std::vector<Eigen::Index> picked;
  MatrixXcd basis(columns.rows(), 0);
  for (Eigen::Index c = 0; c < columns.cols() && static_cast<int>(picked.size()) < count; ++c) {
    VectorXcd v = columns.col(c);
    const double original = v.norm();
    if (!(original > 0.0)) continue;
    // two-pass modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index b = 0; b < basis.cols(); ++b) v -= basis.col(b) * basis.col(b).dot(v);
    if (v.norm() > tol::greedy * original) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = v / v.norm();
      picked.push_back(c);
    }
  }
  return picked;
}

int projected_rank_trial(const SPVector& t, const KernelSample& kernel,
                         const MatrixXcd& target_basis) {
  const int ell = static_cast<int>(target_basis.cols());
  if (!(t.p() < ell)) throw DomainError("projected_rank_trial: requires p < ell");
  const int rank_before = rank_via_span(t);
  if (rank_before < ell) throw DomainError("projected_rank_trial: requires rank(t) >= ell");

  // Constructive step: ell linearly independent vectors must exist among the
  // constituent frames whenever the rank allows it.
  const std::vector<Eigen::Index> picked = greedy_independent_columns(stacked_span(t), ell);
  if (static_cast<int>(picked.size()) != ell)
    throw DomainError("projected_rank_trial: greedy selection found fewer than ell vectors");

  return rank_via_span(map_frames(t, oblique_projector(kernel.basis, target_basis)));
}

AdversarialCertificate adversarial_kernel(const SPVector& t, int ell,
                                          const MatrixXcd& target_basis, std::uint64_t seed) {
  const int dim_v = t.dim();
  if (ell < 1 || ell >= dim_v) throw DomainError("adversarial_kernel: need 1 <= ell < dimV");
  if (target_basis.rows() != dim_v || target_basis.cols() != ell)
    throw DomainError("adversarial_kernel: target basis must be dimV x ell");
  if (rank_via_span(t) < ell) throw DomainError("adversarial_kernel: requires rank(t) >= ell");

  // First constituent vector with a nonvanishing wedge.
  VectorXcd v;
  MatrixXcd term_frame;
  bool found = false;
  for (std::size_t i = 0; i < t.terms().size() && !found; ++i) {
    if (t.terms()[i].lambda > 0.0 && t.term_plucker_norm(i) > 0.0) {
      term_frame = t.terms()[i].frame;
      v = term_frame.col(0);
      found = true;
    }
  }
  if (!found) throw DomainError("adversarial_kernel: no usable constituent term");
  v /= v.norm();

  constexpr int kMaxRetries = 64;
  const int kernel_dim = dim_v - ell;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    RngStream rng = RngStream::derived(seed, static_cast<std::uint64_t>(attempt));
    MatrixXcd k_basis(dim_v, kernel_dim);
    k_basis.col(0) = v;
    for (int c = 1; c < kernel_dim; ++c) {
      VectorXcd g = rng.gaussian_vector(dim_v);
      for (int pass = 0; pass < 2; ++pass)
        for (int b = 0; b < c; ++b) g -= k_basis.col(b) * k_basis.col(b).dot(g);
      const double n = g.norm();
      if (!(n > 1e-12)) {
        g = rng.gaussian_vector(dim_v);
        for (int b = 0; b < c; ++b) g -= k_basis.col(b) * k_basis.col(b).dot(g);
      }
      k_basis.col(c) = g / g.norm();
    }
    if (stacked_min_singular(k_basis, target_basis) <= tol::direct_sum) continue;

    KernelSample kernel{std::move(k_basis), seed, attempt};
    AdversarialCertificate cert;
    cert.projected_rank =
        rank_via_span(map_frames(t, oblique_projector(kernel.basis, target_basis)));
    if (cert.projected_rank < ell) {
      cert.route = ExceptionalRoute::kRankDrop;
      cert.kernel = std::move(kernel);
      return cert;
    }
    if (!injectivity_trial(term_frame, kernel, target_basis)) {
      cert.route = ExceptionalRoute::kInjectivityFailure;
      cert.kernel = std::move(kernel);
      return cert;
    }
    // The chosen term's first vector lies in the kernel, so one of the two
    // failure routes must fire; reaching this line means the construction
    // went numerically astray, so retry with a fresh completion.
  }
  throw DomainError("adversarial_kernel: retry budget exhausted");
}

TrialReport transversality_montecarlo(const DiscreteCurrent& current, int ell,
                                      std::int64_t trials, std::uint64_t seed,
                                      const std::optional<Projection>& injected,
                                      double tol_center) {
  if (trials < 0) throw DomainError("transversality_montecarlo: negative trial count");
  TrialReport report;
  report.seed = seed;
  report.trials = trials;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    Projection pi = (trial == 0 && injected)
                        ? *injected
                        : random_projection(current.k, ell,
                                            splitmix64(seed ^ static_cast<std::uint64_t>(trial)));
    std::int64_t failing_atoms = 0;
    for (const auto& atom : current.atoms)
      if (!is_transverse(atom.t, pi, atom.x, tol_center)) ++failing_atoms;
    if (failing_atoms > 0) {
      ++report.failures;
      report.failure_indices.push_back(trial);
      report.total_atom_failures += failing_atoms;
    }
  }
  return report;
}

}  // namespace plurirank
