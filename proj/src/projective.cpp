#include "plurirank/projective.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "plurirank/rng.hpp"

namespace plurirank {

ProjPoint ProjPoint::from(const VectorXcd& z) {
  const double n = z.norm();
  if (!(n > 1e-300)) throw DomainError("ProjPoint: zero representative");
  if (!z.allFinite()) throw DomainError("ProjPoint: non-finite representative");
  return ProjPoint(z / n);
}

ProjPoint ProjPoint::from_unit(VectorXcd z) {
  if (!z.allFinite()) throw DomainError("ProjPoint: non-finite representative");
  if (std::abs(z.norm() - 1.0) > tol::unit_norm)
    throw DomainError("ProjPoint: representative is not unit length");
  return ProjPoint(std::move(z));
}

double fs_distance(const ProjPoint& x, const ProjPoint& y) {
  if (x.ambient_dim() != y.ambient_dim()) throw DomainError("fs_distance: dimension mismatch");
  const Complex ip = x.z().dot(y.z());
  const double s2 = 1.0 - std::norm(ip);
  if (s2 > 1e-12) return std::sqrt(s2);
  // Nearly collinear: |x ^ y| = sin(angle) without cancellation.
  const auto& a = x.z();
  const auto& b = y.z();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j) acc += std::norm(a(i) * b(j) - a(j) * b(i));
  return std::sqrt(acc);
}

Projection Projection::from_bases(int k, int ell, MatrixXcd center_basis, MatrixXcd target_basis) {
  if (k < 1 || k > kMaxDim - 1) throw DomainError("Projection: k out of supported range");
  if (ell < 1 || ell > k) throw DomainError("Projection: need 1 <= ell <= k");
  const int n = k + 1;
  if (center_basis.rows() != n || center_basis.cols() != k - ell)
    throw DomainError("Projection: center basis must be (k+1) x (k-ell)");
  if (target_basis.rows() != n || target_basis.cols() != ell + 1)
    throw DomainError("Projection: target basis must be (k+1) x (ell+1)");

  MatrixXcd stacked(n, n);
  stacked.leftCols(ell + 1) = target_basis;
  stacked.rightCols(k - ell) = center_basis;
  Eigen::JacobiSVD<MatrixXcd> svd(stacked);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= tol::direct_sum)
    throw DomainError("Projection: center and target do not span a direct sum");

  MatrixXcd selector = MatrixXcd::Zero(n, n);
  selector.topLeftCorner(ell + 1, ell + 1).setIdentity();
  MatrixXcd projector = stacked * selector * stacked.inverse();
  const double defect = (projector * projector - projector).cwiseAbs().maxCoeff();
  if (defect > tol::projector) throw DomainError("Projection: projector is not idempotent");

  Projection pi;
  pi.k_ = k;
  pi.ell_ = ell;
  pi.center_basis_ = std::move(center_basis);
  pi.target_basis_ = std::move(target_basis);
  pi.projector_ = std::move(projector);
  return pi;
}

Projection random_projection(int k, int ell, std::uint64_t seed) {
  if (k < 1 || k > kMaxDim - 1) throw DomainError("random_projection: k out of supported range");
  if (ell < 1 || ell > k) throw DomainError("random_projection: need 1 <= ell <= k");
  RngStream rng(seed);
  const MatrixXcd u = haar_unitary(k + 1, rng);
  MatrixXcd center = u.leftCols(k - ell);
  MatrixXcd target = u.rightCols(ell + 1);
  return Projection::from_bases(k, ell, std::move(center), std::move(target));
}

namespace {

VectorXcd image_representative(const Projection& pi, const ProjPoint& x, double tol_center) {
  if (x.ambient_dim() != pi.k() + 1) throw DomainError("projection: point dimension mismatch");
  VectorXcd y = pi.projector() * x.z();
  const double n = y.norm();
  if (n <= tol_center)
    throw CenterIncidenceError("point lies on or numerically near the projection center");
  return y / n;
}

}  // namespace

ProjPoint project_point(const Projection& pi, const ProjPoint& x, double tol_center) {
  return ProjPoint::from_unit(image_representative(pi, x, tol_center));
}

MatrixXcd dprojection(const Projection& pi, const ProjPoint& x, double tol_center) {
  const VectorXcd y = image_representative(pi, x, tol_center);
  const int n = pi.k() + 1;
  return (MatrixXcd::Identity(n, n) - y * y.adjoint()) * pi.projector();
}

TangentFrame fiber_tangent(const Projection& pi, const ProjPoint& x, double tol_center) {
  const MatrixXcd d = dprojection(pi, x, tol_center);
  const int n = pi.k() + 1;
  const int fiber_dim = pi.k() - pi.ell();
  // Orthonormal basis of the tangent space at x: columns 2..n of a unitary
  // completion of the representative.
  MatrixXcd ext = MatrixXcd::Zero(n, n);
  ext.col(0) = x.z();
  Eigen::HouseholderQR<MatrixXcd> qr(ext);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, n);
  // q.col(0) is the representative up to phase, so the remaining columns are
  // orthogonal to it regardless of that phase.
  MatrixXcd tangent_basis = q.rightCols(n - 1);

  // Kernel of d restricted to the tangent space: smallest right singular
  // vectors of d * tangent_basis.
  Eigen::JacobiSVD<MatrixXcd> svd(d * tangent_basis, Eigen::ComputeFullV);
  MatrixXcd kernel_coords = svd.matrixV().rightCols(fiber_dim);
  TangentFrame frame{x, tangent_basis * kernel_coords};
  return frame;
}

SPVector pushforward_sp(const Projection& pi, const ProjPoint& x, const SPVector& t,
                        double tol_center) {
  if (t.dim() != pi.k() + 1) throw DomainError("pushforward_sp: dimension mismatch");
  for (const auto& term : t.terms())
    for (Eigen::Index c = 0; c < term.frame.cols(); ++c)
      if (std::abs(term.frame.col(c).dot(x.z())) >
          tol::ortho * std::max(1.0, term.frame.col(c).norm()))
        throw DomainError("pushforward_sp: frames must be tangent at x");
  return map_frames(t, dprojection(pi, x, tol_center));
}

bool is_transverse(const SPVector& t, const Projection& pi, const ProjPoint& x,
                   double tol_center) {
  const TangentFrame fiber = fiber_tangent(pi, x, tol_center);
  const MatrixXcd span = stacked_span(t);
  const int span_rank = numerical_rank(span);
  const int fiber_dim = static_cast<int>(fiber.vectors.cols());
  if (span_rank == 0 || fiber_dim == 0) return true;
  MatrixXcd joint(span.rows(), span.cols() + fiber.vectors.cols());
  joint.leftCols(span.cols()) = span;
  joint.rightCols(fiber.vectors.cols()) = fiber.vectors;
  return numerical_rank(joint) == span_rank + fiber_dim;
}

PPForm pullback_form(const Projection& pi, const ProjPoint& x, const PPForm& phi,
                     double tol_center) {
  if (phi.k != pi.k() + 1) throw DomainError("pullback_form: dimension mismatch");
  const MatrixXcd g = compound_matrix(dprojection(pi, x, tol_center), phi.p);
  return PPForm{phi.k, phi.p, (g.adjoint() * phi.h * g).eval()};
}

}  // namespace plurirank
