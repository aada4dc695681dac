#pragma once

#include <cstdint>

#include "plurirank/positivity.hpp"
#include "plurirank/types.hpp"

namespace plurirank {

/// Point of P^k as a unit representative in C^{k+1}, taken modulo phase.
class ProjPoint {
 public:
  /// Normalizes; throws on (near-)zero input.
  static ProjPoint from(const VectorXcd& z);
  /// Accepts z as stored, validating |z| = 1 within tol::unit_norm. Used by
  /// dataset loading so round-trips stay bit-exact.
  static ProjPoint from_unit(VectorXcd z);

  const VectorXcd& z() const { return z_; }
  int ambient_dim() const { return static_cast<int>(z_.size()); }

 private:
  explicit ProjPoint(VectorXcd z) : z_(std::move(z)) {}
  VectorXcd z_;
};

/// Chordal Fubini-Study distance sqrt(1 - |<x,y>|^2) = sin of the angle
/// between the lines. Near-collinear pairs are evaluated through the wedge
/// norm, which resolves distances down to machine precision instead of the
/// sqrt(eps) floor of the naive formula.
double fs_distance(const ProjPoint& x, const ProjPoint& y);

/// Tangent vectors at `base`, modeled as ambient vectors orthogonal to the
/// representative.
struct TangentFrame {
  ProjPoint base;
  MatrixXcd vectors;  // (k+1) x m, each column orthogonal to base.z()
};

/// Linear projection of P^k onto a target L of projective dimension ell,
/// with center subspace of linear dimension k - ell. ell = k is allowed and
/// yields the trivial projection (empty center, P = identity).
class Projection {
 public:
  /// Oblique projector onto span(target) along span(center). Bases must be
  /// orthonormal with trivially intersecting spans.
  static Projection from_bases(int k, int ell, MatrixXcd center_basis, MatrixXcd target_basis);

  int k() const { return k_; }
  int ell() const { return ell_; }
  const MatrixXcd& center_basis() const { return center_basis_; }
  const MatrixXcd& target_basis() const { return target_basis_; }
  const MatrixXcd& projector() const { return projector_; }

 private:
  Projection() = default;
  int k_ = 0;
  int ell_ = 0;
  MatrixXcd center_basis_;
  MatrixXcd target_basis_;
  MatrixXcd projector_;
};

/// Haar-random projection: center and target spans are complementary column
/// blocks of a Haar unitary of C^{k+1}. Deterministic per seed.
Projection random_projection(int k, int ell, std::uint64_t seed);

/// Image point P x / |P x|. Throws CenterIncidenceError when |P x| <= tol_center.
ProjPoint project_point(const Projection& pi, const ProjPoint& x, double tol_center = tol::center);

/// Differential at x as an ambient matrix: w -> component of P w orthogonal
/// to the image representative. Restricted to the tangent space at x it is
/// complex-linear onto the tangent space at pi(x) with kernel of dimension
/// exactly k - ell.
MatrixXcd dprojection(const Projection& pi, const ProjPoint& x, double tol_center = tol::center);

/// Orthonormal basis of the kernel of the differential inside the tangent
/// space at x; dimension k - ell.
TangentFrame fiber_tangent(const Projection& pi, const ProjPoint& x,
                           double tol_center = tol::center);

/// Pushforward of a strongly positive vector on the tangent space at x:
/// applies the differential to every frame column. Terms whose pushed wedge
/// vanishes are kept with zero Plucker norm and drop from the rank.
SPVector pushforward_sp(const Projection& pi, const ProjPoint& x, const SPVector& t,
                        double tol_center = tol::center);

/// Span(t) meets the fiber tangent space trivially; tested as
/// rank([span basis | fiber basis]) == rank(span) + (k - ell).
bool is_transverse(const SPVector& t, const Projection& pi, const ProjPoint& x,
                   double tol_center = tol::center);

/// Adjoint of the pushforward on coefficient matrices: phi -> G* phi G with
/// G the p-th compound of the differential, so that
/// pair(pushforward_sp(t), phi) == pair(t, pullback_form(phi)).
PPForm pullback_form(const Projection& pi, const ProjPoint& x, const PPForm& phi,
                     double tol_center = tol::center);

}  // namespace plurirank
