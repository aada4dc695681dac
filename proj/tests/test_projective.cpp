#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plurirank/projective.hpp"
#include "plurirank/rng.hpp"

#include "test_support.hpp"

using namespace plurirank;

namespace {

// Random point and a random strongly positive vector tangent at it.
struct PointedVector {
  ProjPoint x;
  SPVector t;
};

PointedVector random_tangent_sp(RngStream& rng, int k, int p, int n_terms) {
  VectorXcd z = rng.gaussian_vector(k + 1);
  ProjPoint x = ProjPoint::from(z);
  std::vector<SPTerm> terms;
  for (int i = 0; i < n_terms; ++i) {
    MatrixXcd f = rng.gaussian_matrix(k + 1, p);
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
      f.col(c) -= x.z() * x.z().dot(f.col(c));
      f.col(c) -= x.z() * x.z().dot(f.col(c));
    }
    terms.push_back(SPTerm{std::abs(rng.gaussian()) + 0.1, std::move(f)});
  }
  return PointedVector{x, SPVector::from_terms(k + 1, p, std::move(terms))};
}

}  // namespace

TEST_CASE("random projections are deterministic with the advertised shapes") {
  const auto a = random_projection(2, 1, 7);
  const auto b = random_projection(2, 1, 7);
  CHECK((a.projector() - b.projector()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.center_basis() - b.center_basis()).cwiseAbs().maxCoeff() == 0.0);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int k = 2 + static_cast<int>(seed % 4);
    const int ell = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(k));
    const auto pi = random_projection(k, ell, seed);  // from_bases validates the direct sum
    CHECK(pi.center_basis().cols() == k - ell);
    CHECK(pi.center_basis().rows() == k + 1);
    CHECK(pi.target_basis().cols() == ell + 1);
    const MatrixXcd& p = pi.projector();
    CHECK((p * p - p).cwiseAbs().maxCoeff() <= tol::projector);
    // range and kernel
    CHECK((p * pi.target_basis() - pi.target_basis()).cwiseAbs().maxCoeff() <= 1e-10);
    if (k > ell) CHECK((p * pi.center_basis()).cwiseAbs().maxCoeff() <= 1e-10);
  }

  CHECK_THROWS_AS(random_projection(3, 0, 1), DomainError);
  CHECK_THROWS_AS(random_projection(3, 4, 1), DomainError);
}

TEST_CASE("projecting points: fixed target, center incidence, range condition") {
  const auto pi = random_projection(3, 1, 11);

  // a point already on the target is fixed up to phase
  RngStream rng(1);
  const ProjPoint on_target = ProjPoint::from(haar_sphere_point(pi.target_basis(), rng));
  CHECK(fs_distance(project_point(pi, on_target), on_target) <= 1e-10);

  // a center point has no image
  const ProjPoint on_center = ProjPoint::from(pi.center_basis().col(0));
  CHECK_THROWS_AS(project_point(pi, on_center), CenterIncidenceError);

  // generic images lie inside the target subspace
  for (int trial = 0; trial < 50; ++trial) {
    const ProjPoint x = ProjPoint::from(rng.gaussian_vector(4));
    const ProjPoint y = project_point(pi, x);
    CHECK((pi.center_basis().adjoint() * y.z()).norm() <=
          1e-8);  // oblique: image in span(target), coefficients along center vanish
    CHECK(std::abs(y.z().norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("identity-scope projection (ell = k)") {
  const auto pi = random_projection(2, 2, 5);
  CHECK(pi.center_basis().cols() == 0);
  CHECK((pi.projector() - MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  RngStream rng(2);
  const ProjPoint x = ProjPoint::from(rng.gaussian_vector(3));
  CHECK(fs_distance(project_point(pi, x), x) <= 1e-12);
  const auto fiber = fiber_tangent(pi, x);
  CHECK(fiber.vectors.cols() == 0);
}

TEST_CASE("differential: kernel, fixed directions, rank") {
  RngStream rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 3);
    const int ell = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k - 1));
    const auto pi = random_projection(k, ell, rng.next_u64());
    const ProjPoint x = ProjPoint::from(rng.gaussian_vector(k + 1));
    const MatrixXcd d = dprojection(pi, x);

    // center directions are annihilated
    if (k > ell) CHECK((d * pi.center_basis()).cwiseAbs().maxCoeff() <= 1e-9);

    // rank of the restriction to the tangent space is ell
    const auto fiber = fiber_tangent(pi, x);
    CHECK(fiber.vectors.cols() == k - ell);
    CHECK((d * fiber.vectors).cwiseAbs().maxCoeff() <= 1e-9);
    for (Eigen::Index c = 0; c < fiber.vectors.cols(); ++c) {
      CHECK(std::abs(fiber.vectors.col(c).dot(x.z())) <= 1e-10);
      CHECK(std::abs(fiber.vectors.col(c).norm() - 1.0) <= 1e-10);
    }
  }

  // dpi rank equals ell on the tangent space
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 3;
    const int ell = 1 + static_cast<int>(rng.next_u64() % 2);
    const auto pi = random_projection(k, ell, rng.next_u64());
    const ProjPoint x = ProjPoint::from(rng.gaussian_vector(k + 1));
    // tangent basis: complete x to a unitary and drop the first column
    MatrixXcd ext = MatrixXcd::Zero(k + 1, k + 1);
    ext.col(0) = x.z();
    Eigen::HouseholderQR<MatrixXcd> qr(ext);
    MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(k + 1, k + 1);
    CHECK(numerical_rank(dprojection(pi, x) * q.rightCols(k)) == ell);
  }

  // a point on the target with a tangent direction inside the target: fixed
  const auto pi = random_projection(3, 2, 21);
  RngStream rng2(4);
  const ProjPoint x = ProjPoint::from(haar_sphere_point(pi.target_basis(), rng2));
  VectorXcd w = pi.target_basis() * rng2.gaussian_vector(3);
  w -= x.z() * x.z().dot(w);
  w -= x.z() * x.z().dot(w);
  CHECK((dprojection(pi, x) * w - w).norm() <= 1e-9 * std::max(1.0, w.norm()));
}

TEST_CASE("fiber of a projection of the projective plane is a line") {
  const auto pi = random_projection(2, 1, 13);
  RngStream rng(5);
  const ProjPoint x = ProjPoint::from(rng.gaussian_vector(3));
  CHECK(fiber_tangent(pi, x).vectors.cols() == 1);
}

TEST_CASE("pushforward of tangent vectors") {
  RngStream rng(6);

  // everything inside the fiber dies
  {
    const auto pi = random_projection(3, 1, 31);  // fiber dimension 2
    const ProjPoint x = ProjPoint::from(rng.gaussian_vector(4));
    const auto fiber = fiber_tangent(pi, x);
    MatrixXcd frame = fiber.vectors.leftCols(2);
    const auto t = normalize_trace(SPVector::decomposable(frame));
    const auto pushed = pushforward_sp(pi, x, t);
    CHECK(pushed.trace() <= 1e-12);
    CHECK(pushed.is_zero());
    CHECK_FALSE(is_transverse(t, pi, x));
  }

  // a generic decomposable stays decomposable of rank p
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 3, p = 1 + static_cast<int>(rng.next_u64() % 2);
    const int ell = 2;
    const auto pi = random_projection(k, ell, rng.next_u64());
    const auto pv = random_tangent_sp(rng, k, p, 1);
    const auto pushed = pushforward_sp(pi, pv.x, pv.t);
    CHECK(rank_via_span(pushed) == p);
    CHECK(is_transverse(pv.t, pi, pv.x));
  }

  // transversality fails only on fiber-touching spans; orthogonal spans pass
  {
    const auto pi = random_projection(3, 2, 17);
    const ProjPoint x = ProjPoint::from(rng.gaussian_vector(4));
    const auto fiber = fiber_tangent(pi, x);
    // build a tangent frame orthogonal to the fiber direction
    MatrixXcd f = rng.gaussian_matrix(4, 2);
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
      for (int pass = 0; pass < 2; ++pass) {
        f.col(c) -= x.z() * x.z().dot(f.col(c));
        f.col(c) -= fiber.vectors * (fiber.vectors.adjoint() * f.col(c)).eval();
      }
    }
    const auto t = normalize_trace(SPVector::decomposable(f));
    CHECK(is_transverse(t, pi, x));
  }
}

TEST_CASE("pushforward pairs by adjunction with pulled-back forms") {
  RngStream rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 3);
    const int p = 1 + static_cast<int>(rng.next_u64() % 2);
    if (p > k) continue;
    const int ell = std::max(1, k - 1 - static_cast<int>(rng.next_u64() % 2));
    const auto pi = random_projection(k, ell, rng.next_u64());
    const auto pv = random_tangent_sp(rng, k, p, 2);
    const auto pushed = pushforward_sp(pi, pv.x, pv.t);

    MatrixXcd g = rng.gaussian_matrix(pushed.cached().h.rows(), pushed.cached().h.cols());
    const auto phi = PPForm::from_matrix(k + 1, p, ((g + g.adjoint()) / 2.0).eval());
    const double lhs = pair(pushed.cached(), phi);
    const double rhs = pair(pv.t.cached(), pullback_form(pi, pv.x, phi));
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("pushforward is linear and cannot raise rank") {
  RngStream rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 3, p = 1 + static_cast<int>(rng.next_u64() % 2);
    const int ell = 1 + static_cast<int>(rng.next_u64() % 2);
    const auto pi = random_projection(k, ell, rng.next_u64());
    const auto pv = random_tangent_sp(rng, k, p, 3);
    const auto pushed = pushforward_sp(pi, pv.x, pv.t);
    CHECK(rank_via_span(pushed) <= std::min(rank_via_span(pv.t), ell));

    const double s = 0.25 + rng.uniform();
    std::vector<SPTerm> scaled_terms = pv.t.terms();
    for (auto& term : scaled_terms) term.lambda *= s;
    const auto scaled = SPVector::from_terms(k + 1, p, std::move(scaled_terms));
    const auto pushed_scaled = pushforward_sp(pi, pv.x, scaled);
    CHECK((pushed_scaled.cached().h - s * pushed.cached().h).cwiseAbs().maxCoeff() <=
          1e-10 * std::max(1.0, pushed.cached().h.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("chordal distance: phases, orthogonality, triangles, tiny separations") {
  RngStream rng(9);
  VectorXcd z = rng.gaussian_vector(3);
  const ProjPoint x = ProjPoint::from(z);
  const ProjPoint same_phase = ProjPoint::from((Complex(0.6, 0.8) * z).eval());
  CHECK(fs_distance(x, same_phase) <= 1e-12);

  const ProjPoint e0 = ProjPoint::from_unit(VectorXcd::Unit(3, 0));
  const ProjPoint e1 = ProjPoint::from_unit(VectorXcd::Unit(3, 1));
  CHECK(fs_distance(e0, e1) == doctest::Approx(1.0));

  for (int trial = 0; trial < 1000; ++trial) {
    const ProjPoint a = ProjPoint::from(rng.gaussian_vector(4));
    const ProjPoint b = ProjPoint::from(rng.gaussian_vector(4));
    const ProjPoint c = ProjPoint::from(rng.gaussian_vector(4));
    CHECK(fs_distance(a, b) <= fs_distance(a, c) + fs_distance(c, b) + 1e-12);
  }

  // resolution well below the sqrt(eps) floor of the naive formula
  VectorXcd near = z / z.norm();
  near(1) += 1e-10;
  const ProjPoint y = ProjPoint::from(near);
  const double d = fs_distance(ProjPoint::from(z), y);
  CHECK(d <= 2e-10);
  CHECK(d >= 1e-11);
}

TEST_CASE("projections contract distances away from the center") {
  RngStream rng(10);
  const auto pi = random_projection(3, 1, 99);
  int checked = 0;
  while (checked < 10000) {
    const ProjPoint a = ProjPoint::from(rng.gaussian_vector(4));
    const ProjPoint b = ProjPoint::from(rng.gaussian_vector(4));
    if ((pi.projector() * a.z()).norm() < 0.1 || (pi.projector() * b.z()).norm() < 0.1) continue;
    ++checked;
    CHECK(fs_distance(project_point(pi, a), project_point(pi, b)) <=
          (100.0 / 0.01) * fs_distance(a, b));
  }
}

TEST_CASE("tangency preconditions are enforced") {
  RngStream rng(12);
  const auto pi = random_projection(3, 2, 1);
  const ProjPoint x = ProjPoint::from(rng.gaussian_vector(4));
  const auto t = SPVector::decomposable(rng.gaussian_matrix(4, 2));  // not tangent at x
  CHECK_THROWS_AS(pushforward_sp(pi, x, t), DomainError);

  const ProjPoint center_point = ProjPoint::from(pi.center_basis().col(0));
  CHECK_THROWS_AS(dprojection(pi, center_point), CenterIncidenceError);
  CHECK_THROWS_AS(fiber_tangent(pi, center_point), CenterIncidenceError);
}
