#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plurirank/exterior.hpp"
#include "plurirank/rng.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace plurirank;

namespace {

MatrixXcd unit_frame(int k, std::vector<int> cols) {
  MatrixXcd f = MatrixXcd::Zero(k, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) f(cols[c], static_cast<Eigen::Index>(c)) = 1.0;
  return f;
}

}  // namespace

TEST_CASE("multi-index enumeration is lexicographic and complete") {
  const auto mi32 = enumerate_multiindices(3, 2);
  REQUIRE(mi32.size() == 3);
  CHECK(mi32[0].entries() == std::vector<int>({0, 1}));
  CHECK(mi32[1].entries() == std::vector<int>({0, 2}));
  CHECK(mi32[2].entries() == std::vector<int>({1, 2}));

  const auto empty_wedge = enumerate_multiindices(4, 0);
  REQUIRE(empty_wedge.size() == 1);
  CHECK(empty_wedge[0].size() == 0);

  const auto mi53 = enumerate_multiindices(5, 3);
  REQUIRE(mi53.size() == 10);
  CHECK(mi53.front().entries() == std::vector<int>({0, 1, 2}));
  CHECK(mi53.back().entries() == std::vector<int>({2, 3, 4}));

  CHECK_THROWS_AS(enumerate_multiindices(3, 4), DomainError);
  CHECK_THROWS_AS(enumerate_multiindices(-1, 0), DomainError);
  CHECK_THROWS_AS(enumerate_multiindices(3, -2), DomainError);

  // positions invert the enumeration
  for (std::size_t i = 0; i < mi53.size(); ++i) CHECK(multiindex_position(mi53[i], 5) == i);
}

TEST_CASE("plucker coordinates of elementary frames") {
  const auto w = plucker_from_frame(unit_frame(3, {0, 1}));
  CHECK(w.coeffs(0) == Complex(1, 0));
  CHECK(w.coeffs(1) == Complex(0, 0));
  CHECK(w.coeffs(2) == Complex(0, 0));

  const auto degenerate = plucker_from_frame(unit_frame(3, {0, 0}));
  CHECK(degenerate.coeffs.norm() == 0.0);

  MatrixXcd f(3, 2);  // (e1, e2 + e3)
  f.setZero();
  f(0, 0) = 1.0;
  f(1, 1) = 1.0;
  f(2, 1) = 1.0;
  const auto mixed = plucker_from_frame(f);
  CHECK(mixed.coeffs(0) == Complex(1, 0));
  CHECK(mixed.coeffs(1) == Complex(1, 0));
  CHECK(mixed.coeffs(2) == Complex(0, 0));

  MatrixXcd bad(3, 4);
  CHECK_THROWS_AS(plucker_from_frame(bad), DomainError);
}

TEST_CASE("plucker is alternating and matches the permanent-free oracle") {
  RngStream rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto shape = test_support::random_shape(rng, 6, 3, 1);
    MatrixXcd f = rng.gaussian_matrix(shape.dim, shape.p);
    const auto w = plucker_from_frame(f);
    CHECK((w.coeffs - oracles::plucker_oracle(f)).cwiseAbs().maxCoeff() <=
          1e-10 * std::max(1.0, w.coeffs.norm()));
    if (shape.p >= 2) {
      MatrixXcd swapped = f;
      swapped.col(0).swap(swapped.col(1));
      const auto ws = plucker_from_frame(swapped);
      CHECK((ws.coeffs + w.coeffs).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + w.coeffs.norm()));
    }
  }
}

TEST_CASE("rank-one coefficient matrices from plucker vectors") {
  PluckerVector w{3, 2, VectorXcd::Zero(3)};
  w.coeffs(0) = 1.0;
  const auto h = pp_from_plucker(w);
  CHECK(h.h(0, 0) == Complex(1, 0));
  CHECK(h.h.cwiseAbs().sum() == 1.0);
  CHECK(trace(h) == doctest::Approx(1.0));

  w.coeffs(1) = 1.0;
  const auto h2 = pp_from_plucker(w);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(h2.h(i, j) == Complex(1, 0));
  CHECK(h2.h.row(2).cwiseAbs().sum() == 0.0);
  CHECK(numerical_rank(h2.h) == 1);

  PluckerVector zero{3, 2, VectorXcd::Zero(3)};
  CHECK(pp_from_plucker(zero).h.cwiseAbs().sum() == 0.0);
}

TEST_CASE("contraction against the Hermitian form: base cases") {
  RngStream rng(77);
  // p = 1: contraction is the identity on coefficient matrices
  MatrixXcd g = rng.gaussian_matrix(4, 4);
  const auto h1 = PPMatrix::from_matrix(4, 1, ((g + g.adjoint()) / 2.0).eval());
  CHECK((contract_beta(h1) - h1.h).cwiseAbs().maxCoeff() <= 1e-14);

  // decomposable (e1, e2) in C^3
  const auto t = pp_from_plucker(plucker_from_frame(unit_frame(3, {0, 1})));
  const MatrixXcd m = contract_beta(t);
  CHECK(m(2, 2) == Complex(0, 0));
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  CHECK(numerical_rank(m) == 2);
  const MatrixXcd expected_span = unit_frame(3, {0, 1});
  CHECK(subspace_distance(range_basis(m), expected_span) <= 1e-9);

  // sum of terms from frames (e1,e2) and (e1,e3): full range
  PPMatrix sum = t;
  sum.h += pp_from_plucker(plucker_from_frame(unit_frame(3, {0, 2}))).h;
  CHECK(numerical_rank(contract_beta(sum)) == 3);

  CHECK_THROWS_AS(contract_beta(PPMatrix::zero(3, 0)), DomainError);
}

TEST_CASE("contraction agrees with the wedge-expansion oracle up to (p-1)!") {
  // The beta-power oracle itself must produce m! times the identity.
  for (int k = 2; k <= 5; ++k) {
    for (int m = 0; m + 1 <= k; ++m) {
      const MatrixXcd bp = oracles::beta_power(k, m);
      double fact = 1.0;
      for (int i = 2; i <= m; ++i) fact *= i;
      const auto n = static_cast<Eigen::Index>(binomial(k, m));
      CHECK((bp - fact * MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  RngStream rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    const auto shape = test_support::random_shape(rng, 5, 3, 3);
    const auto t = test_support::random_sp(rng, shape.dim, shape.p, shape.terms);
    const MatrixXcd lib = contract_beta(t.cached());
    const MatrixXcd oracle = oracles::contract_beta_oracle(t.cached());
    double fact = 1.0;
    for (int i = 2; i <= shape.p - 1; ++i) fact *= i;
    const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
    CHECK((fact * lib - oracle).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("contraction range equals the constituent span") {
  RngStream rng(4242);
  for (int trial = 0; trial < 500; ++trial) {
    const auto shape = test_support::random_shape(rng, 6, 3, 5);
    const auto t = test_support::random_sp(rng, shape.dim, shape.p, shape.terms);
    const MatrixXcd m = contract_beta(t.cached());
    const MatrixXcd span = stacked_span(t);
    CHECK(subspace_distance(range_basis(m), range_basis(span)) <= 1e-7);
  }
}

TEST_CASE("pairing: trace pairing, linearity, symmetry, reality") {
  RngStream rng(5);
  PPMatrix t = PPMatrix::zero(3, 1);
  t.h(0, 0) = 1.0;
  CHECK(pair(t, PPForm::identity(3, 1)) == doctest::Approx(1.0));
  CHECK(pair(t, PPForm::zero(3, 1)) == 0.0);

  for (int trial = 0; trial < 50; ++trial) {
    MatrixXcd a = rng.gaussian_matrix(3, 3);
    MatrixXcd b = rng.gaussian_matrix(3, 3);
    const auto ha = PPMatrix::from_matrix(3, 1, ((a + a.adjoint()) / 2.0).eval());
    const auto hb = PPForm::from_matrix(3, 1, ((b + b.adjoint()) / 2.0).eval());
    // real up to roundoff, and symmetric between the two slots
    CHECK(std::abs(oracles::pair_oracle_complex(ha, hb).imag()) <= 1e-12);
    const auto swapped_t = PPMatrix::from_matrix(3, 1, hb.h);
    const auto swapped_phi = PPForm::from_matrix(3, 1, ha.h);
    CHECK(pair(ha, hb) == doctest::Approx(pair(swapped_t, swapped_phi)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(pair(PPMatrix::zero(3, 1), PPForm::zero(3, 2)), DomainError);
}

TEST_CASE("pairing matches the basis-monomial expansion for rank-one vectors") {
  RngStream rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto shape = test_support::random_shape(rng, 5, 3, 1);
    const auto w = plucker_from_frame(rng.gaussian_matrix(shape.dim, shape.p));
    const auto t = pp_from_plucker(w);
    MatrixXcd g = rng.gaussian_matrix(t.h.rows(), t.h.cols());
    const auto phi = PPForm::from_matrix(shape.dim, shape.p, ((g + g.adjoint()) / 2.0).eval());
    const double direct = pair(t, phi);
    const double brute = oracles::pair_oracle(t, phi);
    CHECK(std::abs(direct - brute) <= 1e-10 * std::max(1.0, std::abs(brute)));
  }
}

TEST_CASE("trace values") {
  PPMatrix d = PPMatrix::zero(3, 1);
  d.h(0, 0) = 1.0;
  CHECK(trace(d) == 1.0);
  CHECK(trace(PPMatrix::zero(3, 1)) == 0.0);

  MatrixXcd f = MatrixXcd::Zero(3, 2);  // (e1, 2 e2)
  f(0, 0) = 1.0;
  f(1, 1) = 2.0;
  CHECK(trace(pp_from_plucker(plucker_from_frame(f))) == doctest::Approx(4.0));
}

TEST_CASE("hermitian closure of the exterior operations") {
  RngStream rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto shape = test_support::random_shape(rng, 5, 3, 3);
    const auto t = test_support::random_sp(rng, shape.dim, shape.p, shape.terms);
    const MatrixXcd h = t.cached().h;
    CHECK((h - h.adjoint().eval()).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()));
    const MatrixXcd m = contract_beta(t.cached());
    CHECK((m - m.adjoint().eval()).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("compound matrices intertwine frames and plucker coordinates") {
  RngStream rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto shape = test_support::random_shape(rng, 5, 3, 1);
    MatrixXcd a = rng.gaussian_matrix(shape.dim, shape.dim);
    MatrixXcd f = rng.gaussian_matrix(shape.dim, shape.p);
    const VectorXcd lhs = plucker_from_frame((a * f).eval()).coeffs;
    const VectorXcd rhs = compound_matrix(a, shape.p) * plucker_from_frame(f).coeffs;
    CHECK((lhs - rhs).norm() <= 1e-9 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("coefficient matrices reject non-hermitian input") {
  MatrixXcd bad = MatrixXcd::Zero(3, 3);
  bad(0, 1) = Complex(1, 0);
  bad(1, 0) = Complex(2, 0);
  CHECK_THROWS_AS(PPMatrix::from_matrix(3, 1, bad), DomainError);
  CHECK_THROWS_AS(PPForm::from_matrix(3, 1, bad), DomainError);
  CHECK_THROWS_AS(PPMatrix::from_matrix(3, 1, MatrixXcd::Zero(2, 2)), DomainError);
}
