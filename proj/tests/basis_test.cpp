#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specthresh/basis.hpp"
#include "specthresh/error.hpp"
#include "specthresh/quadrature.hpp"
#include "support/oracles.hpp"

using namespace specthresh;
constexpr double kPi = std::numbers::pi;

TEST(EvalBasis1d, ConstantBranch) {
  EXPECT_NEAR(eval_basis_1d(0, 1.0), 1.0 / std::sqrt(2.0 * kPi), 1e-15);
  EXPECT_NEAR(eval_basis_1d(0, 1.0), 0.39894, 1e-5);
}

TEST(EvalBasis1d, OddBranchIsSine) {
  EXPECT_NEAR(eval_basis_1d(1, kPi / 2), 1.0 / std::sqrt(kPi), 1e-15);
  EXPECT_NEAR(eval_basis_1d(1, kPi / 2), 0.56419, 1e-5);
}

TEST(EvalBasis1d, EvenBranchIsCosine) {
  EXPECT_NEAR(eval_basis_1d(2, 0.0), 1.0 / std::sqrt(kPi), 1e-15);
}

TEST(EvalBasis1d, RejectsNegativeIndex) {
  EXPECT_THROW(eval_basis_1d(-1, 0.0), InvalidArgument);
}

TEST(EvalBasis1d, MatchesDirectFormula) {
  for (int k = 0; k < 12; ++k)
    for (double x : {0.0, 0.3, 1.7, 3.1, 5.9})
      EXPECT_NEAR(eval_basis_1d(k, x), ref::trig(k, x), 1e-14) << "k=" << k << " x=" << x;
}

TEST(EvalBasis1d, UnitPeriodIsRescaled) {
  // On [0, 1) the family is sqrt(2) cos(2 pi h x) / sqrt(2) sin(2 pi h x).
  EXPECT_NEAR(eval_basis_1d(0, 0.3, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(eval_basis_1d(1, 0.25, 1.0), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(eval_basis_1d(2, 0.5, 1.0), -std::sqrt(2.0), 1e-14);
}

TEST(EvalBasis, TensorProducts) {
  IndexMap map(BasisSpec{1, 3});
  EXPECT_DOUBLE_EQ(eval_basis(map.from_flat(2), std::vector<double>{0.7}), eval_basis_1d(2, 0.7));

  const BasisIndex origin{0, {0, 0}};
  EXPECT_NEAR(eval_basis(origin, std::vector<double>{1.3, 4.2}), 1.0 / (2.0 * kPi), 1e-15);

  const BasisIndex idx{0, {1, 2}};
  EXPECT_NEAR(eval_basis(idx, std::vector<double>{kPi / 2, 0.0}), 1.0 / kPi, 1e-15);
}

TEST(EvalBasis, DimensionMismatch) {
  const BasisIndex idx{0, {1, 2}};
  EXPECT_THROW(eval_basis(idx, std::vector<double>{0.1}), InvalidArgument);
}

TEST(IndexMap, RowMajorExamples) {
  IndexMap one(BasisSpec{1, 3});
  EXPECT_EQ(one.from_flat(2).per_axis, (std::vector<std::size_t>{2}));

  IndexMap two(BasisSpec{2, 3});
  EXPECT_EQ(two.from_flat(5).per_axis, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(two.to_flat(std::vector<std::size_t>{1, 2}), 5U);

  IndexMap four(BasisSpec{2, 4});
  EXPECT_EQ(four.from_flat(15).per_axis, (std::vector<std::size_t>{3, 3}));
}

TEST(IndexMap, RoundTripIsIdentity) {
  for (std::size_t d : {1U, 2U, 3U}) {
    for (std::size_t m : {1U, 2U, 5U}) {
      IndexMap map(BasisSpec{d, m});
      for (std::size_t flat = 0; flat < map.size(); ++flat)
        ASSERT_EQ(map.to_flat(map.from_flat(flat).per_axis), flat);
    }
  }
}

TEST(IndexMap, RejectsOutOfRange) {
  IndexMap map(BasisSpec{2, 3});
  EXPECT_THROW(map.from_flat(9), InvalidArgument);
  EXPECT_THROW(map.to_flat(std::vector<std::size_t>{3, 0}), InvalidArgument);
}

TEST(TorusBasis, EvalAllMatchesPointwise) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (std::size_t d : {1U, 2U, 3U}) {
    const BasisSpec spec{d, 4};
    const TrigonometricBasis basis(spec);
    const IndexMap map(spec);
    std::vector<double> point(d);
    for (double& c : point) c = angle(rng);
    const auto all = basis.eval_all(point);
    for (std::size_t flat = 0; flat < map.size(); ++flat)
      EXPECT_NEAR(all[flat], eval_basis(map.from_flat(flat), point), 1e-14);
  }
}

TEST(TorusBasis, OrthonormalInOneDimension) {
  const std::size_t m = 16;
  const TrigonometricBasis basis(BasisSpec{1, m});
  const QuadratureGrid grid{512, QuadratureRule::GaussLegendre, kTwoPi};
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const double ip = integrate(
          [&](std::span<const double> x) { return basis.eval_1d(a, x[0]) * basis.eval_1d(b, x[0]); },
          1, grid);
      EXPECT_NEAR(ip, a == b ? 1.0 : 0.0, 1e-10) << a << "," << b;
    }
  }
}

TEST(TorusBasis, OrthonormalOnTwoTorus) {
  const BasisSpec spec{2, 3};
  const TrigonometricBasis basis(spec);
  const QuadratureGrid grid{512, QuadratureRule::GaussLegendre, kTwoPi};
  // Products of 1-d integrals are exercised through the full 2-d rule on a few pairs.
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 0}, {4, 4}, {1, 3}, {5, 7}, {8, 8}};
  for (auto [a, b] : pairs) {
    const double ip = integrate(
        [&](std::span<const double> z) { return basis.eval(a, z) * basis.eval(b, z); }, 2, grid);
    EXPECT_NEAR(ip, a == b ? 1.0 : 0.0, 1e-10) << a << "," << b;
  }
}

TEST(TorusBasis, SupNormBound) {
  const TrigonometricBasis basis(BasisSpec{1, 20});
  EXPECT_EQ(basis.eval_1d(0, 2.5), 1.0 / std::sqrt(kTwoPi));
  for (std::size_t k = 1; k < 20; ++k)
    for (int i = 0; i < 200; ++i)
      EXPECT_LE(std::abs(basis.eval_1d(k, kTwoPi * i / 200.0)), 1.0 / std::sqrt(kPi) + 1e-15);
}

TEST(TorusBasis, Periodicity) {
  for (long k : {1L, 2L, 3L, 4L, 5L, 6L, 7L})
    for (double x : {0.0, 0.4, 2.2, 6.0})
      EXPECT_NEAR(eval_basis_1d(k, x), eval_basis_1d(k, x + kTwoPi), 1e-12) << k;
}

TEST(BasisSpec, Validation) {
  EXPECT_EQ((BasisSpec{2, 5}).size(), 25U);
  EXPECT_THROW((BasisSpec{0, 5}).validate(), InvalidArgument);
  EXPECT_THROW((BasisSpec{1, 0}).validate(), InvalidArgument);
  EXPECT_THROW((BasisSpec{1, 2, -1.0}).validate(), InvalidArgument);
}
