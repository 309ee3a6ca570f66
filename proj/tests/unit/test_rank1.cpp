#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "u22/rank1.hpp"

namespace u22::rank1 {
namespace {

// Cin(x) = integral_0^x (1 - cos u) / u du, by its power series.
double cin_series(double x) {
  double sum = 0.0;
  double power = 1.0;  // x^(2k) / (2k)!
  for (int k = 1; k < 40; ++k) {
    power *= x * x / ((2.0 * k - 1) * (2.0 * k));
    sum += (k % 2 ? 1.0 : -1.0) * power / (2.0 * k);
  }
  return sum;
}

// Midpoint rule for 2 (1 - cos u) / u on (0, x].
double cin_brute(double x) {
  const int n = 400'000;
  const double h = x / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) * h;
    sum += (1 - std::cos(u)) / u;
  }
  return sum * h;
}

TEST(Aff, CompositionMatchesMaps) {
  const AffElement g1{0.3, -1.2};
  const AffElement g2{-0.7, 2.5};
  const AffElement g = compose(g1, g2);
  for (double x : {-3.0, 0.0, 1.5}) EXPECT_NEAR(g(x), g1(g2(x)), 1e-14);
  EXPECT_EQ(compose(AffElement::identity(), g1).a, g1.a);
  EXPECT_EQ(compose(g1, AffElement::identity()).beta, g1.beta);
}

TEST(Aff, CompositionIsAssociative) {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> n;
  for (int i = 0; i < 200; ++i) {
    const AffElement a{n(rng), n(rng)};
    const AffElement b{n(rng), n(rng)};
    const AffElement c{n(rng), n(rng)};
    const AffElement l = compose(compose(a, b), c);
    const AffElement r = compose(a, compose(b, c));
    EXPECT_NEAR(l.beta, r.beta, 1e-14);
    EXPECT_NEAR(l.a, r.a, 1e-12 * (1 + std::abs(l.a)));
  }
}

TEST(UnitaryU, IsAHomomorphism) {
  std::mt19937_64 rng(102);
  std::normal_distribution<double> n;
  const LineFunction f = gaussian();
  for (int i = 0; i < 100; ++i) {
    const AffElement g1{n(rng), n(rng)};
    const AffElement g2{n(rng), n(rng)};
    const LineFunction lhs = apply_U(compose(g1, g2), f);
    const LineFunction rhs = apply_U(g1, apply_U(g2, f));
    for (double z = -4.0; z <= 2.0; z += 0.25) EXPECT_LT(std::abs(lhs(z) - rhs(z)), 1e-12);
  }
}

TEST(UnitaryU, PreservesModulus) {
  const LineFunction f = gaussian();
  const LineFunction uf = apply_U({0.5, 2.0}, f);
  for (double z = -3.0; z <= 3.0; z += 0.5) EXPECT_NEAR(std::abs(uf(z)), std::abs(f(z + 0.5)), 1e-15);
}

TEST(Functions, IndicatorAndGaussian) {
  const LineFunction ind = left_indicator(1.0);
  EXPECT_EQ(ind(0.5), Complex(1.0));
  EXPECT_EQ(ind(1.0), Complex(0.0));
  EXPECT_EQ(ind(2.0), Complex(0.0));
  EXPECT_NEAR(gaussian()(1.0).real(), std::exp(-1.0), 1e-16);
}

TEST(CinOracles, AgreeWithEachOther) {
  for (double x : {0.5, 1.0, 3.0}) EXPECT_NEAR(2 * cin_series(x), 2 * cin_brute(x), 1e-9);
}

TEST(Witness, LeftIndicatorSatisfiesAllConditions) {
  const AlmostInvariantReport r = almost_invariant_check(left_indicator(0.0), 0.0, 1.0, 1.0);
  EXPECT_TRUE(r.all_hold());
  EXPECT_EQ(r.support.verdict, ConditionVerdict::holds);
  EXPECT_EQ(r.support.value, 0.0);
  EXPECT_EQ(r.divergence.verdict, ConditionVerdict::holds);
  ASSERT_EQ(r.ladder_cutoffs.size(), r.ladder_values.size());
  for (std::size_t j = 0; j < r.ladder_cutoffs.size(); ++j) {
    EXPECT_NEAR(r.ladder_values[j], r.ladder_cutoffs[j], 1e-10 * r.ladder_cutoffs[j]);
  }
  EXPECT_EQ(r.character.verdict, ConditionVerdict::holds);
  EXPECT_NEAR(r.character.value, 2 * cin_series(1.0), 1e-10);
  EXPECT_NEAR(r.character.value, 2 * cin_brute(1.0), 1e-9);
  EXPECT_EQ(r.translation.verdict, ConditionVerdict::holds);
  EXPECT_NEAR(r.translation.value, 1.0, 1e-10);
}

TEST(Witness, OtherParameters) {
  const AlmostInvariantReport r = almost_invariant_check(left_indicator(0.5), 0.5, -2.5, 3.0);
  EXPECT_TRUE(r.all_hold());
  // Substituting u = e^z: integral of 4 sin^2(b u / 2) / u over (0, e^t].
  EXPECT_NEAR(r.character.value, 2 * cin_series(3.0 * std::exp(0.5)), 1e-9);
  EXPECT_NEAR(r.translation.value, 2.5, 1e-10);
}

TEST(Witness, TrivialCharacter) {
  const AlmostInvariantReport r = almost_invariant_check(left_indicator(0.0), 0.0, 1.0, 0.0);
  EXPECT_EQ(r.character.verdict, ConditionVerdict::holds);
  EXPECT_EQ(r.character.value, 0.0);
}

TEST(Witness, GaussianIsAControl) {
  const AlmostInvariantReport r = almost_invariant_check(gaussian(), 0.0, 1.0, 1.0);
  EXPECT_FALSE(r.all_hold());
  EXPECT_EQ(r.support.verdict, ConditionVerdict::fails);
  EXPECT_GT(r.support.value, 0.0);
  EXPECT_EQ(r.divergence.verdict, ConditionVerdict::fails);
  // Over [-128, 0] the integral of exp(-2 z^2) is sqrt(pi / 8).
  EXPECT_NEAR(r.ladder_values.back(), std::sqrt(std::numbers::pi / 8), 1e-10);
}

TEST(Witness, VerdictNames) {
  EXPECT_EQ(to_string(ConditionVerdict::holds), "holds");
  EXPECT_EQ(to_string(ConditionVerdict::fails), "fails");
  EXPECT_EQ(to_string(ConditionVerdict::inconclusive), "inconclusive");
}

}  // namespace
}  // namespace u22::rank1
