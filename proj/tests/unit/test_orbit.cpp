#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "u22/errors.hpp"
#include "u22/orbit.hpp"

namespace u22 {
namespace {

TEST(OrbitLabel, IndexRoundTripAndNames) {
  std::set<std::string> names;
  for (int k = 1; k <= 4; ++k) {
    const OrbitLabel label = OrbitLabel::from_index(k);
    EXPECT_EQ(label.index(), k);
    EXPECT_EQ(OrbitLabel::parse(label.name()), label);
    EXPECT_EQ(OrbitLabel::parse(std::to_string(k)), label);
    names.insert(label.name());
  }
  EXPECT_EQ(names.size(), 4u);
  EXPECT_EQ(OrbitLabel::standard().name(), "(+,+)");
  EXPECT_EQ(OrbitLabel::parse("+-").name(), "(+,-)");
}

TEST(OrbitLabel, RejectsBadInput) {
  EXPECT_THROW(OrbitLabel::from_index(0), PreconditionFailed);
  EXPECT_THROW(OrbitLabel::from_index(5), PreconditionFailed);
  EXPECT_THROW(OrbitLabel::parse("+"), PreconditionFailed);
  EXPECT_THROW(OrbitLabel::parse("x"), PreconditionFailed);
}

TEST(Pairing, MatchesMatrixTrace) {
  GroupSampler gs(31);
  for (int i = 0; i < 200; ++i) {
    const SkewHermitian2 m = gs.n();
    const SkewHermitian2 n = gs.n();
    const Complex tr = (m.matrix() * n.matrix()).trace();
    EXPECT_NEAR(pairing(m, n), tr.real(), 1e-12 * (1.0 + std::abs(tr)));
    EXPECT_NEAR(tr.imag(), 0.0, 1e-12 * (1.0 + std::abs(tr)));
    EXPECT_NEAR(pairing(m, n), pairing(n, m), 1e-14 * (1.0 + std::abs(tr)));
  }
}

TEST(Pairing, NonDegenerate) {
  // tr(m m) = -||m||^2 for skew-Hermitian m.
  GroupSampler gs(32);
  for (int i = 0; i < 50; ++i) {
    const SkewHermitian2 m = gs.n();
    EXPECT_NEAR(pairing(m, m), -m.matrix().squaredNorm(), 1e-12 * m.matrix().squaredNorm());
  }
}

TEST(Classify, Representatives) {
  for (int k = 1; k <= 4; ++k) {
    const OrbitLabel label = OrbitLabel::from_index(k);
    const auto got = classify_orbit(label.representative());
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, label);
    const TriangularS s = orbit_coordinates(label.representative());
    EXPECT_LT((s.matrix() - Matrix2C::Identity()).norm(), 1e-15);
  }
}

TEST(Classify, ScaledIdentityIsPlusPlus) {
  const SkewHermitian2 m{1.0, 1.0, 0.0};
  EXPECT_EQ(classify_orbit(m)->name(), "(+,+)");
}

TEST(Classify, DiagonalExampleCoordinates) {
  const SkewHermitian2 m{4.0, 1.0, 0.0};
  const TriangularS s = orbit_coordinates(m);
  EXPECT_NEAR(s.r1(), 2.0, 1e-14);
  EXPECT_NEAR(s.r2(), 1.0, 1e-14);
  EXPECT_EQ(s.r(), Complex(0.0));
}

TEST(Classify, DegenerateOrbits) {
  EXPECT_FALSE(classify_orbit(SkewHermitian2{}).has_value());
  EXPECT_FALSE(classify_orbit(SkewHermitian2{0.0, 1.0, 0.0}).has_value());  // H11 = 0
  EXPECT_FALSE(classify_orbit(SkewHermitian2{1.0, 1.0, {1.0, 0.0}}).has_value());  // det = 0
  EXPECT_THROW(orbit_coordinates(SkewHermitian2{0.0, 1.0, 0.0}), Degenerate);
}

TEST(Classify, NearDegenerateIsScaleInvariant) {
  const SkewHermitian2 m{1.0, 2.0, {0.3, -0.2}};
  const auto base = classify_orbit(m);
  ASSERT_TRUE(base.has_value());
  EXPECT_EQ(classify_orbit(1e-8 * m), base);
  EXPECT_EQ(classify_orbit(1e8 * m), base);
}

TEST(Classify, ReconstructsRandomPointsOfEveryOrbit) {
  GroupSampler gs(33);
  for (int k = 1; k <= 4; ++k) {
    const OrbitLabel label = OrbitLabel::from_index(k);
    for (int i = 0; i < 250; ++i) {
      const TriangularS s0 = gs.s();
      const SkewHermitian2 m = conjugate_action(s0, label.representative());
      const auto got = classify_orbit(m);
      ASSERT_TRUE(got.has_value());
      EXPECT_EQ(*got, label);
      const TriangularS s = orbit_coordinates(m);
      EXPECT_LT(orbit_reconstruction_residual(m, label, s), 1e-10);
      EXPECT_LT((s.matrix() - s0.matrix()).norm(), 1e-9 * std::max(1.0, s0.matrix().norm()));
    }
  }
}

TEST(Classify, InvariantUnderSAction) {
  GroupSampler gs(34);
  for (int i = 0; i < 200; ++i) {
    const SkewHermitian2 m = gs.n();
    const auto label = classify_orbit(m);
    if (!label) continue;
    EXPECT_EQ(classify_orbit(conjugate_action(gs.s(), m)), label);
  }
}

TEST(Character, IsUnimodularAndAdditive) {
  GroupSampler gs(35);
  for (int k = 1; k <= 4; ++k) {
    const OrbitLabel label = OrbitLabel::from_index(k);
    for (int i = 0; i < 100; ++i) {
      const TriangularS s = gs.s();
      const SkewHermitian2 n1 = gs.n();
      const SkewHermitian2 n2 = gs.n();
      const Complex c1 = character_multiplier(label, s, n1);
      EXPECT_NEAR(std::abs(c1), 1.0, 1e-14);
      const Complex c12 = character_multiplier(label, s, n1 + n2);
      EXPECT_LT(std::abs(c12 - c1 * character_multiplier(label, s, n2)), 1e-9);
      EXPECT_EQ(character_multiplier(label, s, SkewHermitian2{}), Complex(1.0));
    }
  }
}

TEST(Character, CompatibleWithSProduct) {
  // chi(s1 s2, n) = chi(s1, s2 n s2*).
  GroupSampler gs(36);
  const OrbitLabel label = OrbitLabel::parse("(+,-)");
  for (int i = 0; i < 200; ++i) {
    const TriangularS s1 = gs.s();
    const TriangularS s2 = gs.s();
    const SkewHermitian2 n = gs.n();
    const Complex lhs = character_multiplier(label, s1 * s2, n);
    const Complex rhs = character_multiplier(label, s1, conjugate_action(s2, n));
    EXPECT_LT(std::abs(lhs - rhs), 1e-8);
  }
}

TEST(Character, ExplicitPhase) {
  // <i e2, i diag(1, 0)> = -1.
  const SkewHermitian2 n{1.0, 0.0, 0.0};
  const Complex c = character_multiplier(OrbitLabel::standard(), TriangularS::identity(), n);
  EXPECT_NEAR(c.real(), std::cos(-1.0), 1e-15);
  EXPECT_NEAR(c.imag(), std::sin(-1.0), 1e-15);
}

}  // namespace
}  // namespace u22
