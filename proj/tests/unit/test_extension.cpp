#include <cmath>

#include <gtest/gtest.h>

#include "u22/errors.hpp"
#include "u22/extension.hpp"

namespace u22 {
namespace {

const std::vector<TriangularS>& points() {
  static const std::vector<TriangularS> pts = pointwise_sample_set(40, 1e-2, 5.0);
  return pts;
}

double pointwise_distance(const CocycleVector& a, const CocycleVector& b) {
  double worst = 0.0;
  for (const auto& s : points()) worst = std::max(worst, std::abs(a(s) - b(s)));
  return worst;
}

CocycleVector random_vector(GroupSampler& gs, const OrbitLabel& label, int terms) {
  CocycleVector v(label);
  std::normal_distribution<double> g;
  for (int i = 0; i < terms; ++i) v.add_term(gs.p(), {g(gs.engine()), g(gs.engine())});
  return v;
}

TEST(ActK, IdentityCases) {
  GroupSampler gs(80);
  for (int i = 0; i < 50; ++i) {
    const PElement p = gs.p();
    EXPECT_LT(act_k(KElement::identity(), p).distance(p), 1e-12 * std::max(1.0, p.x().norm()));
    EXPECT_EQ(act_k(gs.k(), PElement::identity()).distance(PElement::identity()), 0.0);
  }
}

TEST(ActK, IsAGroupAction) {
  GroupSampler gs(81);
  for (int i = 0; i < 200; ++i) {
    const KElement k1 = gs.k();
    const KElement k2 = gs.k();
    const PElement p = gs.p();
    const PElement lhs = act_k(k1 * k2, p);
    const PElement rhs = act_k(k1, act_k(k2, p));
    EXPECT_LT(lhs.distance(rhs), 1e-9 * std::max(1.0, lhs.x().norm()));
  }
}

TEST(ActK, SigmaAgreesWithSigmaHat) {
  GroupSampler gs(82);
  for (int i = 0; i < 200; ++i) {
    const PElement p = gs.p();
    const PElement a = act_k(KElement::sigma_element(), p);
    EXPECT_LT(a.distance(sigma_hat(p)), 1e-9 * std::max(1.0, a.x().norm()));
  }
}

TEST(Sigma, IsAnInvolutionOnLabels) {
  GroupSampler gs(83);
  for (int i = 0; i < 200; ++i) {
    const PElement p = gs.p();
    EXPECT_LT(act_sigma_on_basis(act_sigma_on_basis(p)).distance(p),
              1e-9 * std::max(1.0, p.x().norm()));
  }
  EXPECT_EQ(act_sigma_on_basis(PElement::identity()).distance(PElement::identity()), 0.0);
}

TEST(Sigma, IsAnInvolutionOnVectors) {
  GroupSampler gs(84);
  const CocycleVector v = random_vector(gs, OrbitLabel::standard(), 4);
  EXPECT_LT(pointwise_distance(apply_sigma(apply_sigma(v)), v), 1e-9);
}

TEST(ExtendCocycle, VanishesOnK) {
  GroupSampler gs(85);
  for (int i = 0; i < 50; ++i) {
    EXPECT_TRUE(extend_cocycle(embed_k(gs.k()), OrbitLabel::standard()).is_zero());
  }
  EXPECT_TRUE(extend_cocycle(U22Element::identity(), OrbitLabel::standard()).is_zero());
}

TEST(ExtendCocycle, AgreesWithCoboundaryOnP) {
  GroupSampler gs(86);
  for (int i = 0; i < 50; ++i) {
    const QElement q = gs.q();
    const CocycleVector ext = extend_cocycle(embed_p(q_to_p(q)), OrbitLabel::standard());
    EXPECT_LT(pointwise_distance(ext, coboundary(q, OrbitLabel::standard())), 1e-9);
  }
}

TEST(ExtendCocycle, RightKInvariant) {
  GroupSampler gs(87);
  for (int i = 0; i < 50; ++i) {
    const U22Element g = gs.u22();
    const U22Element gk = g * embed_k(gs.k());
    EXPECT_LT(pointwise_distance(extend_cocycle(gk, OrbitLabel::standard()),
                                 extend_cocycle(g, OrbitLabel::standard())),
              1e-9);
  }
}

TEST(ApplyExtended, MatchesPointwiseRepresentationOnP) {
  GroupSampler gs(88);
  for (int k = 1; k <= 4; ++k) {
    const OrbitLabel label = OrbitLabel::from_index(k);
    for (int i = 0; i < 10; ++i) {
      const PElement p = gs.p();
      const CocycleVector v = random_vector(gs, label, 3);
      const GroupFunction oracle = apply_T(p_to_q(p), label, v.to_function());
      const CocycleVector got = apply_extended(embed_p(p), v);
      for (const auto& s : points()) EXPECT_LT(std::abs(got(s) - oracle(s)), 1e-9);
    }
  }
}

TEST(ApplyExtended, CocycleIdentityOnU22) {
  // b(g1 g2) = T(g1) b(g2) + b(g1).
  GroupSampler gs(89);
  const OrbitLabel label = OrbitLabel::standard();
  for (int i = 0; i < 30; ++i) {
    const U22Element g1 = gs.u22();
    const U22Element g2 = gs.u22();
    const CocycleVector lhs = extend_cocycle(g1 * g2, label);
    const CocycleVector rhs = apply_extended(g1, extend_cocycle(g2, label)) + extend_cocycle(g1, label);
    EXPECT_LT(pointwise_distance(lhs, rhs), 1e-8);
  }
}

TEST(ApplyExtended, IsARepresentationOnTheSpan) {
  GroupSampler gs(90);
  const OrbitLabel label = OrbitLabel::parse("(-,+)");
  for (int i = 0; i < 20; ++i) {
    const U22Element g1 = gs.u22();
    const U22Element g2 = gs.u22();
    const CocycleVector v = random_vector(gs, label, 3);
    EXPECT_LT(pointwise_distance(apply_extended(g1 * g2, v), apply_extended(g1, apply_extended(g2, v))),
              1e-8);
  }
}

TEST(ApplyExtended, IdentityAndLinearity) {
  GroupSampler gs(91);
  const OrbitLabel label = OrbitLabel::standard();
  const CocycleVector v = random_vector(gs, label, 3);
  const CocycleVector w = random_vector(gs, label, 2);
  EXPECT_LT(pointwise_distance(apply_extended(U22Element::identity(), v), v), 1e-12);
  const U22Element g = gs.u22();
  const Complex c(0.5, -1.5);
  EXPECT_LT(pointwise_distance(apply_extended(g, v + c * w),
                               apply_extended(g, v) + c * apply_extended(g, w)),
            1e-9);
}

TEST(ExtendedOperator, Tags) {
  GroupSampler gs(92);
  EXPECT_EQ(ExtendedOperator::of(gs.p()).tag(), "P");
  EXPECT_EQ(ExtendedOperator::of(gs.k()).tag(), "K");
  EXPECT_EQ(ExtendedOperator::sigma().tag(), "sigma");
  EXPECT_EQ(ExtendedOperator::identity().tag(), "word");
  EXPECT_EQ((ExtendedOperator::sigma() * ExtendedOperator::sigma()).word().size(), 2u);
}

TEST(ExtendedOperator, WordsActRightToLeft) {
  GroupSampler gs(93);
  const OrbitLabel label = OrbitLabel::standard();
  const CocycleVector v = random_vector(gs, label, 3);
  const PElement p = gs.p();
  const KElement k = gs.k();
  const ExtendedOperator word = ExtendedOperator::of(p) * ExtendedOperator::of(k);
  EXPECT_LT(pointwise_distance(word.apply(v), apply_p(p, apply_k(k, v))), 1e-12);
  // T(p) T(k) = T(p k).
  EXPECT_LT(pointwise_distance(word.apply(v), apply_extended(embed_p(p) * embed_k(k), v)), 1e-8);
  EXPECT_EQ(pointwise_distance(ExtendedOperator::identity().apply(v), v), 0.0);
  EXPECT_LT(pointwise_distance((ExtendedOperator::sigma() * ExtendedOperator::sigma()).apply(v), v),
            1e-9);
  EXPECT_LT(pointwise_distance(ExtendedOperator::sigma().apply(v),
                               ExtendedOperator::of(KElement::sigma_element()).apply(v)),
            1e-9);
}

TEST(Unboundedness, RowsAndPreconditions) {
  L2Config cfg;
  cfg.mc = {20'000, 3, 4};
  const auto rows =
      unboundedness_experiment({2.0, 4.0}, OrbitLabel::standard(), MeasureSpec::nu(), cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_GT(r.std_error, 0.0);
  }
  EXPECT_LT(rows[0].s_norm, rows[1].s_norm);
  EXPECT_THROW(unboundedness_experiment({0.0}, OrbitLabel::standard(), MeasureSpec::nu(), cfg),
               PreconditionFailed);
}

}  // namespace
}  // namespace u22
