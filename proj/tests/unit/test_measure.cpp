#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "u22/errors.hpp"
#include "u22/measure.hpp"

namespace u22 {
namespace {

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), accurate for x <= 1.
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -x / k;
    sum += term / k;
  }
  return -std::numbers::egamma - std::log(x) - sum;
}

std::array<double, 4> coords(const TriangularS& s) {
  return {s.r1(), s.r2(), s.r().real(), s.r().imag()};
}

TriangularS from_coords(const std::array<double, 4>& c) {
  return TriangularS::make(c[0], c[1], {c[2], c[3]});
}

TEST(Modulus, IsMultiplicative) {
  GroupSampler gs(41);
  for (int i = 0; i < 500; ++i) {
    const TriangularS a = gs.s();
    const TriangularS b = gs.s();
    const double lhs = modulus_pi(a * b);
    EXPECT_NEAR(lhs, modulus_pi(a) * modulus_pi(b), 1e-12 * lhs);
  }
  EXPECT_EQ(modulus_pi(TriangularS::identity()), 1.0);
  EXPECT_EQ(modulus_pi(TriangularS::diag(2.0, 3.0)), 24.0);
}

TEST(Modulus, EqualsFiniteDifferenceJacobian) {
  GroupSampler gs(42);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const TriangularS t = gs.s();
    const TriangularS s0 = gs.s();
    Eigen::Matrix4d jac;
    const auto base = coords(t);
    for (int c = 0; c < 4; ++c) {
      auto plus = base;
      auto minus = base;
      plus[c] += h;
      minus[c] -= h;
      const auto fp = coords(from_coords(plus) * s0);
      const auto fm = coords(from_coords(minus) * s0);
      for (int r = 0; r < 4; ++r) jac(r, c) = (fp[r] - fm[r]) / (2 * h);
    }
    EXPECT_NEAR(jac.determinant(), modulus_pi(s0), 1e-6 * modulus_pi(s0));
  }
}

TEST(Norm, MatchesFrobenius) {
  GroupSampler gs(43);
  for (int i = 0; i < 100; ++i) {
    const TriangularS s = gs.s();
    EXPECT_NEAR(norm_s(s), s.matrix().norm(), 1e-14 * norm_s(s));
  }
}

TEST(MeasureSpec, Densities) {
  const TriangularS s = TriangularS::make(1.0, 2.0, {0.0, 2.0});  // |s| = 3
  EXPECT_EQ(MeasureSpec::lebesgue()(s), 1.0);
  EXPECT_NEAR(MeasureSpec::nu()(s), 1.0 / 81.0, 1e-16);
  EXPECT_NEAR(MeasureSpec::haar()(s), 0.5, 1e-16);
  const MeasureSpec cut = MeasureSpec::nu().truncated(4.0);
  EXPECT_EQ(cut(s), 0.0);
  EXPECT_GT(cut(s.scaled(2.0)), 0.0);
}

TEST(RnDerivative, HaarIsExactlyInvariant) {
  GroupSampler gs(44);
  const MeasureSpec haar = MeasureSpec::haar();
  for (int i = 0; i < 300; ++i) {
    EXPECT_NEAR(rn_derivative_right(haar, gs.s(), gs.s()), 1.0, 1e-12);
  }
}

TEST(RnDerivative, NuStaysInsideAnalyticBand) {
  GroupSampler gs(45);
  const MeasureSpec nu = MeasureSpec::nu();
  for (int i = 0; i < 1000; ++i) {
    const TriangularS s = gs.s();
    const TriangularS s0 = gs.s();
    const double rn = rn_derivative_right(nu, s, s0);
    const RnBand band = nu_rn_band(s0);
    EXPECT_LE(band.lower, band.upper);
    EXPECT_GE(rn, band.lower * (1 - 1e-12));
    EXPECT_LE(rn, band.upper * (1 + 1e-12));
  }
}

TEST(RnDerivative, NuIsHomogeneousOfDegreeZero) {
  GroupSampler gs(46);
  const MeasureSpec nu = MeasureSpec::nu();
  for (int i = 0; i < 100; ++i) {
    const TriangularS s = gs.s();
    const TriangularS s0 = gs.s();
    EXPECT_NEAR(rn_derivative_right(nu, s, s0), rn_derivative_right(nu, s.scaled(7.5), s0),
                1e-12 * rn_derivative_right(nu, s, s0));
  }
}

TEST(Accumulator, MergeIsExact) {
  MeanAccumulator a;
  MeanAccumulator b;
  MeanAccumulator all;
  for (int i = 0; i < 10; ++i) {
    (i % 2 ? a : b).add(i);
    all.add(i);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_DOUBLE_EQ(a.mean(), 4.5);
  EXPECT_DOUBLE_EQ(a.std_error(), all.std_error());
}

TEST(Direction, LiesOnPatch) {
  for (double u1 : {0.01, 0.5, 0.99}) {
    for (double u2 : {0.1, 0.7}) {
      for (double u3 : {0.2, 0.9}) {
        const TriangularS d = direction_from_uniforms(u1, u2, u3);
        EXPECT_NEAR(norm_s(d), 1.0, 1e-14);
        EXPECT_GT(d.r1(), 0.0);
        EXPECT_GT(d.r2(), 0.0);
      }
    }
  }
}

TEST(Polar, RoundTrip) {
  GroupSampler gs(47);
  for (int i = 0; i < 100; ++i) {
    const TriangularS s = gs.s();
    const PolarPoint p = polar_decompose_s(s);
    EXPECT_NEAR(norm_s(p.direction), 1.0, 1e-14);
    EXPECT_LT((polar_compose(p.radius, p.direction).matrix() - s.matrix()).norm(),
              1e-14 * norm_s(s));
  }
}

// Lebesgue integral of exp(-r1 - r2 - |r|^2) over the chart is pi.
class SamplerOracle : public ::testing::TestWithParam<int> {};

TEST_P(SamplerOracle, GaussianExponentialIntegral) {
  const RealIntegrand f = [](const TriangularS& s) {
    return std::exp(-s.r1() - s.r2() - std::norm(s.r()));
  };
  std::unique_ptr<PointSampler> sampler;
  switch (GetParam()) {
    case 0:
      sampler = std::make_unique<BoxSampler>(std::array<double, 4>{0, 0, -4.5, -4.5},
                                             std::array<double, 4>{9, 9, 4.5, 4.5});
      break;
    case 1:
      sampler = std::make_unique<ExponentialSampler>(1.0);
      break;
    default:
      sampler = std::make_unique<LogNormalSampler>(1.5);
      break;
  }
  const IntegralEstimate est =
      integrate_mc(f, MeasureSpec::lebesgue(), *sampler, {200'000, 7, 8});
  EXPECT_EQ(est.sample_count, 200'000);
  EXPECT_LT(std::abs(est.value - std::numbers::pi), 5 * est.std_error + 1e-3);
  EXPECT_LT(est.std_error, 0.05 * std::numbers::pi);
}

INSTANTIATE_TEST_SUITE_P(Samplers, SamplerOracle, ::testing::Values(0, 1, 2));

TEST(Samplers, RejectBadParameters) {
  EXPECT_THROW(PolarSampler(2.0, 1.0), PreconditionFailed);
  EXPECT_THROW(ExponentialSampler(0.0), PreconditionFailed);
  EXPECT_THROW(LogNormalSampler(-1.0), PreconditionFailed);
  EXPECT_THROW(BoxSampler({0, 0, 0, 0}, {1, 1, 0, 1}), PreconditionFailed);
  EXPECT_THROW(BoxSampler({-1, 0, 0, 0}, {1, 1, 1, 1}), PreconditionFailed);
}

TEST(IntegrateMc, DeterministicForFixedSeed) {
  const RealIntegrand f = [](const TriangularS& s) { return std::exp(-norm_s(s)); };
  const ExponentialSampler sampler(1.0);
  const McConfig cfg{50'000, 99, 8};
  const IntegralEstimate a = integrate_mc(f, MeasureSpec::lebesgue(), sampler, cfg);
  const IntegralEstimate b = integrate_mc(f, MeasureSpec::lebesgue(), sampler, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const IntegralEstimate c = integrate_mc(f, MeasureSpec::lebesgue(), sampler, {50'000, 100, 8});
  EXPECT_NE(a.value, c.value);
}

TEST(IntegrateMc, Errors) {
  const ExponentialSampler sampler(1.0);
  const RealIntegrand bad = [](const TriangularS&) { return NAN; };
  EXPECT_THROW(integrate_mc(bad, MeasureSpec::lebesgue(), sampler, {1000, 1, 4}), NonFinite);
  const RealIntegrand one = [](const TriangularS&) { return 1.0; };
  EXPECT_THROW(integrate_mc(one, MeasureSpec::lebesgue(), sampler, {0, 1, 4}), PreconditionFailed);
}

TEST(Ladder, MatchesExponentialIntegralOracle) {
  // Over |s| > eps against nu, a radial f(rho) integrates to
  // area * int_eps^outer f(rho) / rho d rho.
  const RealIntegrand f = [](const TriangularS& s) { return std::exp(-norm_s(s)); };
  const std::vector<double> cutoffs = {1.0, 0.1, 0.01, 0.001};
  const LadderEstimate ladder =
      integrate_ladder(f, MeasureSpec::nu(), cutoffs, 30.0, {400'000, 3, 8});
  ASSERT_EQ(ladder.cumulative.size(), 4u);
  ASSERT_EQ(ladder.increments.size(), 3u);
  for (std::size_t j = 0; j < cutoffs.size(); ++j) {
    const double exact = kDirectionPatchArea * e1_series(cutoffs[j]);
    EXPECT_LT(std::abs(ladder.cumulative[j].value - exact), 5 * ladder.cumulative[j].std_error)
        << "cutoff " << cutoffs[j];
  }
  for (std::size_t j = 1; j < cutoffs.size(); ++j) {
    const double exact = kDirectionPatchArea * (e1_series(cutoffs[j]) - e1_series(cutoffs[j - 1]));
    EXPECT_LT(std::abs(ladder.increments[j - 1].value - exact),
              5 * ladder.increments[j - 1].std_error);
  }
}

TEST(Ladder, RejectsBadCutoffs) {
  const RealIntegrand f = [](const TriangularS&) { return 1.0; };
  EXPECT_THROW(integrate_ladder(f, MeasureSpec::nu(), {0.1}, 30.0, {}), PreconditionFailed);
  EXPECT_THROW(integrate_ladder(f, MeasureSpec::nu(), {0.1, 0.2}, 30.0, {}), PreconditionFailed);
  EXPECT_THROW(integrate_ladder(f, MeasureSpec::nu(), {40.0, 0.2}, 30.0, {}), PreconditionFailed);
}

ProbeConfig small_probe() {
  ProbeConfig cfg;
  cfg.mc = {200'000, 5, 8};
  return cfg;
}

TEST(DivergenceProbe, RadialExponentialIsLogDivergent) {
  const RealIntegrand f = [](const TriangularS& s) { return std::exp(-norm_s(s)); };
  const DivergenceVerdict v = divergence_probe(f, MeasureSpec::nu(), small_probe());
  EXPECT_EQ(v.classification, Divergence::log_divergent);
  // dI / dlog(1/eps) -> area as eps -> 0.
  EXPECT_NEAR(v.slope, kDirectionPatchArea, 0.1 * kDirectionPatchArea);
  EXPECT_GT(v.r_squared, kLogRSquared);
}

TEST(DivergenceProbe, VanishingAtOriginConverges) {
  const RealIntegrand f = [](const TriangularS& s) {
    const double r = norm_s(s);
    return r * r * std::exp(-r);
  };
  EXPECT_EQ(divergence_probe(f, MeasureSpec::nu(), small_probe()).classification,
            Divergence::convergent);
}

TEST(DivergenceProbe, SingularAtOriginIsPowerDivergent) {
  const RealIntegrand f = [](const TriangularS& s) {
    const double r = norm_s(s);
    return std::exp(-r) / r;
  };
  EXPECT_EQ(divergence_probe(f, MeasureSpec::nu(), small_probe()).classification,
            Divergence::power_divergent);
}

TEST(DivergenceProbe, TruncatedMeasureConverges) {
  const RealIntegrand f = [](const TriangularS& s) { return std::exp(-norm_s(s)); };
  EXPECT_EQ(divergence_probe(f, MeasureSpec::nu().truncated(0.05), small_probe()).classification,
            Divergence::convergent);
}

TEST(DivergenceProbe, NeedsFiveCutoffs) {
  ProbeConfig cfg = small_probe();
  cfg.cutoffs = {1e-1, 1e-2, 1e-3, 1e-4};
  const RealIntegrand f = [](const TriangularS&) { return 1.0; };
  EXPECT_THROW(divergence_probe(f, MeasureSpec::nu(), cfg), PreconditionFailed);
}

TEST(DivergenceProbe, Names) {
  EXPECT_EQ(to_string(Divergence::convergent), "convergent");
  EXPECT_EQ(to_string(Divergence::log_divergent), "log-divergent");
  EXPECT_EQ(to_string(Divergence::power_divergent), "power-divergent");
  EXPECT_EQ(to_string(Divergence::inconclusive), "inconclusive");
}

}  // namespace
}  // namespace u22
