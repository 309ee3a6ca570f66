#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "u22/group.hpp"

namespace u22 {

/// |s| = sqrt(tr(s* s)) = sqrt(r1^2 + r2^2 + |r|^2).
double norm_s(const TriangularS& s);

/// pi(s) = r1^3 r2, the Jacobian of the right translation t -> t s.
double modulus_pi(const TriangularS& s);

/// A measure on S given by a density against the coordinate Lebesgue
/// measure dr1 dr2 d(Re r) d(Im r), optionally restricted to |s| > min_radius.
struct MeasureSpec {
  std::string name;
  std::function<double(const TriangularS&)> density;
  double min_radius = 0.0;

  static MeasureSpec lebesgue();
  /// Right Haar measure pi(s)^-1 ds.
  static MeasureSpec haar();
  /// |s|^-4 ds.
  static MeasureSpec nu();
  MeasureSpec truncated(double radius) const;

  /// Density at s, zero outside the support.
  double operator()(const TriangularS& s) const;
};

/// d nu(s s0) / d nu(s) = density(s s0) pi(s0) / density(s).
double rn_derivative_right(const MeasureSpec& measure, const TriangularS& s,
                           const TriangularS& s0);

/// Analytic bounds of rn_derivative_right for |s|^-4 ds:
/// [pi(s0) / sigma_max(s0)^4, pi(s0) / sigma_min(s0)^4].
struct RnBand {
  double lower;
  double upper;
};
RnBand nu_rn_band(const TriangularS& s0);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t sample_count = 0;
};

/// Running (sum, sum of squares, count) triple. Partial accumulators from
/// independent batches merge exactly.
class MeanAccumulator {
 public:
  void add(double x) {
    sum_ += x;
    sum_sq_ += x * x;
    ++count_;
  }
  void merge(const MeanAccumulator& other) {
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
    count_ += other.count_;
  }
  std::int64_t count() const { return count_; }
  double mean() const;
  double std_error() const;
  IntegralEstimate estimate() const { return {mean(), std_error(), count_}; }

 private:
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::int64_t count_ = 0;
};

/// A point of S together with the importance weight 1 / q(s), q being the
/// sampling density against coordinate Lebesgue measure.
struct WeightedPoint {
  TriangularS s;
  double weight;
};

class PointSampler {
 public:
  virtual ~PointSampler() = default;
  virtual WeightedPoint draw(std::mt19937_64& engine) const = 0;
};

/// Area of the unit-sphere patch {|omega| = 1, r1 > 0, r2 > 0} in R^4.
inline constexpr double kDirectionPatchArea = std::numbers::pi * std::numbers::pi / 2.0;

/// Uniform direction on the patch from three uniforms in (0, 1).
TriangularS direction_from_uniforms(double u1, double u2, double u3);

/// Radius log-uniform on [inner, outer], direction uniform on the patch.
class PolarSampler final : public PointSampler {
 public:
  PolarSampler(double inner, double outer);
  WeightedPoint draw(std::mt19937_64& engine) const override;
  double inner() const { return inner_; }
  double outer() const { return outer_; }

 private:
  double inner_;
  double outer_;
  double log_span_;
};

/// Uniform on a coordinate box over (r1, r2, Re r, Im r).
class BoxSampler final : public PointSampler {
 public:
  BoxSampler(std::array<double, 4> lower, std::array<double, 4> upper);
  WeightedPoint draw(std::mt19937_64& engine) const override;
  double volume() const { return volume_; }

 private:
  std::array<double, 4> lower_;
  std::array<double, 4> upper_;
  double volume_;
};

/// r1, r2 exponential and Re r, Im r Laplace, all with the same rate.
class ExponentialSampler final : public PointSampler {
 public:
  explicit ExponentialSampler(double rate);
  WeightedPoint draw(std::mt19937_64& engine) const override;

 private:
  double rate_;
};

/// log r1, log r2, Re r, Im r independent N(0, spread^2).
class LogNormalSampler final : public PointSampler {
 public:
  explicit LogNormalSampler(double spread);
  WeightedPoint draw(std::mt19937_64& engine) const override;

 private:
  double spread_;
};

struct McConfig {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int batches = 16;
};

using RealIntegrand = std::function<double(const TriangularS&)>;

/// Importance-sampled estimate of the integral of f against the measure.
/// Batches use seeds derived from (seed, batch) and run concurrently; the
/// result does not depend on scheduling. Throws NonFinite, PreconditionFailed.
IntegralEstimate integrate_mc(const RealIntegrand& f, const MeasureSpec& measure,
                              const PointSampler& sampler, const McConfig& config);

/// Generic batched driver: `visit(point, accumulators)` is called once per
/// sample with a batch-local accumulator vector of size `width`.
std::vector<MeanAccumulator> run_batches(
    const PointSampler& sampler, const McConfig& config, std::size_t width,
    const std::function<void(const WeightedPoint&, std::vector<MeanAccumulator>&)>& visit);

struct PolarPoint {
  double radius;
  TriangularS direction;  // |direction| = 1
};

PolarPoint polar_decompose_s(const TriangularS& s);
TriangularS polar_compose(double radius, const TriangularS& direction);
/// In polar coordinates |s|^-4 ds = r^-1 dr d omega.
inline double polar_measure_weight(double radius) { return 1.0 / radius; }

/// Integrals over {cutoff_j < |s| < outer} for a decreasing cutoff ladder,
/// all computed from one polar sample set.
struct LadderEstimate {
  std::vector<double> cutoffs;
  std::vector<IntegralEstimate> cumulative;  // I(cutoff_j)
  std::vector<IntegralEstimate> increments;  // I(cutoff_j) - I(cutoff_{j-1}), j >= 1
};

LadderEstimate integrate_ladder(const RealIntegrand& f, const MeasureSpec& measure,
                                const std::vector<double>& cutoffs, double outer,
                                const McConfig& config);

enum class Divergence { convergent, log_divergent, power_divergent, inconclusive };
std::string to_string(Divergence d);

struct ProbeConfig {
  /// 1e-1 ... 1e-4 in half decades.
  std::vector<double> cutoffs = {1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3,
                                 1e-3, 3.1622776601683794e-4, 1e-4};
  double outer = 30.0;
  McConfig mc{};
};

/// Thresholds of the divergence classifier.
inline constexpr double kLogSlopeSigmas = 5.0;
inline constexpr double kLogRSquared = 0.99;
inline constexpr double kConvergenceRelTol = 1e-3;
inline constexpr double kIncrementSigmas = 3.0;
inline constexpr double kPowerGrowth = 4.0;

struct DivergenceVerdict {
  Divergence classification = Divergence::inconclusive;
  double slope = 0.0;  // of I against log(1/cutoff)
  double slope_std_error = 0.0;
  double r_squared = 0.0;
  double last_increment_rate = 0.0;   // last increment per unit log(1/cutoff)
  double first_increment_rate = 0.0;
  LadderEstimate ladder;
};

/// Classifies the behaviour of I(eps) = integral over |s| > eps of `abs_sq`
/// as eps -> 0:
///  - convergent: the last increment per unit log(1/eps) is below
///    kConvergenceRelTol |I| or within kIncrementSigmas standard errors of 0;
///  - power-divergent: otherwise, if the increment rate grows by more than
///    kPowerGrowth across the ladder;
///  - log-divergent: otherwise, if the least-squares slope of I against
///    log(1/eps) exceeds kLogSlopeSigmas standard errors with R^2 > kLogRSquared;
///  - inconclusive: anything else.
/// Throws PreconditionFailed for ladders shorter than 5 or not decreasing.
DivergenceVerdict divergence_probe(const RealIntegrand& abs_sq, const MeasureSpec& measure,
                                   const ProbeConfig& config);

}  // namespace u22
