#include "u22/measure.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "u22/errors.hpp"
#include "u22/rng.hpp"

namespace u22 {

double norm_s(const TriangularS& s) {
  return std::sqrt(s.r1() * s.r1() + s.r2() * s.r2() + std::norm(s.r()));
}

double modulus_pi(const TriangularS& s) {
  return s.r1() * s.r1() * s.r1() * s.r2();
}

MeasureSpec MeasureSpec::lebesgue() {
  return {"lebesgue", [](const TriangularS&) { return 1.0; }, 0.0};
}

MeasureSpec MeasureSpec::haar() {
  return {"haar", [](const TriangularS& s) { return 1.0 / modulus_pi(s); }, 0.0};
}

MeasureSpec MeasureSpec::nu() {
  return {"nu",
          [](const TriangularS& s) {
            const double n2 = s.r1() * s.r1() + s.r2() * s.r2() + std::norm(s.r());
            return 1.0 / (n2 * n2);
          },
          0.0};
}

MeasureSpec MeasureSpec::truncated(double radius) const {
  MeasureSpec out = *this;
  out.min_radius = std::max(min_radius, radius);
  out.name = name + "|r>" + std::to_string(radius);
  return out;
}

double MeasureSpec::operator()(const TriangularS& s) const {
  if (min_radius > 0.0 && !(norm_s(s) > min_radius)) return 0.0;
  return density(s);
}

double rn_derivative_right(const MeasureSpec& measure, const TriangularS& s,
                           const TriangularS& s0) {
  return measure.density(s * s0) * modulus_pi(s0) / measure.density(s);
}

RnBand nu_rn_band(const TriangularS& s0) {
  const SingularValues2 sv = singular_values(s0.matrix());
  const double pi0 = modulus_pi(s0);
  return {pi0 / std::pow(sv.max, 4), pi0 / std::pow(sv.min, 4)};
}

double MeanAccumulator::mean() const {
  return count_ > 0 ? sum_ / static_cast<double>(count_) : 0.0;
}

double MeanAccumulator::std_error() const {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double m = sum_ / n;
  const double var = std::max(0.0, (sum_sq_ - n * m * m) / (n - 1.0));
  return std::sqrt(var / n);
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double open_uniform(std::mt19937_64& engine) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = 0.0;
  do {
    x = u(engine);
  } while (x <= 0.0);
  return x;
}

double normal_pdf(double x, double spread) {
  return std::exp(-0.5 * x * x / (spread * spread)) / (spread * std::sqrt(kTwoPi));
}

}  // namespace

TriangularS direction_from_uniforms(double u1, double u2, double u3) {
  const double a = std::sqrt(u1);
  const double b = std::sqrt(1.0 - u1);
  const double x1 = a * std::cos(kTwoPi * u2);
  const double x2 = a * std::sin(kTwoPi * u2);
  const double x3 = b * std::cos(kTwoPi * u3);
  const double x4 = b * std::sin(kTwoPi * u3);
  return TriangularS::make(std::abs(x1), std::abs(x3), {x2, x4});
}

PolarSampler::PolarSampler(double inner, double outer)
    : inner_(inner), outer_(outer), log_span_(std::log(outer / inner)) {
  if (!(inner > 0.0) || !(outer > inner)) {
    throw PreconditionFailed("polar sampler needs 0 < inner < outer");
  }
}

WeightedPoint PolarSampler::draw(std::mt19937_64& engine) const {
  const double radius = inner_ * std::exp(log_span_ * open_uniform(engine));
  const double u1 = open_uniform(engine);
  const double u2 = open_uniform(engine);
  const double u3 = open_uniform(engine);
  const TriangularS omega = direction_from_uniforms(u1, u2, u3);
  // q(s) ds = (dr / (r log_span)) (d omega / area), ds = r^3 dr d omega.
  const double r2 = radius * radius;
  return {polar_compose(radius, omega), kDirectionPatchArea * log_span_ * r2 * r2};
}

BoxSampler::BoxSampler(std::array<double, 4> lower, std::array<double, 4> upper)
    : lower_(lower), upper_(upper), volume_(1.0) {
  for (int i = 0; i < 4; ++i) {
    if (!(upper_[i] > lower_[i])) throw PreconditionFailed("box sampler needs lower < upper");
    volume_ *= upper_[i] - lower_[i];
  }
  if (lower_[0] < 0.0 || lower_[1] < 0.0) {
    throw PreconditionFailed("box must lie in the chart r1, r2 >= 0");
  }
}

WeightedPoint BoxSampler::draw(std::mt19937_64& engine) const {
  std::array<double, 4> x{};
  for (int i = 0; i < 4; ++i) {
    const double u = i < 2 && lower_[i] == 0.0 ? open_uniform(engine)
                                                : std::uniform_real_distribution<double>()(engine);
    x[i] = lower_[i] + (upper_[i] - lower_[i]) * u;
  }
  return {TriangularS::make(x[0], x[1], {x[2], x[3]}), volume_};
}

ExponentialSampler::ExponentialSampler(double rate) : rate_(rate) {
  if (!(rate > 0.0)) throw PreconditionFailed("exponential sampler needs rate > 0");
}

WeightedPoint ExponentialSampler::draw(std::mt19937_64& engine) const {
  auto expo = [&] { return -std::log(open_uniform(engine)) / rate_; };
  auto laplace = [&] {
    const double e = expo();
    return open_uniform(engine) < 0.5 ? -e : e;
  };
  const double r1 = expo();
  const double r2 = expo();
  const double re = laplace();
  const double im = laplace();
  const double l1 = r1 + r2 + std::abs(re) + std::abs(im);
  const double q = std::pow(rate_, 4) * 0.25 * std::exp(-rate_ * l1);
  return {TriangularS::make(r1, r2, {re, im}), 1.0 / q};
}

LogNormalSampler::LogNormalSampler(double spread) : spread_(spread) {
  if (!(spread > 0.0)) throw PreconditionFailed("log-normal sampler needs spread > 0");
}

WeightedPoint LogNormalSampler::draw(std::mt19937_64& engine) const {
  std::normal_distribution<double> gauss(0.0, spread_);
  const double u1 = gauss(engine);
  const double u2 = gauss(engine);
  const double re = gauss(engine);
  const double im = gauss(engine);
  const double r1 = std::exp(u1);
  const double r2 = std::exp(u2);
  const double q = normal_pdf(u1, spread_) / r1 * normal_pdf(u2, spread_) / r2 *
                   normal_pdf(re, spread_) * normal_pdf(im, spread_);
  return {TriangularS::make(r1, r2, {re, im}), 1.0 / q};
}

// ---------------------------------------------------------------------------
// Monte-Carlo drivers

std::vector<MeanAccumulator> run_batches(
    const PointSampler& sampler, const McConfig& config, std::size_t width,
    const std::function<void(const WeightedPoint&, std::vector<MeanAccumulator>&)>& visit) {
  if (config.samples < 1 || config.batches < 1) {
    throw PreconditionFailed("Monte-Carlo run needs positive samples and batches");
  }
  const auto batches = static_cast<std::size_t>(config.batches);
  std::vector<std::vector<MeanAccumulator>> partial(batches,
                                                    std::vector<MeanAccumulator>(width));
  std::vector<std::exception_ptr> errors(batches);

  auto run_batch = [&](std::size_t b) {
    try {
      std::int64_t count = config.samples / config.batches;
      if (static_cast<std::int64_t>(b) < config.samples % config.batches) ++count;
      std::mt19937_64 engine(mix_seed(config.seed, b));
      for (std::int64_t i = 0; i < count; ++i) visit(sampler.draw(engine), partial[b]);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(batches, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < batches; b += workers) run_batch(b);
      });
    }
  }

  std::vector<MeanAccumulator> total(width);
  for (std::size_t b = 0; b < batches; ++b) {
    if (errors[b]) std::rethrow_exception(errors[b]);
    for (std::size_t j = 0; j < width; ++j) total[j].merge(partial[b][j]);
  }
  return total;
}

IntegralEstimate integrate_mc(const RealIntegrand& f, const MeasureSpec& measure,
                              const PointSampler& sampler, const McConfig& config) {
  const auto acc = run_batches(sampler, config, 1,
                               [&](const WeightedPoint& pt, std::vector<MeanAccumulator>& a) {
                                 const double d = measure(pt.s);
                                 const double x = d == 0.0 ? 0.0 : f(pt.s) * d * pt.weight;
                                 if (!std::isfinite(x)) {
                                   throw NonFinite("integrand is not finite at a sample point");
                                 }
                                 a[0].add(x);
                               });
  return acc[0].estimate();
}

PolarPoint polar_decompose_s(const TriangularS& s) {
  const double radius = norm_s(s);
  return {radius, s.scaled(1.0 / radius)};
}

TriangularS polar_compose(double radius, const TriangularS& direction) {
  return direction.scaled(radius);
}

LadderEstimate integrate_ladder(const RealIntegrand& f, const MeasureSpec& measure,
                                const std::vector<double>& cutoffs, double outer,
                                const McConfig& config) {
  const std::size_t n = cutoffs.size();
  if (n < 2) throw PreconditionFailed("cutoff ladder needs at least two entries");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(cutoffs[j] > 0.0) || !(cutoffs[j] < outer) || (j > 0 && !(cutoffs[j] < cutoffs[j - 1]))) {
      throw PreconditionFailed("cutoffs must be positive, below the outer radius and decreasing");
    }
  }
  const PolarSampler sampler(cutoffs.back(), outer);
  const auto acc = run_batches(
      sampler, config, 2 * n - 1,
      [&](const WeightedPoint& pt, std::vector<MeanAccumulator>& a) {
        const double d = measure(pt.s);
        const double x = d == 0.0 ? 0.0 : f(pt.s) * d * pt.weight;
        if (!std::isfinite(x)) throw NonFinite("integrand is not finite at a sample point");
        const double r = norm_s(pt.s);
        for (std::size_t j = 0; j < n; ++j) a[j].add(r > cutoffs[j] ? x : 0.0);
        for (std::size_t j = 1; j < n; ++j) {
          a[n + j - 1].add(r > cutoffs[j] && r <= cutoffs[j - 1] ? x : 0.0);
        }
      });
  LadderEstimate out;
  out.cutoffs = cutoffs;
  for (std::size_t j = 0; j < n; ++j) out.cumulative.push_back(acc[j].estimate());
  for (std::size_t j = 1; j < n; ++j) out.increments.push_back(acc[n + j - 1].estimate());
  return out;
}

std::string to_string(Divergence d) {
  switch (d) {
    case Divergence::convergent:
      return "convergent";
    case Divergence::log_divergent:
      return "log-divergent";
    case Divergence::power_divergent:
      return "power-divergent";
    case Divergence::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

DivergenceVerdict divergence_probe(const RealIntegrand& abs_sq, const MeasureSpec& measure,
                                   const ProbeConfig& config) {
  if (config.cutoffs.size() < 5) {
    throw PreconditionFailed("divergence probe needs at least five cutoffs");
  }
  DivergenceVerdict v;
  v.ladder = integrate_ladder(abs_sq, measure, config.cutoffs, config.outer, config.mc);
  const std::size_t n = config.cutoffs.size();

  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = std::log(1.0 / config.cutoffs[j]);
    y[j] = v.ladder.cumulative[j].value;
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mx += x[j];
    my += y[j];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sxx += (x[j] - mx) * (x[j] - mx);
    sxy += (x[j] - mx) * (y[j] - my);
    syy += (y[j] - my) * (y[j] - my);
  }
  v.slope = sxy / sxx;
  const double ssr = std::max(0.0, syy - v.slope * sxy);
  v.slope_std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  v.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 0.0;

  const auto& last = v.ladder.increments.back();
  const auto& first = v.ladder.increments.front();
  const double dx_last = x[n - 1] - x[n - 2];
  const double dx_first = x[1] - x[0];
  v.last_increment_rate = last.value / dx_last;
  v.first_increment_rate = first.value / dx_first;
  const double total = std::abs(v.ladder.cumulative.back().value);

  const bool flat = std::abs(last.value) <= kConvergenceRelTol * dx_last * total ||
                    std::abs(last.value) <= kIncrementSigmas * last.std_error;
  if (flat) {
    v.classification = Divergence::convergent;
    return v;
  }
  const double growth = v.first_increment_rate > 0.0
                            ? v.last_increment_rate / v.first_increment_rate
                            : std::numeric_limits<double>::infinity();
  if (v.last_increment_rate > 0.0 && growth > kPowerGrowth) {
    v.classification = Divergence::power_divergent;
  } else if (v.slope > kLogSlopeSigmas * v.slope_std_error && v.r_squared > kLogRSquared) {
    v.classification = Divergence::log_divergent;
  } else {
    v.classification = Divergence::inconclusive;
  }
  return v;
}

}  // namespace u22
