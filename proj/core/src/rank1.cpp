#include "u22/rank1.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace u22::rank1 {

double AffElement::operator()(double x) const {
  return std::exp(beta) * x + a;
}

AffElement compose(const AffElement& g1, const AffElement& g2) {
  return {g1.beta + g2.beta, g1.a + std::exp(g1.beta) * g2.a};
}

LineFunction apply_U(const AffElement& g, const LineFunction& f) {
  return LineFunction([g, f](double z) {
    return std::polar(1.0, g.a * std::exp(z)) * f(z + g.beta);
  });
}

LineFunction left_indicator(double t) {
  return LineFunction([t](double z) { return Complex(z < t ? 1.0 : 0.0); });
}

LineFunction gaussian() {
  return LineFunction([](double z) { return Complex(std::exp(-z * z)); });
}

std::string to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::holds:
      return "holds";
    case ConditionVerdict::fails:
      return "fails";
    case ConditionVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

bool AlmostInvariantReport::all_hold() const {
  return support.verdict == ConditionVerdict::holds &&
         divergence.verdict == ConditionVerdict::holds &&
         character.verdict == ConditionVerdict::holds &&
         translation.verdict == ConditionVerdict::holds;
}

namespace {

constexpr std::array<double, 5> kLadder = {8.0, 16.0, 32.0, 64.0, 128.0};
constexpr double kTailDepth = 64.0;

// Convergence in z over (-inf, upper], computed in u = e^z.
ConditionResult convergent_integral(const std::function<double(double)>& h, double upper,
                                    const std::vector<double>& z_breaks,
                                    const QuadratureOptions& options) {
  const auto g = [&h](double u) { return h(std::log(u)) / u; };
  std::vector<double> u_breaks;
  for (double z : z_breaks) u_breaks.push_back(std::exp(z));
  const QuadratureResult total = integrate_adaptive(g, 0.0, std::exp(upper), options, u_breaks);
  const QuadratureResult tail =
      integrate_adaptive(g, 0.0, std::exp(upper - kTailDepth), options, u_breaks);

  ConditionResult out;
  out.value = total.value;
  out.abs_error = total.abs_error;
  out.tail = tail.value;
  if (!total.converged || !tail.converged || !std::isfinite(total.value)) {
    out.verdict = ConditionVerdict::inconclusive;
  } else if (std::abs(tail.value) <= kTailRelTol * std::abs(total.value) + options.abs_tol) {
    out.verdict = ConditionVerdict::holds;
  } else {
    out.verdict = ConditionVerdict::fails;
  }
  return out;
}

}  // namespace

AlmostInvariantReport almost_invariant_check(const LineFunction& f, double t, double a, double b,
                                             const QuadratureOptions& options) {
  AlmostInvariantReport report;

  double above = 0.0;
  for (int k = -12; k <= 3; ++k) above = std::max(above, std::abs(f(t + std::pow(10.0, k))));
  report.support.value = above;
  report.support.verdict = above == 0.0 ? ConditionVerdict::holds : ConditionVerdict::fails;

  // (ii): I(L) over [t - L, t], accumulated increment by increment.
  const auto abs_sq = [&f](double z) { return std::norm(f(z)); };
  double cumulative = 0.0;
  double error = 0.0;
  double lower_prev = t;
  bool converged = true;
  double last_increment = 0.0;
  for (double cutoff : kLadder) {
    const QuadratureResult piece =
        integrate_adaptive(abs_sq, t - cutoff, lower_prev, options);
    converged = converged && piece.converged;
    cumulative += piece.value;
    error += piece.abs_error;
    last_increment = piece.value / (lower_prev - (t - cutoff));
    lower_prev = t - cutoff;
    report.ladder_cutoffs.push_back(cutoff);
    report.ladder_values.push_back(cumulative);
  }
  report.divergence.value = cumulative;
  report.divergence.abs_error = error;
  report.divergence.tail = last_increment;
  if (!converged) {
    report.divergence.verdict = ConditionVerdict::inconclusive;
  } else if (last_increment > kTailRelTol * cumulative) {
    report.divergence.verdict = ConditionVerdict::holds;
  } else {
    report.divergence.verdict = ConditionVerdict::fails;
  }

  // (iii): |1 - e^{i theta}|^2 = 4 sin^2(theta / 2) avoids cancellation near u = 0.
  report.character = convergent_integral(
      [&](double z) {
        const double half = 0.5 * b * std::exp(z);
        return 4.0 * std::sin(half) * std::sin(half) * std::norm(f(z));
      },
      t, {t}, options);

  // (iv): f(z + a) jumps at z = t - a.
  report.translation = convergent_integral(
      [&](double z) { return std::norm(f(z) - f(z + a)); }, std::max(t, t - a), {t, t - a},
      options);
  return report;
}

}  // namespace u22::rank1
