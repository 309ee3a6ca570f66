#pragma once

#include <functional>
#include <string>
#include <vector>

#include "u22/matrix.hpp"
#include "u22/quadrature.hpp"

namespace u22::rank1 {

/// The affine map x -> e^beta x + a.
struct AffElement {
  double beta = 0.0;
  double a = 0.0;

  static AffElement identity() { return {}; }
  double operator()(double x) const;
};

/// (beta1, a1) o (beta2, a2) = (beta1 + beta2, a1 + e^beta1 a2).
AffElement compose(const AffElement& g1, const AffElement& g2);

class LineFunction {
 public:
  using Evaluator = std::function<Complex(double)>;
  explicit LineFunction(Evaluator f) : f_(std::move(f)) {}
  Complex operator()(double z) const { return f_(z); }

 private:
  Evaluator f_;
};

/// (U_{a,beta} F)(z) = exp(i a e^z) F(z + beta).
LineFunction apply_U(const AffElement& g, const LineFunction& f);

/// z -> 1 for z < t, 0 otherwise.
LineFunction left_indicator(double t = 0.0);
/// z -> exp(-z^2).
LineFunction gaussian();

enum class ConditionVerdict { holds, fails, inconclusive };
std::string to_string(ConditionVerdict v);

struct ConditionResult {
  ConditionVerdict verdict = ConditionVerdict::inconclusive;
  /// (i): max |f| above t. (ii): I(L_max). (iii), (iv): the integral.
  double value = 0.0;
  double abs_error = 0.0;
  /// (ii): last increment per unit L. (iii), (iv): tail below e^(upper - 64).
  double tail = 0.0;
};

struct AlmostInvariantReport {
  ConditionResult support;      // (i)   f = 0 on (t, inf)
  ConditionResult divergence;   // (ii)  integral of |f|^2 diverges
  ConditionResult character;    // (iii) integral of |(1 - e^{i b e^z}) f|^2 converges
  ConditionResult translation;  // (iv)  integral of |f(z) - f(z + a)|^2 converges
  std::vector<double> ladder_cutoffs;
  std::vector<double> ladder_values;  // I(L) = integral over [t - L, t] of |f|^2

  bool all_hold() const;
};

/// Relative size below which a tail or increment counts as vanished.
inline constexpr double kTailRelTol = 1e-6;

/// Checks the four conditions for f on the line. Integrals over (-inf, upper]
/// are taken in u = e^z on (0, e^upper]; the divergence check integrates |f|^2
/// over [t - L, t] for L = 8, 16, ..., 128. Discontinuities of f at t are
/// passed to the quadrature as breakpoints.
AlmostInvariantReport almost_invariant_check(const LineFunction& f, double t, double a, double b,
                                             const QuadratureOptions& options = {});

}  // namespace u22::rank1
