#pragma once

#include <string>
#include <variant>
#include <vector>

#include "u22/group.hpp"
#include "u22/representation.hpp"

namespace u22 {

/// p' with k p = p' k' (first Iwasawa factor of k p). Identity maps to itself.
PElement act_k(const KElement& k, const PElement& p);

/// T(sigma) b(p) = b(p^); the label map is sigma_hat.
PElement act_sigma_on_basis(const PElement& p);

/// b(g) := b(p) for g = p k. Zero for g in K.
CocycleVector extend_cocycle(const U22Element& g, const OrbitLabel& label);

/// T(g) v for g = p k: each b(q) goes to b(p q') - b(p) with q' = act_k(k, q).
CocycleVector apply_extended(const U22Element& g, const CocycleVector& v);

/// T(p0) on the span: b(q) -> b(p0 q) - b(p0).
CocycleVector apply_p(const PElement& p0, const CocycleVector& v);
/// T(k) on the span: b(q) -> b(act_k(k, q)).
CocycleVector apply_k(const KElement& k, const CocycleVector& v);
/// T(sigma) on the span: b(q) -> b(sigma_hat(q)).
CocycleVector apply_sigma(const CocycleVector& v);

struct SigmaGenerator {};

/// A word in the generators T(p), T(k), T(sigma) acting on the span of the
/// basis cocycle vectors. Words act right to left, like operator products.
class ExtendedOperator {
 public:
  using Generator = std::variant<PElement, KElement, SigmaGenerator>;

  static ExtendedOperator of(const PElement& p) { return ExtendedOperator({p}); }
  static ExtendedOperator of(const KElement& k) { return ExtendedOperator({k}); }
  static ExtendedOperator sigma() { return ExtendedOperator({SigmaGenerator{}}); }
  static ExtendedOperator identity() { return ExtendedOperator({}); }

  /// "P", "K", "sigma" for single generators, "word" otherwise.
  std::string tag() const;
  const std::vector<Generator>& word() const { return word_; }

  CocycleVector apply(const CocycleVector& v) const;

  /// (A * B) v = A (B v).
  friend ExtendedOperator operator*(const ExtendedOperator& a, const ExtendedOperator& b);

 private:
  explicit ExtendedOperator(std::vector<Generator> word) : word_(std::move(word)) {}
  std::vector<Generator> word_;
};

struct UnboundednessRow {
  double s_norm;  // |s(p)|
  double ratio;   // ||b(p^)|| / ||b(p)||
  double std_error;
};

/// ||b(p^)|| / ||b(p)|| along p = (diag(t, 1), 0) for each t in `scales`.
/// Both norms share one sample set per row.
std::vector<UnboundednessRow> unboundedness_experiment(const std::vector<double>& scales,
                                                       const OrbitLabel& label,
                                                       const MeasureSpec& measure,
                                                       const L2Config& config);

}  // namespace u22
