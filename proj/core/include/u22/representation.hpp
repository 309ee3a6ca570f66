#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "u22/group.hpp"
#include "u22/measure.hpp"
#include "u22/orbit.hpp"

namespace u22 {

/// f(s) = exp(-|s| / 2).
double vacuum(const TriangularS& s);

/// A complex function on S given by a closed-form evaluator. Copies share
/// the evaluator; values are immutable.
class GroupFunction {
 public:
  using Evaluator = std::function<Complex(const TriangularS&)>;

  explicit GroupFunction(Evaluator f);
  static GroupFunction zero();
  static GroupFunction vacuum_function();

  Complex operator()(const TriangularS& s) const { return (*f_)(s); }

  /// s -> F(s s0).
  GroupFunction right_translate(const TriangularS& s0) const;
  /// s -> chi_k(s n s*) F(s).
  GroupFunction times_character(const OrbitLabel& label, const SkewHermitian2& n) const;

  friend GroupFunction operator+(const GroupFunction& x, const GroupFunction& y);
  friend GroupFunction operator-(const GroupFunction& x, const GroupFunction& y);
  friend GroupFunction operator*(Complex c, const GroupFunction& x);

 private:
  std::shared_ptr<const Evaluator> f_;
};

/// (T(q) F)(s) = chi_k(s n s*) F(s s0) for q = (s0, n) = (e, n)(s0, 0).
GroupFunction apply_T(const QElement& q, const OrbitLabel& label, const GroupFunction& f);

/// b(p)(s) = (T(p) f)(s) - f(s) for the vacuum f, evaluated directly.
Complex basis_cocycle_value(const QElement& q, const OrbitLabel& label, const TriangularS& s);

/// Finite formal combination sum_i c_i b(p_i) of cocycle vectors, kept in
/// canonical form: labels closer than kLabelMergeTol are merged, identity
/// labels (b(e) = 0) and zero coefficients are dropped.
class CocycleVector {
 public:
  struct Term {
    PElement p;
    Complex coefficient;
  };

  static constexpr double kLabelMergeTol = 1e-12;

  explicit CocycleVector(const OrbitLabel& label = OrbitLabel::standard()) : label_(label) {}
  static CocycleVector basis(const PElement& p, const OrbitLabel& label);

  const OrbitLabel& label() const { return label_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Complex operator()(const TriangularS& s) const;
  GroupFunction to_function() const;

  /// Adds c b(p) and re-canonicalises.
  CocycleVector& add_term(const PElement& p, Complex c);

  friend CocycleVector operator+(const CocycleVector& x, const CocycleVector& y);
  friend CocycleVector operator-(const CocycleVector& x, const CocycleVector& y);
  friend CocycleVector operator*(Complex c, const CocycleVector& x);

 private:
  OrbitLabel label_;
  std::vector<Term> terms_;
};

/// b(q) = T(q) f - f as a cocycle vector.
CocycleVector coboundary(const QElement& q, const OrbitLabel& label);

/// Integration domain and Monte-Carlo settings for L^2 norms on S.
struct L2Config {
  double inner = 1e-4;
  double outer = 30.0;
  McConfig mc{};
};

struct ComplexEstimate {
  Complex value;
  double std_error = 0.0;
  std::int64_t sample_count = 0;
};

/// ||F||^2 = integral of |F|^2 against the measure.
IntegralEstimate l2_norm_squared(const GroupFunction& f, const MeasureSpec& measure,
                                 const L2Config& config);
/// sqrt of l2_norm_squared with the delta-method error.
IntegralEstimate l2_norm(const GroupFunction& f, const MeasureSpec& measure,
                         const L2Config& config);
/// <F, G> = integral of F conj(G).
ComplexEstimate inner_product(const GroupFunction& f, const GroupFunction& g,
                              const MeasureSpec& measure, const L2Config& config);

enum class SpecialnessVerdict { confirmed, not_special, inconclusive };
std::string to_string(SpecialnessVerdict v);

struct SpecialnessEntry {
  QElement q;
  std::string kind;  // "translation", "character" or "mixed"
  DivergenceVerdict verdict;
};

struct SpecialnessReport {
  SpecialnessVerdict verdict = SpecialnessVerdict::inconclusive;
  DivergenceVerdict vacuum;
  std::vector<SpecialnessEntry> entries;
};

/// Four pure translations followed by four pure character directions.
std::vector<QElement> default_specialness_test_set();

/// "confirmed" iff the vacuum norm diverges and every coboundary norm
/// converges; "not special" iff the vacuum norm converges. Throws
/// PreconditionFailed unless the set has both translation and character
/// elements.
SpecialnessReport specialness_report(const std::vector<QElement>& tests, const OrbitLabel& label,
                                     const MeasureSpec& measure, const ProbeConfig& config);

struct GramResult {
  Eigen::MatrixXcd matrix;
  Eigen::MatrixXd std_error;
  double hermitian_residual = 0.0;
  Eigen::VectorXd eigenvalues;
  double min_eigenvalue = 0.0;
  /// Standard error of v* G v for the minimising eigenvector v.
  double min_eigenvalue_std_error = 0.0;
};

/// Gram matrix <b(p_i), b(p_j)>. Throws PreconditionFailed on an identity label.
GramResult gram_matrix(const std::vector<PElement>& ps, const OrbitLabel& label,
                       const MeasureSpec& measure, const L2Config& config);

/// Deterministic pointwise test set: radii log-spaced on [r_min, r_max],
/// directions from a Halton sequence mapped onto the unit patch.
std::vector<TriangularS> pointwise_sample_set(int count = 100, double r_min = 1e-3,
                                              double r_max = 10.0);

}  // namespace u22
