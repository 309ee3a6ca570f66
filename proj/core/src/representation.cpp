#include "u22/representation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "u22/errors.hpp"
#include "u22/rng.hpp"

namespace u22 {

double vacuum(const TriangularS& s) {
  return std::exp(-0.5 * norm_s(s));
}

// ---------------------------------------------------------------------------
// GroupFunction

GroupFunction::GroupFunction(Evaluator f) : f_(std::make_shared<const Evaluator>(std::move(f))) {}

GroupFunction GroupFunction::zero() {
  return GroupFunction([](const TriangularS&) { return Complex(0.0); });
}

GroupFunction GroupFunction::vacuum_function() {
  return GroupFunction([](const TriangularS& s) { return Complex(vacuum(s)); });
}

GroupFunction GroupFunction::right_translate(const TriangularS& s0) const {
  auto f = f_;
  return GroupFunction([f, s0](const TriangularS& s) { return (*f)(s * s0); });
}

GroupFunction GroupFunction::times_character(const OrbitLabel& label,
                                             const SkewHermitian2& n) const {
  auto f = f_;
  return GroupFunction([f, label, n](const TriangularS& s) {
    return character_multiplier(label, s, n) * (*f)(s);
  });
}

GroupFunction operator+(const GroupFunction& x, const GroupFunction& y) {
  auto fx = x.f_;
  auto fy = y.f_;
  return GroupFunction([fx, fy](const TriangularS& s) { return (*fx)(s) + (*fy)(s); });
}

GroupFunction operator-(const GroupFunction& x, const GroupFunction& y) {
  auto fx = x.f_;
  auto fy = y.f_;
  return GroupFunction([fx, fy](const TriangularS& s) { return (*fx)(s) - (*fy)(s); });
}

GroupFunction operator*(Complex c, const GroupFunction& x) {
  auto fx = x.f_;
  return GroupFunction([fx, c](const TriangularS& s) { return c * (*fx)(s); });
}

GroupFunction apply_T(const QElement& q, const OrbitLabel& label, const GroupFunction& f) {
  return f.right_translate(q.s).times_character(label, q.n);
}

Complex basis_cocycle_value(const QElement& q, const OrbitLabel& label, const TriangularS& s) {
  return character_multiplier(label, s, q.n) * vacuum(s * q.s) - vacuum(s);
}

// ---------------------------------------------------------------------------
// CocycleVector

namespace {

constexpr double kZeroCoefficient = 1e-14;

}  // namespace

CocycleVector CocycleVector::basis(const PElement& p, const OrbitLabel& label) {
  CocycleVector v(label);
  v.add_term(p, 1.0);
  return v;
}

CocycleVector& CocycleVector::add_term(const PElement& p, Complex c) {
  if (p.distance(PElement::identity()) <= kLabelMergeTol) return *this;
  auto it = std::find_if(terms_.begin(), terms_.end(),
                         [&](const Term& t) { return t.p.distance(p) <= kLabelMergeTol; });
  if (it == terms_.end()) {
    if (std::abs(c) > kZeroCoefficient) terms_.push_back({p, c});
    return *this;
  }
  it->coefficient += c;
  if (std::abs(it->coefficient) <= kZeroCoefficient) terms_.erase(it);
  return *this;
}

Complex CocycleVector::operator()(const TriangularS& s) const {
  Complex total = 0.0;
  for (const auto& t : terms_) {
    total += t.coefficient * basis_cocycle_value(p_to_q(t.p), label_, s);
  }
  return total;
}

GroupFunction CocycleVector::to_function() const {
  auto self = std::make_shared<const CocycleVector>(*this);
  return GroupFunction([self](const TriangularS& s) { return (*self)(s); });
}

CocycleVector operator+(const CocycleVector& x, const CocycleVector& y) {
  if (!(x.label_ == y.label_)) throw PreconditionFailed("cocycle vectors on different orbits");
  CocycleVector out = x;
  for (const auto& t : y.terms_) out.add_term(t.p, t.coefficient);
  return out;
}

CocycleVector operator-(const CocycleVector& x, const CocycleVector& y) {
  return x + Complex(-1.0) * y;
}

CocycleVector operator*(Complex c, const CocycleVector& x) {
  CocycleVector out(x.label_);
  for (const auto& t : x.terms_) out.add_term(t.p, c * t.coefficient);
  return out;
}

CocycleVector coboundary(const QElement& q, const OrbitLabel& label) {
  return CocycleVector::basis(q_to_p(q), label);
}

// ---------------------------------------------------------------------------
// L^2 machinery

IntegralEstimate l2_norm_squared(const GroupFunction& f, const MeasureSpec& measure,
                                 const L2Config& config) {
  const PolarSampler sampler(config.inner, config.outer);
  return integrate_mc([&](const TriangularS& s) { return std::norm(f(s)); }, measure, sampler,
                      config.mc);
}

IntegralEstimate l2_norm(const GroupFunction& f, const MeasureSpec& measure,
                         const L2Config& config) {
  const IntegralEstimate sq = l2_norm_squared(f, measure, config);
  const double value = std::sqrt(std::max(0.0, sq.value));
  const double err = value > 0.0 ? 0.5 * sq.std_error / value : std::sqrt(sq.std_error);
  return {value, err, sq.sample_count};
}

ComplexEstimate inner_product(const GroupFunction& f, const GroupFunction& g,
                              const MeasureSpec& measure, const L2Config& config) {
  const PolarSampler sampler(config.inner, config.outer);
  const auto acc =
      run_batches(sampler, config.mc, 2, [&](const WeightedPoint& pt, std::vector<MeanAccumulator>& a) {
        const double w = measure(pt.s) * pt.weight;
        const Complex x = w == 0.0 ? Complex(0.0) : f(pt.s) * std::conj(g(pt.s)) * w;
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
          throw NonFinite("inner product integrand is not finite");
        }
        a[0].add(x.real());
        a[1].add(x.imag());
      });
  return {{acc[0].mean(), acc[1].mean()},
          std::hypot(acc[0].std_error(), acc[1].std_error()),
          acc[0].count()};
}

// ---------------------------------------------------------------------------
// Specialness

std::string to_string(SpecialnessVerdict v) {
  switch (v) {
    case SpecialnessVerdict::confirmed:
      return "special witness confirmed";
    case SpecialnessVerdict::not_special:
      return "not special";
    case SpecialnessVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<QElement> default_specialness_test_set() {
  const SkewHermitian2 none{};
  return {
      {TriangularS::diag(2.0, 1.0), none},
      {TriangularS::diag(1.0, 2.0), none},
      {TriangularS::make(0.5, 1.5, {0.3, -0.2}), none},
      {TriangularS::make(1.0, 1.0, {1.0, 1.0}), none},
      {TriangularS::identity(), SkewHermitian2{1.0, 0.0, 0.0}},
      {TriangularS::identity(), SkewHermitian2{0.0, -2.0, 0.0}},
      {TriangularS::identity(), SkewHermitian2{0.0, 0.0, {0.5, 0.0}}},
      {TriangularS::identity(), SkewHermitian2{0.3, 0.7, {0.0, 1.0}}},
  };
}

namespace {

std::string element_kind(const QElement& q) {
  const bool pure_s = q.n.is_zero();
  const bool pure_n = q.s == TriangularS::identity();
  if (pure_s && !pure_n) return "translation";
  if (pure_n && !pure_s) return "character";
  return "mixed";
}

bool diverges(Divergence d) {
  return d == Divergence::log_divergent || d == Divergence::power_divergent;
}

}  // namespace

SpecialnessReport specialness_report(const std::vector<QElement>& tests, const OrbitLabel& label,
                                     const MeasureSpec& measure, const ProbeConfig& config) {
  bool has_translation = false;
  bool has_character = false;
  for (const auto& q : tests) {
    const std::string kind = element_kind(q);
    has_translation = has_translation || kind == "translation";
    has_character = has_character || kind == "character";
  }
  if (!has_translation || !has_character) {
    throw PreconditionFailed(
        "specialness test set needs both pure-translation and pure-character elements");
  }

  SpecialnessReport report;
  report.vacuum = divergence_probe([](const TriangularS& s) { return std::exp(-norm_s(s)); },
                                   measure, config);
  bool all_convergent = true;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    ProbeConfig element_config = config;
    element_config.mc.seed = mix_seed(config.mc.seed, i + 1);
    const QElement q = tests[i];
    auto verdict = divergence_probe(
        [q, label](const TriangularS& s) { return std::norm(basis_cocycle_value(q, label, s)); },
        measure, element_config);
    all_convergent = all_convergent && verdict.classification == Divergence::convergent;
    report.entries.push_back({q, element_kind(q), std::move(verdict)});
  }

  if (report.vacuum.classification == Divergence::convergent) {
    report.verdict = SpecialnessVerdict::not_special;
  } else if (diverges(report.vacuum.classification) && all_convergent) {
    report.verdict = SpecialnessVerdict::confirmed;
  } else {
    report.verdict = SpecialnessVerdict::inconclusive;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Gram matrix

GramResult gram_matrix(const std::vector<PElement>& ps, const OrbitLabel& label,
                       const MeasureSpec& measure, const L2Config& config) {
  if (ps.empty()) throw PreconditionFailed("Gram matrix needs at least one element");
  std::vector<QElement> qs;
  for (const auto& p : ps) {
    if (p.distance(PElement::identity()) <= CocycleVector::kLabelMergeTol) {
      throw PreconditionFailed("Gram matrix labels must differ from the identity");
    }
    qs.push_back(p_to_q(p));
  }
  const auto m = static_cast<Eigen::Index>(qs.size());
  const PolarSampler sampler(config.inner, config.outer);

  auto values_at = [&](const TriangularS& s, std::vector<Complex>& b) {
    for (std::size_t i = 0; i < qs.size(); ++i) b[i] = basis_cocycle_value(qs[i], label, s);
  };

  const std::size_t width = 2 * qs.size() * qs.size();
  const auto acc = run_batches(
      sampler, config.mc, width, [&](const WeightedPoint& pt, std::vector<MeanAccumulator>& a) {
        const double w = measure(pt.s) * pt.weight;
        std::vector<Complex> b(qs.size());
        values_at(pt.s, b);
        std::size_t k = 0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
          for (std::size_t j = 0; j < qs.size(); ++j) {
            const Complex x = b[i] * std::conj(b[j]) * w;
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
              throw NonFinite("Gram integrand is not finite");
            }
            a[k++].add(x.real());
            a[k++].add(x.imag());
          }
        }
      });

  GramResult out;
  out.matrix.resize(m, m);
  out.std_error.resize(m, m);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out.matrix(i, j) = {acc[k].mean(), acc[k + 1].mean()};
      out.std_error(i, j) = std::hypot(acc[k].std_error(), acc[k + 1].std_error());
      k += 2;
    }
  }
  out.hermitian_residual = (out.matrix - out.matrix.adjoint()).norm();
  const Eigen::MatrixXcd herm = 0.5 * (out.matrix + out.matrix.adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  out.eigenvalues = eig.eigenvalues();
  out.min_eigenvalue = out.eigenvalues(0);
  const Eigen::VectorXcd v = eig.eigenvectors().col(0);

  // Second pass over the same samples: v* G v = mean |sum_i conj(v_i) b_i|^2 w.
  const auto quad = run_batches(
      sampler, config.mc, 1, [&](const WeightedPoint& pt, std::vector<MeanAccumulator>& a) {
        const double w = measure(pt.s) * pt.weight;
        std::vector<Complex> b(qs.size());
        values_at(pt.s, b);
        Complex proj = 0.0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
          proj += std::conj(v(static_cast<Eigen::Index>(i))) * b[i];
        }
        a[0].add(std::norm(proj) * w);
      });
  out.min_eigenvalue_std_error = quad[0].std_error();
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise sample set

namespace {

double radical_inverse(int index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

std::vector<TriangularS> pointwise_sample_set(int count, double r_min, double r_max) {
  if (count < 2 || !(r_min > 0.0) || !(r_max > r_min)) {
    throw PreconditionFailed("pointwise sample set needs count >= 2 and 0 < r_min < r_max");
  }
  std::vector<TriangularS> out;
  out.reserve(static_cast<std::size_t>(count));
  const double log_span = std::log(r_max / r_min);
  for (int j = 0; j < count; ++j) {
    const double radius = r_min * std::exp(log_span * j / (count - 1));
    const TriangularS omega = direction_from_uniforms(
        radical_inverse(j + 1, 2), radical_inverse(j + 1, 3), radical_inverse(j + 1, 5));
    out.push_back(polar_compose(radius, omega));
  }
  return out;
}

}  // namespace u22
