#include "u22/extension.hpp"

#include <algorithm>
#include <cmath>

#include "u22/errors.hpp"

namespace u22 {

namespace {

bool is_identity_label(const PElement& p) {
  return p.distance(PElement::identity()) <= CocycleVector::kLabelMergeTol;
}

template <class LabelMap>
CocycleVector map_labels(const CocycleVector& v, LabelMap map) {
  CocycleVector out(v.label());
  for (const auto& t : v.terms()) out.add_term(map(t.p), t.coefficient);
  return out;
}

}  // namespace

PElement act_k(const KElement& k, const PElement& p) {
  if (is_identity_label(p)) return PElement::identity();
  return iwasawa_decompose(embed_k(k) * embed_p(p)).p;
}

PElement act_sigma_on_basis(const PElement& p) {
  if (is_identity_label(p)) return PElement::identity();
  return sigma_hat(p);
}

CocycleVector extend_cocycle(const U22Element& g, const OrbitLabel& label) {
  return CocycleVector::basis(iwasawa_decompose(g).p, label);
}

CocycleVector apply_p(const PElement& p0, const CocycleVector& v) {
  CocycleVector out(v.label());
  for (const auto& t : v.terms()) {
    out.add_term(p0 * t.p, t.coefficient);
    out.add_term(p0, -t.coefficient);
  }
  return out;
}

CocycleVector apply_k(const KElement& k, const CocycleVector& v) {
  return map_labels(v, [&](const PElement& p) { return act_k(k, p); });
}

CocycleVector apply_sigma(const CocycleVector& v) {
  return map_labels(v, [](const PElement& p) { return act_sigma_on_basis(p); });
}

CocycleVector apply_extended(const U22Element& g, const CocycleVector& v) {
  const IwasawaFactors f = iwasawa_decompose(g);
  return apply_p(f.p, apply_k(f.k, v));
}

std::string ExtendedOperator::tag() const {
  if (word_.size() != 1) return "word";
  struct Visitor {
    std::string operator()(const PElement&) const { return "P"; }
    std::string operator()(const KElement&) const { return "K"; }
    std::string operator()(const SigmaGenerator&) const { return "sigma"; }
  };
  return std::visit(Visitor{}, word_.front());
}

CocycleVector ExtendedOperator::apply(const CocycleVector& v) const {
  CocycleVector out = v;
  for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
    struct Visitor {
      const CocycleVector& in;
      CocycleVector operator()(const PElement& p) const { return apply_p(p, in); }
      CocycleVector operator()(const KElement& k) const { return apply_k(k, in); }
      CocycleVector operator()(const SigmaGenerator&) const { return apply_sigma(in); }
    };
    out = std::visit(Visitor{out}, *it);
  }
  return out;
}

ExtendedOperator operator*(const ExtendedOperator& a, const ExtendedOperator& b) {
  std::vector<ExtendedOperator::Generator> word = a.word_;
  word.insert(word.end(), b.word_.begin(), b.word_.end());
  return ExtendedOperator(std::move(word));
}

std::vector<UnboundednessRow> unboundedness_experiment(const std::vector<double>& scales,
                                                       const OrbitLabel& label,
                                                       const MeasureSpec& measure,
                                                       const L2Config& config) {
  std::vector<UnboundednessRow> rows;
  for (double t : scales) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw PreconditionFailed("unboundedness scales must be positive and finite");
    }
    const PElement p = q_to_p({TriangularS::diag(t, 1.0), {}});
    const PElement p_hat = act_sigma_on_basis(p);
    const IntegralEstimate n = l2_norm(CocycleVector::basis(p, label).to_function(), measure, config);
    const IntegralEstimate n_hat =
        l2_norm(CocycleVector::basis(p_hat, label).to_function(), measure, config);
    if (!(n.value > 0.0)) throw Degenerate("||b(p)|| vanished in the unboundedness experiment");
    const double ratio = n_hat.value / n.value;
    const double rel = std::hypot(n_hat.std_error / std::max(n_hat.value, 1e-300),
                                  n.std_error / n.value);
    rows.push_back({norm_s(p.s()), ratio, ratio * rel});
  }
  return rows;
}

}  // namespace u22
