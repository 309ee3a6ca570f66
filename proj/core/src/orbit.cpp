#include "u22/orbit.hpp"

#include <cmath>

#include "u22/errors.hpp"

namespace u22 {

OrbitLabel OrbitLabel::from_index(int k) {
  if (k < 1 || k > 4) {
    throw PreconditionFailed("orbit index must be 1..4, got " + std::to_string(k));
  }
  return OrbitLabel(HermitianSignature::all()[static_cast<std::size_t>(k - 1)]);
}

OrbitLabel OrbitLabel::parse(const std::string& text) {
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '4') return from_index(text[0] - '0');
  std::string signs;
  for (char c : text) {
    if (c == '+' || c == '-') signs.push_back(c);
  }
  if (signs.size() != 2) throw PreconditionFailed("cannot parse orbit label '" + text + "'");
  return OrbitLabel(HermitianSignature::from_signs(signs[0] == '+' ? 1 : -1,
                                                  signs[1] == '+' ? 1 : -1));
}

int OrbitLabel::index() const {
  const auto& all = HermitianSignature::all();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == sig_) return static_cast<int>(i) + 1;
  }
  return 0;  // unreachable: HermitianSignature has exactly four values
}

SkewHermitian2 OrbitLabel::representative() const {
  return {static_cast<double>(sig_.eps1()), static_cast<double>(sig_.eps2()), 0.0};
}

std::string OrbitLabel::name() const {
  std::string out = "(";
  out += sig_.eps1() > 0 ? '+' : '-';
  out += ',';
  out += sig_.eps2() > 0 ? '+' : '-';
  out += ')';
  return out;
}

double pairing(const SkewHermitian2& m, const SkewHermitian2& n) {
  // tr(m n) for m = [[ia, z], [-z*, ib]] and n = [[ia', w], [-w*, ib']].
  return -m.a * n.a - m.b * n.b - 2.0 * (m.z * std::conj(n.z)).real();
}

Complex character_multiplier(const OrbitLabel& label, const TriangularS& s,
                             const SkewHermitian2& n) {
  const double phase = pairing(label.representative(), conjugate_action(s, n));
  return std::polar(1.0, phase);
}

namespace {

Matrix2C hermitian_of(const SkewHermitian2& m) {
  return -kI * m.matrix();
}

}  // namespace

std::optional<OrbitLabel> classify_orbit(const SkewHermitian2& m) {
  Matrix2C h = hermitian_of(m);
  const double scale = h.norm();
  if (scale == 0.0) return std::nullopt;
  h /= scale;
  const double h11 = h(0, 0).real();
  const double det = hermitian_det(h);
  if (std::abs(h11) < kDegeneracyTol || std::abs(det) < kDegeneracyTol) return std::nullopt;
  const int eps1 = h11 > 0.0 ? 1 : -1;
  const int eps2 = det > 0.0 ? eps1 : -eps1;
  return OrbitLabel(HermitianSignature::from_signs(eps1, eps2));
}

TriangularS orbit_coordinates(const SkewHermitian2& m) {
  const auto label = classify_orbit(m);
  if (!label) throw Degenerate("character lies on a degenerate orbit");
  try {
    const Matrix2C s = signed_triangular_factor(hermitian_of(m), label->signature());
    return TriangularS::from_matrix(s);
  } catch (const WrongOrbit& e) {
    throw Degenerate(std::string("orbit coordinates failed: ") + e.what());
  }
}

double orbit_reconstruction_residual(const SkewHermitian2& m, const OrbitLabel& label,
                                     const TriangularS& s) {
  const Matrix2C sm = s.matrix();
  const Matrix2C back = sm * label.representative().matrix() * sm.adjoint();
  return (back - m.matrix()).norm() / m.matrix().norm();
}

}  // namespace u22
