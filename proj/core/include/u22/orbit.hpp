#pragma once

#include <optional>
#include <string>

#include "u22/group.hpp"
#include "u22/matrix.hpp"

namespace u22 {

/// One of the four open S-orbits in the character space, labelled by the
/// signature (eps1, eps2) of its representative m_k = i diag(eps1, eps2).
class OrbitLabel {
 public:
  explicit OrbitLabel(HermitianSignature sig) : sig_(sig) {}
  /// k = 1..4 in the order (+,+), (+,-), (-,+), (-,-).
  static OrbitLabel from_index(int k);
  /// Parses "(+,+)", "++", "+-" ... or "1".."4".
  static OrbitLabel parse(const std::string& text);
  static OrbitLabel standard() { return from_index(1); }

  int index() const;
  const HermitianSignature& signature() const { return sig_; }
  SkewHermitian2 representative() const;
  std::string name() const;

  friend bool operator==(const OrbitLabel&, const OrbitLabel&) = default;

 private:
  HermitianSignature sig_;
};

/// Real pairing <m, n> = tr(m n) between skew-Hermitian matrices.
double pairing(const SkewHermitian2& m, const SkewHermitian2& n);

/// exp(i <m_k, s n s*>): the character of the orbit point s evaluated at n.
Complex character_multiplier(const OrbitLabel& label, const TriangularS& s,
                             const SkewHermitian2& n);

/// Degeneracy cutoff applied to |H11| and |det H| after H = -i m is scaled
/// to unit Frobenius norm.
inline constexpr double kDegeneracyTol = 1e-10;

/// Orbit of m, or nullopt for the measure-zero (degenerate) orbits.
std::optional<OrbitLabel> classify_orbit(const SkewHermitian2& m);

/// The unique s with s m_k s* = m. Throws Degenerate.
TriangularS orbit_coordinates(const SkewHermitian2& m);

/// ||s m_k s* - m|| / ||m||.
double orbit_reconstruction_residual(const SkewHermitian2& m, const OrbitLabel& label,
                                     const TriangularS& s);

}  // namespace u22
