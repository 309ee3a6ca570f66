#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>

#include "u22/matrix.hpp"

namespace u22 {

// Tolerance ladder: one order of magnitude per composition level.
inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kProductTol = 1e-10;
inline constexpr double kChainTol = 1e-9;

/// The fixed involution [[0, e2], [e2, 0]] defining the form of signature (2, 2).
const Matrix4C& sigma();

/// Lower-triangular 2x2 complex matrix [[r1, 0], [r, r2]] with r1, r2 > 0.
class TriangularS {
 public:
  /// Throws InvariantViolation unless r1 > 0 and r2 > 0 (and all finite).
  static TriangularS make(double r1, double r2, Complex r);
  static TriangularS diag(double r1, double r2) { return make(r1, r2, 0.0); }
  static TriangularS identity() { return TriangularS(1.0, 1.0, 0.0); }
  /// Reads a lower-triangular matrix; the upper entry and the imaginary
  /// parts of the diagonal must vanish to `tol` relative to ||m||.
  static TriangularS from_matrix(const Matrix2C& m, double tol = kProductTol);

  double r1() const { return r1_; }
  double r2() const { return r2_; }
  Complex r() const { return r_; }

  Matrix2C matrix() const;
  TriangularS inverse() const;
  /// c * s for c > 0.
  TriangularS scaled(double c) const;

  friend TriangularS operator*(const TriangularS& a, const TriangularS& b);
  friend bool operator==(const TriangularS&, const TriangularS&) = default;

 private:
  TriangularS(double r1, double r2, Complex r) : r1_(r1), r2_(r2), r_(r) {}
  double r1_;
  double r2_;
  Complex r_;
};

/// Skew-Hermitian 2x2 matrix n = [[i a, z], [-conj(z), i b]].
struct SkewHermitian2 {
  double a = 0.0;
  double b = 0.0;
  Complex z = 0.0;

  Matrix2C matrix() const;
  /// Skew-Hermitian part (m - m*) / 2 of an arbitrary matrix.
  static SkewHermitian2 from_matrix(const Matrix2C& m);
  bool is_zero() const { return a == 0.0 && b == 0.0 && z == Complex(0.0); }
  double norm() const { return matrix().norm(); }

  friend SkewHermitian2 operator+(const SkewHermitian2& x, const SkewHermitian2& y) {
    return {x.a + y.a, x.b + y.b, x.z + y.z};
  }
  friend SkewHermitian2 operator-(const SkewHermitian2& x, const SkewHermitian2& y) {
    return {x.a - y.a, x.b - y.b, x.z - y.z};
  }
  friend SkewHermitian2 operator*(double c, const SkewHermitian2& x) {
    return {c * x.a, c * x.b, c * x.z};
  }
  friend bool operator==(const SkewHermitian2&, const SkewHermitian2&) = default;
};

/// s n s* for s in S, as a skew-Hermitian matrix.
SkewHermitian2 conjugate_action(const TriangularS& s, const SkewHermitian2& n);

/// Element (s, X) of the Iwasawa subgroup P, i.e. the matrix
/// [[s*^-1, 0], [X, s]] with s X* + X s* = 0.
class PElement {
 public:
  /// Throws InvariantViolation when ||s X* + X s*|| exceeds
  /// tol * max(1, ||s|| ||X||).
  static PElement make(const TriangularS& s, const Matrix2C& x, double tol = kProductTol);
  static PElement identity() { return PElement(TriangularS::identity(), Matrix2C::Zero()); }
  /// Reads the lower blocks of a 4x4 matrix of P-shape.
  static PElement from_matrix(const Matrix4C& m, double tol = kProductTol);

  const TriangularS& s() const { return s_; }
  const Matrix2C& x() const { return x_; }

  double skew_residual() const;
  Matrix4C matrix() const;
  PElement inverse() const;
  /// Coordinate distance max(|ds|, |dX|) in Frobenius norms.
  double distance(const PElement& other) const;

  /// (s1, X1)(s2, X2) = (s1 s2, X1 s2*^-1 + s1 X2).
  friend PElement operator*(const PElement& a, const PElement& b);

 private:
  PElement(const TriangularS& s, const Matrix2C& x) : s_(s), x_(x) {}
  TriangularS s_;
  Matrix2C x_;
};

/// Element (s, n) of the semidirect product S x| N.
struct QElement {
  TriangularS s = TriangularS::identity();
  SkewHermitian2 n{};

  static QElement identity() { return {}; }
};

/// (s1, n1)(s2, n2) = (s1 s2, n1 + s1 n2 s1*).
QElement q_multiply(const QElement& a, const QElement& b);
QElement q_inverse(const QElement& q);

/// (s, X) -> (s, X s*).
QElement p_to_q(const PElement& p);
/// (s, n) -> (s, n s*^-1).
PElement q_to_p(const QElement& q);

/// Element of the maximal compact subgroup K = U(2,2) n U(4), stored as its
/// full 4x4 matrix of block shape [[alpha, beta], [beta, alpha]].
class KElement {
 public:
  /// Throws InvariantViolation if any of ||k k* - e||, the block shape,
  /// ||alpha alpha* + beta beta* - e|| or ||alpha beta* + beta alpha*||
  /// exceeds tol.
  static KElement make(const Matrix4C& m, double tol = kProductTol);
  static KElement identity() { return KElement(Matrix4C::Identity()); }
  static KElement sigma_element() { return KElement(sigma()); }

  const Matrix4C& matrix() const { return m_; }
  friend KElement operator*(const KElement& a, const KElement& b) {
    return KElement(a.m_ * b.m_);
  }

 private:
  explicit KElement(const Matrix4C& m) : m_(m) {}
  Matrix4C m_;
};

/// Residuals of the defining relation g sigma g* = sigma and of its three
/// block forms.
struct U22Membership {
  bool member = false;
  double form = 0.0;         // ||g sigma g* - sigma||
  double unit_block = 0.0;   // ||g12 g21* + g11 g22* - e2||
  double upper_block = 0.0;  // ||g11 g12* + g12 g11*||
  double lower_block = 0.0;  // ||g22 g21* + g21 g22*||

  double max_residual() const;
};

U22Membership is_in_u22(const Matrix4C& g, double tol);

class U22Element {
 public:
  /// Throws InvariantViolation if some residual exceeds tol * max(1, ||m||^2).
  static U22Element make(const Matrix4C& m, double tol = kChainTol);
  static U22Element identity() { return U22Element(Matrix4C::Identity()); }

  const Matrix4C& matrix() const { return m_; }
  /// g^-1 = sigma g* sigma.
  U22Element inverse() const;
  friend U22Element operator*(const U22Element& a, const U22Element& b) {
    return U22Element(a.m_ * b.m_);
  }

 private:
  explicit U22Element(const Matrix4C& m) : m_(m) {}
  Matrix4C m_;
};

U22Element embed_n(const SkewHermitian2& n);
U22Element embed_s(const TriangularS& s);
/// Throws InvariantViolation if the relative skew residual exceeds kConstructionTol.
U22Element embed_p(const PElement& p);
U22Element embed_k(const KElement& k);

/// Factor a Hermitian positive-definite M with M sigma M = sigma as p p*.
/// s = cholesky_lower(M11^-1), X = M21 s. Throws NotFactorizable.
PElement structured_p_factor(const Matrix4C& m, double tol = kChainTol);

struct IwasawaFactors {
  PElement p;
  KElement k;
  double residual;  // ||p k - g|| / max(1, ||g||)
};

/// g = p k with p in P, k in K; p agrees with structured_p_factor(g g*).
/// Throws DecompositionFailed when the reconstruction residual exceeds tol.
IwasawaFactors iwasawa_decompose(const U22Element& g, double tol = kChainTol);

/// The unique p^ in P with p^ p^* = sigma p p* sigma.
PElement sigma_hat(const PElement& p);

/// Real basis of the Lie algebra of P: the S-directions diag(-A*, A) for
/// A in {E11, E22, E21, i E21}, then the N-directions [[0, 0], [n, 0]].
const std::array<Matrix4C, 8>& lie_p_basis();
/// Real basis of the Lie algebra of K: [[a, b], [b, a]], a, b skew-Hermitian.
const std::array<Matrix4C, 8>& lie_k_basis();
/// The 16 elements of lie_p_basis() followed by lie_k_basis().
const std::array<Matrix4C, 16>& lie_algebra_basis();

/// ||xi sigma + sigma xi*||, zero on the Lie algebra.
double lie_algebra_defect(const Matrix4C& xi);

/// Real dimension of the real-linear span. Columns are normalised before a
/// singular value decomposition; values above `threshold` count.
int real_rank(std::span<const Matrix4C> elements, double threshold = 1e-8);

/// Real dimension of the Lie algebra generated (span closed under commutators).
int lie_closure_dimension(std::span<const Matrix4C> generators, double threshold = 1e-8);

/// Group commutator a b a^-1 b^-1.
Matrix4C group_commutator(const Matrix4C& a, const Matrix4C& b);

/// Seeded sampler for the groups above. One sampler per task; not thread-safe.
class GroupSampler {
 public:
  explicit GroupSampler(std::uint64_t seed) : engine_(seed) {}

  /// exp(xi) with xi a Gaussian combination of the Lie algebra basis,
  /// rescaled to Frobenius norm uniform on [0, 2].
  U22Element u22();
  /// r1, r2 log-uniform on [e^-2, e^2]; Re r, Im r standard normal.
  TriangularS s();
  /// a, b, Re z, Im z standard normal.
  SkewHermitian2 n();
  /// exp of a Gaussian element of Lie(K) with Frobenius norm at most 2.
  KElement k();
  PElement p();
  QElement q() { return {s(), n()}; }

  /// Gaussian combination of `basis`, rescaled to norm uniform on [0, max_norm].
  Matrix4C lie_element(std::span<const Matrix4C> basis, double max_norm);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

U22Element random_u22(std::uint64_t seed);
TriangularS random_s(std::uint64_t seed);
SkewHermitian2 random_n(std::uint64_t seed);
KElement random_k(std::uint64_t seed);

}  // namespace u22
