#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

namespace u22 {

using Complex = std::complex<double>;
using Matrix2C = Eigen::Matrix<Complex, 2, 2>;
using Matrix4C = Eigen::Matrix<Complex, 4, 4>;

inline constexpr Complex kI{0.0, 1.0};

/// Signs (eps1, eps2) of a nondegenerate 2x2 Hermitian form. Exactly four
/// values exist; they label the open orbits of the triangular group.
class HermitianSignature {
 public:
  /// Throws PreconditionFailed unless both signs are +1 or -1.
  static HermitianSignature from_signs(int eps1, int eps2);
  static const std::array<HermitianSignature, 4>& all();

  int eps1() const { return eps1_; }
  int eps2() const { return eps2_; }
  Matrix2C diagonal() const;

  friend bool operator==(const HermitianSignature&, const HermitianSignature&) = default;

 private:
  HermitianSignature(int eps1, int eps2) : eps1_(eps1), eps2_(eps2) {}
  int eps1_;
  int eps2_;
};

/// Conjugate transpose, returned by value.
template <typename Derived>
auto adj(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint().eval();
}

/// Frobenius norm.
template <typename Derived>
double fnorm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

Matrix2C block(const Matrix4C& m, int row, int col);
Matrix4C from_blocks(const Matrix2C& b11, const Matrix2C& b12, const Matrix2C& b21,
                     const Matrix2C& b22);

/// ||H - H*|| relative to max(1, ||H||).
double hermitian_defect(const Matrix2C& h);

/// Lower-triangular L with positive diagonal and L L* = H.
///
/// The closed form is used: L11 = sqrt(H11), L21 = H21 / L11,
/// L22 = sqrt(H22 - |L21|^2). Leading minors are compared against
/// 1e-12 ||H|| (and 1e-12 ||H||^2 for the determinant); a minor at or
/// below the cutoff raises NotPositiveDefinite.
Matrix2C cholesky_lower(const Matrix2C& h);

/// The unique lower-triangular s with positive diagonal and
/// s diag(eps1, eps2) s* = H. Raises WrongOrbit unless eps1 H11 > 0 and
/// eps1 eps2 det H > 0 (scale-relative cutoffs as in cholesky_lower).
Matrix2C signed_triangular_factor(const Matrix2C& h, const HermitianSignature& eps);

/// Real determinant of a 2x2 Hermitian matrix.
double hermitian_det(const Matrix2C& h);

/// Largest and smallest singular values of a 2x2 complex matrix.
struct SingularValues2 {
  double max;
  double min;
};
SingularValues2 singular_values(const Matrix2C& m);

/// Matrix exponential by scaling and squaring with a degree-12 Taylor
/// polynomial; the input is scaled until its 1-norm is at most 1/4.
Matrix4C expm(const Matrix4C& a);

}  // namespace u22
