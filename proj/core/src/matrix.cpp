#include "u22/matrix.hpp"

#include <cmath>
#include <string>

#include "u22/errors.hpp"

namespace u22 {

HermitianSignature HermitianSignature::from_signs(int eps1, int eps2) {
  auto ok = [](int e) { return e == 1 || e == -1; };
  if (!ok(eps1) || !ok(eps2)) {
    throw PreconditionFailed("signature entries must be +1 or -1, got (" + std::to_string(eps1) +
                             ", " + std::to_string(eps2) + ")");
  }
  return HermitianSignature(eps1, eps2);
}

const std::array<HermitianSignature, 4>& HermitianSignature::all() {
  static const std::array<HermitianSignature, 4> values = {
      HermitianSignature(1, 1), HermitianSignature(1, -1), HermitianSignature(-1, 1),
      HermitianSignature(-1, -1)};
  return values;
}

Matrix2C HermitianSignature::diagonal() const {
  Matrix2C d = Matrix2C::Zero();
  d(0, 0) = eps1_;
  d(1, 1) = eps2_;
  return d;
}

Matrix2C block(const Matrix4C& m, int row, int col) {
  return m.block<2, 2>(2 * row, 2 * col);
}

Matrix4C from_blocks(const Matrix2C& b11, const Matrix2C& b12, const Matrix2C& b21,
                     const Matrix2C& b22) {
  Matrix4C m;
  m.block<2, 2>(0, 0) = b11;
  m.block<2, 2>(0, 2) = b12;
  m.block<2, 2>(2, 0) = b21;
  m.block<2, 2>(2, 2) = b22;
  return m;
}

double hermitian_defect(const Matrix2C& h) {
  return (h - h.adjoint()).norm() / std::max(1.0, h.norm());
}

double hermitian_det(const Matrix2C& h) {
  return h(0, 0).real() * h(1, 1).real() - std::norm(h(1, 0));
}

namespace {

constexpr double kMinorCutoff = 1e-12;
constexpr double kHermitianSlack = 1e-12;

struct TriangularParts {
  double r1;
  Complex r;
  double r2;
};

// Shared closed form; `eps1`, `eps2` are +-1.
TriangularParts triangular_parts(const Matrix2C& h, int eps1, int eps2) {
  const double r1 = std::sqrt(eps1 * h(0, 0).real());
  const Complex r = static_cast<double>(eps1) * h(1, 0) / r1;
  const double r2 = std::sqrt(eps2 * (h(1, 1).real() - eps1 * std::norm(r)));
  return {r1, r, r2};
}

Matrix2C lower(const TriangularParts& p) {
  Matrix2C s;
  s << p.r1, 0.0, p.r, p.r2;
  return s;
}

}  // namespace

Matrix2C cholesky_lower(const Matrix2C& h) {
  const double scale = h.norm();
  if (hermitian_defect(h) > kHermitianSlack) {
    throw NotPositiveDefinite("input is not Hermitian");
  }
  const double minor1 = h(0, 0).real();
  const double minor2 = hermitian_det(h);
  if (!(minor1 > kMinorCutoff * scale) || !(minor2 > kMinorCutoff * scale * scale)) {
    throw NotPositiveDefinite("leading minors (" + std::to_string(minor1) + ", " +
                              std::to_string(minor2) + ") not above cutoff");
  }
  return lower(triangular_parts(h, 1, 1));
}

Matrix2C signed_triangular_factor(const Matrix2C& h, const HermitianSignature& eps) {
  const double scale = h.norm();
  if (hermitian_defect(h) > kHermitianSlack) {
    throw WrongOrbit("input is not Hermitian");
  }
  const int e1 = eps.eps1();
  const int e2 = eps.eps2();
  const double first = e1 * h(0, 0).real();
  const double det = e1 * e2 * hermitian_det(h);
  if (!(first > kMinorCutoff * scale) || !(det > kMinorCutoff * scale * scale)) {
    throw WrongOrbit("form does not lie on orbit (" + std::to_string(e1) + ", " +
                     std::to_string(e2) + ")");
  }
  return lower(triangular_parts(h, e1, e2));
}

SingularValues2 singular_values(const Matrix2C& m) {
  // sigma_max^2 + sigma_min^2 = ||m||_F^2, sigma_max * sigma_min = |det m|.
  const double f2 = m.squaredNorm();
  const double d = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double disc = std::sqrt(std::max(0.0, f2 * f2 - 4.0 * d * d));
  const double smax = std::sqrt(0.5 * (f2 + disc));
  const double smin = smax > 0.0 ? d / smax : 0.0;
  return {smax, smin};
}

Matrix4C expm(const Matrix4C& a) {
  constexpr int kDegree = 12;
  constexpr double kScaledNorm = 0.25;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kScaledNorm) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kScaledNorm)));
  }
  const Matrix4C scaled = a / std::ldexp(1.0, squarings);

  // Horner evaluation of sum_{j<=12} A^j / j!.
  Matrix4C result = Matrix4C::Identity();
  for (int j = kDegree; j >= 1; --j) {
    result = Matrix4C::Identity() + (scaled * result) / static_cast<double>(j);
  }
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  return result;
}

}  // namespace u22
