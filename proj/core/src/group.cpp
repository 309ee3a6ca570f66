#include "u22/group.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "u22/errors.hpp"

namespace u22 {

const Matrix4C& sigma() {
  static const Matrix4C s = [] {
    Matrix4C m = Matrix4C::Zero();
    m(0, 2) = m(1, 3) = m(2, 0) = m(3, 1) = 1.0;
    return m;
  }();
  return s;
}

// ---------------------------------------------------------------------------
// TriangularS

TriangularS TriangularS::make(double r1, double r2, Complex r) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2) ||
      !std::isfinite(r.real()) || !std::isfinite(r.imag())) {
    throw InvariantViolation("triangular element needs finite r1 > 0, r2 > 0 (got " +
                             std::to_string(r1) + ", " + std::to_string(r2) + ")");
  }
  return TriangularS(r1, r2, r);
}

TriangularS TriangularS::from_matrix(const Matrix2C& m, double tol) {
  const double scale = std::max(1.0, m.norm());
  const double defect = std::abs(m(0, 1)) + std::abs(m(0, 0).imag()) + std::abs(m(1, 1).imag());
  if (defect > tol * scale) {
    throw InvariantViolation("matrix is not lower triangular with real diagonal");
  }
  return make(m(0, 0).real(), m(1, 1).real(), m(1, 0));
}

Matrix2C TriangularS::matrix() const {
  Matrix2C m;
  m << r1_, 0.0, r_, r2_;
  return m;
}

TriangularS TriangularS::inverse() const {
  return TriangularS(1.0 / r1_, 1.0 / r2_, -r_ / (r1_ * r2_));
}

TriangularS TriangularS::scaled(double c) const {
  return make(c * r1_, c * r2_, c * r_);
}

TriangularS operator*(const TriangularS& a, const TriangularS& b) {
  return TriangularS(a.r1_ * b.r1_, a.r2_ * b.r2_, a.r_ * b.r1_ + a.r2_ * b.r_);
}

// ---------------------------------------------------------------------------
// SkewHermitian2

Matrix2C SkewHermitian2::matrix() const {
  Matrix2C m;
  m << Complex(0.0, a), z, -std::conj(z), Complex(0.0, b);
  return m;
}

SkewHermitian2 SkewHermitian2::from_matrix(const Matrix2C& m) {
  return {m(0, 0).imag(), m(1, 1).imag(), 0.5 * (m(0, 1) - std::conj(m(1, 0)))};
}

SkewHermitian2 conjugate_action(const TriangularS& s, const SkewHermitian2& n) {
  const Matrix2C sm = s.matrix();
  return SkewHermitian2::from_matrix(sm * n.matrix() * sm.adjoint());
}

// ---------------------------------------------------------------------------
// PElement

PElement PElement::make(const TriangularS& s, const Matrix2C& x, double tol) {
  PElement p(s, x);
  const double scale = std::max(1.0, s.matrix().norm() * x.norm());
  const double residual = p.skew_residual();
  if (!(residual <= tol * scale)) {
    throw InvariantViolation("relative skew-Hermiticity residual " + std::to_string(residual) +
                             " exceeds tolerance");
  }
  return p;
}

PElement PElement::from_matrix(const Matrix4C& m, double tol) {
  const double scale = std::max(1.0, m.norm());
  if (block(m, 0, 1).norm() > tol * scale) {
    throw InvariantViolation("upper-right block of a P-element must vanish");
  }
  const TriangularS s = TriangularS::from_matrix(block(m, 1, 1), tol);
  const Matrix2C expected_top = s.inverse().matrix().adjoint();
  if ((block(m, 0, 0) - expected_top).norm() > tol * scale) {
    throw InvariantViolation("upper-left block of a P-element must equal s*^-1");
  }
  return make(s, block(m, 1, 0), tol);
}

double PElement::skew_residual() const {
  const Matrix2C sm = s_.matrix();
  return (sm * x_.adjoint() + x_ * sm.adjoint()).norm();
}

Matrix4C PElement::matrix() const {
  return from_blocks(s_.inverse().matrix().adjoint(), Matrix2C::Zero(), x_, s_.matrix());
}

PElement PElement::inverse() const {
  const TriangularS si = s_.inverse();
  return PElement(si, -si.matrix() * x_ * s_.matrix().adjoint());
}

double PElement::distance(const PElement& other) const {
  return std::max((s_.matrix() - other.s_.matrix()).norm(), (x_ - other.x_).norm());
}

PElement operator*(const PElement& a, const PElement& b) {
  const Matrix2C b_top = b.s_.inverse().matrix().adjoint();
  return PElement(a.s_ * b.s_, a.x_ * b_top + a.s_.matrix() * b.x_);
}

// ---------------------------------------------------------------------------
// Q = S x| N

QElement q_multiply(const QElement& a, const QElement& b) {
  return {a.s * b.s, a.n + conjugate_action(a.s, b.n)};
}

QElement q_inverse(const QElement& q) {
  const TriangularS si = q.s.inverse();
  return {si, -1.0 * conjugate_action(si, q.n)};
}

QElement p_to_q(const PElement& p) {
  return {p.s(), SkewHermitian2::from_matrix(p.x() * p.s().matrix().adjoint())};
}

PElement q_to_p(const QElement& q) {
  const Matrix2C x = q.n.matrix() * q.s.inverse().matrix().adjoint();
  return PElement::make(q.s, x, kProductTol);
}

// ---------------------------------------------------------------------------
// K

KElement KElement::make(const Matrix4C& m, double tol) {
  const Matrix2C alpha = block(m, 0, 0);
  const Matrix2C beta = block(m, 0, 1);
  const double unitary = (m * m.adjoint() - Matrix4C::Identity()).norm();
  const double shape = (block(m, 1, 1) - alpha).norm() + (block(m, 1, 0) - beta).norm();
  const double norm_rel =
      (alpha * alpha.adjoint() + beta * beta.adjoint() - Matrix2C::Identity()).norm();
  const double cross = (alpha * beta.adjoint() + beta * alpha.adjoint()).norm();
  if (!(unitary <= tol) || !(shape <= tol) || !(norm_rel <= tol) || !(cross <= tol)) {
    throw InvariantViolation("not an element of K (unitary " + std::to_string(unitary) +
                             ", shape " + std::to_string(shape) + ")");
  }
  return KElement(m);
}

// ---------------------------------------------------------------------------
// U(2,2)

double U22Membership::max_residual() const {
  return std::max({form, unit_block, upper_block, lower_block});
}

U22Membership is_in_u22(const Matrix4C& g, double tol) {
  const Matrix2C g11 = block(g, 0, 0);
  const Matrix2C g12 = block(g, 0, 1);
  const Matrix2C g21 = block(g, 1, 0);
  const Matrix2C g22 = block(g, 1, 1);
  U22Membership r;
  r.form = (g * sigma() * g.adjoint() - sigma()).norm();
  r.unit_block = (g12 * g21.adjoint() + g11 * g22.adjoint() - Matrix2C::Identity()).norm();
  r.upper_block = (g11 * g12.adjoint() + g12 * g11.adjoint()).norm();
  r.lower_block = (g22 * g21.adjoint() + g21 * g22.adjoint()).norm();
  r.member = r.max_residual() <= tol;
  return r;
}

U22Element U22Element::make(const Matrix4C& m, double tol) {
  const double scale = std::max(1.0, m.squaredNorm());
  const U22Membership r = is_in_u22(m, tol * scale);
  if (!r.member) {
    throw InvariantViolation("matrix is not in U(2,2): residual " +
                             std::to_string(r.max_residual()));
  }
  return U22Element(m);
}

U22Element U22Element::inverse() const {
  return U22Element(sigma() * m_.adjoint() * sigma());
}

U22Element embed_n(const SkewHermitian2& n) {
  return U22Element::make(
      from_blocks(Matrix2C::Identity(), Matrix2C::Zero(), n.matrix(), Matrix2C::Identity()),
      kConstructionTol);
}

U22Element embed_s(const TriangularS& s) {
  return U22Element::make(from_blocks(s.inverse().matrix().adjoint(), Matrix2C::Zero(),
                                      Matrix2C::Zero(), s.matrix()),
                          kConstructionTol);
}

U22Element embed_p(const PElement& p) {
  const double scale = std::max(1.0, p.s().matrix().norm() * p.x().norm());
  if (p.skew_residual() > kConstructionTol * scale) {
    throw InvariantViolation("P-element violates relative skew-Hermiticity");
  }
  return U22Element::make(p.matrix(), kConstructionTol);
}

U22Element embed_k(const KElement& k) {
  return U22Element::make(k.matrix(), kConstructionTol);
}

// ---------------------------------------------------------------------------
// Factorisations

PElement structured_p_factor(const Matrix4C& m, double tol) {
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > tol * scale) {
    throw NotFactorizable("matrix is not Hermitian");
  }
  const Matrix4C h = 0.5 * (m + m.adjoint());
  if (Eigen::LLT<Matrix4C>(h).info() != Eigen::Success) {
    throw NotFactorizable("matrix is not positive definite");
  }
  const double form = (h * sigma() * h - sigma()).norm();
  if (form > tol * scale * scale) {
    throw NotFactorizable("M sigma M = sigma violated: residual " + std::to_string(form));
  }
  Matrix2C m11_inv = block(h, 0, 0).inverse();
  m11_inv = 0.5 * (m11_inv + m11_inv.adjoint()).eval();
  try {
    const Matrix2C s = cholesky_lower(m11_inv);
    const Matrix2C x = block(h, 1, 0) * s;
    return PElement::make(TriangularS::from_matrix(s), x, tol);
  } catch (const Error& e) {
    throw NotFactorizable(std::string("structured factor failed: ") + e.what());
  }
}

namespace {

using Row4 = Eigen::Matrix<Complex, 1, 4>;

// Orthogonalises `v` against the unit row `w` (two passes); returns the coefficient.
Complex project_out(Row4& v, const Row4& w) {
  Complex c = (v * w.adjoint())(0, 0);
  v -= c * w;
  const Complex again = (v * w.adjoint())(0, 0);
  v -= again * w;
  return c + again;
}

}  // namespace

// The top block row of p k is s*^-1 [alpha beta], an upper-triangular factor
// times orthonormal rows; factoring it directly avoids squaring the
// conditioning through g g*.
IwasawaFactors iwasawa_decompose(const U22Element& g, double tol) {
  const Matrix4C& gm = g.matrix();
  const Row4 top0 = gm.row(0);
  const Row4 top1 = gm.row(1);
  const double u11 = top1.norm();
  if (!(u11 > 0.0) || !std::isfinite(u11)) {
    throw DecompositionFailed("Iwasawa decomposition: degenerate top block row");
  }
  const Row4 w1 = top1 / u11;
  Row4 v0 = top0;
  const Complex u01 = project_out(v0, w1);
  const double u00 = v0.norm();
  if (!(u00 > 0.0) || !std::isfinite(u00)) {
    throw DecompositionFailed("Iwasawa decomposition: degenerate top block row");
  }
  const Row4 w0 = v0 / u00;

  // U = s*^-1 = [[u00, u01], [0, u11]], so s = (U^-1)*.
  // + 0 maps -0 to +0.
  const Complex r = -std::conj(u01) / (u00 * u11) + Complex(0.0, 0.0);
  Matrix2C alpha;
  Matrix2C beta;
  alpha << w0.head<2>(), w1.head<2>();
  beta << w0.tail<2>(), w1.tail<2>();
  Matrix4C k;
  k << alpha, beta, beta, alpha;

  try {
    const TriangularS s = TriangularS::make(1.0 / u00, 1.0 / u11, r);
    const Matrix2C x = gm.block<2, 2>(2, 0) * alpha.adjoint() + gm.block<2, 2>(2, 2) * beta.adjoint();
    const PElement p = PElement::make(s, x, tol);
    const double residual = (p.matrix() * k - gm).norm() / std::max(1.0, gm.norm());
    if (!(residual <= tol)) {
      throw DecompositionFailed("Iwasawa reconstruction residual " + std::to_string(residual));
    }
    return {p, KElement::make(k, tol), residual};
  } catch (const DecompositionFailed&) {
    throw;
  } catch (const Error& e) {
    throw DecompositionFailed(std::string("Iwasawa decomposition failed: ") + e.what());
  }
}

PElement sigma_hat(const PElement& p) {
  const Matrix4C pm = p.matrix();
  return structured_p_factor(sigma() * pm * pm.adjoint() * sigma());
}

// ---------------------------------------------------------------------------
// Lie algebra

namespace {

Matrix2C unit(int i, int j, Complex v = 1.0) {
  Matrix2C m = Matrix2C::Zero();
  m(i, j) = v;
  return m;
}

Eigen::Matrix<double, 32, 1> realify(const Matrix4C& m) {
  Eigen::Matrix<double, 32, 1> v;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      v(4 * j + i) = m(i, j).real();
      v(16 + 4 * j + i) = m(i, j).imag();
    }
  }
  return v;
}

double real_inner(const Matrix4C& a, const Matrix4C& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace

const std::array<Matrix4C, 8>& lie_p_basis() {
  static const std::array<Matrix4C, 8> basis = [] {
    const Matrix2C z = Matrix2C::Zero();
    const std::array<Matrix2C, 4> s_dirs = {unit(0, 0), unit(1, 1), unit(1, 0), unit(1, 0, kI)};
    const std::array<Matrix2C, 4> n_dirs = {
        SkewHermitian2{1.0, 0.0, 0.0}.matrix(), SkewHermitian2{0.0, 1.0, 0.0}.matrix(),
        SkewHermitian2{0.0, 0.0, 1.0}.matrix(), SkewHermitian2{0.0, 0.0, kI}.matrix()};
    std::array<Matrix4C, 8> out;
    for (int i = 0; i < 4; ++i) {
      out[i] = from_blocks(-s_dirs[i].adjoint(), z, z, s_dirs[i]);
      out[4 + i] = from_blocks(z, z, n_dirs[i], z);
    }
    return out;
  }();
  return basis;
}

const std::array<Matrix4C, 8>& lie_k_basis() {
  static const std::array<Matrix4C, 8> basis = [] {
    const Matrix2C z = Matrix2C::Zero();
    const std::array<Matrix2C, 4> skew = {
        SkewHermitian2{1.0, 0.0, 0.0}.matrix(), SkewHermitian2{0.0, 1.0, 0.0}.matrix(),
        SkewHermitian2{0.0, 0.0, 1.0}.matrix(), SkewHermitian2{0.0, 0.0, kI}.matrix()};
    std::array<Matrix4C, 8> out;
    for (int i = 0; i < 4; ++i) {
      out[i] = from_blocks(skew[i], z, z, skew[i]);
      out[4 + i] = from_blocks(z, skew[i], skew[i], z);
    }
    return out;
  }();
  return basis;
}

const std::array<Matrix4C, 16>& lie_algebra_basis() {
  static const std::array<Matrix4C, 16> basis = [] {
    std::array<Matrix4C, 16> out;
    std::copy(lie_p_basis().begin(), lie_p_basis().end(), out.begin());
    std::copy(lie_k_basis().begin(), lie_k_basis().end(), out.begin() + 8);
    return out;
  }();
  return basis;
}

double lie_algebra_defect(const Matrix4C& xi) {
  return (xi * sigma() + sigma() * xi.adjoint()).norm();
}

int real_rank(std::span<const Matrix4C> elements, double threshold) {
  if (elements.empty()) return 0;
  Eigen::MatrixXd columns(32, static_cast<Eigen::Index>(elements.size()));
  for (std::size_t j = 0; j < elements.size(); ++j) {
    const auto v = realify(elements[j]);
    const double n = v.norm();
    columns.col(static_cast<Eigen::Index>(j)) = n > 0.0 ? (v / n).eval() : v;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns);
  const auto& sv = svd.singularValues();
  return static_cast<int>((sv.array() > threshold).count());
}

int lie_closure_dimension(std::span<const Matrix4C> generators, double threshold) {
  std::vector<Matrix4C> basis;
  auto absorb = [&](const Matrix4C& x) {
    const double n0 = x.norm();
    if (n0 == 0.0) return false;
    Matrix4C r = x / n0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) r -= real_inner(b, r) * b;
    }
    const double n = r.norm();
    if (n <= threshold) return false;
    basis.push_back(r / n);
    return true;
  };
  for (const auto& g : generators) absorb(g);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Matrix4C bracket = basis[i] * basis[j] - basis[j] * basis[i];
      absorb(bracket);
    }
  }
  return static_cast<int>(basis.size());
}

Matrix4C group_commutator(const Matrix4C& a, const Matrix4C& b) {
  const Matrix4C a_inv = sigma() * a.adjoint() * sigma();
  const Matrix4C b_inv = sigma() * b.adjoint() * sigma();
  return a * b * a_inv * b_inv;
}

// ---------------------------------------------------------------------------
// Sampling

Matrix4C GroupSampler::lie_element(std::span<const Matrix4C> basis, double max_norm) {
  std::normal_distribution<double> gauss;
  Matrix4C xi = Matrix4C::Zero();
  for (const auto& b : basis) xi += gauss(engine_) * b;
  const double n = xi.norm();
  const double target = std::uniform_real_distribution<double>(0.0, max_norm)(engine_);
  return n > 0.0 ? (xi * (target / n)).eval() : xi;
}

U22Element GroupSampler::u22() {
  return U22Element::make(expm(lie_element(lie_algebra_basis(), 2.0)), kProductTol);
}

TriangularS GroupSampler::s() {
  std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
  std::normal_distribution<double> gauss;
  const double r1 = std::exp(log_scale(engine_));
  const double r2 = std::exp(log_scale(engine_));
  const double re = gauss(engine_);
  const double im = gauss(engine_);
  return TriangularS::make(r1, r2, {re, im});
}

SkewHermitian2 GroupSampler::n() {
  std::normal_distribution<double> gauss;
  const double a = gauss(engine_);
  const double b = gauss(engine_);
  const double re = gauss(engine_);
  const double im = gauss(engine_);
  return {a, b, {re, im}};
}

KElement GroupSampler::k() {
  return KElement::make(expm(lie_element(lie_k_basis(), 2.0)), kProductTol);
}

PElement GroupSampler::p() {
  return q_to_p(q());
}

U22Element random_u22(std::uint64_t seed) { return GroupSampler(seed).u22(); }
TriangularS random_s(std::uint64_t seed) { return GroupSampler(seed).s(); }
SkewHermitian2 random_n(std::uint64_t seed) { return GroupSampler(seed).n(); }
KElement random_k(std::uint64_t seed) { return GroupSampler(seed).k(); }

}  // namespace u22
