#include "u22/claims.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "u22/errors.hpp"
#include "u22/extension.hpp"
#include "u22/rank1.hpp"
#include "u22/representation.hpp"
#include "u22/rng.hpp"

namespace u22::report {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double residual_tol(const SuiteConfig& c, double stated) {
  return c.tolerance_override.value_or(stated);
}

// Counts stated for the default group_samples = 1000, scaled with it.
int scaled(const SuiteConfig& c, int stated) {
  return std::max(1, static_cast<int>(static_cast<long long>(stated) * c.group_samples / 1000));
}

std::string describe(const char* what, double x) {
  std::ostringstream os;
  os << what << " = " << x;
  return os.str();
}

double q_distance(const QElement& a, const QElement& b) {
  return std::max((a.s.matrix() - b.s.matrix()).norm(), (a.n.matrix() - b.n.matrix()).norm());
}

double k_invariant_residual(const Matrix4C& k) {
  const Matrix2C alpha = k.block<2, 2>(0, 0);
  const Matrix2C beta = k.block<2, 2>(0, 2);
  const double shape = (k.block<2, 2>(2, 2) - alpha).norm() + (k.block<2, 2>(2, 0) - beta).norm();
  return std::max({(k * k.adjoint() - Matrix4C::Identity()).norm(), shape,
                   (alpha * alpha.adjoint() + beta * beta.adjoint() - Matrix2C::Identity()).norm(),
                   (alpha * beta.adjoint() + beta * alpha.adjoint()).norm()});
}

McConfig mc_config(const SuiteConfig& c, std::uint64_t stream) {
  McConfig mc;
  mc.samples = c.mc_samples;
  mc.seed = mix_seed(c.seed, stream);
  return mc;
}

// ---------------------------------------------------------------------------

std::vector<ClaimRecord> group_membership(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 1));
  const int n = scaled(c, 1000);
  std::vector<U22Element> gs_list;
  double member = 0.0;
  for (int i = 0; i < n; ++i) {
    gs_list.push_back(gs.u22());
    member = std::max(member, is_in_u22(gs_list.back().matrix(), 0.0).max_residual());
  }
  double closure = 0.0;
  for (int i = 0; i < n; ++i) {
    const U22Element& g = gs_list[static_cast<std::size_t>(i)];
    const U22Element& h = gs_list[static_cast<std::size_t>((i + 1) % n)];
    closure = std::max({closure, is_in_u22((g * h).matrix(), 0.0).max_residual(),
                        is_in_u22(g.inverse().matrix(), 0.0).max_residual()});
  }
  return {
      make_claim("c01.membership", "random exponentials of u(2,2) satisfy g sigma g* = sigma",
                 member, Comparison::at_most, residual_tol(c, 1e-9),
                 std::to_string(n) + " elements, max of the four block residuals"),
      make_claim("c01.closure", "products and inverses stay in U(2,2)", closure,
                 Comparison::at_most, residual_tol(c, 1e-9),
                 std::to_string(n) + " products and inverses"),
  };
}

std::vector<ClaimRecord> isomorphism(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 2));
  const int n = scaled(c, 1000);
  double round_trip = 0.0;
  double product = 0.0;
  for (int i = 0; i < n; ++i) {
    const QElement q1 = gs.q();
    const QElement q2 = gs.q();
    const PElement p1 = q_to_p(q1);
    const PElement p2 = q_to_p(q2);
    round_trip = std::max({round_trip, q_distance(p_to_q(p1), q1),
                           q_to_p(p_to_q(p1)).distance(p1)});
    const Matrix4C m = embed_p(p1).matrix() * embed_p(p2).matrix();
    const QElement via_matrix = p_to_q(PElement::from_matrix(m, kChainTol));
    product = std::max(product, q_distance(via_matrix, q_multiply(q1, q2)));
  }
  return {
      make_claim("c02.round-trip", "(s, X) -> (s, X s*) is a bijection P -> S x| N", round_trip,
                 Comparison::at_most, residual_tol(c, 1e-10), std::to_string(n) + " elements"),
      make_claim("c02.product", "P multiplies like S x| N: (s1 s2, n1 + s1 n2 s1*)", product,
                 Comparison::at_most, residual_tol(c, 1e-10),
                 std::to_string(n) + " pairs against the 4x4 matrix product"),
  };
}

std::vector<ClaimRecord> orbits(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 3));
  const int n = scaled(c, 10000);
  double worst = 0.0;
  int mismatches = 0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const SkewHermitian2 m = gs.n();
    const auto label = classify_orbit(m);
    if (!label) continue;
    ++used;
    worst = std::max(worst, orbit_reconstruction_residual(m, *label, orbit_coordinates(m)));
    for (int j = 0; j < 10; ++j) {
      const auto moved = classify_orbit(conjugate_action(gs.s(), m));
      if (!moved || !(*moved == *label)) ++mismatches;
    }
  }
  return {
      make_claim("c03.reconstruction",
                 "open S-orbits on characters: m = s m_k s* with unique s", worst,
                 Comparison::at_most, residual_tol(c, 1e-10),
                 std::to_string(used) + " nondegenerate characters"),
      make_claim("c03.label-invariance", "the orbit label is constant on S-orbits",
                 static_cast<double>(mismatches), Comparison::equal, 0.0,
                 std::to_string(used * 10) + " S-actions"),
  };
}

std::vector<ClaimRecord> measure_laws(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 4));
  const int n = scaled(c, 10000);
  double multiplicativity = 0.0;
  int band_violations = 0;
  const MeasureSpec nu = MeasureSpec::nu();
  for (int i = 0; i < n; ++i) {
    const TriangularS s = gs.s();
    const TriangularS s0 = gs.s();
    const double expected = modulus_pi(s) * modulus_pi(s0);
    multiplicativity =
        std::max(multiplicativity, std::abs(modulus_pi(s * s0) - expected) / expected);
    const double rn = rn_derivative_right(nu, s, s0);
    const RnBand band = nu_rn_band(s0);
    if (rn < band.lower * (1.0 - 1e-12) || rn > band.upper * (1.0 + 1e-12)) ++band_violations;
  }

  // Box B = [1, 2]^2 x [-1, 1]^2 in (r1, r2, Re r, Im r) and its right translate B s0.
  const TriangularS s0 = TriangularS::make(1.5, 0.7, {0.4, -0.3});
  const TriangularS s0_inv = s0.inverse();
  const double a1 = s0.r1();
  const double a2 = s0.r2();
  const Complex cr = s0.r();
  const std::array<double, 4> lo = {a1, a2, -a1 + std::min(cr.real(), 2.0 * cr.real()),
                                    -a1 + std::min(cr.imag(), 2.0 * cr.imag())};
  const std::array<double, 4> hi = {2.0 * a1, 2.0 * a2, a1 + std::max(cr.real(), 2.0 * cr.real()),
                                    a1 + std::max(cr.imag(), 2.0 * cr.imag())};
  const BoxSampler box(lo, hi);
  const auto in_translate = [&](const TriangularS& t) {
    const TriangularS u = t * s0_inv;
    return u.r1() >= 1.0 && u.r1() <= 2.0 && u.r2() >= 1.0 && u.r2() <= 2.0 &&
                   std::abs(u.r().real()) <= 1.0 && std::abs(u.r().imag()) <= 1.0
               ? 1.0
               : 0.0;
  };
  const double box_volume = 4.0;
  const IntegralEstimate leb =
      integrate_mc(in_translate, MeasureSpec::lebesgue(), box, mc_config(c, 41));
  const double leb_z = std::abs(leb.value - modulus_pi(s0) * box_volume) / leb.std_error;
  const IntegralEstimate haar =
      integrate_mc(in_translate, MeasureSpec::haar(), box, mc_config(c, 42));
  const double haar_exact = 1.5 * std::log(2.0);
  const double haar_z = std::abs(haar.value - haar_exact) / haar.std_error;

  return {
      make_claim("c04.modulus-multiplicative", "pi(s s0) = pi(s) pi(s0) for pi(s) = r1^3 r2",
                 multiplicativity, Comparison::at_most, residual_tol(c, 1e-13),
                 std::to_string(n) + " pairs, relative"),
      make_claim("c04.translated-box", "Lebesgue mass of B s0 equals pi(s0) times that of B",
                 leb_z, Comparison::at_most, 3.0,
                 "z-score; estimate " + std::to_string(leb.value) + " vs " +
                     std::to_string(modulus_pi(s0) * box_volume)),
      make_claim("c04.haar-invariance", "pi(s)^-1 ds is right-invariant", haar_z,
                 Comparison::at_most, 3.0,
                 "z-score; estimate " + std::to_string(haar.value) + " vs " +
                     std::to_string(haar_exact)),
      make_claim("c04.nu-band",
                 "d nu(s s0)/d nu(s) lies in [pi(s0)/smax^4, pi(s0)/smin^4] for |s|^-4 ds",
                 static_cast<double>(band_violations), Comparison::equal, 0.0,
                 std::to_string(n) + " samples"),
  };
}

std::vector<ClaimRecord> representation_property(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 5));
  const int pairs = scaled(c, 200);
  const auto points = pointwise_sample_set();
  const GroupFunction f = GroupFunction::vacuum_function();
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const QElement q1 = gs.q();
    const QElement q2 = gs.q();
    const QElement q12 = q_multiply(q1, q2);
    for (const auto& sig : HermitianSignature::all()) {
      const OrbitLabel label(sig);
      const GroupFunction lhs = apply_T(q1, label, apply_T(q2, label, f));
      const GroupFunction rhs = apply_T(q12, label, f);
      for (const auto& s : points) worst = std::max(worst, std::abs(lhs(s) - rhs(s)));
    }
  }
  return {
      make_claim("c05.homomorphism", "T(q1) T(q2) = T(q1 q2) pointwise", worst,
                 Comparison::at_most, residual_tol(c, 1e-11),
                 std::to_string(pairs) + " pairs x " + std::to_string(points.size()) +
                     " points x 4 orbits"),
  };
}

std::vector<ClaimRecord> specialness(const SuiteConfig& c) {
  ProbeConfig probe;
  probe.cutoffs = c.cutoffs;
  probe.mc = mc_config(c, 6);
  MeasureSpec measure = MeasureSpec::nu();
  if (c.truncate_radius > 0.0) measure = measure.truncated(c.truncate_radius);

  const SpecialnessReport report =
      specialness_report(default_specialness_test_set(), c.label, measure, probe);
  int not_convergent = 0;
  std::string kinds;
  for (const auto& e : report.entries) {
    if (e.verdict.classification != Divergence::convergent) ++not_convergent;
    kinds += (kinds.empty() ? "" : "; ") + e.kind + ": " + to_string(e.verdict.classification);
  }
  const DivergenceVerdict& vac = report.vacuum;
  const double slope_sigmas =
      vac.slope_std_error > 0.0 ? vac.slope / vac.slope_std_error : vac.slope > 0.0 ? INFINITY : 0.0;

  ProbeConfig control_probe = probe;
  control_probe.mc.seed = mix_seed(c.seed, 61);
  const SpecialnessReport control = specialness_report(
      default_specialness_test_set(), c.label, MeasureSpec::nu().truncated(1.0), control_probe);
  return {
      make_claim("c06.vacuum-slope", "||f||^2 over |s| > eps grows like log(1/eps)",
                 slope_sigmas, Comparison::greater, kLogSlopeSigmas,
                 "slope / std error; classification " + to_string(vac.classification) +
                     ", slope " + std::to_string(vac.slope)),
      make_claim("c06.vacuum-r-squared", "the growth of ||f||^2 is linear in log(1/eps)",
                 vac.r_squared, Comparison::greater, kLogRSquared, "R^2 of the ladder fit"),
      make_claim("c06.coboundary-convergence", "T(q) f - f is square-integrable for every q",
                 static_cast<double>(not_convergent), Comparison::equal, 0.0,
                 "non-convergent elements of the 8-element set; " + kinds),
      make_claim("c06.specialness", "f lies in Z_nu but not in L^2_nu: the cocycle is nontrivial",
                 report.verdict == SpecialnessVerdict::confirmed ? 1.0 : 0.0, Comparison::equal,
                 1.0, "measure " + measure.name + ": " + to_string(report.verdict)),
      make_claim("c06.truncated-control", "on |s| > 1 the vacuum is square-integrable",
                 control.verdict == SpecialnessVerdict::not_special ? 1.0 : 0.0,
                 Comparison::equal, 1.0, to_string(control.verdict)),
  };
}

std::vector<ClaimRecord> iwasawa(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 7));
  const int n = scaled(c, 1000);
  double reconstruction = 0.0;
  double k_residual = 0.0;
  double uniqueness = 0.0;
  for (int i = 0; i < n; ++i) {
    const U22Element g = gs.u22();
    const IwasawaFactors f = iwasawa_decompose(g);
    reconstruction = std::max(reconstruction, f.residual);
    k_residual = std::max(k_residual, k_invariant_residual(f.k.matrix()));

    const PElement p = gs.p();
    const KElement k = gs.k();
    const IwasawaFactors back = iwasawa_decompose(embed_p(p) * embed_k(k));
    uniqueness = std::max({uniqueness, back.p.distance(p), (back.k.matrix() - k.matrix()).norm()});
  }
  return {
      make_claim("c07.reconstruction", "every g in U(2,2) factors as g = p k", reconstruction,
                 Comparison::at_most, residual_tol(c, 1e-10),
                 std::to_string(n) + " elements, relative"),
      make_claim("c07.k-invariants", "the second factor lies in K", k_residual,
                 Comparison::at_most, residual_tol(c, 1e-10), std::to_string(n) + " elements"),
      make_claim("c07.uniqueness", "the factorization g = p k is unique", uniqueness,
                 Comparison::at_most, residual_tol(c, 1e-10),
                 std::to_string(n) + " products p k decomposed again"),
  };
}

std::vector<ClaimRecord> extension(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 8));
  const int triples = scaled(c, 200);
  const int pairs = scaled(c, 50);
  double law = 0.0;
  double involution = 0.0;
  for (int i = 0; i < triples; ++i) {
    const KElement k1 = gs.k();
    const KElement k2 = gs.k();
    const PElement p = gs.p();
    law = std::max(law, act_k(k1 * k2, p).distance(act_k(k1, act_k(k2, p))));
    involution = std::max(involution, act_sigma_on_basis(act_sigma_on_basis(p)).distance(p));
  }
  const auto points = pointwise_sample_set();
  double cocycle = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const U22Element g1 = gs.u22();
    const U22Element g2 = gs.u22();
    const CocycleVector lhs = extend_cocycle(g1 * g2, c.label);
    const CocycleVector rhs =
        apply_extended(g1, extend_cocycle(g2, c.label)) + extend_cocycle(g1, c.label);
    for (const auto& s : points) cocycle = std::max(cocycle, std::abs(lhs(s) - rhs(s)));
  }
  return {
      make_claim("c08.k-group-law", "T(k1 k2) b(p) = T(k1) T(k2) b(p) on basis labels", law,
                 Comparison::at_most, residual_tol(c, 1e-9), std::to_string(triples) + " triples"),
      make_claim("c08.sigma-involution", "T(sigma)^2 = 1 on basis labels", involution,
                 Comparison::at_most, residual_tol(c, 1e-10),
                 std::to_string(triples) + " elements"),
      make_claim("c08.extended-cocycle", "b(g1 g2) = T(g1) b(g2) + b(g1) on U(2,2)", cocycle,
                 Comparison::at_most, residual_tol(c, 1e-8),
                 std::to_string(pairs) + " pairs x " + std::to_string(points.size()) + " points"),
  };
}

std::vector<ClaimRecord> gram(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 9));
  std::vector<PElement> ps;
  for (int i = 0; i < 6; ++i) ps.push_back(gs.p());
  L2Config l2;
  l2.mc = mc_config(c, 91);
  const GramResult g = gram_matrix(ps, c.label, MeasureSpec::nu(), l2);
  const double ratio = g.min_eigenvalue_std_error > 0.0
                           ? g.min_eigenvalue / g.min_eigenvalue_std_error
                           : (g.min_eigenvalue > 0.0 ? INFINITY : 0.0);
  return {
      make_claim("c09.gram-independence", "the vectors b(p) are linearly independent", ratio,
                 Comparison::greater, 3.0,
                 "smallest eigenvalue / its std error; " + describe("lambda_min", g.min_eigenvalue) +
                     ", " + describe("hermitian residual", g.hermitian_residual)),
  };
}

std::vector<ClaimRecord> generation(const SuiteConfig& c) {
  std::vector<Matrix4C> gens(lie_p_basis().begin(), lie_p_basis().end());
  for (const auto& x : lie_p_basis()) gens.push_back(sigma() * x * sigma());
  const int span = real_rank(gens);
  const int closure = lie_closure_dimension(gens);
  std::vector<Matrix4C> with_center = gens;
  with_center.push_back(kI * Matrix4C::Identity());
  const int closure_center = lie_closure_dimension(with_center);
  (void)c;
  return {
      make_claim("c10.span-dimension", "span of Lie(P) and sigma Lie(P) sigma is u(2,2)",
                 span, Comparison::equal, 16.0, "real rank, threshold 1e-8"),
      make_claim("c10.generated-subalgebra",
                 "Lie(P) and sigma Lie(P) sigma generate su(2,2) (det p = det sigma = 1)",
                 closure, Comparison::equal, 15.0, "dimension of the bracket closure"),
      make_claim("c10.generated-with-center", "adding the center i e4 gives all of u(2,2)",
                 closure_center, Comparison::equal, 16.0, "dimension of the bracket closure"),
  };
}

std::vector<ClaimRecord> rank1_baseline(const SuiteConfig& c) {
  const double a = 1.0;
  const double b = 1.0;
  const rank1::AlmostInvariantReport r = rank1::almost_invariant_check(rank1::left_indicator(0.0), 0.0, a, b);
  const auto rel = [](double x, double exact) { return std::abs(x - exact) / std::abs(exact); };
  const double err = std::max({rel(r.divergence.value, r.ladder_cutoffs.back()),
                               rel(r.character.value, 2.0 * cin(b)),
                               rel(r.translation.value, std::abs(a))});
  const rank1::AlmostInvariantReport control =
      rank1::almost_invariant_check(rank1::gaussian(), 0.0, a, b);
  return {
      make_claim("c11.quadrature-accuracy",
                 "1-d integrals of the rank-1 witness match their closed forms", err,
                 Comparison::at_most, residual_tol(c, 1e-6),
                 "max relative error over I(L), 2 Cin(b) and |a|"),
      make_claim("c11.witness-conditions",
                 "f = 1(z < 0) is an almost invariant vector of the affine group",
                 r.all_hold() ? 1.0 : 0.0, Comparison::equal, 1.0,
                 "support " + rank1::to_string(r.support.verdict) + ", divergence " +
                     rank1::to_string(r.divergence.verdict) + ", character " +
                     rank1::to_string(r.character.verdict) + ", translation " +
                     rank1::to_string(r.translation.verdict)),
      make_claim("c11.gaussian-control", "a Gaussian is square-integrable, so not a witness",
                 control.divergence.verdict == rank1::ConditionVerdict::fails ? 1.0 : 0.0,
                 Comparison::equal, 1.0,
                 "divergence condition " + rank1::to_string(control.divergence.verdict)),
  };
}

std::vector<ClaimRecord> derived_length(const SuiteConfig& c) {
  GroupSampler gs(mix_seed(c.seed, 12));
  const int trials = scaled(c, 100);
  double triple = 0.0;
  double largest_double = 0.0;
  const auto distance_to_e = [](const Matrix4C& m) {
    return (m - Matrix4C::Identity()).norm();
  };
  for (int i = 0; i < trials; ++i) {
    Matrix4C m[8];
    for (auto& x : m) x = embed_p(gs.p()).matrix();
    const Matrix4C d1 = group_commutator(group_commutator(m[0], m[1]), group_commutator(m[2], m[3]));
    const Matrix4C d2 = group_commutator(group_commutator(m[4], m[5]), group_commutator(m[6], m[7]));
    largest_double = std::max({largest_double, distance_to_e(d1), distance_to_e(d2)});
    triple = std::max(triple, distance_to_e(group_commutator(d1, d2)));
  }
  return {
      make_claim("c12.triple-commutator", "P''' = {e}", triple, Comparison::at_most,
                 residual_tol(c, 1e-9), std::to_string(trials) + " random octuples"),
      make_claim("c12.double-commutator", "P'' != {e}", largest_double, Comparison::greater, 1e-2,
                 "largest distance from e"),
  };
}

std::string claim_id(int criterion, const char* name) {
  return (criterion < 10 ? "c0" : "c") + std::to_string(criterion) + "." + name;
}

// Wall-clock budgets stated for the criteria that have one; 0 means none.
double runtime_budget_s(int criterion) {
  switch (criterion) {
    case 1:
    case 2:
      return 5.0;
    case 5:
      return 10.0;
    case 6:
      return 120.0;
    default:
      return 0.0;
  }
}

}  // namespace

double cin(double x) {
  // (-1)^(k+1) x^(2k) / (2k (2k)!), summed until the terms vanish.
  double term = 1.0;  // x^(2k) / (2k)!
  double total = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= x * x / ((2.0 * k - 1.0) * (2.0 * k));
    const double contribution = (k % 2 == 1 ? 1.0 : -1.0) * term / (2.0 * k);
    total += contribution;
    if (std::abs(contribution) <= 1e-18 * std::abs(total)) break;
  }
  return total;
}

std::vector<ClaimRecord> criterion_claims(int criterion, const SuiteConfig& config) {
  config.validate();
  using Runner = std::vector<ClaimRecord> (*)(const SuiteConfig&);
  static constexpr Runner runners[kCriterionCount] = {
      group_membership, isomorphism, orbits,    measure_laws, representation_property,
      specialness,      iwasawa,     extension, gram,         generation,
      rank1_baseline,   derived_length};
  if (criterion < 1 || criterion > kCriterionCount) {
    throw PreconditionFailed("criterion must be in 1.." + std::to_string(kCriterionCount));
  }
  const auto start = Clock::now();
  std::vector<ClaimRecord> records;
  try {
    records = runners[criterion - 1](config);
  } catch (const Error& e) {
    ClaimRecord r;
    r.claim = claim_id(criterion, "error");
    r.anchor = "criterion evaluation";
    r.verdict = Verdict::fail;
    r.value = NAN;
    r.detail = e.what();
    records = {r};
  }
  const double runtime = seconds_since(start);
  for (auto& r : records) r.runtime_s = runtime;
  if (const double budget = runtime_budget_s(criterion); budget > 0.0) {
    ClaimRecord r = make_claim(claim_id(criterion, "runtime"), "runs at desk scale", runtime,
                               Comparison::at_most, budget, "seconds, whole criterion");
    r.runtime_s = runtime;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ClaimRecord> run_claims(const SuiteConfig& config) {
  std::vector<ClaimRecord> all;
  for (int i = 1; i <= kCriterionCount; ++i) {
    auto part = criterion_claims(i, config);
    all.insert(all.end(), part.begin(), part.end());
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const ClaimRecord& a, const ClaimRecord& b) { return a.claim < b.claim; });
  return all;
}

bool all_pass(const std::vector<ClaimRecord>& claims) {
  return std::all_of(claims.begin(), claims.end(),
                     [](const ClaimRecord& c) { return c.verdict == Verdict::pass; });
}

}  // namespace u22::report
