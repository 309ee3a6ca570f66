#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "u22/claims.hpp"
#include "u22/errors.hpp"
#include "u22/extension.hpp"
#include "u22/orbit.hpp"
#include "u22/report.hpp"
#include "u22/representation.hpp"
#include "u22/rng.hpp"

namespace u22::cli {

namespace {

using report::json;

// Thrown for bad flags or config values; maps to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Domain failure that already carries a JSON payload for stderr.
struct DomainFailure : std::runtime_error {
  DomainFailure(const std::string& what, json payload)
      : std::runtime_error(what), payload(std::move(payload)) {}
  json payload;
};

/// Flags shared by the suite-style commands.
struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<int> group_samples;
  std::optional<double> tol;
  std::optional<std::string> label;
  std::optional<std::vector<double>> cutoffs;
  std::optional<double> truncate;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> config_path;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--samples", samples, "Monte-Carlo samples per integral");
    app->add_option("--group-samples", group_samples, "Random elements per algebraic claim");
    app->add_option("--tol", tol, "Override every residual tolerance");
    app->add_option("--label", label, "Orbit label: (+,+), (+,-), (-,+), (-,-) or 1..4");
    app->add_option("--cutoffs", cutoffs, "Decreasing epsilon ladder")->delimiter(',');
    app->add_option("--truncate", truncate, "Restrict the measure to |s| > R");
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", out, "Write the report here instead of stdout");
    app->add_option("--config", config_path, "JSON config file; flags override it");
  }

  report::SuiteConfig resolve(report::Format default_format = report::Format::json) const {
    report::SuiteConfig c;
    c.format = default_format;
    try {
      if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw UsageError("cannot read config file " + *config_path);
        c = report::suite_config_from_json(json::parse(in), c);
      }
      if (seed) c.seed = *seed;
      if (samples) c.mc_samples = *samples;
      if (group_samples) c.group_samples = *group_samples;
      if (tol) c.tolerance_override = *tol;
      if (label) c.label = OrbitLabel::parse(*label);
      if (cutoffs) c.cutoffs = *cutoffs;
      if (truncate) c.truncate_radius = *truncate;
      if (format) c.format = report::parse_format(*format);
      if (out) c.output_path = *out;
      c.validate();
    } catch (const json::exception& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    } catch (const PreconditionFailed& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

// Claim reports are indented; element and matrix payloads stay on one line.
std::string render(const json& j) { return j.dump(2) + "\n"; }
std::string render_compact(const json& j) { return j.dump() + "\n"; }

/// A JSON literal, "-" for stdin, or a path to a JSON file.
json read_json_argument(const std::string& arg) {
  try {
    if (arg == "-") return json::parse(std::cin);
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) {
      return json::parse(arg);
    }
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read " + arg);
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("input is not valid JSON: ") + e.what());
  }
}

MeasureSpec measure_named(const std::string& name) {
  if (name == "nu") return MeasureSpec::nu();
  if (name == "haar") return MeasureSpec::haar();
  if (name == "lebesgue") return MeasureSpec::lebesgue();
  throw UsageError("unknown measure " + name);
}

// ---------------------------------------------------------------------------

int cmd_verify(const CommonFlags& flags, const std::vector<int>& criteria, std::ostream& out) {
  const report::SuiteConfig config = flags.resolve();
  std::vector<report::ClaimRecord> claims;
  if (criteria.empty()) {
    claims = report::run_claims(config);
  } else {
    for (int k : criteria) {
      auto part = report::criterion_claims(k, config);
      claims.insert(claims.end(), part.begin(), part.end());
    }
  }
  const bool pass = report::all_pass(claims);
  emit(config.format == report::Format::json ? render(report::claims_to_json(claims))
                                             : report::claims_to_csv(claims),
       config.output_path, out);
  return pass ? kExitPass : kExitFailure;
}

int cmd_decompose(const std::string& input, double tol, const std::string& out_path,
                  std::ostream& out) {
  Matrix4C m;
  try {
    m = report::u22_matrix_from_json(read_json_argument(input));
  } catch (const PreconditionFailed& e) {
    throw UsageError(e.what());
  }
  const double scale = std::max(1.0, m.squaredNorm());
  const U22Membership membership = is_in_u22(m, tol * scale);
  if (!membership.member) {
    throw DomainFailure("NotInGroup",
                        {{"error", "NotInGroup"},
                         {"tolerance", tol * scale},
                         {"residuals",
                          {{"form", membership.form},
                           {"unit_block", membership.unit_block},
                           {"upper_block", membership.upper_block},
                           {"lower_block", membership.lower_block}}}});
  }
  const IwasawaFactors f = iwasawa_decompose(U22Element::make(m, tol), tol);
  emit(render_compact({{"p", report::to_json(f.p)}, {"k", report::to_json(f.k)}, {"residual", f.residual}}),
       out_path, out);
  return kExitPass;
}

int cmd_orbit(const std::string& input, const std::string& out_path, std::ostream& out) {
  SkewHermitian2 m;
  try {
    const Matrix2C raw = report::matrix2_from_json(read_json_argument(input));
    if ((raw + raw.adjoint()).norm() > 1e-12 * std::max(1.0, raw.norm())) {
      throw UsageError("input is not skew-Hermitian");
    }
    m = SkewHermitian2::from_matrix(raw);
  } catch (const PreconditionFailed& e) {
    throw UsageError(e.what());
  }
  const auto label = classify_orbit(m);
  if (!label) {
    throw DomainFailure("Degenerate", {{"error", "Degenerate"},
                                       {"detail", "character lies on a degenerate orbit"}});
  }
  const TriangularS s = orbit_coordinates(m);
  emit(render_compact({{"label", label->name()},
               {"index", label->index()},
               {"s", report::to_json(s.matrix())},
               {"r1", s.r1()},
               {"r2", s.r2()},
               {"r", {s.r().real(), s.r().imag()}},
               {"residual", orbit_reconstruction_residual(m, *label, s)}}),
       out_path, out);
  return kExitPass;
}

int cmd_measure_probe(const CommonFlags& flags, const std::string& function, int element,
                      const std::string& measure_name, std::ostream& out) {
  const report::SuiteConfig config = flags.resolve();
  MeasureSpec measure = measure_named(measure_name);
  if (config.truncate_radius > 0.0) measure = measure.truncated(config.truncate_radius);
  ProbeConfig probe;
  probe.cutoffs = config.cutoffs;
  probe.mc.samples = config.mc_samples;
  probe.mc.seed = config.seed;

  RealIntegrand integrand;
  json subject = {{"function", function}, {"measure", measure.name}};
  if (function == "vacuum") {
    integrand = [](const TriangularS& s) { return std::exp(-norm_s(s)); };
  } else if (function == "coboundary") {
    const auto tests = default_specialness_test_set();
    if (element < 0 || element >= static_cast<int>(tests.size())) {
      throw UsageError("--element must be in 0.." + std::to_string(tests.size() - 1));
    }
    const QElement q = tests[static_cast<std::size_t>(element)];
    const OrbitLabel label = config.label;
    integrand = [q, label](const TriangularS& s) {
      return std::norm(basis_cocycle_value(q, label, s));
    };
    subject["element"] = report::to_json(q);
    subject["label"] = label.name();
  } else {
    throw UsageError("unknown function " + function + " (expected vacuum or coboundary)");
  }
  const DivergenceVerdict v = divergence_probe(integrand, measure, probe);
  if (config.format == report::Format::json) {
    json j = report::to_json(v);
    j["subject"] = subject;
    emit(render_compact(j), config.output_path, out);
  } else {
    std::ostringstream os;
    os << "cutoff,integral,std_error\n";
    for (std::size_t i = 0; i < v.ladder.cutoffs.size(); ++i) {
      os << v.ladder.cutoffs[i] << ',' << v.ladder.cumulative[i].value << ','
         << v.ladder.cumulative[i].std_error << '\n';
    }
    os << "# classification," << to_string(v.classification) << '\n';
    emit(os.str(), config.output_path, out);
  }
  return kExitPass;
}

int cmd_gram(const CommonFlags& flags, int count, std::ostream& out) {
  const report::SuiteConfig config = flags.resolve();
  if (count < 1) throw UsageError("--count must be positive");
  GroupSampler gs(mix_seed(config.seed, 9));
  std::vector<PElement> ps;
  for (int i = 0; i < count; ++i) ps.push_back(gs.p());
  L2Config l2;
  l2.mc.samples = config.mc_samples;
  l2.mc.seed = mix_seed(config.seed, 91);
  const GramResult g = gram_matrix(ps, config.label, MeasureSpec::nu(), l2);

  if (config.format == report::Format::json) {
    json elements = json::array();
    for (const auto& p : ps) elements.push_back(report::to_json(p));
    json matrix = json::array();
    json errors = json::array();
    for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
      json row = json::array();
      json erow = json::array();
      for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) {
        row.push_back({g.matrix(i, j).real(), g.matrix(i, j).imag()});
        erow.push_back(g.std_error(i, j));
      }
      matrix.push_back(row);
      errors.push_back(erow);
    }
    emit(render_compact({{"label", config.label.name()},
                 {"elements", elements},
                 {"matrix", matrix},
                 {"std_error", errors},
                 {"eigenvalues", std::vector<double>(g.eigenvalues.data(),
                                                     g.eigenvalues.data() + g.eigenvalues.size())},
                 {"min_eigenvalue", g.min_eigenvalue},
                 {"min_eigenvalue_std_error", g.min_eigenvalue_std_error},
                 {"hermitian_residual", g.hermitian_residual}}),
         config.output_path, out);
  } else {
    std::ostringstream os;
    os << "i,j,re,im,std_error\n";
    for (Eigen::Index i = 0; i < g.matrix.rows(); ++i) {
      for (Eigen::Index j = 0; j < g.matrix.cols(); ++j) {
        os << i << ',' << j << ',' << g.matrix(i, j).real() << ',' << g.matrix(i, j).imag() << ','
           << g.std_error(i, j) << '\n';
      }
    }
    emit(os.str(), config.output_path, out);
  }
  return kExitPass;
}

int cmd_unboundedness(const CommonFlags& flags, const std::vector<double>& scales,
                      std::ostream& out) {
  const report::SuiteConfig config = flags.resolve(report::Format::csv);
  L2Config l2;
  l2.mc.samples = config.mc_samples;
  l2.mc.seed = config.seed;
  std::vector<UnboundednessRow> rows;
  try {
    rows = unboundedness_experiment(scales, config.label, MeasureSpec::nu(), l2);
  } catch (const PreconditionFailed& e) {
    throw UsageError(e.what());
  }
  if (config.format == report::Format::csv) {
    std::ostringstream os;
    os << std::setprecision(10) << "s_norm,ratio,std_error\n";
    for (const auto& r : rows) os << r.s_norm << ',' << r.ratio << ',' << r.std_error << '\n';
    emit(os.str(), config.output_path, out);
  } else {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{"s_norm", r.s_norm}, {"ratio", r.ratio}, {"std_error", r.std_error}});
    }
    emit(render(j), config.output_path, out);
  }
  return kExitPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for U(2,2), its Iwasawa subgroup and a special cocycle",
               "u22lab"};
  app.require_subcommand(1);

  CommonFlags verify_flags;
  std::vector<int> criteria;
  auto* verify = app.add_subcommand("verify", "Run the claim battery and write a report");
  verify_flags.attach(verify);
  verify->add_option("--criterion", criteria, "Run only these criteria (1..12)")
      ->check(CLI::Range(1, report::kCriterionCount));

  std::string decompose_input;
  double decompose_tol = kChainTol;
  std::string decompose_out;
  auto* decompose = app.add_subcommand("decompose", "Iwasawa factors g = p k of a U(2,2) matrix");
  decompose->add_option("matrix", decompose_input, "JSON matrix, JSON file, or - for stdin")
      ->required();
  decompose->add_option("--tol", decompose_tol, "Membership and reconstruction tolerance")
      ->check(CLI::PositiveNumber);
  decompose->add_option("--out", decompose_out, "Write the result here instead of stdout");

  std::string orbit_input;
  std::string orbit_out;
  auto* orbit = app.add_subcommand("orbit", "Orbit label and S-coordinates of a character");
  orbit->add_option("matrix", orbit_input, "JSON 2x2 skew-Hermitian matrix, file, or -")
      ->required();
  orbit->add_option("--out", orbit_out, "Write the result here instead of stdout");

  CommonFlags probe_flags;
  std::string probe_function = "vacuum";
  int probe_element = 0;
  std::string probe_measure = "nu";
  auto* probe = app.add_subcommand("measure-probe", "Classify the growth of a norm integral");
  probe_flags.attach(probe);
  probe->add_option("--function", probe_function, "vacuum or coboundary")
      ->check(CLI::IsMember({"vacuum", "coboundary"}));
  probe->add_option("--element", probe_element, "Index into the default coboundary test set");
  probe->add_option("--measure", probe_measure, "nu, haar or lebesgue")
      ->check(CLI::IsMember({"nu", "haar", "lebesgue"}));

  CommonFlags gram_flags;
  int gram_count = 6;
  auto* gram = app.add_subcommand("gram", "Gram matrix of random cocycle vectors b(p)");
  gram_flags.attach(gram);
  gram->add_option("--count", gram_count, "Number of random P elements");

  CommonFlags unbounded_flags;
  std::vector<double> scales = {2.0, 4.0, 8.0, 16.0, 32.0};
  auto* unbounded = app.add_subcommand("unboundedness-experiment",
                                       "Ratios ||b(p^)|| / ||b(p)|| along p = diag(t, 1)");
  unbounded_flags.attach(unbounded);
  unbounded->add_option("--scales", scales, "Values of t")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "u22lab: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(verify_flags, criteria, out);
    if (*decompose) return cmd_decompose(decompose_input, decompose_tol, decompose_out, out);
    if (*orbit) return cmd_orbit(orbit_input, orbit_out, out);
    if (*probe) return cmd_measure_probe(probe_flags, probe_function, probe_element, probe_measure, out);
    if (*gram) return cmd_gram(gram_flags, gram_count, out);
    if (*unbounded) return cmd_unboundedness(unbounded_flags, scales, out);
  } catch (const UsageError& e) {
    err << "u22lab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainFailure& e) {
    err << e.payload.dump(2) << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    err << "u22lab: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace u22::cli
