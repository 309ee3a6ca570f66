#include "u22/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "u22/errors.hpp"

namespace u22::report {

namespace {

template <int N>
json matrix_to_json(const Eigen::Matrix<Complex, N, N>& m) {
  json rows = json::array();
  for (int i = 0; i < N; ++i) {
    json row = json::array();
    for (int j = 0; j < N; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

template <int N>
Eigen::Matrix<Complex, N, N> matrix_from_json(const json& j) {
  const std::string shape = std::to_string(N) + "x" + std::to_string(N);
  if (!j.is_array() || j.size() != N) {
    throw PreconditionFailed("expected a " + shape + " matrix of [re, im] pairs");
  }
  Eigen::Matrix<Complex, N, N> m;
  for (int i = 0; i < N; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != N) {
      throw PreconditionFailed("expected a " + shape + " matrix of [re, im] pairs");
    }
    for (int k = 0; k < N; ++k) {
      const json& entry = row[static_cast<std::size_t>(k)];
      if (entry.is_number()) {
        m(i, k) = entry.get<double>();
      } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                 entry[1].is_number()) {
        m(i, k) = {entry[0].get<double>(), entry[1].get<double>()};
      } else {
        throw PreconditionFailed("matrix entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

json tagged(const char* kind, json data) {
  return {{"kind", kind}, {"data", std::move(data)}};
}

// Non-finite values are not representable in JSON.
json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? json("nan") : json(x > 0 ? "inf" : "-inf");
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void sort_by_id(std::vector<ClaimRecord>& claims) {
  std::stable_sort(claims.begin(), claims.end(),
                   [](const ClaimRecord& a, const ClaimRecord& b) { return a.claim < b.claim; });
}

}  // namespace

json to_json(const Matrix2C& m) { return matrix_to_json<2>(m); }
json to_json(const Matrix4C& m) { return matrix_to_json<4>(m); }
Matrix2C matrix2_from_json(const json& j) { return matrix_from_json<2>(j); }
Matrix4C matrix4_from_json(const json& j) { return matrix_from_json<4>(j); }

json to_json(const PElement& p) {
  return tagged("p", {{"s", to_json(p.s().matrix())}, {"X", to_json(p.x())}});
}

json to_json(const KElement& k) { return tagged("k", to_json(k.matrix())); }

json to_json(const U22Element& g) { return tagged("u22", to_json(g.matrix())); }

json to_json(const QElement& q) {
  return tagged("q", {{"s", to_json(q.s.matrix())}, {"n", to_json(q.n.matrix())}});
}

json to_json(const IntegralEstimate& e) {
  return {{"value", number(e.value)},
          {"std_error", number(e.std_error)},
          {"samples", e.sample_count}};
}

json to_json(const DivergenceVerdict& v) {
  json ladder = json::array();
  for (std::size_t i = 0; i < v.ladder.cutoffs.size(); ++i) {
    ladder.push_back({{"cutoff", v.ladder.cutoffs[i]},
                      {"integral", number(v.ladder.cumulative[i].value)},
                      {"std_error", number(v.ladder.cumulative[i].std_error)}});
  }
  return {{"classification", to_string(v.classification)},
          {"slope", number(v.slope)},
          {"slope_std_error", number(v.slope_std_error)},
          {"r_squared", number(v.r_squared)},
          {"first_increment_rate", number(v.first_increment_rate)},
          {"last_increment_rate", number(v.last_increment_rate)},
          {"ladder", std::move(ladder)}};
}

Matrix4C u22_matrix_from_json(const json& j) {
  if (j.is_object()) {
    if (j.value("kind", "") != "u22" || !j.contains("data")) {
      throw PreconditionFailed(R"(expected {"kind": "u22", "data": <4x4 matrix>})");
    }
    return matrix4_from_json(j.at("data"));
  }
  return matrix4_from_json(j);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::at_most:
      return "<=";
    case Comparison::at_least:
      return ">=";
    case Comparison::greater:
      return ">";
    case Comparison::equal:
      return "==";
  }
  return "?";
}

ClaimRecord make_claim(std::string id, std::string anchor, double value, Comparison comparison,
                       double tolerance, std::string detail) {
  ClaimRecord c;
  c.claim = std::move(id);
  c.anchor = std::move(anchor);
  c.value = value;
  c.comparison = comparison;
  c.tolerance = tolerance;
  c.detail = std::move(detail);
  if (!std::isfinite(value)) {
    c.verdict = Verdict::inconclusive;
    return c;
  }
  bool ok = false;
  switch (comparison) {
    case Comparison::at_most:
      ok = value <= tolerance;
      break;
    case Comparison::at_least:
      ok = value >= tolerance;
      break;
    case Comparison::greater:
      ok = value > tolerance;
      break;
    case Comparison::equal:
      ok = value == tolerance;
      break;
  }
  c.verdict = ok ? Verdict::pass : Verdict::fail;
  return c;
}

json to_json(const ClaimRecord& c) {
  return {{"claim", c.claim},
          {"anchor", c.anchor},
          {"verdict", to_string(c.verdict)},
          {"value", number(c.value)},
          {"comparison", to_string(c.comparison)},
          {"tolerance", number(c.tolerance)},
          {"runtime_s", c.runtime_s},
          {"detail", c.detail}};
}

json claims_to_json(std::vector<ClaimRecord> claims) {
  sort_by_id(claims);
  json out = json::array();
  for (const auto& c : claims) out.push_back(to_json(c));
  return out;
}

std::string claims_to_csv(std::vector<ClaimRecord> claims) {
  sort_by_id(claims);
  std::ostringstream os;
  os << "claim,anchor,verdict,value,comparison,tolerance,runtime_s,detail\n";
  for (const auto& c : claims) {
    os << csv_field(c.claim) << ',' << csv_field(c.anchor) << ',' << to_string(c.verdict) << ','
       << format_double(c.value) << ',' << to_string(c.comparison) << ','
       << format_double(c.tolerance) << ',' << format_double(c.runtime_s) << ','
       << csv_field(c.detail) << '\n';
  }
  return os.str();
}

Format parse_format(const std::string& text) {
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  throw PreconditionFailed("unknown format '" + text + "' (expected json or csv)");
}

void SuiteConfig::validate() const {
  if (mc_samples <= 0 || group_samples <= 0) {
    throw PreconditionFailed("sample counts must be positive");
  }
  if (tolerance_override && !(*tolerance_override > 0.0)) {
    throw PreconditionFailed("tolerance override must be positive");
  }
  if (cutoffs.size() < 5) throw PreconditionFailed("cutoff ladder needs at least five points");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0) || (i > 0 && !(cutoffs[i] < cutoffs[i - 1]))) {
      throw PreconditionFailed("cutoff ladder must be positive and strictly decreasing");
    }
  }
  if (!(truncate_radius >= 0.0) || !std::isfinite(truncate_radius)) {
    throw PreconditionFailed("truncation radius must be finite and non-negative");
  }
}

SuiteConfig suite_config_from_json(const json& j, SuiteConfig base) {
  if (!j.is_object()) throw PreconditionFailed("config must be a JSON object");
  try {
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) base.mc_samples = j.at("samples").get<std::int64_t>();
    if (j.contains("group_samples")) base.group_samples = j.at("group_samples").get<int>();
    if (j.contains("tol")) base.tolerance_override = j.at("tol").get<double>();
    if (j.contains("cutoffs")) base.cutoffs = j.at("cutoffs").get<std::vector<double>>();
    if (j.contains("label")) base.label = OrbitLabel::parse(j.at("label").get<std::string>());
    if (j.contains("truncate")) base.truncate_radius = j.at("truncate").get<double>();
    if (j.contains("out")) base.output_path = j.at("out").get<std::string>();
    if (j.contains("format")) base.format = parse_format(j.at("format").get<std::string>());
  } catch (const json::exception& e) {
    throw PreconditionFailed(std::string("invalid config value: ") + e.what());
  }
  return base;
}

}  // namespace u22::report
