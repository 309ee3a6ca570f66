#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "u22/group.hpp"
#include "u22/measure.hpp"
#include "u22/orbit.hpp"

namespace u22::report {

using nlohmann::json;

// Matrices are nested arrays of [re, im] pairs, row by row.
json to_json(const Matrix2C& m);
json to_json(const Matrix4C& m);
/// Throws PreconditionFailed on a malformed or wrongly sized array.
Matrix2C matrix2_from_json(const json& j);
Matrix4C matrix4_from_json(const json& j);

// Elements are tagged {"kind": "p" | "k" | "u22" | "q", "data": ...}.
json to_json(const PElement& p);
json to_json(const KElement& k);
json to_json(const U22Element& g);
json to_json(const QElement& q);

json to_json(const IntegralEstimate& e);
json to_json(const DivergenceVerdict& v);

/// Accepts a bare 4x4 matrix or a tagged {"kind": "u22", "data": ...} value.
Matrix4C u22_matrix_from_json(const json& j);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

/// How the measured value is compared with the tolerance.
enum class Comparison { at_most, at_least, greater, equal };
std::string to_string(Comparison c);

struct ClaimRecord {
  std::string claim;   // stable id; reports are sorted by it
  std::string anchor;  // the mathematical statement being checked
  Verdict verdict = Verdict::inconclusive;
  double value = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::at_most;
  double runtime_s = 0.0;
  std::string detail;
};

/// Record whose verdict is value (comparison) tolerance, or inconclusive
/// when the value is not finite.
ClaimRecord make_claim(std::string id, std::string anchor, double value, Comparison comparison,
                       double tolerance, std::string detail = {});

json to_json(const ClaimRecord& c);
/// Array of records sorted by claim id.
json claims_to_json(std::vector<ClaimRecord> claims);
/// Header plus one row per record, sorted by claim id.
std::string claims_to_csv(std::vector<ClaimRecord> claims);

enum class Format { json, csv };
Format parse_format(const std::string& text);

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::int64_t mc_samples = 1'000'000;  // per Monte-Carlo integral
  int group_samples = 1000;             // random elements per algebraic claim
  /// Replaces the tolerance of every residual-type claim when set.
  std::optional<double> tolerance_override;
  std::vector<double> cutoffs = ProbeConfig{}.cutoffs;
  OrbitLabel label = OrbitLabel::standard();
  /// Restricts the specialness measure to |s| > truncate_radius when positive.
  double truncate_radius = 0.0;
  std::string output_path;
  Format format = Format::json;

  /// Throws PreconditionFailed unless counts and tolerances are positive and
  /// the ladder is strictly decreasing with at least five points.
  void validate() const;
};

/// Reads the keys seed, samples, group_samples, tol, cutoffs, label, truncate,
/// out and format; missing keys keep `base`.
SuiteConfig suite_config_from_json(const json& j, SuiteConfig base = {});

}  // namespace u22::report
