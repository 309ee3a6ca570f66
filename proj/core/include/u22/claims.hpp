#pragma once

#include <vector>

#include "u22/report.hpp"

namespace u22::report {

inline constexpr int kCriterionCount = 12;

/// Records for one acceptance criterion, numbered 1..12:
///   1 group membership and closure      7 Iwasawa decomposition
///   2 P = S x| N isomorphism            8 extension to U(2,2)
///   3 orbit coordinates                 9 Gram matrix of cocycle vectors
///   4 measure laws                     10 infinitesimal generation by P and sigma
///   5 representation property          11 rank-1 almost-invariant vector
///   6 specialness of the vacuum        12 derived length of P
/// Throws PreconditionFailed for an unknown criterion or an invalid config.
std::vector<ClaimRecord> criterion_claims(int criterion, const SuiteConfig& config);

/// Every criterion's records, sorted by claim id.
std::vector<ClaimRecord> run_claims(const SuiteConfig& config);

bool all_pass(const std::vector<ClaimRecord>& claims);

/// Cin(x) = integral over [0, x] of (1 - cos t) / t, by its power series.
double cin(double x);

}  // namespace u22::report
