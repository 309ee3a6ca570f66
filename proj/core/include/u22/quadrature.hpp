#pragma once

#include <functional>
#include <vector>

namespace u22 {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. The
/// interval with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol |I|). Interior `breakpoints` (known
/// discontinuities) seed the initial partition.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {},
                                    const std::vector<double>& breakpoints = {});

}  // namespace u22
