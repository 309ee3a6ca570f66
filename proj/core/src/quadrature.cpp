#include "u22/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace u22 {

namespace {

// Kronrod abscissae; odd indices are the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
  }
  evals += 15;
  kronrod *= half;
  gauss *= half;
  // Plain |K - G| estimate, no QUADPACK rescaling.
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options,
                                    const std::vector<double>& breakpoints) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  std::vector<double> nodes{lo};
  for (double p : breakpoints) {
    if (p > lo && p < hi) nodes.push_back(p);
  }
  nodes.push_back(hi);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::priority_queue<Panel> panels;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Panel p = kronrod15(f, nodes[i], nodes[i + 1], out.evaluations);
    value += p.value;
    error += p.error;
    panels.push(p);
  }

  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(value)) &&
         static_cast<int>(panels.size()) < options.max_intervals) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // panel below resolution
    panels.pop();
    const Panel left = kronrod15(f, worst.a, mid, out.evaluations);
    const Panel right = kronrod15(f, mid, worst.b, out.evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum to shed the drift of the incremental updates.
  value = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  out.value = sign * value;
  out.abs_error = error;
  out.converged = error <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
  return out;
}

}  // namespace u22
