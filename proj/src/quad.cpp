#include "lagvac/quad.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>

namespace lagvac {

namespace {

// 15-point Kronrod nodes/weights on [-1,1], with the embedded 7-point
// Gauss rule on the odd entries.
constexpr std::array<double, 15> kK15Nodes = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr std::array<double, 15> kK15Weights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

constexpr std::array<double, 7> kG7Weights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Panel {
  double value;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::array<double, 15> fv{};
  double kronrod = 0.0;
  double gauss = 0.0;
  double resabs = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double x = mid + half * kK15Nodes[i];
    double fx = f(x);
    if (!std::isfinite(fx)) fx = 0.0;  // isolated non-finite point
    fv[i] = fx;
    kronrod += kK15Weights[i] * fx;
    resabs += kK15Weights[i] * std::abs(fx);
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * fx;
  }
  // QUADPACK error scaling: resasc measures deviation from the mean and
  // dominates the estimate on rough (e.g. singular) panels.
  const double mean = kronrod * 0.5;
  double resasc = 0.0;
  for (int i = 0; i < 15; ++i)
    resasc += kK15Weights[i] * std::abs(fv[i] - mean);
  kronrod *= half;
  gauss *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  const double diff = std::abs(kronrod - gauss);
  double err = diff;
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * diff / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  err = std::max(err, 50.0 * eps * resabs);
  return {kronrod, err};
}

struct Interval {
  double a, b;
  Panel panel;
  bool operator<(const Interval& o) const { return panel.error < o.panel.error; }
};

}  // namespace

// Globally adaptive: always bisect the interval with the largest error
// estimate.  This resolves integrable endpoint singularities, where any
// fixed per-interval tolerance schedule stalls.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double abs_tol, int max_depth) {
  QuadResult out;
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  const size_t max_leaves = size_t(1) << std::min(max_depth, 16);
  std::priority_queue<Interval> queue;
  queue.push({a, b, gk15(f, a, b)});
  double total_err = queue.top().panel.error;

  while (total_err > abs_tol && queue.size() < max_leaves) {
    Interval worst = queue.top();
    if (worst.b - worst.a <= std::abs(worst.a) * 1e-15 + 1e-300) break;
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Interval l{worst.a, mid, gk15(f, worst.a, mid)};
    Interval r{mid, worst.b, gk15(f, mid, worst.b)};
    total_err += l.panel.error + r.panel.error - worst.panel.error;
    queue.push(l);
    queue.push(r);
  }

  while (!queue.empty()) {
    out.value += queue.top().panel.value;
    out.error_estimate += queue.top().panel.error;
    out.leaf_count += 1;
    queue.pop();
  }
  out.converged = out.error_estimate <= abs_tol;
  out.value *= sign;
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_depth) {
  QuadResult r = integrate(f, a, b, abs_tol, max_depth);
  if (!r.converged) {
    throw QuadratureFailure("adaptive quadrature did not reach tolerance", r);
  }
  return r.value;
}

}  // namespace lagvac
