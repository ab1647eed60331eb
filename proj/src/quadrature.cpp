#include "hmjp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hmjp {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1] (QUADPACK dqk15).
// xgk[1],xgk[3],... are the Gauss nodes.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
};

Segment evaluate_gk15(const std::function<double(double)> &f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_gauss = wg[3] * fc;
  double result_kronrod = wgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double abscissa = half * xgk[j];
    const double f1 = f(center - abscissa);
    const double f2 = f(center + abscissa);
    result_kronrod += wgk[j] * (f1 + f2);
    if (j % 2 == 1) result_gauss += wg[j / 2] * (f1 + f2);
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = result_kronrod * half;
  s.error = std::abs((result_kronrod - result_gauss) * half);
  return s;
}

} // namespace

QuadResult integrate_adaptive(const std::function<double(double)> &f, double a,
                              double b, double rel_tol, double abs_tol,
                              int max_segments) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
  if (!(a <= b)) throw std::invalid_argument("integration requires a <= b");
  if (a == b) return QuadResult{0.0, 0.0, 0};

  std::vector<Segment> segs;
  segs.reserve(64);
  segs.push_back(evaluate_gk15(f, a, b));

  auto totals = [&segs]() {
    double v = 0.0, e = 0.0;
    for (const auto &s : segs) {
      v += s.value;
      e += s.error;
    }
    return std::pair<double, double>(v, e);
  };

  for (;;) {
    auto [value, error] = totals();
    const double target = std::max(abs_tol, rel_tol * std::abs(value));
    if (error <= target) return QuadResult{value, error, static_cast<int>(segs.size())};
    if (static_cast<int>(segs.size()) >= max_segments) {
      const double achieved = std::abs(value) > 0.0 ? error / std::abs(value) : error;
      throw QuadratureError("adaptive quadrature did not reach the requested tolerance", achieved);
    }
    auto worst = std::max_element(
        segs.begin(), segs.end(),
        [](const Segment &x, const Segment &y) { return x.error < y.error; });
    const Segment seg = *worst;
    const double mid = 0.5 * (seg.a + seg.b);
    if (!(seg.a < mid && mid < seg.b)) {
      // segment no longer bisectable at double precision; accept its estimate
      // by zeroing the error so refinement moves elsewhere
      worst->error = 0.0;
      continue;
    }
    *worst = evaluate_gk15(f, seg.a, mid);
    segs.push_back(evaluate_gk15(f, mid, seg.b));
  }
}

} // namespace hmjp
