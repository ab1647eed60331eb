#include "hmjp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmjp {

double quantile_type7_sorted(const std::vector<double> &sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile_type7(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return quantile_type7_sorted(values, p);
}

double mean(const std::vector<double> &values) {
  if (values.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double> &values) {
  if (values.size() < 2) throw std::invalid_argument("sd needs at least two values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

bool kde_grid(const std::vector<double> &values, int grid_points, DensityGrid &out) {
  if (values.size() < 2 || grid_points < 2) return false;
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const double sd = sample_sd(sorted);
  const double iqr = quantile_type7_sorted(sorted, 0.75) - quantile_type7_sorted(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) return false; // degenerate sample
  const double n = static_cast<double>(sorted.size());
  const double h = 0.9 * spread * std::pow(n, -0.2);
  const double lo = sorted.front() - 4.0 * h;
  const double hi = sorted.back() + 4.0 * h;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  out.x.assign(grid_points, 0.0);
  out.density.assign(grid_points, 0.0);
  const double norm = 1.0 / (n * h * std::sqrt(2.0 * 3.14159265358979323846));
  for (int g = 0; g < grid_points; ++g) {
    const double x = lo + step * g;
    double acc = 0.0;
    for (double v : sorted) {
      const double z = (x - v) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out.x[g] = x;
    out.density[g] = norm * acc;
  }
  return true;
}

} // namespace hmjp
