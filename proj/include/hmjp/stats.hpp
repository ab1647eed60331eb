#ifndef HMJP_STATS_HPP
#define HMJP_STATS_HPP

#include <vector>

namespace hmjp {

// Quantile with linear interpolation between order statistics
// (h = (n-1)p + 1 on the sorted sample; R type 7). Throws on empty input.
double quantile_type7(std::vector<double> values, double p);

// Quantiles of an already sorted sample, same rule.
double quantile_type7_sorted(const std::vector<double> &sorted, double p);

double mean(const std::vector<double> &values);
double sample_sd(const std::vector<double> &values); // n-1 denominator

struct MonteCarloEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Gaussian kernel density on an equispaced grid; bandwidth by Silverman's
// rule, grid spanning [min - 4h, max + 4h]. Returns false (and no grid) when
// the sample is degenerate (zero variance).
struct DensityGrid {
  std::vector<double> x;
  std::vector<double> density;
};
bool kde_grid(const std::vector<double> &values, int grid_points, DensityGrid &out);

} // namespace hmjp

#endif
