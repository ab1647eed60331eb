#ifndef HMJP_RATES_HPP
#define HMJP_RATES_HPP

#include <string>

namespace hmjp {

enum class RateFamily { constant, weibull, gompertz };

// One transition channel's intensity function lambda(t) = rate * g_shape(t):
//   constant:  lambda(t) = rate                        (shape pinned to 1)
//   weibull:   lambda(t) = rate * shape * t^(shape-1)
//   gompertz:  lambda(t) = rate * exp(shape * t)
struct RateParams {
  RateFamily family = RateFamily::constant;
  double shape = 1.0;
  double rate = 0.0;
};

// Factories validate: rate >= 0 finite, shape > 0 finite; constant pins shape = 1.
// rate == 0 is a degenerate but legal channel (no events ever).
RateParams make_constant(double rate);
RateParams make_weibull(double shape, double rate);
RateParams make_gompertz(double shape, double rate);
RateParams make_rate_params(RateFamily family, double shape, double rate);

const char *family_name(RateFamily f);
RateFamily family_from_name(const std::string &name);

// lambda(t). Throws std::domain_error for weibull with shape < 1 at t = 0,
// where the intensity diverges (unless rate == 0).
double intensity_at(const RateParams &p, double t);

// Lambda(r,t) = integral of lambda over (r,t], exact closed form.
// Requires 0 <= r <= t.
double cumulative_hazard(const RateParams &p, double r, double t);

// max(lower, r*) with Lambda(r*,t) = y when such r* exists in [0,t], else lower.
// Requires 0 <= lower <= t and y >= 0. Result is always in [lower, t].
double inverse_remaining_hazard(const RateParams &p, double lower, double t, double y);

// Smallest r > start with Lambda(start,r) = y; +infinity when the total
// remaining hazard never reaches y. Used for exact event generation.
double next_event_time(const RateParams &p, double start, double y);

// Two-channel generator: channel0 drives 0->1, channel1 drives 1->0.
struct ChannelPair {
  RateParams channel0;
  RateParams channel1;
};

} // namespace hmjp

#endif
