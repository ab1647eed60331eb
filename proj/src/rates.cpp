#include "hmjp/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hmjp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_positive_finite(double shape, double rate) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::invalid_argument("rate family shape must be positive and finite");
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("rate parameter must be nonnegative and finite");
}

void check_interval(double r, double t) {
  if (!(r >= 0.0) || !(r <= t))
    throw std::invalid_argument("hazard interval requires 0 <= r <= t");
}

// exp(shape*t) in closed form appears only inside differences; these helpers
// keep gompertz algebra in log space so large shape*t cannot overflow
// before the difference is formed.
double gompertz_hazard(double shape, double rate, double r, double t) {
  // (rate/shape) * (e^{shape t} - e^{shape r})
  //   = (rate/shape) * e^{shape r} * expm1(shape (t - r))
  const double log_term = shape * r + std::log(std::expm1(shape * (t - r)));
  return (rate / shape) * std::exp(log_term);
}

} // namespace

RateParams make_constant(double rate) {
  check_positive_finite(1.0, rate);
  return RateParams{RateFamily::constant, 1.0, rate};
}

RateParams make_weibull(double shape, double rate) {
  check_positive_finite(shape, rate);
  return RateParams{RateFamily::weibull, shape, rate};
}

RateParams make_gompertz(double shape, double rate) {
  check_positive_finite(shape, rate);
  return RateParams{RateFamily::gompertz, shape, rate};
}

RateParams make_rate_params(RateFamily family, double shape, double rate) {
  switch (family) {
  case RateFamily::constant:
    if (shape != 1.0)
      throw std::invalid_argument("constant family requires shape == 1");
    return make_constant(rate);
  case RateFamily::weibull:
    return make_weibull(shape, rate);
  case RateFamily::gompertz:
    return make_gompertz(shape, rate);
  }
  throw std::invalid_argument("unknown rate family");
}

const char *family_name(RateFamily f) {
  switch (f) {
  case RateFamily::constant: return "constant";
  case RateFamily::weibull: return "weibull";
  case RateFamily::gompertz: return "gompertz";
  }
  return "?";
}

RateFamily family_from_name(const std::string &name) {
  if (name == "constant") return RateFamily::constant;
  if (name == "weibull") return RateFamily::weibull;
  if (name == "gompertz") return RateFamily::gompertz;
  throw std::invalid_argument("unknown rate family: " + name);
}

double intensity_at(const RateParams &p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("intensity_at requires t >= 0");
  if (p.rate == 0.0) return 0.0;
  switch (p.family) {
  case RateFamily::constant:
    return p.rate;
  case RateFamily::weibull:
    if (p.shape == 1.0) return p.rate;
    if (t == 0.0) {
      if (p.shape < 1.0)
        throw std::domain_error("weibull intensity diverges at t = 0 for shape < 1");
      return 0.0; // t^{shape-1} = 0 for shape > 1
    }
    return p.rate * p.shape * std::pow(t, p.shape - 1.0);
  case RateFamily::gompertz:
    return p.rate * std::exp(p.shape * t);
  }
  throw std::invalid_argument("unknown rate family");
}

double cumulative_hazard(const RateParams &p, double r, double t) {
  check_interval(r, t);
  if (r == t || p.rate == 0.0) return 0.0;
  switch (p.family) {
  case RateFamily::constant:
    return p.rate * (t - r);
  case RateFamily::weibull:
    if (p.shape == 1.0) return p.rate * (t - r);
    return p.rate * (std::pow(t, p.shape) - std::pow(r, p.shape));
  case RateFamily::gompertz:
    return gompertz_hazard(p.shape, p.rate, r, t);
  }
  throw std::invalid_argument("unknown rate family");
}

double inverse_remaining_hazard(const RateParams &p, double lower, double t, double y) {
  check_interval(lower, t);
  if (!(y >= 0.0)) throw std::invalid_argument("hazard level y must be >= 0");
  if (y == 0.0) return t;
  if (p.rate == 0.0) return lower;
  switch (p.family) {
  case RateFamily::constant: {
    const double r = t - y / p.rate;
    return r > lower ? r : lower;
  }
  case RateFamily::weibull: {
    if (p.shape == 1.0) {
      const double r = t - y / p.rate;
      return r > lower ? r : lower;
    }
    const double tg = std::pow(t, p.shape) - y / p.rate;
    const double lg = std::pow(lower, p.shape);
    if (!(tg > lg)) return lower;
    const double r = std::pow(tg, 1.0 / p.shape);
    // pow round-off can nudge the root a hair outside [lower, t]
    return std::fmin(std::fmax(r, lower), t);
  }
  case RateFamily::gompertz: {
    // solve e^{shape r} = e^{shape t} - y shape / rate, i.e.
    // r = t + log1p(-(y shape / rate) e^{-shape t}) / shape
    const double w = std::exp(std::log(y * p.shape / p.rate) - p.shape * t);
    if (!(w < 1.0)) return lower; // remaining hazard from any r >= 0 is below y
    const double r = t + std::log1p(-w) / p.shape;
    return std::fmin(std::fmax(r, lower), t);
  }
  }
  throw std::invalid_argument("unknown rate family");
}

double next_event_time(const RateParams &p, double start, double y) {
  if (!(start >= 0.0)) throw std::invalid_argument("next_event_time requires start >= 0");
  if (!(y > 0.0)) throw std::invalid_argument("next_event_time requires y > 0");
  if (p.rate == 0.0) return kInf;
  switch (p.family) {
  case RateFamily::constant:
    return start + y / p.rate;
  case RateFamily::weibull: {
    if (p.shape == 1.0) return start + y / p.rate;
    const double g = std::pow(start, p.shape) + y / p.rate;
    const double r = std::pow(g, 1.0 / p.shape);
    return r > start ? r : std::nextafter(start, kInf);
  }
  case RateFamily::gompertz: {
    // r = start + log1p((y shape / rate) e^{-shape start}) / shape
    const double lw = std::log(y * p.shape / p.rate) - p.shape * start;
    // for lw > ~700, exp(lw) overflows and log1p(exp(lw)) == lw
    const double r = lw > 700.0 ? start + lw / p.shape
                                : start + std::log1p(std::exp(lw)) / p.shape;
    return r > start ? r : std::nextafter(start, kInf);
  }
  }
  throw std::invalid_argument("unknown rate family");
}

} // namespace hmjp
