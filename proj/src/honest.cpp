#include "hmjp/honest.hpp"

#include <cmath>
#include <string>

namespace hmjp {

HonestDraw sample_honest_time(const RateParams &p, int channel, double t_prev,
                              double t_cur, Rng &rng) {
  if (!(t_prev >= 0.0) || !(t_prev < t_cur))
    throw std::invalid_argument("honest time requires 0 <= t_prev < t_cur");
  const double y = rng.exponential(); // strictly positive, so the root is
                                      // interior with probability one
  double tau = inverse_remaining_hazard(p, t_prev, t_cur, y);
  if (tau >= t_cur) {
    // enormous hazards can round the root onto the right endpoint; keep the
    // draw inside the interval
    tau = std::nextafter(t_cur, t_prev);
    if (tau < t_prev) tau = t_prev;
  }
  HonestDraw d;
  d.channel = channel;
  d.tau = tau;
  d.eta = tau > t_prev;
  d.t_prev = t_prev;
  d.t_cur = t_cur;
  return d;
}

double honest_log_density(const HonestDraw &d, const RateParams &p) {
  if (!d.eta) return -cumulative_hazard(p, d.t_prev, d.t_cur);
  return std::log(intensity_at(p, d.tau)) - cumulative_hazard(p, d.tau, d.t_cur);
}

TransitionMatrix indicator_tpm(const AugmentedInterval &a) {
  const double tau1 = a.draw1.tau;
  const double tau0 = a.draw0.tau;
  TransitionMatrix m;
  m.p01 = tau0 > tau1 ? 1.0 : 0.0;
  m.p00 = tau1 >= tau0 ? 1.0 : 0.0;
  m.p10 = tau1 > tau0 ? 1.0 : 0.0;
  m.p11 = tau0 >= tau1 ? 1.0 : 0.0;
  return m;
}

TransitionMatrix tau1_tpm(const HonestDraw &d1, const ChannelPair &ch) {
  const double s = d1.t_prev, t = d1.t_cur;
  TransitionMatrix m;
  m.p00 = std::exp(-cumulative_hazard(ch.channel0, d1.tau, t));
  m.p01 = 1.0 - m.p00;
  m.p11 = no_event_probability(ch, s, t) + m.p01;
  m.p10 = 1.0 - m.p11;
  return m;
}

TransitionMatrix tau0_tpm(const HonestDraw &d0, const ChannelPair &ch) {
  const double s = d0.t_prev, t = d0.t_cur;
  TransitionMatrix m;
  m.p11 = std::exp(-cumulative_hazard(ch.channel1, d0.tau, t));
  m.p10 = 1.0 - m.p11;
  m.p00 = no_event_probability(ch, s, t) + m.p10;
  m.p01 = 1.0 - m.p00;
  return m;
}

TransitionMatrix pair_exp_tpm(const HonestDraw &d1, const HonestDraw &d0,
                              const ChannelPair &ch) {
  TransitionMatrix m;
  m.p00 = std::exp(-cumulative_hazard(ch.channel0, d1.tau, d1.t_cur));
  m.p01 = 1.0 - m.p00;
  m.p11 = std::exp(-cumulative_hazard(ch.channel1, d0.tau, d0.t_cur));
  m.p10 = 1.0 - m.p11;
  return m;
}

TransitionMatrix averaged_tpm(std::span<const TransitionMatrix> draws) {
  if (draws.empty()) throw std::invalid_argument("averaging an empty estimator list");
  TransitionMatrix m{0.0, 0.0, 0.0, 0.0};
  for (const auto &d : draws) {
    m.p00 += d.p00;
    m.p01 += d.p01;
    m.p10 += d.p10;
    m.p11 += d.p11;
  }
  const double n = static_cast<double>(draws.size());
  m.p00 /= n;
  m.p01 /= n;
  m.p10 /= n;
  m.p11 /= n;
  return m;
}

AugmentedInterval sample_constrained_pair(const ChannelPair &ch, double t_prev,
                                          double t_cur, int state_from,
                                          int state_to, Rng &rng,
                                          long max_attempts) {
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if ((state_from != 0 && state_from != 1) || (state_to != 0 && state_to != 1))
    throw std::invalid_argument("states must be 0 or 1");
  AugmentedInterval a;
  a.state_from = state_from;
  a.state_to = state_to;
  for (long attempt = 1; attempt <= max_attempts; ++attempt) {
    a.draw1 = sample_honest_time(ch.channel1, 1, t_prev, t_cur, rng);
    a.draw0 = sample_honest_time(ch.channel0, 0, t_prev, t_cur, rng);
    if (indicator_tpm(a).entry(state_from, state_to) == 1.0) {
      a.attempts = attempt;
      return a;
    }
  }
  throw AugmentationExhausted(
      "constrained pair not accepted after " + std::to_string(max_attempts) +
          " attempts on (" + std::to_string(t_prev) + ", " + std::to_string(t_cur) +
          ") for " + std::to_string(state_from) + "->" + std::to_string(state_to),
      max_attempts);
}

MonteCarloEstimate variance_formula_rhs(const ChannelPair &ch, double s,
                                        double t, long n, Rng &rng,
                                        int estimator_channel) {
  if (n < 2) throw std::invalid_argument("variance_formula_rhs needs n >= 2");
  const RateParams &cond =
      estimator_channel == 1 ? ch.channel1 : ch.channel0; // tau_b
  const RateParams &other =
      estimator_channel == 1 ? ch.channel0 : ch.channel1; // tau_a
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_yy = 0.0, sum_xy = 0.0;
  for (long i = 0; i < n; ++i) {
    const double tau_b = sample_honest_time(cond, estimator_channel, s, t, rng).tau;
    const double a1 = sample_honest_time(other, 1 - estimator_channel, s, t, rng).tau;
    const double a2 = sample_honest_time(other, 1 - estimator_channel, s, t, rng).tau;
    const double x = std::max(a1, a2) <= tau_b ? 1.0 : 0.0;
    const double y = a1 <= tau_b ? 1.0 : 0.0;
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    sum_yy += y * y;
    sum_xy += x * y;
  }
  const double nd = static_cast<double>(n);
  const double mx = sum_x / nd, my = sum_y / nd;
  const double var_x = sum_xx / nd - mx * mx;
  const double var_y = sum_yy / nd - my * my;
  const double cov_xy = sum_xy / nd - mx * my;
  MonteCarloEstimate est;
  est.value = mx - my * my;
  // delta method for g(mx,my) = mx - my^2: grad = (1, -2 my)
  const double var_g =
      (var_x + 4.0 * my * my * var_y - 4.0 * my * cov_xy) / nd;
  est.se = std::sqrt(std::max(var_g, 0.0));
  return est;
}

} // namespace hmjp
