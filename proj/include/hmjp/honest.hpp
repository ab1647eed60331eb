#ifndef HMJP_HONEST_HPP
#define HMJP_HONEST_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "hmjp/rates.hpp"
#include "hmjp/rng.hpp"
#include "hmjp/stats.hpp"
#include "hmjp/tpm.hpp"

namespace hmjp {

// The latent time attached to one observation interval and one channel:
// the last point of the channel's Poisson process in (t_prev, t_cur), or
// t_prev when the process has no point there (truncated, eta = 0).
struct HonestDraw {
  int channel = 0; // 0: intensity lambda0, 1: intensity lambda1
  double tau = 0.0;
  bool eta = false; // tau > t_prev
  double t_prev = 0.0;
  double t_cur = 0.0;
};

// A (tau1, tau0) pair accepted for one observation interval, together with
// the observed states it was constrained to and the rejection count.
struct AugmentedInterval {
  HonestDraw draw1; // channel 1
  HonestDraw draw0; // channel 0
  int state_from = 0;
  int state_to = 0;
  long attempts = 0;
};

class AugmentationExhausted : public std::runtime_error {
public:
  AugmentationExhausted(const std::string &what, long attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  long attempts() const { return attempts_; }

private:
  long attempts_;
};

// Draw y ~ Exp(1) and invert the remaining hazard from the right endpoint.
// The result lands in [t_prev, t_cur) with density
//   lambda(tau) exp(-Lambda(tau, t_cur))            on (t_prev, t_cur)
// and point mass exp(-Lambda(t_prev, t_cur)) at t_prev.
HonestDraw sample_honest_time(const RateParams &p, int channel, double t_prev,
                              double t_cur, Rng &rng);

// Log of the density/point-mass above.
double honest_log_density(const HonestDraw &d, const RateParams &p);

// Indicator estimator of the interval's transition probabilities:
//   p01 = 1(tau0 > tau1), p00 = 1(tau1 >= tau0),
//   p10 = 1(tau1 > tau0), p11 = 1(tau0 >= tau1).
// The tie tau0 == tau1 (== t_prev, both truncated) lands on the diagonal.
TransitionMatrix indicator_tpm(const AugmentedInterval &a);

// Rao-Blackwellized estimators conditioning on one honest time.
TransitionMatrix tau1_tpm(const HonestDraw &d1, const ChannelPair &ch);
TransitionMatrix tau0_tpm(const HonestDraw &d0, const ChannelPair &ch);

// Uses both honest times, exponential form on both rows.
TransitionMatrix pair_exp_tpm(const HonestDraw &d1, const HonestDraw &d0,
                              const ChannelPair &ch);

// Entrywise mean of estimator outputs. Throws on an empty list.
TransitionMatrix averaged_tpm(std::span<const TransitionMatrix> draws);

// Rejection-sample independent (tau1, tau0) pairs until the indicator
// estimator matches the observed (state_from -> state_to) cell. Throws
// AugmentationExhausted after max_attempts failures.
AugmentedInterval sample_constrained_pair(const ChannelPair &ch, double t_prev,
                                          double t_cur, int state_from,
                                          int state_to, Rng &rng,
                                          long max_attempts = 1000000);

// Monte Carlo evaluation of the estimator-variance expression
//   P(tau_a1 v tau_a2 <= tau_b) - P(tau_a <= tau_b)^2
// where b = estimator_channel is the conditioning channel (1 for the
// tau1-based estimator, 0 for the mirrored one) and a is the other channel.
// Standard error by the delta method.
MonteCarloEstimate variance_formula_rhs(const ChannelPair &ch, double s,
                                        double t, long n, Rng &rng,
                                        int estimator_channel = 1);

} // namespace hmjp

#endif
