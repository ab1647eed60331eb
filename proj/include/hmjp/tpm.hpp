#ifndef HMJP_TPM_HPP
#define HMJP_TPM_HPP

#include "hmjp/panel.hpp"
#include "hmjp/rates.hpp"

namespace hmjp {

// Row-stochastic 2x2 transition probability matrix P(s,t).
struct TransitionMatrix {
  double p00 = 1.0, p01 = 0.0;
  double p10 = 0.0, p11 = 1.0;

  double entry(int from, int to) const {
    return from == 0 ? (to == 0 ? p00 : p01) : (to == 0 ? p10 : p11);
  }
};

struct InitialDistribution {
  double pi0 = 0.5;
  double pi1 = 0.5;
};

InitialDistribution make_initial_distribution(double pi1);

// Probability of no transition event at all in (s,t]:
// exp(-Lambda0(s,t) - Lambda1(s,t)). Equals P11 - P01 = P00 - P10.
double no_event_probability(const ChannelPair &ch, double s, double t);

// Time-homogeneous closed form. Requires 0 <= s <= t.
TransitionMatrix tpm_closed_form_constant(double lambda0, double lambda1,
                                          double s, double t);

// General rates: off-diagonal P01 by adaptive quadrature of
//   integral_s^t exp(-Lambda0(v,t)-Lambda1(v,t)) lambda0(v) dv,
// then P00 = 1 - P01, P11 = P01 + no_event, P10 = 1 - P11. The
// lambda1 off-diagonal integral is evaluated as well and used as an internal
// consistency check (P01 + P10 + no_event = 1); a discrepancy beyond the
// requested tolerance raises QuadratureError.
TransitionMatrix tpm_quadrature(const ChannelPair &ch, double s, double t,
                                double rel_tol = 1e-10);

// Chooses the closed form when both channels are constant.
TransitionMatrix transition_matrix(const ChannelPair &ch, double s, double t,
                                   double rel_tol = 1e-10);

// Sum over subjects of log init(X(t0)) plus log transition probabilities of
// consecutive observations. -infinity when a required transition has
// probability zero.
double observed_log_likelihood(const PanelDataset &panel, const ChannelPair &ch,
                               const InitialDistribution &init,
                               double rel_tol = 1e-10);

struct CrudeEstimates {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  long transitions01 = 0, transitions10 = 0;
  double exposure_from0 = 0.0, exposure_from1 = 0.0;
  bool floored0 = false, floored1 = false;
};

// Direct-transition counts over interval lengths, the standard crude rates.
// A zero numerator is floored at 0.5 / total exposure so the value stays a
// usable strictly positive starting point. Throws if no interval starts in
// one of the states.
CrudeEstimates crude_initial_estimates(const PanelDataset &panel);

struct ExactFitResult {
  double lambda0 = 0.0, lambda1 = 0.0;
  double ci0_low = 0.0, ci0_high = 0.0;
  double ci1_low = 0.0, ci1_high = 0.0;
  bool boundary0 = false, boundary1 = false; // no evidence of that transition
  double log_likelihood = 0.0;
  int evaluations = 0;
};

// Maximizes the exact observed-data likelihood of the constant-rate model
// over (log lambda0, log lambda1) by Nelder-Mead; 95% Wald intervals on the
// log scale from a finite-difference observed information matrix.
ExactFitResult exact_fit_constant(const PanelDataset &panel,
                                  const InitialDistribution &init,
                                  int max_evaluations = 20000);

} // namespace hmjp

#endif
