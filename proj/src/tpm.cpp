#include "hmjp/tpm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "hmjp/quadrature.hpp"

namespace hmjp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_times(double s, double t) {
  if (!(s >= 0.0) || !(s <= t))
    throw std::invalid_argument("transition matrix requires 0 <= s <= t");
}

// Assemble the matrix from the 0->1 off-diagonal integral and the no-event
// probability. P11 = P01 + no_event keeps the structural identities
// P11 - P01 = P00 - P10 = no_event and the orderings P01 <= P11,
// P10 <= P00 exact by construction.
TransitionMatrix assemble(double p01, double no_event) {
  TransitionMatrix m;
  m.p01 = p01;
  m.p00 = 1.0 - p01;
  m.p11 = p01 + no_event;
  m.p10 = 1.0 - m.p11;
  return m;
}

} // namespace

InitialDistribution make_initial_distribution(double pi1) {
  if (!(pi1 >= 0.0 && pi1 <= 1.0))
    throw std::invalid_argument("initial probability must lie in [0,1]");
  return InitialDistribution{1.0 - pi1, pi1};
}

double no_event_probability(const ChannelPair &ch, double s, double t) {
  check_times(s, t);
  return std::exp(-(cumulative_hazard(ch.channel0, s, t) +
                    cumulative_hazard(ch.channel1, s, t)));
}

TransitionMatrix tpm_closed_form_constant(double lambda0, double lambda1,
                                          double s, double t) {
  check_times(s, t);
  if (!(lambda0 >= 0.0) || !(lambda1 >= 0.0))
    throw std::invalid_argument("constant rates must be nonnegative");
  const double total = lambda0 + lambda1;
  if (total == 0.0 || s == t) return TransitionMatrix{};
  const double no_event = std::exp(-total * (t - s));
  const double p01 = lambda0 / total * (-std::expm1(-total * (t - s)));
  return assemble(p01, no_event);
}

TransitionMatrix tpm_quadrature(const ChannelPair &ch, double s, double t,
                                double rel_tol) {
  check_times(s, t);
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
  if (s == t) return TransitionMatrix{};

  const double no_event = no_event_probability(ch, s, t);
  auto integrand = [&](const RateParams &channel) {
    return [&ch, &channel, t](double v) {
      const double survive = cumulative_hazard(ch.channel0, v, t) +
                             cumulative_hazard(ch.channel1, v, t);
      return std::exp(-survive) * intensity_at(channel, v);
    };
  };

  const QuadResult q01 = integrate_adaptive(integrand(ch.channel0), s, t, rel_tol);
  const QuadResult q10 = integrate_adaptive(integrand(ch.channel1), s, t, rel_tol);

  // internal identity: P01 + P10 + no_event = 1 exactly; with two
  // independent quadratures the residual is bounded by their tolerances
  const double residual = std::abs(q01.value + q10.value + no_event - 1.0);
  const double slack = std::max(1e-12, 16.0 * rel_tol);
  if (residual > slack)
    throw QuadratureError("transition-probability quadratures are inconsistent "
                          "(row-sum residual " + std::to_string(residual) + ")",
                          residual);

  const double p01 = std::clamp(q01.value, 0.0, 1.0);
  return assemble(p01, no_event);
}

TransitionMatrix transition_matrix(const ChannelPair &ch, double s, double t,
                                   double rel_tol) {
  if (ch.channel0.family == RateFamily::constant &&
      ch.channel1.family == RateFamily::constant)
    return tpm_closed_form_constant(ch.channel0.rate, ch.channel1.rate, s, t);
  return tpm_quadrature(ch, s, t, rel_tol);
}

double observed_log_likelihood(const PanelDataset &panel, const ChannelPair &ch,
                               const InitialDistribution &init, double rel_tol) {
  double ll = 0.0;
  for (const auto &subject : panel.subjects) {
    if (subject.times.empty()) continue;
    const double pi = subject.states.front() == 0 ? init.pi0 : init.pi1;
    if (pi == 0.0) return -kInf;
    ll += std::log(pi);
    for (std::size_t i = 1; i < subject.times.size(); ++i) {
      const TransitionMatrix m = transition_matrix(ch, subject.times[i - 1],
                                                   subject.times[i], rel_tol);
      const double p = m.entry(subject.states[i - 1], subject.states[i]);
      if (p <= 0.0) return -kInf;
      ll += std::log(p);
    }
  }
  return ll;
}

CrudeEstimates crude_initial_estimates(const PanelDataset &panel) {
  CrudeEstimates est;
  for (const auto &subject : panel.subjects) {
    for (std::size_t i = 1; i < subject.times.size(); ++i) {
      const double len = subject.times[i] - subject.times[i - 1];
      const int from = subject.states[i - 1];
      const int to = subject.states[i];
      if (from == 0) {
        est.exposure_from0 += len;
        if (to == 1) ++est.transitions01;
      } else {
        est.exposure_from1 += len;
        if (to == 0) ++est.transitions10;
      }
    }
  }
  if (est.exposure_from0 == 0.0)
    throw std::invalid_argument("no observation interval starts in state 0");
  if (est.exposure_from1 == 0.0)
    throw std::invalid_argument("no observation interval starts in state 1");
  const double total_exposure = est.exposure_from0 + est.exposure_from1;
  if (est.transitions01 > 0) {
    est.lambda0 = static_cast<double>(est.transitions01) / est.exposure_from0;
  } else {
    est.lambda0 = 0.5 / total_exposure;
    est.floored0 = true;
  }
  if (est.transitions10 > 0) {
    est.lambda1 = static_cast<double>(est.transitions10) / est.exposure_from1;
  } else {
    est.lambda1 = 0.5 / total_exposure;
    est.floored1 = true;
  }
  return est;
}

namespace {

// Nelder-Mead on R^2, minimizing f. Plain implementation with the standard
// reflection/expansion/contraction coefficients.
struct NelderMead {
  int evaluations = 0;

  std::pair<std::array<double, 2>, double>
  minimize(const std::function<double(const std::array<double, 2> &)> &f,
           std::array<double, 2> start, double step, int max_evals,
           double f_tol) {
    std::array<std::array<double, 2>, 3> x;
    std::array<double, 3> fx;
    x[0] = start;
    x[1] = {start[0] + step, start[1]};
    x[2] = {start[0], start[1] + step};
    for (int i = 0; i < 3; ++i) fx[i] = eval(f, x[i], max_evals);

    for (;;) {
      // order: 0 best, 2 worst
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (fx[j] < fx[i]) {
            std::swap(fx[i], fx[j]);
            std::swap(x[i], x[j]);
          }
      if (std::abs(fx[2] - fx[0]) < f_tol && simplex_size(x) < 1e-10)
        return {x[0], fx[0]};
      if (evaluations >= max_evals)
        throw std::runtime_error("likelihood optimization did not converge "
                                 "within the evaluation budget");

      const std::array<double, 2> centroid{0.5 * (x[0][0] + x[1][0]),
                                           0.5 * (x[0][1] + x[1][1])};
      const auto reflect = combine(centroid, x[2], -1.0);
      const double fr = eval(f, reflect, max_evals);
      if (fr < fx[0]) {
        const auto expand = combine(centroid, x[2], -2.0);
        const double fe = eval(f, expand, max_evals);
        if (fe < fr) {
          x[2] = expand;
          fx[2] = fe;
        } else {
          x[2] = reflect;
          fx[2] = fr;
        }
      } else if (fr < fx[1]) {
        x[2] = reflect;
        fx[2] = fr;
      } else {
        const auto contract = combine(centroid, x[2], 0.5);
        const double fc = eval(f, contract, max_evals);
        if (fc < fx[2]) {
          x[2] = contract;
          fx[2] = fc;
        } else {
          // shrink toward best
          for (int i = 1; i < 3; ++i) {
            x[i] = {0.5 * (x[i][0] + x[0][0]), 0.5 * (x[i][1] + x[0][1])};
            fx[i] = eval(f, x[i], max_evals);
          }
        }
      }
    }
  }

private:
  double eval(const std::function<double(const std::array<double, 2> &)> &f,
              const std::array<double, 2> &p, int max_evals) {
    if (evaluations >= max_evals)
      throw std::runtime_error("likelihood optimization did not converge "
                               "within the evaluation budget");
    ++evaluations;
    return f(p);
  }

  static std::array<double, 2> combine(const std::array<double, 2> &c,
                                       const std::array<double, 2> &w,
                                       double alpha) {
    // c + alpha (w - c)
    return {c[0] + alpha * (w[0] - c[0]), c[1] + alpha * (w[1] - c[1])};
  }

  static double simplex_size(const std::array<std::array<double, 2>, 3> &x) {
    double m = 0.0;
    for (int i = 1; i < 3; ++i)
      m = std::max(m, std::abs(x[i][0] - x[0][0]) + std::abs(x[i][1] - x[0][1]));
    return m;
  }
};

} // namespace

ExactFitResult exact_fit_constant(const PanelDataset &panel,
                                  const InitialDistribution &init,
                                  int max_evaluations) {
  const CrudeEstimates crude = crude_initial_estimates(panel);
  ExactFitResult result;
  result.boundary0 = crude.transitions01 == 0;
  result.boundary1 = crude.transitions10 == 0;
  if (result.boundary0 || result.boundary1) {
    // the likelihood is maximized on the boundary lambda -> 0 for a channel
    // with no observed transitions; report 0 with undefined intervals
    result.lambda0 = result.boundary0 ? 0.0 : crude.lambda0;
    result.lambda1 = result.boundary1 ? 0.0 : crude.lambda1;
    result.ci0_low = result.ci0_high = std::numeric_limits<double>::quiet_NaN();
    result.ci1_low = result.ci1_high = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  auto neg_ll = [&](const std::array<double, 2> &logl) {
    const ChannelPair ch{make_constant(std::exp(logl[0])),
                         make_constant(std::exp(logl[1]))};
    return -observed_log_likelihood(panel, ch, init);
  };

  NelderMead nm;
  auto [best, fbest] = nm.minimize(
      neg_ll, {std::log(crude.lambda0), std::log(crude.lambda1)}, 0.5,
      max_evaluations, 1e-12);
  result.evaluations = nm.evaluations;
  result.lambda0 = std::exp(best[0]);
  result.lambda1 = std::exp(best[1]);
  result.log_likelihood = -fbest;

  // observed information on the log scale by central differences
  const double h = 1e-4;
  auto at = [&](double d0, double d1) {
    return -neg_ll({best[0] + d0, best[1] + d1});
  };
  const double f0 = -fbest;
  const double h00 = (at(h, 0) - 2.0 * f0 + at(-h, 0)) / (h * h);
  const double h11 = (at(0, h) - 2.0 * f0 + at(0, -h)) / (h * h);
  const double h01 =
      (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
  // information = -hessian of log-likelihood; covariance is its inverse
  const double det = h00 * h11 - h01 * h01;
  double se0 = std::numeric_limits<double>::quiet_NaN();
  double se1 = se0;
  if (det > 0.0 && h00 < 0.0) {
    se0 = std::sqrt(-h11 / det);
    se1 = std::sqrt(-h00 / det);
  }
  const double z = 1.959963984540054; // 97.5% normal quantile
  result.ci0_low = result.lambda0 * std::exp(-z * se0);
  result.ci0_high = result.lambda0 * std::exp(z * se0);
  result.ci1_low = result.lambda1 * std::exp(-z * se1);
  result.ci1_high = result.lambda1 * std::exp(z * se1);
  return result;
}

} // namespace hmjp
