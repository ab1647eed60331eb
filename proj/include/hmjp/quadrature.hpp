#ifndef HMJP_QUADRATURE_HPP
#define HMJP_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace hmjp {

class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string &what, double achieved_rel_tol)
      : std::runtime_error(what), achieved_rel_tol_(achieved_rel_tol) {}
  double achieved_rel_tol() const { return achieved_rel_tol_; }

private:
  double achieved_rel_tol_;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int segments = 0;
};

// Globally adaptive Gauss-Kronrod (G7,K15): repeatedly bisects the segment
// with the largest embedded error estimate until
//   total_error <= max(abs_tol, rel_tol * |integral|).
// Kronrod nodes are interior, so integrable endpoint singularities
// (e.g. t^{shape-1} with shape < 1) are never evaluated at the endpoint.
// Throws QuadratureError, carrying the achieved relative tolerance, if the
// segment budget is exhausted first.
QuadResult integrate_adaptive(const std::function<double(double)> &f, double a,
                              double b, double rel_tol, double abs_tol = 0.0,
                              int max_segments = 4096);

} // namespace hmjp

#endif
