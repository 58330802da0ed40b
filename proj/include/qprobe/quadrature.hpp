#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprobe {

// Raised when an adaptive integration fails to reach its tolerance. The
// message carries the interval and the last two estimates so a caller can
// see how far off the result was.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]. Results are cached per order.
const QuadratureRule& gauss_legendre(int order);

// Gauss-Hermite rule for the weight e^{-x^2} on (-inf, inf); weights sum
// to sqrt(pi). Results are cached per order.
const QuadratureRule& gauss_hermite(int order);

// Integrates f over each [b_i, b_{i+1}] panel with Gauss-Legendre nodes,
// doubling the node count until two successive totals agree to rel_tol
// (or to abs_floor when the integral is essentially zero).
double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> breakpoints,
                        double rel_tol = 1e-11, double abs_floor = 1e-300);

// Convenience wrapper: panels of roughly panel_width between a and b.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double panel_width, double rel_tol = 1e-11);

// Locates a root of f in [lo, hi] (f(lo) and f(hi) must differ in sign)
// by bisection to near machine precision.
double bisect_root(const std::function<double(double)>& f, double lo, double hi);

// Golden-section minimization of f on [lo, hi]; returns the abscissa.
double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol = 1e-12);

}  // namespace qprobe
