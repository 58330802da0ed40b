#include "qprobe/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace qprobe {

namespace {

QuadratureRule make_gauss_legendre(int n) {
  // Newton iteration on P_n, initial guesses from the Chebyshev approximation.
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.weights[k] = w;
    rule.nodes[n - 1 - k] = x;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule make_gauss_hermite(int n) {
  // Golub-Welsch: the Jacobi matrix for (physicists') Hermite polynomials is
  // symmetric tridiagonal with zero diagonal and off-diagonal sqrt(k/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = std::sqrt(k / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = sqrt_pi * v0 * v0;
  }
  return rule;
}

template <typename Maker>
const QuadratureRule& cached_rule(int order, std::map<int, QuadratureRule>& cache,
                                  std::mutex& mtx, Maker maker) {
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, maker(order)).first;
  return it->second;
}

double panel_sum(const std::function<double(double)>& f,
                 std::span<const double> breakpoints, const QuadratureRule& rule) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
    }
    total += half * acc;
  }
  return total;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  return cached_rule(order, cache, mtx, make_gauss_legendre);
}

const QuadratureRule& gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  return cached_rule(order, cache, mtx, make_gauss_hermite);
}

double integrate_panels(const std::function<double(double)>& f,
                        std::span<const double> breakpoints, double rel_tol,
                        double abs_floor) {
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate_panels: need >= 2 breakpoints");
  double prev = panel_sum(f, breakpoints, gauss_legendre(16));
  for (int order = 32; order <= 4096; order *= 2) {
    double cur = panel_sum(f, breakpoints, gauss_legendre(order));
    double err = std::abs(cur - prev);
    if (err <= rel_tol * std::abs(cur) || err <= abs_floor) return cur;
    prev = cur;
  }
  std::ostringstream msg;
  msg << "integrate_panels: no convergence to rel_tol=" << rel_tol << " on ["
      << breakpoints.front() << ", " << breakpoints.back() << "], last estimate "
      << prev;
  throw NumericError(msg.str());
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double panel_width, double rel_tol) {
  if (!(b > a)) throw std::invalid_argument("integrate: requires b > a");
  if (!(panel_width > 0)) throw std::invalid_argument("integrate: panel_width must be > 0");
  int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
  std::vector<double> breaks(panels + 1);
  for (int i = 0; i <= panels; ++i) breaks[i] = a + (b - a) * i / panels;
  return integrate_panels(f, breaks, rel_tol);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect_root: no sign change");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0 || (hi - lo) < 1e-15 * (std::abs(lo) + std::abs(hi) + 1.0)) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol) {
  constexpr double inv_phi = 0.6180339887498949;  // 1/phi
  double c = hi - (hi - lo) * inv_phi;
  double d = lo + (hi - lo) * inv_phi;
  double fc = f(c), fd = f(d);
  while (hi - lo > x_tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - (hi - lo) * inv_phi;
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + (hi - lo) * inv_phi;
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qprobe
