#include "qprobe/dephasing.hpp"

#include "qprobe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qprobe {

DephasingChannel DephasingChannel::from_spectrum(const GaussianMixtureSpectrum& s,
                                                 double phase) {
  DephasingChannel ch;
  ch.kappa = s.decoherence(phase);
  ch.tau = s.tau_of_phase(phase);
  ch.source = s;
  if (std::abs(ch.kappa) > 1.0 + 1e-12) {
    throw std::runtime_error("DephasingChannel: |kappa| > 1");
  }
  return ch;
}

QubitState DephasingChannel::apply(const QubitState& rho) const {
  Matrix2c m = rho.matrix();
  m(0, 1) *= kappa;
  m(1, 0) *= std::conj(kappa);
  return QubitState(m);
}

double blp_theta(double delta_eta, double tau) {
  return 2.0 * tau * (1.0 - std::cos(delta_eta * tau)) -
         delta_eta * std::sin(delta_eta * tau);
}

std::optional<double> blp_g(double delta_eta, double tau) {
  const double th = blp_theta(delta_eta, tau);
  if (th <= 0.0) return std::nullopt;
  return tau / th;
}

bool blp_condition(double a, double delta_eta, double tau) {
  if (a < 0.0 || a > 1.0) throw std::domain_error("blp_condition: a outside [0,1]");
  if (delta_eta < 0.0) throw std::domain_error("blp_condition: delta_eta < 0");
  if (!(tau > 0.0)) throw std::domain_error("blp_condition: tau must be > 0");
  auto g = blp_g(delta_eta, tau);
  return g.has_value() && a * (1.0 - a) > *g;
}

std::optional<NonMarkovianBand> nm_band(double delta_eta, double tau) {
  auto g = blp_g(delta_eta, tau);
  if (!g || *g >= 0.25) return std::nullopt;
  const double root = std::sqrt(1.0 - 4.0 * *g);
  return NonMarkovianBand{0.5 * (1.0 - root), 0.5 * (1.0 + root)};
}

std::optional<double> a_crit_numeric(double delta_eta, double tau_max) {
  if (delta_eta < 0.0) throw std::domain_error("a_crit_numeric: delta_eta < 0");
  if (!(tau_max > 0.0)) throw std::domain_error("a_crit_numeric: tau_max must be > 0");
  if (delta_eta == 0.0) return std::nullopt;  // theta vanishes identically

  // The scan step must resolve the oscillation of g at frequency ~eta.
  const double step =
      std::min(0.01, std::numbers::pi / (50.0 * std::max(delta_eta, 1.0)));
  const auto value = [&](double tau) {
    auto g = blp_g(delta_eta, tau);
    return g ? *g : std::numeric_limits<double>::infinity();
  };

  double g_min = std::numeric_limits<double>::infinity();
  double prev2 = std::numeric_limits<double>::infinity();
  double prev1 = std::numeric_limits<double>::infinity();
  double tau = step;
  std::size_t steps = static_cast<std::size_t>(tau_max / step);
  for (std::size_t i = 0; i <= steps; ++i, tau += step) {
    const double cur = value(tau);
    if (std::isfinite(prev1) && prev1 <= prev2 && prev1 <= cur) {
      // Local minimum bracketed at tau - step; refine it.
      const double lo = tau - 2.0 * step, hi = tau;
      const double t_star = golden_section_min(value, std::max(lo, step * 0.5), hi);
      g_min = std::min({g_min, value(t_star), prev1});
    }
    g_min = std::min(g_min, cur);
    prev2 = prev1;
    prev1 = cur;
  }
  if (!std::isfinite(g_min) || g_min > 0.25) return std::nullopt;
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * g_min)));
}

double a_crit_fit(double delta_eta) {
  if (delta_eta < 0.0) throw std::domain_error("a_crit_fit: delta_eta < 0");
  const double e2 = delta_eta * delta_eta;
  return 0.0885553 * std::exp(-0.0870419 * e2) + 0.411445 / (0.0845395 * e2 + 1.0);
}

const char* to_string(IntervalLabel label) {
  switch (label) {
    case IntervalLabel::MarkovianVerified: return "MarkovianVerified";
    case IntervalLabel::NonMarkovianVerified: return "NonMarkovianVerified";
    case IntervalLabel::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<IntervalLabel> classify_intervals(double delta_eta, double a_lo, double a_hi,
                                              std::span<const double> tau_grid) {
  if (!(0.0 <= a_lo && a_lo <= a_hi && a_hi <= 1.0)) {
    throw std::domain_error("classify_intervals: need 0 <= a_lo <= a_hi <= 1");
  }
  std::vector<IntervalLabel> labels;
  labels.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    auto band = tau > 0.0 ? nm_band(delta_eta, tau) : std::nullopt;
    if (!band || a_hi <= band->a_minus || a_lo >= band->a_plus) {
      labels.push_back(IntervalLabel::MarkovianVerified);
    } else if (band->a_minus < a_lo && a_hi < band->a_plus) {
      labels.push_back(IntervalLabel::NonMarkovianVerified);
    } else {
      labels.push_back(IntervalLabel::Inconclusive);
    }
  }
  return labels;
}

NonMarkovianityRegion NonMarkovianityRegion::compute(double delta_eta,
                                                     std::span<const double> tau_grid,
                                                     double tau_max_for_a_crit) {
  NonMarkovianityRegion region;
  region.delta_eta = delta_eta;
  region.a_crit = a_crit_numeric(delta_eta, tau_max_for_a_crit);
  region.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  region.bands.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    region.bands.push_back(tau > 0.0 ? nm_band(delta_eta, tau) : std::nullopt);
  }
  return region;
}

}  // namespace qprobe
