#include "qprobe/spectra.hpp"

#include "qprobe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qprobe {

namespace {

double log_gaussian(double omega, double mu, double sigma) {
  const double z = (omega - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// Breakpoints covering both spectra with panels narrow enough to resolve the
// sharpest peak.
std::vector<double> joint_breakpoints(const GaussianMixtureSpectrum& x,
                                      const GaussianMixtureSpectrum& y,
                                      double panels_per_sigma) {
  double lo = std::min(x.support_lo(), y.support_lo());
  double hi = std::max(x.support_hi(), y.support_hi());
  double sigma_min = std::numeric_limits<double>::infinity();
  for (const auto& c : x.components()) sigma_min = std::min(sigma_min, c.sigma_hz);
  for (const auto& c : y.components()) sigma_min = std::min(sigma_min, c.sigma_hz);
  const double width = sigma_min / panels_per_sigma;
  int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  std::vector<double> breaks(n + 1);
  for (int i = 0; i <= n; ++i) breaks[i] = lo + (hi - lo) * i / n;
  return breaks;
}

}  // namespace

GaussianMixtureSpectrum::GaussianMixtureSpectrum(std::vector<GaussianComponent> components,
                                                 std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw std::invalid_argument("spectrum: no components");
  if (components_.size() != weights_.size()) {
    throw std::invalid_argument("spectrum: component/weight count mismatch");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("spectrum: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("spectrum: weights must sum to 1 within 1e-12");
  }
  for (double& w : weights_) w /= sum;
  for (const auto& c : components_) {
    if (!(c.sigma_hz > 0.0)) throw std::invalid_argument("spectrum: sigma must be > 0");
    if (!(c.mu_hz > 0.0)) throw std::invalid_argument("spectrum: mu must be > 0");
  }
}

GaussianMixtureSpectrum GaussianMixtureSpectrum::single(double mu_hz, double sigma_hz) {
  return GaussianMixtureSpectrum({{mu_hz, sigma_hz}}, {1.0});
}

GaussianMixtureSpectrum GaussianMixtureSpectrum::two_peak(double mu1_hz, double mu2_hz,
                                                          double sigma_hz, double a) {
  if (a < 0.0 || a > 1.0) throw std::invalid_argument("two_peak: weight outside [0,1]");
  return GaussianMixtureSpectrum({{mu1_hz, sigma_hz}, {mu2_hz, sigma_hz}}, {a, 1.0 - a});
}

double GaussianMixtureSpectrum::sigma_from_fwhm_wavelength(double lambda_m, double fwhm_m) {
  if (!(lambda_m > 0.0) || !(fwhm_m > 0.0)) {
    throw std::invalid_argument("sigma_from_fwhm_wavelength: lengths must be > 0");
  }
  const double fwhm_hz = kSpeedOfLight / (lambda_m * lambda_m) * fwhm_m;
  return fwhm_hz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

double GaussianMixtureSpectrum::pdf(double omega_hz) const {
  double p = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    p += weights_[i] * std::exp(log_gaussian(omega_hz, components_[i].mu_hz,
                                             components_[i].sigma_hz));
  }
  return p;
}

double GaussianMixtureSpectrum::delta_mu() const {
  double lo = components_.front().mu_hz, hi = lo;
  for (const auto& c : components_) {
    lo = std::min(lo, c.mu_hz);
    hi = std::max(hi, c.mu_hz);
  }
  return hi - lo;
}

double GaussianMixtureSpectrum::reference_sigma() const {
  double s = components_.front().sigma_hz;
  for (const auto& c : components_) s = std::min(s, c.sigma_hz);
  return s;
}

double GaussianMixtureSpectrum::delta_eta() const { return delta_mu() / reference_sigma(); }

std::complex<double> GaussianMixtureSpectrum::decoherence(double phase) const {
  if (phase < 0.0) throw std::invalid_argument("decoherence: phase must be >= 0");
  std::complex<double> kappa = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const double tau_i = components_[i].sigma_hz * phase;
    kappa += weights_[i] * std::exp(std::complex<double>(-0.5 * tau_i * tau_i,
                                                         components_[i].mu_hz * phase));
  }
  return kappa;
}

double GaussianMixtureSpectrum::support_lo() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : components_) lo = std::min(lo, c.mu_hz - 10.0 * c.sigma_hz);
  return lo;
}

double GaussianMixtureSpectrum::support_hi() const {
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : components_) hi = std::max(hi, c.mu_hz + 10.0 * c.sigma_hz);
  return hi;
}

double spectral_alpha_fidelity(const GaussianMixtureSpectrum& x,
                               const GaussianMixtureSpectrum& y, double alpha) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw std::domain_error("spectral_alpha_fidelity: alpha must lie in [1/2, 1)");
  }
  auto breaks = joint_breakpoints(x, y, 2.0);
  // x^a y^(1-a) through logs; a vanishing pdf kills the product.
  auto integrand = [&](double w) {
    const double px = x.pdf(w), py = y.pdf(w);
    if (px <= 0.0 || py <= 0.0) return 0.0;
    return std::exp(alpha * std::log(px) + (1.0 - alpha) * std::log(py));
  };
  return std::min(integrate_panels(integrand, breaks, 1e-10), 1.0);
}

double spectral_trace_distance(const GaussianMixtureSpectrum& x,
                               const GaussianMixtureSpectrum& y) {
  auto diff = [&](double w) { return x.pdf(w) - y.pdf(w); };
  auto breaks = joint_breakpoints(x, y, 8.0);
  // Insert the sign changes of x - y as panel edges so |x - y| is smooth on
  // every panel.
  std::vector<double> edges;
  edges.reserve(breaks.size() + 8);
  edges.push_back(breaks.front());
  double prev = diff(breaks.front());
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    double cur = diff(breaks[i]);
    if (prev != 0.0 && cur != 0.0 && (prev > 0) != (cur > 0)) {
      edges.push_back(bisect_root(diff, breaks[i - 1], breaks[i]));
    }
    edges.push_back(breaks[i]);
    prev = cur;
  }
  std::sort(edges.begin(), edges.end());
  double d = 0.5 * integrate_panels([&](double w) { return std::abs(diff(w)); }, edges,
                                    1e-10, 1e-14);
  return std::clamp(d, 0.0, 1.0);
}

double spectral_overlap(const GaussianMixtureSpectrum& x, const GaussianMixtureSpectrum& y) {
  return 1.0 - spectral_trace_distance(x, y);
}

}  // namespace qprobe
