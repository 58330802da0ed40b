#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qprobe {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// One Gaussian frequency peak; mu and sigma are ordinary frequencies in Hz.
struct GaussianComponent {
  double mu_hz;
  double sigma_hz;
};

// Convex mixture of Gaussian frequency peaks. Houses the photon's frequency
// states: single peaks for the reference states and the two-peak mixture
// A G1 + (1-A) G2 for the state of interest.
class GaussianMixtureSpectrum {
 public:
  GaussianMixtureSpectrum(std::vector<GaussianComponent> components,
                          std::vector<double> weights);

  static GaussianMixtureSpectrum single(double mu_hz, double sigma_hz);
  // Weight a on the peak at mu1, 1-a on the peak at mu2.
  static GaussianMixtureSpectrum two_peak(double mu1_hz, double mu2_hz,
                                          double sigma_hz, double a);

  // sigma_omega = (c / lambda^2) * FWHM_lambda / (2 sqrt(2 ln 2)), evaluated
  // at the component's central wavelength. Arguments in meters, result in Hz.
  static double sigma_from_fwhm_wavelength(double lambda_m, double fwhm_m);

  std::span<const GaussianComponent> components() const { return components_; }
  std::span<const double> weights() const { return weights_; }

  double pdf(double omega_hz) const;

  // Largest minus smallest central frequency; 0 for a single peak.
  double delta_mu() const;
  // Smallest component sigma. The analysis family assumes one common sigma;
  // when the FWHM conversion at different central wavelengths makes them
  // differ slightly, the smallest is the reference that keeps the probed
  // peak-separation bound below delta_eta for the whole alpha grid.
  double reference_sigma() const;
  // delta_mu / reference_sigma, the dimensionless peak separation.
  double delta_eta() const;

  // Decoherence function at phase = 2 pi Delta_n t (seconds):
  // kappa = sum_i w_i exp(i mu_i phase - (sigma_i phase)^2 / 2).
  std::complex<double> decoherence(double phase) const;

  // Rescaled time tau = reference_sigma * phase for a given phase.
  double tau_of_phase(double phase) const { return reference_sigma() * phase; }

  // Integration range covering all peaks to +-10 sigma.
  double support_lo() const;
  double support_hi() const;

 private:
  std::vector<GaussianComponent> components_;
  std::vector<double> weights_;
};

// integral x(w)^alpha y(w)^(1-alpha) dw by adaptive quadrature, the
// alpha-fidelity of two commuting (frequency-diagonal) states. For two
// equal-sigma single Gaussians this equals exp(-alpha(1-alpha) eta^2 / 2).
double spectral_alpha_fidelity(const GaussianMixtureSpectrum& x,
                               const GaussianMixtureSpectrum& y, double alpha);

// 1/2 integral |x(w) - y(w)| dw. Sign changes of x - y are located first so
// every quadrature panel sees a smooth integrand.
double spectral_trace_distance(const GaussianMixtureSpectrum& x,
                               const GaussianMixtureSpectrum& y);

// integral min(x, y) dw = 1 - spectral_trace_distance. Reported alongside
// "orthogonal peaks" equalities, which the library never assumes silently.
double spectral_overlap(const GaussianMixtureSpectrum& x,
                        const GaussianMixtureSpectrum& y);

}  // namespace qprobe
