#pragma once

#include "qprobe/qubit_state.hpp"
#include "qprobe/spectra.hpp"

#include <optional>
#include <span>
#include <vector>

namespace qprobe {

// Pure dephasing channel of the polarization qubit at one evaluation time:
// populations fixed, coherences scaled by kappa (and its conjugate). tau is
// the rescaled time sigma * phase with phase = 2 pi Delta_n t. source keeps
// the driving spectrum when the channel was derived from one.
struct DephasingChannel {
  std::complex<double> kappa;
  double tau = 0.0;
  std::optional<GaussianMixtureSpectrum> source;

  static DephasingChannel from_spectrum(const GaussianMixtureSpectrum& s, double phase);

  QubitState apply(const QubitState& rho) const;
};

// Rescaled denominator of the backflow condition:
// theta(tau) = 2 tau (1 - cos(eta tau)) - eta sin(eta tau).
double blp_theta(double delta_eta, double tau);

// g(tau) = tau / theta(tau) where theta > 0; the dynamics admits backflow at
// tau for amplitude a iff a(1-a) > g(tau).
std::optional<double> blp_g(double delta_eta, double tau);

// True iff d|kappa|/dtau > 0 at tau for the two-peak family with weight a.
bool blp_condition(double a, double delta_eta, double tau);

// Open interval of amplitudes with backflow at tau: (a_minus, a_plus) with
// a_-/+ = (1 -/+ sqrt(1 - 4 g)) / 2. Empty (nullopt) where theta <= 0 or
// g >= 1/4.
struct NonMarkovianBand {
  double a_minus;
  double a_plus;
};
std::optional<NonMarkovianBand> nm_band(double delta_eta, double tau);

// Critical amplitude: the dynamics is non-Markovian iff
// a in [a_crit, 1 - a_crit]. Computed from the infimum of g(tau) over
// (0, tau_max] by a coarse scan (step resolving the eta oscillation)
// followed by golden-section refinement of each local minimum. Absent when
// no tau yields a valid band (e.g. delta_eta = 0).
std::optional<double> a_crit_numeric(double delta_eta, double tau_max = 50.0);

// Fitted critical-amplitude curve
// 0.0885553 exp(-0.0870419 eta^2) + 0.411445 / (0.0845395 eta^2 + 1).
double a_crit_fit(double delta_eta);

enum class IntervalLabel { MarkovianVerified, NonMarkovianVerified, Inconclusive };
const char* to_string(IntervalLabel label);

// Per-tau classification against measured amplitude bounds [a_lo, a_hi]:
//   no band or no overlap            -> MarkovianVerified
//   [a_lo, a_hi] inside the band     -> NonMarkovianVerified
//   otherwise                        -> Inconclusive
std::vector<IntervalLabel> classify_intervals(double delta_eta, double a_lo, double a_hi,
                                              std::span<const double> tau_grid);

// The non-Markovian region of one spectrum family: critical amplitude plus
// the per-tau amplitude bands on a grid.
struct NonMarkovianityRegion {
  double delta_eta = 0.0;
  std::optional<double> a_crit;
  std::vector<double> tau_grid;
  std::vector<std::optional<NonMarkovianBand>> bands;

  static NonMarkovianityRegion compute(double delta_eta, std::span<const double> tau_grid,
                                       double tau_max_for_a_crit = 50.0);
};

}  // namespace qprobe
