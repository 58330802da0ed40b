#pragma once

#include "qprobe/qubit_state.hpp"
#include "qprobe/spectra.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qprobe {

// One birefringent element. The fast axis sits at angle_rad from horizontal;
// delta_n = n_H - n_V.
struct Plate {
  double thickness_mm;
  double angle_rad;
  double delta_n;
};

// Ordered plates forming the polarization-frequency coupling, plus the
// Gauss-Hermite node count used when discretizing a spectrum against it.
class PlateStack {
 public:
  explicit PlateStack(std::vector<Plate> plates, int nodes_per_component = 64);

  static PlateStack aligned(std::span<const double> thicknesses_mm, double delta_n,
                            int nodes_per_component = 64);
  // Angles drawn uniformly from [0, pi) with a seeded generator; the seed is
  // what makes an "unknown" coupling reproducible.
  static PlateStack random_angles(std::span<const double> thicknesses_mm, double delta_n,
                                  std::uint64_t seed, int nodes_per_component = 64);

  std::span<const Plate> plates() const { return plates_; }
  int nodes_per_component() const { return nodes_per_component_; }
  double total_thickness_mm() const;

  // Jones matrix at frequency omega: product over plates of
  // R(theta) diag(e^{i pi w dn L / c}, e^{-i pi w dn L / c}) R(-theta),
  // first plate acting first. The symmetric phase split drops the global
  // phase.
  Matrix2c unitary(double omega_hz) const;

 private:
  std::vector<Plate> plates_;
  int nodes_per_component_;
};

// Frequency-discretized channel: rho -> sum_j w_j U(w_j) rho U(w_j)^dagger.
// Exact up to quadrature error because the interaction never alters the
// frequency, so the partial trace is an omega-average of unitaries.
class FrequencyResolvedChannel {
 public:
  FrequencyResolvedChannel(std::vector<double> weights, std::vector<Matrix2c> unitaries);

  QubitState apply(const QubitState& rho) const;

  std::size_t node_count() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  std::span<const Matrix2c> unitaries() const { return unitaries_; }

 private:
  std::vector<double> weights_;
  std::vector<Matrix2c> unitaries_;
};

// Discretizes the spectrum with per-component Gauss-Hermite nodes and
// evaluates the stack's Jones matrix at each node.
FrequencyResolvedChannel build_channel(const PlateStack& stack,
                                       const GaussianMixtureSpectrum& spectrum);

}  // namespace qprobe
