#include "qprobe/coupling.hpp"

#include "qprobe/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qprobe {

PlateStack::PlateStack(std::vector<Plate> plates, int nodes_per_component)
    : plates_(std::move(plates)), nodes_per_component_(nodes_per_component) {
  if (plates_.empty()) throw std::invalid_argument("PlateStack: no plates");
  if (nodes_per_component_ < 16) {
    throw std::invalid_argument("PlateStack: need at least 16 quadrature nodes per component");
  }
  for (const auto& p : plates_) {
    if (!(p.thickness_mm > 0.0)) throw std::invalid_argument("Plate: thickness must be > 0");
    if (p.delta_n == 0.0) throw std::invalid_argument("Plate: delta_n must be nonzero");
  }
}

PlateStack PlateStack::aligned(std::span<const double> thicknesses_mm, double delta_n,
                               int nodes_per_component) {
  std::vector<Plate> plates;
  plates.reserve(thicknesses_mm.size());
  for (double t : thicknesses_mm) plates.push_back({t, 0.0, delta_n});
  return PlateStack(std::move(plates), nodes_per_component);
}

PlateStack PlateStack::random_angles(std::span<const double> thicknesses_mm, double delta_n,
                                     std::uint64_t seed, int nodes_per_component) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::vector<Plate> plates;
  plates.reserve(thicknesses_mm.size());
  for (double t : thicknesses_mm) plates.push_back({t, angle(rng), delta_n});
  return PlateStack(std::move(plates), nodes_per_component);
}

double PlateStack::total_thickness_mm() const {
  double total = 0.0;
  for (const auto& p : plates_) total += p.thickness_mm;
  return total;
}

Matrix2c PlateStack::unitary(double omega_hz) const {
  Matrix2c u = Matrix2c::Identity();
  for (const auto& p : plates_) {
    const double half_phase =
        std::numbers::pi * omega_hz * p.delta_n * (p.thickness_mm * 1e-3) / kSpeedOfLight;
    const std::complex<double> eph(std::cos(half_phase), std::sin(half_phase));
    Matrix2c retarder;
    retarder << eph, 0.0, 0.0, std::conj(eph);
    const double c = std::cos(p.angle_rad), s = std::sin(p.angle_rad);
    Matrix2c rot;
    rot << c, -s, s, c;
    u = (rot * retarder * rot.transpose() * u).eval();
  }
  return u;
}

FrequencyResolvedChannel::FrequencyResolvedChannel(std::vector<double> weights,
                                                   std::vector<Matrix2c> unitaries)
    : weights_(std::move(weights)), unitaries_(std::move(unitaries)) {
  if (weights_.empty() || weights_.size() != unitaries_.size()) {
    throw std::invalid_argument("FrequencyResolvedChannel: node/weight mismatch");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("FrequencyResolvedChannel: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("FrequencyResolvedChannel: weights must sum to 1");
  }
  for (const auto& u : unitaries_) {
    if (((u.adjoint() * u) - Matrix2c::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("FrequencyResolvedChannel: node matrix not unitary");
    }
  }
}

QubitState FrequencyResolvedChannel::apply(const QubitState& rho) const {
  Matrix2c out = Matrix2c::Zero();
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    out += weights_[j] * (unitaries_[j] * rho.matrix() * unitaries_[j].adjoint());
  }
  return QubitState(out);
}

FrequencyResolvedChannel build_channel(const PlateStack& stack,
                                       const GaussianMixtureSpectrum& spectrum) {
  const auto& rule = gauss_hermite(stack.nodes_per_component());
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  std::vector<double> weights;
  std::vector<Matrix2c> unitaries;
  weights.reserve(rule.nodes.size() * spectrum.components().size());
  unitaries.reserve(weights.capacity());
  double sum = 0.0;
  for (std::size_t i = 0; i < spectrum.components().size(); ++i) {
    const auto& comp = spectrum.components()[i];
    const double wc = spectrum.weights()[i];
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double omega = comp.mu_hz + std::numbers::sqrt2 * comp.sigma_hz * rule.nodes[j];
      const double w = wc * rule.weights[j] * inv_sqrt_pi;
      weights.push_back(w);
      unitaries.push_back(stack.unitary(omega));
      sum += w;
    }
  }
  for (double& w : weights) w /= sum;
  return FrequencyResolvedChannel(std::move(weights), std::move(unitaries));
}

}  // namespace qprobe
