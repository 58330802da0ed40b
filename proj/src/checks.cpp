#include "qprobe/checks.hpp"

#include "qprobe/coupling.hpp"
#include "qprobe/probing.hpp"
#include "qprobe/qubit_state.hpp"
#include "qprobe/spectra.hpp"
#include "qprobe/tomography.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qprobe {

namespace {

constexpr double kTol = 1e-9;
constexpr double kMuBase = 3.7e14;  // ~810 nm in Hz

QubitState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cos_theta = 2.0 * unit(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
  double r = unit(rng);
  if (unit(rng) < 0.25) r = 1.0;  // exercise the pure-state boundary
  return QubitState::from_bloch(r * sin_theta * std::cos(phi),
                                r * sin_theta * std::sin(phi), r * cos_theta);
}

GaussianMixtureSpectrum random_spectrum(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_comp(1, 3);
  const int n = n_comp(rng);
  std::vector<GaussianComponent> comps;
  std::vector<double> weights;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    comps.push_back({kMuBase + (unit(rng) - 0.5) * 1.0e13, 2e11 + 6e11 * unit(rng)});
    const double w = 0.1 + unit(rng);
    weights.push_back(w);
    sum += w;
  }
  for (double& w : weights) w /= sum;
  // renormalize exactly so the constructor's 1e-12 gate passes
  double s2 = 0.0;
  for (double w : weights) s2 += w;
  weights.back() += 1.0 - s2;
  return GaussianMixtureSpectrum(std::move(comps), std::move(weights));
}

PlateStack random_stack(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_plates(1, 5);
  const int n = n_plates(rng);
  std::vector<double> thicknesses;
  for (int i = 0; i < n; ++i) thicknesses.push_back(0.5 + 3.5 * unit(rng));
  if (unit(rng) < 0.5) return PlateStack::aligned(thicknesses, 0.009);
  return PlateStack::random_angles(thicknesses, 0.009, rng());
}

double random_alpha(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < 0.2) return 0.5;
  return 0.5 + 0.4999 * unit(rng);
}

void record(FuzzResult& result, double margin, const std::string& description) {
  ++result.instances;
  if (result.instances == 1 || margin < result.worst_margin) {
    result.worst_margin = margin;
    result.worst_case = description;
  }
  if (margin < -kTol) ++result.violations;
}

}  // namespace

FuzzResult fuzz_gdpi_fidelity(std::size_t instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FuzzResult result;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto rho1 = random_state(rng);
    const auto rho2 = random_state(rng);
    const auto xi1 = random_spectrum(rng);
    const auto xi2 = random_spectrum(rng);
    const auto stack = random_stack(rng);
    const double alpha = random_alpha(rng);
    const auto phi1 = build_channel(stack, xi1).apply(rho1);
    const auto phi2 = build_channel(stack, xi2).apply(rho2);
    const double lhs = alpha_fidelity(rho1, rho2, alpha) * spectral_alpha_fidelity(xi1, xi2, alpha);
    const double rhs = alpha_fidelity(phi1, phi2, alpha);
    std::ostringstream desc;
    desc << "instance " << i << " alpha=" << alpha << " lhs=" << lhs << " rhs=" << rhs;
    record(result, rhs - lhs, desc.str());
  }
  return result;
}

FuzzResult fuzz_gdpi_trace(std::size_t instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FuzzResult result;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto rho1 = random_state(rng);
    const auto rho2 = random_state(rng);
    const auto xi1 = random_spectrum(rng);
    const auto xi2 = random_spectrum(rng);
    const auto stack = random_stack(rng);
    const auto phi1 = build_channel(stack, xi1).apply(rho1);
    const auto phi2 = build_channel(stack, xi2).apply(rho2);
    const double lhs = trace_distance(phi1, phi2);
    const double rhs = trace_distance(rho1, rho2) + spectral_trace_distance(xi1, xi2);
    std::ostringstream desc;
    desc << "instance " << i << " lhs=" << lhs << " rhs=" << rhs;
    record(result, rhs - lhs, desc.str());
  }
  return result;
}

FuzzResult fuzz_soundness(std::size_t instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FuzzResult result;
  const auto alpha_grid = std::vector<double>{0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
  for (std::size_t i = 0; i < instances; ++i) {
    const double sigma = 3e11 + 4e11 * unit(rng);
    const double eta = 0.5 + 19.5 * unit(rng);
    const double a = unit(rng);
    const double mu1 = kMuBase;
    const double mu2 = mu1 + eta * sigma;
    const auto xi1 = GaussianMixtureSpectrum::two_peak(mu1, mu2, sigma, a);
    const auto xi2 = GaussianMixtureSpectrum::single(mu1, sigma);
    const auto xi3 = GaussianMixtureSpectrum::single(mu2, sigma);
    const auto stack = random_stack(rng);
    const auto probe = QubitState::plus();
    const auto phi1 = build_channel(stack, xi1).apply(probe);
    const auto phi2 = build_channel(stack, xi2).apply(probe);
    const auto phi3 = build_channel(stack, xi3).apply(probe);
    const auto bounds = probe_bounds(phi1, phi2, phi3, probe, probe, probe, alpha_grid);
    const auto eta_lb =
        optimize_alpha(BoundKind::DeltaEtaLower, phi2, phi3, probe, probe, alpha_grid);

    double margin = std::min({a - bounds.lower_fid.value, bounds.upper_fid.value - a,
                              a - bounds.lower_td.value, bounds.upper_td.value - a,
                              eta - eta_lb.bound.value});
    std::ostringstream desc;
    desc << "instance " << i << " A=" << a << " eta=" << eta << " bounds fid=["
         << bounds.lower_fid.value << "," << bounds.upper_fid.value << "] td=["
         << bounds.lower_td.value << "," << bounds.upper_td.value
         << "] eta_lb=" << eta_lb.bound.value;
    record(result, margin, desc.str());
  }
  return result;
}

}  // namespace qprobe
