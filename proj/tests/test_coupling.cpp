#include "qprobe/coupling.hpp"

#include "qprobe/checks.hpp"
#include "qprobe/dephasing.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qprobe;

namespace {

constexpr double kMu = 3.7e14;
constexpr double kSigma = 5.8e11;
constexpr double kDeltaN = 0.009;

}  // namespace

TEST_CASE("plate and stack validation") {
  CHECK_THROWS_AS(PlateStack({{0.0, 0.0, kDeltaN}}), std::invalid_argument);
  CHECK_THROWS_AS(PlateStack({{-1.0, 0.0, kDeltaN}}), std::invalid_argument);
  CHECK_THROWS_AS(PlateStack({{1.0, 0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(PlateStack({}), std::invalid_argument);
  CHECK_THROWS_AS(PlateStack({{1.0, 0.0, kDeltaN}}, 8), std::invalid_argument);
}

TEST_CASE("aligned single plate reproduces the decoherence function") {
  const auto spectrum = GaussianMixtureSpectrum::two_peak(kMu, kMu + 6.0 * kSigma, kSigma, 0.7);
  const auto plus = QubitState::plus();
  for (double thickness : {2.0, 7.0, 12.0}) {
    const double t[] = {thickness};
    const auto channel = build_channel(PlateStack::aligned(t, kDeltaN), spectrum);
    const auto out = channel.apply(plus);
    const double phase = 2.0 * std::numbers::pi * kDeltaN * (thickness * 1e-3) / kSpeedOfLight;
    const auto kappa = spectrum.decoherence(phase);
    CHECK(std::abs(2.0 * out.entry(0, 1) - kappa) < 1e-8);
  }
}

TEST_CASE("zero-rotation plates compose additively") {
  const auto spectrum = GaussianMixtureSpectrum::single(kMu, kSigma);
  const double both[] = {3.0, 4.5};
  const double merged[] = {7.5};
  const auto split = build_channel(PlateStack::aligned(both, kDeltaN), spectrum);
  const auto whole = build_channel(PlateStack::aligned(merged, kDeltaN), spectrum);
  for (const auto& rho : {QubitState::plus(), QubitState::from_bloch(0.2, -0.4, 0.5)}) {
    CHECK((split.apply(rho).matrix() - whole.apply(rho).matrix()).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("random-angle channels stay physical") {
  std::mt19937_64 rng(77);
  const auto spectrum = GaussianMixtureSpectrum::two_peak(kMu, kMu + 8.0 * kSigma, kSigma, 0.4);
  for (int i = 0; i < 20; ++i) {
    const double t[] = {1.0, 2.0, 1.5};
    const auto channel = build_channel(PlateStack::random_angles(t, kDeltaN, rng()), spectrum);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto rho = QubitState::from_bloch(unit(rng) - 0.5, unit(rng) - 0.5, unit(rng) - 0.5);
    const auto out = channel.apply(rho);
    CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(out.entry(0, 1) - std::conj(out.entry(1, 0))) < 1e-14);
    CHECK(out.spectral().eigenvalues(0) >= -1e-12);
  }
}

TEST_CASE("aligned stacks fix populations") {
  const auto spectrum = GaussianMixtureSpectrum::two_peak(kMu, kMu + 5.0 * kSigma, kSigma, 0.3);
  const double t[] = {2.0, 5.0};
  const auto channel = build_channel(PlateStack::aligned(t, kDeltaN), spectrum);
  const auto diag = QubitState::from_bloch(0, 0, -0.6);
  CHECK((channel.apply(diag).matrix() - diag.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("plate angles are reproducible from the seed") {
  const double t[] = {1.0, 1.0, 1.0, 1.0};
  const auto a = PlateStack::random_angles(t, kDeltaN, 42);
  const auto b = PlateStack::random_angles(t, kDeltaN, 42);
  const auto c = PlateStack::random_angles(t, kDeltaN, 43);
  for (std::size_t i = 0; i < a.plates().size(); ++i) {
    CHECK(a.plates()[i].angle_rad == b.plates()[i].angle_rad);
    CHECK(a.plates()[i].angle_rad >= 0.0);
    CHECK(a.plates()[i].angle_rad < std::numbers::pi);
  }
  bool differs = false;
  for (std::size_t i = 0; i < a.plates().size(); ++i) {
    differs = differs || a.plates()[i].angle_rad != c.plates()[i].angle_rad;
  }
  CHECK(differs);
}

TEST_CASE("doubling the node count leaves the channel unchanged") {
  const auto spectrum =
      GaussianMixtureSpectrum::two_peak(kMu, kMu + 16.0 * kSigma, kSigma, 0.5122);
  const double t[] = {1.5, 2.5, 3.0};
  const auto stack64 = PlateStack::random_angles(t, kDeltaN, 7, 64);
  const auto stack128 = PlateStack::random_angles(t, kDeltaN, 7, 128);
  const auto ch64 = build_channel(stack64, spectrum);
  const auto ch128 = build_channel(stack128, spectrum);
  for (const auto& rho : {QubitState::plus(), QubitState::from_bloch(0.1, 0.7, -0.3)}) {
    CHECK((ch64.apply(rho).matrix() - ch128.apply(rho).matrix()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("generalized data processing holds on random instances") {
  const auto fid = fuzz_gdpi_fidelity(200, 2024);
  CHECK(fid.violations == 0);
  const auto td = fuzz_gdpi_trace(200, 2025);
  CHECK(td.violations == 0);
}
