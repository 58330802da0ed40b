#include "qprobe/qubit_state.hpp"

#include "qprobe/coupling.hpp"
#include "qprobe/spectra.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qprobe;

namespace {

std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

QubitState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double ct = 2.0 * unit(rng) - 1.0;
  const double ph = 2.0 * std::numbers::pi * unit(rng);
  const double st = std::sqrt(1.0 - ct * ct);
  const double r = unit(rng);
  return QubitState::from_bloch(r * st * std::cos(ph), r * st * std::sin(ph), r * ct);
}

Matrix2c random_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = 2.0 * std::numbers::pi * unit(rng);
  const double b = std::numbers::pi * unit(rng);
  const double c = 2.0 * std::numbers::pi * unit(rng);
  Matrix2c u;
  const std::complex<double> i(0.0, 1.0);
  u << std::exp(i * a) * std::cos(b), std::exp(i * c) * std::sin(b),
      -std::exp(-i * c) * std::sin(b), std::exp(-i * a) * std::cos(b);
  return u;
}

}  // namespace

TEST_CASE("construction validates hermiticity, trace and positivity") {
  Matrix2c bad_herm;
  bad_herm << 0.5, std::complex<double>(0.1, 0.1), std::complex<double>(0.1, 0.1), 0.5;
  CHECK_THROWS_AS(QubitState{bad_herm}, std::invalid_argument);

  Matrix2c bad_trace;
  bad_trace << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(QubitState{bad_trace}, std::invalid_argument);

  Matrix2c bad_psd;  // eigenvalues 1.2, -0.2
  bad_psd << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(QubitState{bad_psd}, std::invalid_argument);

  // an eigenvalue at -5e-11 is inside the clamp band
  Matrix2c near;
  near << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
  const QubitState s{near};
  CHECK(s.spectral().eigenvalues(0) >= 0.0);
  CHECK(s.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trace distance: identical, orthogonal, dephased pair") {
  const auto plus = QubitState::plus();
  CHECK(trace_distance(plus, plus) == doctest::Approx(0.0));
  CHECK(trace_distance(plus, QubitState::minus()) == doctest::Approx(1.0).epsilon(1e-14));

  // dephased |+> pair: distance is |kappa - kappa'| / 2
  auto rng = test_rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double r1 = unit(rng), t1 = 2.0 * std::numbers::pi * unit(rng);
    const double r2 = unit(rng), t2 = 2.0 * std::numbers::pi * unit(rng);
    const std::complex<double> k1 = r1 * std::exp(std::complex<double>(0, t1));
    const std::complex<double> k2 = r2 * std::exp(std::complex<double>(0, t2));
    const double d = trace_distance(QubitState::dephased_plus(k1), QubitState::dephased_plus(k2));
    CHECK(d == doctest::Approx(0.5 * std::abs(k1 - k2)).epsilon(1e-12));
  }
}

TEST_CASE("trace distance triangle inequality") {
  auto rng = test_rng(12);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_state(rng), b = random_state(rng), c = random_state(rng);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10);
  }
}

TEST_CASE("alpha fidelity basics") {
  const auto plus = QubitState::plus();
  CHECK(alpha_fidelity(plus, plus, 0.7) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(alpha_fidelity(plus, QubitState::minus(), 0.5) == doctest::Approx(0.0));
  // orthogonal supports give 0 for any alpha, by the support convention
  CHECK(alpha_fidelity(plus, QubitState::minus(), 0.75) == doctest::Approx(0.0));
  CHECK_THROWS_AS(alpha_fidelity(plus, plus, 0.3), std::domain_error);
  CHECK_THROWS_AS(alpha_fidelity(plus, plus, 1.0), std::domain_error);
}

TEST_CASE("fidelity of dephased pair matches the A=0 closed form") {
  // F_{1/2}(rho(k1), rho(k2))^2 = 1 + e^{-tau^2} (cos(eta tau) - 1) / 2 when
  // |k1| = |k2| = e^{-tau^2/2} and the phases differ by eta*tau
  for (double eta : {2.0, 6.0, 10.0, 16.0}) {
    for (double tau = 0.1; tau <= 3.0; tau += 0.23) {
      const double env = std::exp(-0.5 * tau * tau);
      const std::complex<double> k1 = env * std::exp(std::complex<double>(0, 0.37));
      const std::complex<double> k2 = env * std::exp(std::complex<double>(0, 0.37 + eta * tau));
      const double f = fidelity(QubitState::dephased_plus(k1), QubitState::dephased_plus(k2));
      const double expected = 1.0 + 0.5 * std::exp(-tau * tau) * (std::cos(eta * tau) - 1.0);
      CHECK(f * f == doctest::Approx(expected).epsilon(1e-11));
    }
  }
}

TEST_CASE("alpha fidelity is unitarily invariant") {
  auto rng = test_rng(13);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_state(rng), b = random_state(rng);
    const auto u = random_unitary(rng);
    for (double alpha : {0.5, 0.7, 0.95}) {
      const double f0 = alpha_fidelity(a, b, alpha);
      const double f1 = alpha_fidelity(QubitState(u * a.matrix() * u.adjoint()),
                                       QubitState(u * b.matrix() * u.adjoint()), alpha);
      CHECK(std::abs(f0 - f1) < 1e-10);
    }
  }
}

TEST_CASE("alpha fidelity of commuting diagonal states") {
  auto rng = test_rng(14);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double p = unit(rng), q = unit(rng);
    const auto a = QubitState::from_bloch(0, 0, 2 * p - 1);
    const auto b = QubitState::from_bloch(0, 0, 2 * q - 1);
    for (double alpha : {0.5, 0.6, 0.8, 0.99}) {
      double expected = 0.0;
      if (p > 0 && q > 0) expected += std::pow(p, alpha) * std::pow(q, 1 - alpha);
      if (p < 1 && q < 1) expected += std::pow(1 - p, alpha) * std::pow(1 - q, 1 - alpha);
      CHECK(alpha_fidelity(a, b, alpha) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("purity and entropy") {
  CHECK(purity(QubitState::plus()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(purity(QubitState::maximally_mixed()) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(purity(QubitState::dephased_plus(0.6)) == doctest::Approx(0.68).epsilon(1e-14));

  CHECK(von_neumann_entropy(QubitState::plus()) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(QubitState::maximally_mixed()) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-13));
  const auto skew = QubitState::from_bloch(0, 0, 0.8);  // eigenvalues 0.9, 0.1
  CHECK(von_neumann_entropy(skew) ==
        doctest::Approx(-0.9 * std::log(0.9) - 0.1 * std::log(0.1)).epsilon(1e-13));
}

TEST_CASE("data processing under simulated channels") {
  // single-channel DPI: distances contract, fidelity grows
  auto rng = test_rng(15);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int instances = 0;
  while (instances < 1000) {
    const double sigma = 3e11 + 3e11 * unit(rng);
    const double mu = 3.7e14 + 1e12 * unit(rng);
    GaussianMixtureSpectrum spectrum =
        unit(rng) < 0.5
            ? GaussianMixtureSpectrum::single(mu, sigma)
            : GaussianMixtureSpectrum::two_peak(mu, mu + 10.0 * sigma * unit(rng), sigma,
                                                unit(rng));
    const double thicknesses[] = {0.5 + 3.0 * unit(rng), 0.5 + 3.0 * unit(rng)};
    const auto stack = unit(rng) < 0.5 ? PlateStack::aligned(thicknesses, 0.009, 32)
                                       : PlateStack::random_angles(thicknesses, 0.009, rng(), 32);
    const auto channel = build_channel(stack, spectrum);
    const auto r1 = random_state(rng), r2 = random_state(rng);
    const auto p1 = channel.apply(r1), p2 = channel.apply(r2);
    CHECK(trace_distance(p1, p2) <= trace_distance(r1, r2) + 1e-9);
    CHECK(fidelity(p1, p2) >= fidelity(r1, r2) - 1e-9);
    ++instances;
  }
}
