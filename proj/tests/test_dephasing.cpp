#include "qprobe/dephasing.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace qprobe;

namespace {

constexpr double kMu = 3.7e14;
constexpr double kSigma = 5.8e11;

// |kappa|(tau) of the equal-sigma two-peak family, closed form
double kappa_mag(double a, double eta, double tau) {
  return std::exp(-0.5 * tau * tau) *
         std::sqrt(1.0 - 2.0 * a * (1.0 - a) * (1.0 - std::cos(eta * tau)));
}

// Independent route to the critical amplitude that never forms g(tau) or the
// quadratic inverse: per tau, bisect on A with blp_condition alone, then take
// the minimum over a dense tau grid with one local refinement pass.
double a_crit_by_scan(double eta, double tau_max) {
  auto min_a_at = [&](double tau) {
    if (!blp_condition(0.5, eta, tau)) return 1.0;  // band empty at this tau
    double lo = 0.0, hi = 0.5;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (blp_condition(mid, eta, tau) ? hi : lo) = mid;
    }
    return hi;
  };
  const double step = std::numbers::pi / (200.0 * eta);
  double best = 1.0, best_tau = 0.0;
  for (double tau = step; tau <= tau_max; tau += step) {
    const double a = min_a_at(tau);
    if (a < best) {
      best = a;
      best_tau = tau;
    }
  }
  for (double tau = best_tau - step; tau <= best_tau + step; tau += step / 200.0) {
    if (tau > 0) best = std::min(best, min_a_at(tau));
  }
  return best;
}

}  // namespace

TEST_CASE("dephasing channel application") {
  const auto plus = QubitState::plus();

  DephasingChannel identity{1.0, 0.0};
  CHECK((identity.apply(plus).matrix() - plus.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  DephasingChannel half{0.5, 1.0};
  const auto out = half.apply(plus);
  CHECK(out.entry(0, 0).real() == doctest::Approx(0.5));
  CHECK(out.entry(0, 1).real() == doctest::Approx(0.25));
  CHECK(out.entry(0, 1).imag() == doctest::Approx(0.0));

  // populations are fixed points for any kappa
  const auto diag = QubitState::from_bloch(0, 0, 0.4);
  DephasingChannel swirl{std::complex<double>(0.3, -0.4), 2.0};
  CHECK((swirl.apply(diag).matrix() - diag.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  // trace and hermiticity preserved, positivity within tolerance
  const auto rho = QubitState::from_bloch(0.3, 0.2, -0.5);
  const auto evolved = swirl.apply(rho);
  CHECK(evolved.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(evolved.spectral().eigenvalues(0) >= -1e-12);
}

TEST_CASE("channel from spectrum matches the decoherence function") {
  const auto s = GaussianMixtureSpectrum::two_peak(kMu, kMu + 6.0 * kSigma, kSigma, 0.7);
  const double phase = 1.3 / kSigma;
  const auto ch = DephasingChannel::from_spectrum(s, phase);
  CHECK(ch.kappa == s.decoherence(phase));
  CHECK(ch.tau == doctest::Approx(1.3));
}

TEST_CASE("blp condition edge cases") {
  for (double tau = 0.1; tau <= 20.0; tau += 0.1) {
    CHECK_FALSE(blp_condition(0.3, 0.0, tau));   // single peak: monotone decay
    CHECK_FALSE(blp_condition(0.0, 10.0, tau));  // h(0) = 0
    CHECK_FALSE(blp_condition(1.0, 10.0, tau));  // h(1) = 0
  }
  CHECK_THROWS_AS(blp_condition(-0.1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(blp_condition(0.5, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(blp_condition(0.5, 1.0, 0.0), std::domain_error);
}

TEST_CASE("blp condition is symmetric in A <-> 1-A") {
  for (double a = 0.0; a <= 0.5; a += 0.01) {
    for (double tau = 0.05; tau <= 5.0; tau += 0.05) {
      CHECK(blp_condition(a, 10.0, tau) == blp_condition(1.0 - a, 10.0, tau));
    }
  }
}

TEST_CASE("blp condition agrees with the finite-difference |kappa| oracle") {
  const double eta = 10.0, h = 1e-6;
  int checked = 0;
  for (int it = 1; it <= 200; ++it) {
    const double tau = 5.0 * it / 200.0;
    for (int ia = 0; ia <= 200; ++ia) {
      const double a = ia / 200.0;
      const double fd = (kappa_mag(a, eta, tau + h) - kappa_mag(a, eta, tau - h)) / (2.0 * h);
      if (std::abs(fd) <= 1e-6) continue;  // too close to a sign change
      if (kappa_mag(a, eta, tau) < 1e-9) continue;  // |kappa| kink
      CHECK(blp_condition(a, eta, tau) == (fd > 0.0));
      ++checked;
    }
  }
  CHECK(checked > 30000);
}

TEST_CASE("critical amplitude: absent at zero separation, fit agreement") {
  CHECK_FALSE(a_crit_numeric(0.0).has_value());
  CHECK(a_crit_fit(0.0) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::abs(a_crit_fit(0.0) - 0.5) < 5e-4);

  const auto ac10 = a_crit_numeric(10.0);
  REQUIRE(ac10.has_value());
  const double fit10 = 0.0885553 * std::exp(-8.70419) + 0.411445 / (1.0 + 8.45395);
  CHECK(a_crit_fit(10.0) == doctest::Approx(fit10).epsilon(1e-12));
  CHECK(std::abs(*ac10 - fit10) < 0.01);

  const auto ac163 = a_crit_numeric(16.3);
  REQUIRE(ac163.has_value());
  CHECK(std::abs(*ac163 - a_crit_fit(16.3)) < 0.01);

  // fit decays monotonically toward zero
  double prev = a_crit_fit(0.0);
  for (double eta = 1.0; eta <= 30.0; eta += 1.0) {
    const double cur = a_crit_fit(eta);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(a_crit_fit(30.0) < 0.01);
}

TEST_CASE("critical amplitude matches a direct condition scan") {
  for (double eta : {4.0, 8.0, 16.0}) {
    const auto solver = a_crit_numeric(eta);
    REQUIRE(solver.has_value());
    CHECK(std::abs(*solver - a_crit_by_scan(eta, 15.0)) < 1e-4);
  }
}

TEST_CASE("critical amplitude is non-increasing in delta_eta") {
  double prev = 0.5;
  for (double eta = 1.0; eta <= 20.0; eta += 0.5) {
    const auto ac = a_crit_numeric(eta);
    REQUIRE(ac.has_value());
    CHECK(*ac <= prev + 1e-12);
    prev = *ac;
  }
}

TEST_CASE("amplitude dichotomy around the critical value") {
  for (double eta : {4.0, 10.0}) {
    const double ac = *a_crit_numeric(eta);
    std::vector<double> grid;
    for (double tau = 1e-3; tau <= 30.0; tau += std::numbers::pi / (400.0 * eta)) {
      grid.push_back(tau);
    }
    auto any_backflow = [&](double a) {
      for (double tau : grid) {
        if (blp_condition(a, eta, tau)) return true;
      }
      return false;
    };
    for (double a = ac + 1e-3; a <= 1.0 - ac - 1e-3; a += 0.05) CHECK(any_backflow(a));
    for (double a = 0.0; a < ac - 1e-3; a += ac / 7.0) CHECK_FALSE(any_backflow(a));
    for (double a = 1.0 - ac + 1e-3; a <= 1.0; a += ac / 7.0) CHECK_FALSE(any_backflow(a));
  }
}

TEST_CASE("interval classification") {
  std::vector<double> grid;
  for (double tau = 0.01; tau <= 5.0; tau += 0.01) grid.push_back(tau);

  SUBCASE("vacuous bounds never certify non-Markovianity") {
    for (double eta : {2.0, 6.3, 12.0}) {
      const auto labels = classify_intervals(eta, 0.0, 1.0, grid);
      for (auto label : labels) CHECK(label != IntervalLabel::NonMarkovianVerified);
    }
  }

  SUBCASE("white regions are Markovian for any bounds") {
    const double eta = 6.3;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!nm_band(eta, grid[i]).has_value()) {
        const auto labels = classify_intervals(eta, 0.3, 0.9, {&grid[i], 1});
        CHECK(labels[0] == IntervalLabel::MarkovianVerified);
      }
    }
  }

  SUBCASE("single peak is Markovian everywhere") {
    const auto labels = classify_intervals(0.0, 0.2, 0.8, grid);
    for (auto label : labels) CHECK(label == IntervalLabel::MarkovianVerified);
  }

  SUBCASE("bounds inside the band certify non-Markovianity") {
    // at the first band minimum of eta = 6.3 the band is wide open
    const double eta = 6.3;
    const auto region = NonMarkovianityRegion::compute(eta, grid);
    REQUIRE(region.a_crit.has_value());
    bool found = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (region.bands[i] && region.bands[i]->a_minus < 0.45 &&
          region.bands[i]->a_plus > 0.55) {
        const auto labels = classify_intervals(eta, 0.45, 0.55, {&grid[i], 1});
        CHECK(labels[0] == IntervalLabel::NonMarkovianVerified);
        found = true;
      }
    }
    CHECK(found);
  }

  CHECK_THROWS_AS(classify_intervals(6.3, 0.8, 0.2, grid), std::domain_error);
}

TEST_CASE("aligned-plate upper bound never drops below the critical amplitude") {
  // 1 - D_tr(Phi_1 rho_+, Phi_2 rho_+) >= a_crit for every (A, eta, tau)
  const auto plus = QubitState::plus();
  for (double eta : {2.0, 6.0, 10.0, 16.0}) {
    const double ac = *a_crit_numeric(eta);
    const auto xi2 = GaussianMixtureSpectrum::single(kMu, kSigma);
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto xi1 = GaussianMixtureSpectrum::two_peak(kMu, kMu + eta * kSigma, kSigma, a);
      for (double tau = 0.05; tau <= 5.0; tau += 0.05) {
        const double phase = tau / kSigma;
        const auto phi1 = DephasingChannel::from_spectrum(xi1, phase).apply(plus);
        const auto phi2 = DephasingChannel::from_spectrum(xi2, phase).apply(plus);
        CHECK(1.0 - trace_distance(phi1, phi2) >= ac - 1e-9);
      }
    }
  }
}
