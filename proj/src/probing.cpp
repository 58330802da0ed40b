#include "qprobe/probing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qprobe {

namespace {

BoundValue clamp_unit(double raw) {
  if (raw < 0.0) return {0.0, true};
  if (raw > 1.0) return {1.0, true};
  return {raw, false};
}

void check_alpha(double alpha, const char* where) {
  if (!(alpha >= 0.5 && alpha < 1.0)) {
    throw std::domain_error(std::string(where) + ": alpha must lie in [1/2, 1)");
  }
}

double fidelity_ratio_power(const QubitState& phi_a, const QubitState& phi_b,
                            const QubitState& rho_a, const QubitState& rho_b,
                            double alpha, const char* where) {
  const double den = alpha_fidelity(rho_a, rho_b, alpha);
  if (den <= 0.0) {
    throw ProtocolError(std::string(where) +
                        ": reference probes have orthogonal supports (zero denominator)");
  }
  const double num = alpha_fidelity(phi_a, phi_b, alpha);
  return std::pow(num / den, 1.0 / alpha);
}

}  // namespace

CommutingMixture::CommutingMixture(std::vector<double> lambda_in, std::vector<double> nu_in,
                                   double p_in)
    : lambda(std::move(lambda_in)), nu(std::move(nu_in)), p(p_in) {
  if (lambda.empty() || lambda.size() != nu.size()) {
    throw std::invalid_argument("CommutingMixture: eigenvalue lists must match and be nonempty");
  }
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("CommutingMixture: p outside [0,1]");
  for (auto* list : {&lambda, &nu}) {
    double sum = 0.0;
    for (double v : *list) {
      if (v < 0.0) throw std::invalid_argument("CommutingMixture: negative eigenvalue");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("CommutingMixture: eigenvalues must sum to 1");
    }
  }
}

std::vector<double> CommutingMixture::mixture_eigenvalues() const {
  std::vector<double> out(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) out[k] = p * lambda[k] + (1.0 - p) * nu[k];
  return out;
}

double discrete_alpha_fidelity(std::span<const double> a, std::span<const double> b,
                               double alpha) {
  check_alpha(alpha, "discrete_alpha_fidelity");
  if (a.size() != b.size()) throw std::invalid_argument("discrete_alpha_fidelity: size mismatch");
  double f = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > 0.0 && b[k] > 0.0) f += std::pow(a[k], alpha) * std::pow(b[k], 1.0 - alpha);
  }
  return f;
}

double discrete_trace_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("discrete_trace_distance: size mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return 0.5 * d;
}

std::pair<BoundValue, BoundValue> coefficient_bounds_fidelity(
    const QubitState& phi1, const QubitState& phi2, const QubitState& phi3,
    const QubitState& rho1, const QubitState& rho2, const QubitState& rho3, double alpha2,
    double alpha3) {
  check_alpha(alpha2, "coefficient_bounds_fidelity");
  check_alpha(alpha3, "coefficient_bounds_fidelity");
  const double upper =
      fidelity_ratio_power(phi1, phi2, rho1, rho2, alpha2, "coefficient_bounds_fidelity");
  const double lower =
      1.0 - fidelity_ratio_power(phi1, phi3, rho1, rho3, alpha3, "coefficient_bounds_fidelity");
  return {clamp_unit(lower), clamp_unit(upper)};
}

std::pair<BoundValue, BoundValue> coefficient_bounds_trace(
    const QubitState& phi1, const QubitState& phi2, const QubitState& phi3,
    const QubitState& rho1, const QubitState& rho2, const QubitState& rho3) {
  const double lower = trace_distance(phi1, phi3) - trace_distance(rho1, rho3);
  const double upper = 1.0 - (trace_distance(phi1, phi2) - trace_distance(rho1, rho2));
  return {clamp_unit(lower), clamp_unit(upper)};
}

BoundValue delta_eta_lower_bound(const QubitState& phi2, const QubitState& phi3,
                                 const QubitState& rho2, const QubitState& rho3,
                                 double alpha) {
  check_alpha(alpha, "delta_eta_lower_bound");
  const double den = alpha_fidelity(rho2, rho3, alpha);
  if (den <= 0.0) {
    throw ProtocolError("delta_eta_lower_bound: reference probes have orthogonal supports");
  }
  const double ratio = alpha_fidelity(phi2, phi3, alpha) / den;
  if (ratio > 1.0) return {0.0, true};  // vacuous under noise, never negative
  if (ratio <= 0.0) {
    throw ProtocolError("delta_eta_lower_bound: evolved reference probes orthogonal");
  }
  return {std::sqrt(2.0 * std::log(ratio) / (alpha * (alpha - 1.0))), false};
}

AlphaOptimum optimize_alpha(BoundKind kind, const QubitState& phi_a, const QubitState& phi_b,
                            const QubitState& rho_a, const QubitState& rho_b,
                            std::span<const double> alpha_grid) {
  if (alpha_grid.empty()) throw std::invalid_argument("optimize_alpha: empty grid");
  AlphaOptimum best;
  bool have = false;
  for (double alpha : alpha_grid) {
    BoundValue candidate;
    switch (kind) {
      case BoundKind::FidelityUpper:
        candidate = clamp_unit(
            fidelity_ratio_power(phi_a, phi_b, rho_a, rho_b, alpha, "optimize_alpha"));
        break;
      case BoundKind::FidelityLower:
        candidate = clamp_unit(
            1.0 - fidelity_ratio_power(phi_a, phi_b, rho_a, rho_b, alpha, "optimize_alpha"));
        break;
      case BoundKind::DeltaEtaLower:
        candidate = delta_eta_lower_bound(phi_a, phi_b, rho_a, rho_b, alpha);
        break;
    }
    const bool tighter = kind == BoundKind::FidelityUpper
                             ? candidate.value < best.bound.value
                             : candidate.value > best.bound.value;
    if (!have || tighter) {
      best = {alpha, candidate};
      have = true;
    }
  }
  return best;
}

ProbeBounds probe_bounds(const QubitState& phi1, const QubitState& phi2,
                         const QubitState& phi3, const QubitState& rho1,
                         const QubitState& rho2, const QubitState& rho3,
                         std::span<const double> alpha_grid) {
  ProbeBounds bounds;
  auto upper = optimize_alpha(BoundKind::FidelityUpper, phi1, phi2, rho1, rho2, alpha_grid);
  auto lower = optimize_alpha(BoundKind::FidelityLower, phi1, phi3, rho1, rho3, alpha_grid);
  bounds.upper_fid = upper.bound;
  bounds.alpha2 = upper.alpha;
  bounds.lower_fid = lower.bound;
  bounds.alpha3 = lower.alpha;
  auto [lower_td, upper_td] = coefficient_bounds_trace(phi1, phi2, phi3, rho1, rho2, rho3);
  bounds.lower_td = lower_td;
  bounds.upper_td = upper_td;
  return bounds;
}

const char* to_string(Decision decision) {
  switch (decision) {
    case Decision::NonMarkovianVerified: return "NonMarkovianVerified";
    case Decision::MarkovianVerified: return "MarkovianVerified";
    case Decision::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(ACritSource source) {
  return source == ACritSource::Known ? "known" : "probed";
}

ProbeVerdict verdict(const ProbeBounds& bounds, double a_crit, ACritSource source) {
  if (!(a_crit >= 0.0 && a_crit <= 0.5)) {
    throw std::domain_error("verdict: a_crit must lie in [0, 1/2]");
  }
  ProbeVerdict v;
  v.bounds = bounds;
  v.a_crit = a_crit;
  v.source = source;
  for (auto [flag, name] : {std::pair{bounds.lower_fid.clamped, "clamped_lower_fid"},
                            {bounds.upper_fid.clamped, "clamped_upper_fid"},
                            {bounds.lower_td.clamped, "clamped_lower_td"},
                            {bounds.upper_td.clamped, "clamped_upper_td"}}) {
    if (flag) v.notes.push_back(name);
  }
  if (source == ACritSource::ProbedUpperBound) {
    v.notes.push_back("acrit_is_probed_upper_bound");
  }
  const double lo = bounds.best_lower();
  const double up = bounds.best_upper();
  if (bounds.inconsistent()) {
    v.decision = Decision::Inconclusive;
    v.notes.push_back("inconsistent_bounds");
    return v;
  }
  if (lo >= a_crit && up <= 1.0 - a_crit) {
    v.decision = Decision::NonMarkovianVerified;
  } else if (up < a_crit || lo > 1.0 - a_crit) {
    v.decision = Decision::MarkovianVerified;
  } else {
    v.decision = Decision::Inconclusive;
  }
  return v;
}

std::optional<DerivedQuantityBounds> derived_quantity_bounds(
    double p_lo, double p_hi, const ComponentProperties& xi2, const ComponentProperties& xi3,
    bool orthogonal_declared) {
  if (!orthogonal_declared) return std::nullopt;  // the equalities need xi2 perp xi3
  if (!(0.0 <= p_lo && p_lo <= p_hi && p_hi <= 1.0)) {
    throw std::domain_error("derived_quantity_bounds: need 0 <= p_lo <= p_hi <= 1");
  }
  DerivedQuantityBounds out{};

  const auto purity_of = [&](double p) {
    return xi2.purity * p * p + xi3.purity * (1.0 - p) * (1.0 - p);
  };
  double pur_min = std::min(purity_of(p_lo), purity_of(p_hi));
  double pur_max = std::max(purity_of(p_lo), purity_of(p_hi));
  const double denom = xi2.purity + xi3.purity;
  if (denom > 0.0) {
    const double p_star = xi3.purity / denom;  // vertex of the parabola
    if (p_star > p_lo && p_star < p_hi) pur_min = std::min(pur_min, purity_of(p_star));
  }
  out.purity = {pur_min, pur_max};

  const auto entropy_of = [&](double p) {
    double mix = 0.0;
    if (p > 0.0 && p < 1.0) mix = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
    return p * xi2.entropy + (1.0 - p) * xi3.entropy + mix;
  };
  double ent_min = std::min(entropy_of(p_lo), entropy_of(p_hi));
  double ent_max = std::max(entropy_of(p_lo), entropy_of(p_hi));
  const double p_peak = 1.0 / (1.0 + std::exp(xi3.entropy - xi2.entropy));
  if (p_peak > p_lo && p_peak < p_hi) ent_max = std::max(ent_max, entropy_of(p_peak));
  out.entropy = {ent_min, ent_max};

  const double c_lo = std::abs(2.0 * p_lo - 1.0);
  const double c_hi = std::abs(2.0 * p_hi - 1.0);
  const double c_min = (p_lo <= 0.5 && 0.5 <= p_hi) ? 0.0 : std::min(c_lo, c_hi);
  out.concurrence = {c_min, std::max(c_lo, c_hi)};
  return out;
}

std::vector<BoundValue> eigenvalue_upper_bounds(const QubitState& phi1,
                                                std::span<const QubitState> phi_refs,
                                                const QubitState& rho1,
                                                std::span<const QubitState> rho_refs,
                                                double alpha) {
  check_alpha(alpha, "eigenvalue_upper_bounds");
  if (phi_refs.size() != rho_refs.size() || phi_refs.empty()) {
    throw std::invalid_argument("eigenvalue_upper_bounds: one probe per reference state");
  }
  std::vector<BoundValue> bounds;
  bounds.reserve(phi_refs.size());
  for (std::size_t i = 0; i < phi_refs.size(); ++i) {
    bounds.push_back(clamp_unit(fidelity_ratio_power(phi1, phi_refs[i], rho1, rho_refs[i],
                                                     alpha, "eigenvalue_upper_bounds")));
  }
  return bounds;
}

}  // namespace qprobe
