#pragma once

#include "qprobe/qubit_state.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qprobe {

// Raised when a probing formula is fed an invalid design, e.g. reference
// probes with orthogonal supports (zero denominator fidelity).
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// Two commuting system states xi2 = sum lambda_k |k><k|, xi3 = sum nu_k |k><k|
// mixed with coefficient p into xi1 = p xi2 + (1-p) xi3.
struct CommutingMixture {
  std::vector<double> lambda;
  std::vector<double> nu;
  double p = 0.0;

  CommutingMixture(std::vector<double> lambda, std::vector<double> nu, double p);
  std::vector<double> mixture_eigenvalues() const;
};

// sum_k a_k^alpha b_k^(1-alpha) for two distributions diagonal in the same
// basis.
double discrete_alpha_fidelity(std::span<const double> a, std::span<const double> b,
                               double alpha);
// 1/2 sum_k |a_k - b_k|.
double discrete_trace_distance(std::span<const double> a, std::span<const double> b);

// A bound value in [0,1]; clamped marks that noise pushed the raw value
// outside and it was pulled back (the flag keeps the error bars honest).
struct BoundValue {
  double value = 0.0;
  bool clamped = false;
};

// Two-sided bounds on the convex coefficient from the alpha-fidelity route:
//   1 - [F_a3(phi1,phi3)/F_a3(rho1,rho3)]^(1/a3)  <=  p  <=
//       [F_a2(phi1,phi2)/F_a2(rho1,rho2)]^(1/a2).
std::pair<BoundValue, BoundValue> coefficient_bounds_fidelity(
    const QubitState& phi1, const QubitState& phi2, const QubitState& phi3,
    const QubitState& rho1, const QubitState& rho2, const QubitState& rho3,
    double alpha2, double alpha3);

// Trace-distance route:
//   D(phi1,phi3) - D(rho1,rho3)  <=  p  <=  1 - [D(phi1,phi2) - D(rho1,rho2)].
std::pair<BoundValue, BoundValue> coefficient_bounds_trace(
    const QubitState& phi1, const QubitState& phi2, const QubitState& phi3,
    const QubitState& rho1, const QubitState& rho2, const QubitState& rho3);

// Lower bound on the rescaled peak separation from the two evolved reference
// probes:
//   eta >= sqrt( 2 ln[F_a(phi2,phi3)/F_a(rho2,rho3)] / (a(a-1)) ).
// A ratio above 1 (possible under noise) makes the bound vacuous: 0 with the
// clamped flag set.
BoundValue delta_eta_lower_bound(const QubitState& phi2, const QubitState& phi3,
                                 const QubitState& rho2, const QubitState& rho3,
                                 double alpha);

enum class BoundKind { FidelityUpper, FidelityLower, DeltaEtaLower };

struct AlphaOptimum {
  double alpha = 0.0;
  BoundValue bound;
};

// Grid search for the tightest bound (min for upper bounds, max for lower
// bounds). Ties keep the earliest grid entry, so an ascending grid breaks
// ties toward the smallest alpha.
AlphaOptimum optimize_alpha(BoundKind kind, const QubitState& phi_a,
                            const QubitState& phi_b, const QubitState& rho_a,
                            const QubitState& rho_b, std::span<const double> alpha_grid);

// The four bounds of one snapshot measurement plus the alphas that produced
// the fidelity pair. Lower > upper can happen under noise and is flagged,
// never repaired.
struct ProbeBounds {
  BoundValue lower_fid, upper_fid, lower_td, upper_td;
  double alpha2 = 0.5, alpha3 = 0.5;
  double lower_fid_std = 0.0, upper_fid_std = 0.0;
  double lower_td_std = 0.0, upper_td_std = 0.0;

  double best_lower() const { return std::max(lower_fid.value, lower_td.value); }
  double best_upper() const { return std::min(upper_fid.value, upper_td.value); }
  bool inconsistent() const { return best_lower() > best_upper(); }
};

// Computes both bound routes with the fidelity alphas optimized over the
// grid.
ProbeBounds probe_bounds(const QubitState& phi1, const QubitState& phi2,
                         const QubitState& phi3, const QubitState& rho1,
                         const QubitState& rho2, const QubitState& rho3,
                         std::span<const double> alpha_grid);

enum class Decision { NonMarkovianVerified, MarkovianVerified, Inconclusive };
const char* to_string(Decision decision);

enum class ACritSource { Known, ProbedUpperBound };
const char* to_string(ACritSource source);

struct ProbeVerdict {
  ProbeBounds bounds;
  double a_crit = 0.0;
  ACritSource source = ACritSource::Known;
  Decision decision = Decision::Inconclusive;
  std::vector<std::string> notes;
};

// Snapshot decision from the tightest bounds across both routes:
//   best lower >= a_crit and best upper <= 1 - a_crit -> NonMarkovianVerified
//   best upper < a_crit or best lower > 1 - a_crit    -> MarkovianVerified
//   otherwise (including inconsistent bounds)         -> Inconclusive
ProbeVerdict verdict(const ProbeBounds& bounds, double a_crit, ACritSource source);

// Purity / entropy of one mixture component, inputs to the derived bounds.
struct ComponentProperties {
  double purity = 1.0;
  double entropy = 0.0;
};

struct DerivedQuantityBounds {
  std::array<double, 2> purity;
  std::array<double, 2> entropy;
  std::array<double, 2> concurrence;
};

// Interval images of purity P2 p^2 + P3 (1-p)^2, entropy
// p S2 + (1-p) S3 - [p ln p + (1-p) ln(1-p)] and concurrence |2p - 1| over
// [p_lo, p_hi], honoring interior extrema. These equalities require
// orthogonal components; without the caller's declaration nothing is
// returned.
std::optional<DerivedQuantityBounds> derived_quantity_bounds(
    double p_lo, double p_hi, const ComponentProperties& xi2,
    const ComponentProperties& xi3, bool orthogonal_declared);

// Upper bound for each eigenvalue of the system state from one probing run
// per eigenvector reference state.
std::vector<BoundValue> eigenvalue_upper_bounds(const QubitState& phi1,
                                                std::span<const QubitState> phi_refs,
                                                const QubitState& rho1,
                                                std::span<const QubitState> rho_refs,
                                                double alpha);

}  // namespace qprobe
