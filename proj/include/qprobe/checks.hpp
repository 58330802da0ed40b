#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace qprobe {

// Outcome of one randomized property suite. margin is the worst observed
// slack of the inequality (negative values beyond the tolerance count as
// violations); worst_case describes the instance that produced it.
struct FuzzResult {
  std::size_t instances = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  std::string worst_case;
};

// F_alpha(rho1, rho2) F_alpha(xi1, xi2) <= F_alpha(Phi1 rho1, Phi2 rho2)
// over random probe states, Gaussian-mixture system states, plate stacks
// (random angles included) and alphas. Tolerance 1e-9.
FuzzResult fuzz_gdpi_fidelity(std::size_t instances, std::uint64_t seed);

// D(Phi1 rho1, Phi2 rho2) <= D(rho1, rho2) + D(xi1, xi2), same instance
// family. Tolerance 1e-9.
FuzzResult fuzz_gdpi_trace(std::size_t instances, std::uint64_t seed);

// Noiseless protocol soundness on random two-peak families and stacks:
// lower - 1e-9 <= A <= upper + 1e-9 for both bound routes, and the probed
// peak-separation bound never exceeds the true delta_eta.
FuzzResult fuzz_soundness(std::size_t instances, std::uint64_t seed);

}  // namespace qprobe
