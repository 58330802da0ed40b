#pragma once

#include "qprobe/qubit_state.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qprobe {

// Measurement bases in fixed order: {H,V} (sigma_z), {D,A} (sigma_x),
// {R,L} (sigma_y). "plus" is the first projector of each pair.
inline constexpr std::array<const char*, 3> kBasisNames = {"HV", "DA", "RL"};

// Photon counts from projective measurements, N shots per basis.
struct CountData {
  std::array<std::int64_t, 3> plus{};
  std::array<std::int64_t, 3> minus{};
  std::int64_t shots = 0;

  void validate() const;
  // One line per basis: basis,plus_count,minus_count,shots
  std::string to_csv() const;
  static CountData from_csv(const std::string& text);
};

// Born-rule probabilities of the "plus" outcome per basis.
std::array<double, 3> born_probabilities(const QubitState& rho);

// Binomial draws per basis; deterministic for a fixed seed.
CountData sample_counts(const QubitState& rho, std::int64_t shots, std::uint64_t seed);

// Linear inversion r_i = (n+ - n-)/N into rho = (I + r.sigma)/2, followed by
// projection to the closest physical state (negative eigenvalues clamped to
// zero, trace renormalized).
QubitState reconstruct(const CountData& counts);
QubitState reconstruct_from_probabilities(const std::array<double, 3>& p_plus);

// Stable per-index seed derivation so parallel resampling reproduces the
// serial result.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// One tomographed probe: raw counts, the reconstructed state, and a
// parametric-bootstrap ensemble resampled from the reconstructed
// probabilities.
struct TomographyRecord {
  CountData counts;
  QubitState reconstructed;
  std::vector<QubitState> ensemble;
  bool noiseless = false;

  static TomographyRecord measure(const QubitState& rho, std::int64_t shots,
                                  int resamples, std::uint64_t seed);
  // Infinite-shot record: exact probabilities, empty ensemble.
  static TomographyRecord exact(const QubitState& rho);
};

// Evaluates a vector of bound values on the three reconstructed states and
// on every bootstrap resample; reports the point values plus per-bound mean
// and standard deviation over the ensemble. Resamples where bound_fn throws
// are excluded and counted.
struct BoundStatistics {
  std::vector<double> point;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::size_t resamples = 0;
  std::size_t failed = 0;
};

using BoundFunction = std::function<std::vector<double>(
    const QubitState&, const QubitState&, const QubitState&)>;

BoundStatistics monte_carlo_bounds(const std::array<TomographyRecord, 3>& records,
                                   const BoundFunction& bound_fn);

}  // namespace qprobe
