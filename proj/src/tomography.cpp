#include "qprobe/tomography.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qprobe {

void CountData::validate() const {
  if (shots < 1) throw std::domain_error("CountData: shots must be >= 1");
  for (int b = 0; b < 3; ++b) {
    if (plus[b] < 0 || minus[b] < 0) throw std::domain_error("CountData: negative count");
    if (plus[b] + minus[b] != shots) {
      throw std::domain_error("CountData: pair counts must sum to shots");
    }
  }
}

std::string CountData::to_csv() const {
  std::ostringstream out;
  for (int b = 0; b < 3; ++b) {
    out << kBasisNames[b] << ',' << plus[b] << ',' << minus[b] << ',' << shots << '\n';
  }
  return out.str();
}

CountData CountData::from_csv(const std::string& text) {
  CountData data;
  std::istringstream in(text);
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string basis, field;
    std::getline(row, basis, ',');
    int b = -1;
    for (int i = 0; i < 3; ++i) {
      if (basis == kBasisNames[i]) b = i;
    }
    if (b < 0) throw std::invalid_argument("CountData::from_csv: unknown basis " + basis);
    std::getline(row, field, ',');
    data.plus[b] = std::stoll(field);
    std::getline(row, field, ',');
    data.minus[b] = std::stoll(field);
    std::getline(row, field, ',');
    data.shots = std::stoll(field);
    ++seen;
  }
  if (seen != 3) throw std::invalid_argument("CountData::from_csv: expected 3 rows");
  data.validate();
  return data;
}

std::array<double, 3> born_probabilities(const QubitState& rho) {
  const auto r = rho.bloch();
  // Basis order HV, DA, RL maps to Bloch z, x, y.
  return {0.5 * (1.0 + r.z()), 0.5 * (1.0 + r.x()), 0.5 * (1.0 + r.y())};
}

CountData sample_counts(const QubitState& rho, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::domain_error("sample_counts: shots must be >= 1");
  const auto p = born_probabilities(rho);
  std::mt19937_64 rng(seed);
  CountData data;
  data.shots = shots;
  for (int b = 0; b < 3; ++b) {
    const double prob = std::clamp(p[b], 0.0, 1.0);
    std::binomial_distribution<std::int64_t> binom(shots, prob);
    data.plus[b] = binom(rng);
    data.minus[b] = shots - data.plus[b];
  }
  return data;
}

QubitState reconstruct_from_probabilities(const std::array<double, 3>& p_plus) {
  const double rz = 2.0 * p_plus[0] - 1.0;
  const double rx = 2.0 * p_plus[1] - 1.0;
  const double ry = 2.0 * p_plus[2] - 1.0;
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  if (r <= 1.0) return QubitState::from_bloch(rx, ry, rz);
  // Linear inversion left the Bloch sphere; clamping the negative eigenvalue
  // to zero and renormalizing lands on the boundary in the same direction.
  return QubitState::from_bloch(rx / r, ry / r, rz / r);
}

QubitState reconstruct(const CountData& counts) {
  counts.validate();
  const double n = static_cast<double>(counts.shots);
  return reconstruct_from_probabilities({counts.plus[0] / n, counts.plus[1] / n,
                                         counts.plus[2] / n});
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 step on master + (index+1) * golden-gamma
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TomographyRecord TomographyRecord::measure(const QubitState& rho, std::int64_t shots,
                                           int resamples, std::uint64_t seed) {
  if (resamples < 0) throw std::domain_error("TomographyRecord: resamples must be >= 0");
  CountData counts = sample_counts(rho, shots, derive_seed(seed, 0));
  QubitState reconstructed = reconstruct(counts);
  std::vector<QubitState> ensemble;
  ensemble.reserve(resamples);
  for (int b = 0; b < resamples; ++b) {
    CountData draw = sample_counts(reconstructed, shots, derive_seed(seed, 1 + b));
    ensemble.push_back(reconstruct(draw));
  }
  return TomographyRecord{std::move(counts), std::move(reconstructed), std::move(ensemble),
                          false};
}

TomographyRecord TomographyRecord::exact(const QubitState& rho) {
  QubitState reconstructed = reconstruct_from_probabilities(born_probabilities(rho));
  return TomographyRecord{CountData{}, std::move(reconstructed), {}, true};
}

BoundStatistics monte_carlo_bounds(const std::array<TomographyRecord, 3>& records,
                                   const BoundFunction& bound_fn) {
  BoundStatistics stats;
  stats.point = bound_fn(records[0].reconstructed, records[1].reconstructed,
                         records[2].reconstructed);
  std::size_t n_resamples = 0;
  for (const auto& rec : records) {
    if (!rec.noiseless) {
      if (n_resamples != 0 && rec.ensemble.size() != n_resamples) {
        throw std::invalid_argument("monte_carlo_bounds: ensemble sizes differ");
      }
      n_resamples = rec.ensemble.size();
    }
  }
  stats.mean = stats.point;
  stats.stddev.assign(stats.point.size(), 0.0);
  if (n_resamples == 0) return stats;  // infinite-shot mode

  std::vector<std::vector<double>> samples;
  samples.reserve(n_resamples);
  for (std::size_t b = 0; b < n_resamples; ++b) {
    const auto& s1 = records[0].noiseless ? records[0].reconstructed : records[0].ensemble[b];
    const auto& s2 = records[1].noiseless ? records[1].reconstructed : records[1].ensemble[b];
    const auto& s3 = records[2].noiseless ? records[2].reconstructed : records[2].ensemble[b];
    try {
      auto vals = bound_fn(s1, s2, s3);
      if (vals.size() != stats.point.size()) {
        throw std::invalid_argument("monte_carlo_bounds: bound_fn size changed");
      }
      samples.push_back(std::move(vals));
    } catch (const std::exception&) {
      ++stats.failed;
    }
  }
  stats.resamples = samples.size();
  if (samples.empty()) return stats;
  for (std::size_t k = 0; k < stats.point.size(); ++k) {
    double sum = 0.0;
    for (const auto& row : samples) sum += row[k];
    const double mean = sum / samples.size();
    double var = 0.0;
    for (const auto& row : samples) var += (row[k] - mean) * (row[k] - mean);
    stats.mean[k] = mean;
    stats.stddev[k] = samples.size() > 1 ? std::sqrt(var / (samples.size() - 1)) : 0.0;
  }
  return stats;
}

}  // namespace qprobe
