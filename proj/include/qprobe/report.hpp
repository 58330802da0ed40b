#pragma once

#include "qprobe/coupling.hpp"
#include "qprobe/dephasing.hpp"
#include "qprobe/probing.hpp"
#include "qprobe/spectra.hpp"
#include "qprobe/tomography.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qprobe {

inline constexpr const char* kVersion = "1.0.0";

// One batch experiment: source wavelengths and amplitude, the plate
// configuration per thickness, tomography statistics, and how the critical
// amplitude is obtained.
struct ExperimentConfig {
  double lambda1_nm = 810.0;
  double lambda2_nm = 830.0;
  double fwhm_nm = 3.0;
  double a_true = 0.5;
  double delta_n = 0.009;
  std::vector<double> thicknesses_mm = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};

  enum class Angles { Aligned, Random };
  Angles plate_angles = Angles::Aligned;
  std::uint64_t angle_seed = 1;
  // Random stacks are assembled from unit plates of this thickness, each at
  // its own drawn angle.
  double plate_unit_mm = 1.0;

  std::int64_t shots = 10000;
  int mc_trials = 1000;
  std::vector<double> alpha_grid = kDefaultAlphaGrid();
  std::vector<double> alpha_grid_eta = kDefaultAlphaGrid();

  enum class ACritMode { Probed, Known };
  ACritMode a_crit_mode = ACritMode::Probed;

  bool noiseless = false;
  // Strict mode rejects unknown config keys and escalates the quadrature
  // self-check from a row flag to an error.
  bool strict = false;
  std::uint64_t seed = 1;
  int nodes_per_component = 64;

  // Interval-report grid of rescaled times.
  double tau_max = 5.0;
  double tau_step = 0.001;

  // Default output directory; the CLI --out flag overrides it.
  std::string out_dir = "out";

  static std::vector<double> kDefaultAlphaGrid();

  void validate() const;
  static ExperimentConfig from_json_text(const std::string& text, bool strict);
  static ExperimentConfig load(const std::string& path, bool strict);
  std::string to_json_text() const;

  double mu1_hz() const;
  double mu2_hz() const;
  double sigma1_hz() const;
  double sigma2_hz() const;
  GaussianMixtureSpectrum xi1() const;  // two peaks, weight a_true on mu1
  GaussianMixtureSpectrum xi2() const;  // single peak at mu1
  GaussianMixtureSpectrum xi3() const;  // single peak at mu2
  double delta_eta() const;
  double phase_for_thickness(double thickness_mm) const;  // 2 pi dn L / c
  double tau_for_thickness(double thickness_mm) const;
  PlateStack stack_for_thickness(double thickness_mm, std::uint64_t row_angle_seed) const;
};

// One sweep point. Rows that failed numerically carry the message in `error`
// and empty numerics in the CSV.
struct SweepRow {
  double thickness_mm = 0.0;
  double tau = 0.0;
  ProbeBounds bounds;
  std::optional<double> a_crit;
  ACritSource a_crit_source = ACritSource::Known;
  Decision decision = Decision::Inconclusive;
  double delta_eta_lb = 0.0;      // probed-route lower bound (0 in known mode)
  double delta_eta_lb_std = 0.0;
  double alpha_eta = 0.0;
  std::vector<std::string> flags;
  std::string error;
};

struct SweepReport {
  ExperimentConfig config;
  std::vector<SweepRow> rows;
  // Overlap integral of the two reference spectra; the orthogonal-peak
  // equalities are never assumed silently, this reports how far from
  // orthogonal the references actually are.
  double reference_overlap = 0.0;

  // Tightest bounds across rows and both routes; nullopt when no usable row.
  std::optional<std::pair<double, double>> tightest_bounds() const;
  std::string to_csv() const;
};

SweepReport run_sweep(const ExperimentConfig& config);

// Row parsed back from a sweep CSV (used by the SVG renderer and for audit
// passes over emitted files). Numeric fields of error rows are NaN.
struct SweepCsvRow {
  double thickness_mm, tau;
  double lower_fid, upper_fid, lower_fid_std, upper_fid_std;
  double lower_td, upper_td, lower_td_std, upper_td_std;
  double acrit;
  std::string acrit_source, verdict, flags;
};
std::vector<SweepCsvRow> parse_sweep_csv(const std::string& text);

struct IntervalSpan {
  IntervalLabel label;
  double tau_start;
  double tau_end;
};

struct IntervalReport {
  double delta_eta = 0.0;
  double a_lo = 0.0;
  double a_hi = 1.0;
  std::vector<IntervalSpan> spans;
  std::string to_csv() const;
};

// Classifies the config's tau grid against amplitude bounds and merges
// contiguous equal labels. When no bounds are supplied, the tightest bounds
// of a noiseless sweep of the same config are used.
IntervalReport run_intervals(const ExperimentConfig& config,
                             std::optional<std::pair<double, double>> bounds = std::nullopt);

enum class EmitFormat { Csv, Svg, Both };

// Writes report files into out_dir and returns the paths. The CSV is always
// written; the SVG only for Svg/Both.
std::vector<std::string> emit_sweep(const SweepReport& report, const std::string& out_dir,
                                    EmitFormat format);
std::vector<std::string> emit_intervals(const IntervalReport& report,
                                        const std::string& out_dir, EmitFormat format);

// Shortest round-trip decimal form, so equal doubles always print the same.
std::string format_double(double v);

}  // namespace qprobe
