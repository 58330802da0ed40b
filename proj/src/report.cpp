#include "qprobe/report.hpp"

#include "qprobe/quadrature.hpp"
#include "qprobe/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qprobe {

using nlohmann::json;

std::vector<double> ExperimentConfig::kDefaultAlphaGrid() {
  return {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.99};
}

void ExperimentConfig::validate() const {
  if (!(lambda1_nm > 0.0) || !(lambda2_nm > 0.0)) {
    throw std::invalid_argument("config: wavelengths must be > 0");
  }
  if (!(fwhm_nm > 0.0)) throw std::invalid_argument("config: fwhm_nm must be > 0");
  if (a_true < 0.0 || a_true > 1.0) throw std::invalid_argument("config: a_true outside [0,1]");
  if (delta_n == 0.0) throw std::invalid_argument("config: delta_n must be nonzero");
  if (thicknesses_mm.empty()) throw std::invalid_argument("config: no thicknesses");
  for (double t : thicknesses_mm) {
    if (!(t > 0.0)) throw std::invalid_argument("config: thicknesses must be > 0");
  }
  if (!(plate_unit_mm > 0.0)) throw std::invalid_argument("config: plate_unit_mm must be > 0");
  if (!noiseless && shots < 1) throw std::invalid_argument("config: shots must be >= 1");
  if (mc_trials < 0) throw std::invalid_argument("config: mc_trials must be >= 0");
  for (const auto* grid : {&alpha_grid, &alpha_grid_eta}) {
    if (grid->empty()) throw std::invalid_argument("config: empty alpha grid");
    for (double a : *grid) {
      if (!(a >= 0.5 && a < 1.0)) {
        throw std::invalid_argument("config: alpha grid values must lie in [1/2, 1)");
      }
    }
  }
  if (nodes_per_component < 16) {
    throw std::invalid_argument("config: nodes_per_component must be >= 16");
  }
  if (!(tau_step > 0.0) || !(tau_max > tau_step)) {
    throw std::invalid_argument("config: need tau_max > tau_step > 0");
  }
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "lambda1_nm", "lambda2_nm", "fwhm_nm", "a_true", "delta_n", "thicknesses_mm",
    "plate_angles", "angle_seed", "plate_unit_mm", "shots", "mc_trials", "alpha_grid",
    "alpha_grid_eta", "a_crit_mode", "noiseless", "strict", "seed", "nodes_per_component",
    "tau_max", "tau_step", "out_dir"};

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text, bool strict) {
  json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  if (strict) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (std::find(kKnownKeys.begin(), kKnownKeys.end(), it.key()) == kKnownKeys.end()) {
        throw std::invalid_argument("config: unknown key \"" + it.key() + "\" (strict mode)");
      }
    }
  }
  ExperimentConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).template get<std::decay_t<decltype(field)>>();
  };
  get("lambda1_nm", c.lambda1_nm);
  get("lambda2_nm", c.lambda2_nm);
  get("fwhm_nm", c.fwhm_nm);
  get("a_true", c.a_true);
  get("delta_n", c.delta_n);
  get("thicknesses_mm", c.thicknesses_mm);
  if (j.contains("plate_angles")) {
    const std::string mode = j.at("plate_angles").get<std::string>();
    if (mode == "aligned") {
      c.plate_angles = Angles::Aligned;
    } else if (mode == "random") {
      c.plate_angles = Angles::Random;
    } else {
      throw std::invalid_argument("config: plate_angles must be \"aligned\" or \"random\"");
    }
  }
  get("angle_seed", c.angle_seed);
  get("plate_unit_mm", c.plate_unit_mm);
  get("shots", c.shots);
  get("mc_trials", c.mc_trials);
  get("alpha_grid", c.alpha_grid);
  get("alpha_grid_eta", c.alpha_grid_eta);
  if (j.contains("a_crit_mode")) {
    const std::string mode = j.at("a_crit_mode").get<std::string>();
    if (mode == "probed") {
      c.a_crit_mode = ACritMode::Probed;
    } else if (mode == "known") {
      c.a_crit_mode = ACritMode::Known;
    } else {
      throw std::invalid_argument("config: a_crit_mode must be \"probed\" or \"known\"");
    }
  }
  get("noiseless", c.noiseless);
  get("strict", c.strict);
  get("seed", c.seed);
  get("nodes_per_component", c.nodes_per_component);
  get("tau_max", c.tau_max);
  get("tau_step", c.tau_step);
  get("out_dir", c.out_dir);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), strict);
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["lambda1_nm"] = lambda1_nm;
  j["lambda2_nm"] = lambda2_nm;
  j["fwhm_nm"] = fwhm_nm;
  j["a_true"] = a_true;
  j["delta_n"] = delta_n;
  j["thicknesses_mm"] = thicknesses_mm;
  j["plate_angles"] = plate_angles == Angles::Aligned ? "aligned" : "random";
  j["angle_seed"] = angle_seed;
  j["plate_unit_mm"] = plate_unit_mm;
  j["shots"] = shots;
  j["mc_trials"] = mc_trials;
  j["alpha_grid"] = alpha_grid;
  j["alpha_grid_eta"] = alpha_grid_eta;
  j["a_crit_mode"] = a_crit_mode == ACritMode::Probed ? "probed" : "known";
  j["noiseless"] = noiseless;
  j["strict"] = strict;
  j["seed"] = seed;
  j["nodes_per_component"] = nodes_per_component;
  j["tau_max"] = tau_max;
  j["tau_step"] = tau_step;
  j["out_dir"] = out_dir;
  return j.dump();
}

double ExperimentConfig::mu1_hz() const { return kSpeedOfLight / (lambda1_nm * 1e-9); }
double ExperimentConfig::mu2_hz() const { return kSpeedOfLight / (lambda2_nm * 1e-9); }

double ExperimentConfig::sigma1_hz() const {
  return GaussianMixtureSpectrum::sigma_from_fwhm_wavelength(lambda1_nm * 1e-9, fwhm_nm * 1e-9);
}

double ExperimentConfig::sigma2_hz() const {
  return GaussianMixtureSpectrum::sigma_from_fwhm_wavelength(lambda2_nm * 1e-9, fwhm_nm * 1e-9);
}

GaussianMixtureSpectrum ExperimentConfig::xi1() const {
  return GaussianMixtureSpectrum({{mu1_hz(), sigma1_hz()}, {mu2_hz(), sigma2_hz()}},
                                 {a_true, 1.0 - a_true});
}

GaussianMixtureSpectrum ExperimentConfig::xi2() const {
  return GaussianMixtureSpectrum::single(mu1_hz(), sigma1_hz());
}

GaussianMixtureSpectrum ExperimentConfig::xi3() const {
  return GaussianMixtureSpectrum::single(mu2_hz(), sigma2_hz());
}

double ExperimentConfig::delta_eta() const { return xi1().delta_eta(); }

double ExperimentConfig::phase_for_thickness(double thickness_mm) const {
  return 2.0 * std::numbers::pi * delta_n * (thickness_mm * 1e-3) / kSpeedOfLight;
}

double ExperimentConfig::tau_for_thickness(double thickness_mm) const {
  return xi1().tau_of_phase(phase_for_thickness(thickness_mm));
}

PlateStack ExperimentConfig::stack_for_thickness(double thickness_mm,
                                                 std::uint64_t row_angle_seed) const {
  if (plate_angles == Angles::Aligned) {
    const double t[] = {thickness_mm};
    return PlateStack::aligned(t, delta_n, nodes_per_component);
  }
  std::vector<double> units;
  double remaining = thickness_mm;
  while (remaining > plate_unit_mm + 1e-12) {
    units.push_back(plate_unit_mm);
    remaining -= plate_unit_mm;
  }
  if (remaining > 1e-12) units.push_back(remaining);
  return PlateStack::random_angles(units, delta_n, row_angle_seed, nodes_per_component);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

SweepRow compute_row(const ExperimentConfig& config, std::size_t row_index,
                     double thickness_mm, const GaussianMixtureSpectrum& xi1,
                     const GaussianMixtureSpectrum& xi2, const GaussianMixtureSpectrum& xi3,
                     std::optional<double> known_a_crit, bool quadrature_warning) {
  SweepRow row;
  row.thickness_mm = thickness_mm;
  row.tau = config.tau_for_thickness(thickness_mm);
  if (quadrature_warning) row.flags.push_back("quadrature_warning");

  const auto stack = config.stack_for_thickness(
      thickness_mm, derive_seed(config.angle_seed, row_index));
  const auto ch1 = build_channel(stack, xi1);
  const auto ch2 = build_channel(stack, xi2);
  const auto ch3 = build_channel(stack, xi3);

  const QubitState probe = QubitState::plus();
  const QubitState phi1 = ch1.apply(probe);
  const QubitState phi2 = ch2.apply(probe);
  const QubitState phi3 = ch3.apply(probe);

  std::array<TomographyRecord, 3> records = [&] {
    if (config.noiseless) {
      return std::array<TomographyRecord, 3>{TomographyRecord::exact(phi1),
                                             TomographyRecord::exact(phi2),
                                             TomographyRecord::exact(phi3)};
    }
    const std::uint64_t base = derive_seed(config.seed, row_index);
    return std::array<TomographyRecord, 3>{
        TomographyRecord::measure(phi1, config.shots, config.mc_trials, derive_seed(base, 1)),
        TomographyRecord::measure(phi2, config.shots, config.mc_trials, derive_seed(base, 2)),
        TomographyRecord::measure(phi3, config.shots, config.mc_trials, derive_seed(base, 3))};
  }();

  // Alphas are chosen on the point estimate and held fixed across the
  // bootstrap resamples.
  row.bounds = probe_bounds(records[0].reconstructed, records[1].reconstructed,
                            records[2].reconstructed, probe, probe, probe,
                            config.alpha_grid);
  const auto eta_opt =
      optimize_alpha(BoundKind::DeltaEtaLower, records[1].reconstructed,
                     records[2].reconstructed, probe, probe, config.alpha_grid_eta);
  row.alpha_eta = eta_opt.alpha;
  row.delta_eta_lb = eta_opt.bound.value;
  if (eta_opt.bound.clamped) row.flags.push_back("eta_ratio_above_one");

  const double a2 = row.bounds.alpha2, a3 = row.bounds.alpha3, ae = row.alpha_eta;
  auto bound_fn = [&probe, a2, a3, ae](const QubitState& s1, const QubitState& s2,
                                       const QubitState& s3) {
    auto [lf, uf] = coefficient_bounds_fidelity(s1, s2, s3, probe, probe, probe, a2, a3);
    auto [lt, ut] = coefficient_bounds_trace(s1, s2, s3, probe, probe, probe);
    auto eta = delta_eta_lower_bound(s2, s3, probe, probe, ae);
    return std::vector<double>{lf.value, uf.value, lt.value, ut.value, eta.value};
  };
  const auto stats = monte_carlo_bounds(records, bound_fn);
  row.bounds.lower_fid_std = stats.stddev[0];
  row.bounds.upper_fid_std = stats.stddev[1];
  row.bounds.lower_td_std = stats.stddev[2];
  row.bounds.upper_td_std = stats.stddev[3];
  row.delta_eta_lb_std = stats.stddev[4];
  if (stats.failed > 0) {
    row.flags.push_back("mc_resamples_excluded=" + std::to_string(stats.failed));
  }

  if (config.a_crit_mode == ExperimentConfig::ACritMode::Known) {
    row.a_crit_source = ACritSource::Known;
    row.a_crit = known_a_crit;
  } else {
    row.a_crit_source = ACritSource::ProbedUpperBound;
    double probed = a_crit_fit(row.delta_eta_lb);
    const auto numeric = a_crit_numeric(row.delta_eta_lb);
    if (numeric && std::abs(*numeric - probed) > 0.01) {
      row.flags.push_back("acrit_fit_numeric_mismatch:fit=" + format_double(probed) +
                          ",numeric=" + format_double(*numeric));
      probed = std::max(probed, *numeric);  // keep the pessimistic one
    }
    row.a_crit = probed;
  }

  if (row.a_crit) {
    const auto v = verdict(row.bounds, *row.a_crit, row.a_crit_source);
    row.decision = v.decision;
    for (const auto& note : v.notes) row.flags.push_back(note);
  } else {
    row.decision = Decision::Inconclusive;
    row.flags.push_back("a_crit_absent");
  }
  return row;
}

}  // namespace

SweepReport run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepReport report;
  report.config = config;

  const auto xi1 = config.xi1();
  const auto xi2 = config.xi2();
  const auto xi3 = config.xi3();
  report.reference_overlap = spectral_overlap(xi2, xi3);

  std::optional<double> known_a_crit;
  if (config.a_crit_mode == ExperimentConfig::ACritMode::Known) {
    known_a_crit = a_crit_numeric(xi1.delta_eta());
  }

  std::vector<double> thicknesses = config.thicknesses_mm;
  std::sort(thicknesses.begin(), thicknesses.end());

  // Quadrature self-check at the thickest setting: doubling the node count
  // must not move the evolved probe. A miss is a row flag, or an error in
  // strict mode.
  bool quadrature_warning = false;
  {
    const std::size_t last = thicknesses.size() - 1;
    auto coarse = config.stack_for_thickness(thicknesses[last],
                                             derive_seed(config.angle_seed, last));
    ExperimentConfig doubled = config;
    doubled.nodes_per_component = 2 * config.nodes_per_component;
    auto fine = doubled.stack_for_thickness(thicknesses[last],
                                            derive_seed(config.angle_seed, last));
    const auto probe = QubitState::plus();
    const double miss = (build_channel(coarse, xi1).apply(probe).matrix() -
                         build_channel(fine, xi1).apply(probe).matrix())
                            .cwiseAbs()
                            .maxCoeff();
    if (miss > 1e-8) {
      if (config.strict) {
        throw NumericError("run_sweep: quadrature self-check missed 1e-8 (node count " +
                           std::to_string(config.nodes_per_component) + ", change " +
                           format_double(miss) + "); raise nodes_per_component");
      }
      quadrature_warning = true;
    }
  }

  for (std::size_t i = 0; i < thicknesses.size(); ++i) {
    try {
      report.rows.push_back(compute_row(config, i, thicknesses[i], xi1, xi2, xi3,
                                        known_a_crit, quadrature_warning));
    } catch (const std::exception& e) {
      SweepRow row;
      row.thickness_mm = thicknesses[i];
      row.tau = config.tau_for_thickness(thicknesses[i]);
      row.error = e.what();
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::optional<std::pair<double, double>> SweepReport::tightest_bounds() const {
  std::optional<std::pair<double, double>> best;
  for (const auto& row : rows) {
    if (!row.error.empty()) continue;
    const double lo = row.bounds.best_lower();
    const double hi = row.bounds.best_upper();
    if (!best) {
      best = {lo, hi};
    } else {
      best->first = std::max(best->first, lo);
      best->second = std::min(best->second, hi);
    }
  }
  return best;
}

std::string SweepReport::to_csv() const {
  std::ostringstream out;
  out << "# qprobe sweep v" << kVersion << "\n";
  out << "# config " << config.to_json_text() << "\n";
  out << "# delta_eta " << format_double(config.delta_eta()) << "\n";
  out << "# reference_overlap " << format_double(reference_overlap) << "\n";
  out << "thickness_mm,tau,lower_fid,upper_fid,lower_fid_std,upper_fid_std,"
         "lower_td,upper_td,lower_td_std,upper_td_std,acrit,acrit_source,verdict,flags\n";
  for (const auto& row : rows) {
    out << format_double(row.thickness_mm) << ',' << format_double(row.tau) << ',';
    if (row.error.empty()) {
      out << format_double(row.bounds.lower_fid.value) << ','
          << format_double(row.bounds.upper_fid.value) << ','
          << format_double(row.bounds.lower_fid_std) << ','
          << format_double(row.bounds.upper_fid_std) << ','
          << format_double(row.bounds.lower_td.value) << ','
          << format_double(row.bounds.upper_td.value) << ','
          << format_double(row.bounds.lower_td_std) << ','
          << format_double(row.bounds.upper_td_std) << ','
          << (row.a_crit ? format_double(*row.a_crit) : std::string()) << ','
          << to_string(row.a_crit_source) << ',' << to_string(row.decision) << ','
          << join_flags(row.flags) << '\n';
    } else {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << ",,,,,,,,,," << ",error," << msg << '\n';
    }
  }
  return out.str();
}

std::vector<SweepCsvRow> parse_sweep_csv(const std::string& text) {
  std::vector<SweepCsvRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  auto parse_field = [](const std::string& s) {
    if (s.empty()) return std::nan("");
    return std::stod(s);
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("thickness_mm,", 0) != 0) {
        throw std::invalid_argument("parse_sweep_csv: missing header row");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row_in(line);
    while (std::getline(row_in, field, ',')) fields.push_back(field);
    while (fields.size() < 14) fields.emplace_back();
    SweepCsvRow row{};
    row.thickness_mm = parse_field(fields[0]);
    row.tau = parse_field(fields[1]);
    row.lower_fid = parse_field(fields[2]);
    row.upper_fid = parse_field(fields[3]);
    row.lower_fid_std = parse_field(fields[4]);
    row.upper_fid_std = parse_field(fields[5]);
    row.lower_td = parse_field(fields[6]);
    row.upper_td = parse_field(fields[7]);
    row.lower_td_std = parse_field(fields[8]);
    row.upper_td_std = parse_field(fields[9]);
    row.acrit = parse_field(fields[10]);
    row.acrit_source = fields[11];
    row.verdict = fields[12];
    row.flags = fields[13];
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::invalid_argument("parse_sweep_csv: empty input");
  return rows;
}

IntervalReport run_intervals(const ExperimentConfig& config,
                             std::optional<std::pair<double, double>> bounds) {
  config.validate();
  IntervalReport report;
  report.delta_eta = config.delta_eta();
  if (!bounds) {
    ExperimentConfig exact = config;
    exact.noiseless = true;
    exact.mc_trials = 0;
    bounds = run_sweep(exact).tightest_bounds();
    if (!bounds) throw std::runtime_error("run_intervals: sweep produced no usable rows");
  }
  report.a_lo = std::clamp(bounds->first, 0.0, 1.0);
  report.a_hi = std::clamp(bounds->second, 0.0, 1.0);
  if (report.a_lo > report.a_hi) {
    throw std::invalid_argument("run_intervals: inconsistent amplitude bounds");
  }

  std::vector<double> grid;
  for (double tau = config.tau_step; tau <= config.tau_max; tau += config.tau_step) {
    grid.push_back(tau);
  }
  const auto labels = classify_intervals(report.delta_eta, report.a_lo, report.a_hi, grid);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= labels.size(); ++i) {
    if (i == labels.size() || labels[i] != labels[start]) {
      report.spans.push_back({labels[start], grid[start], grid[i - 1]});
      start = i;
    }
  }
  return report;
}

std::string IntervalReport::to_csv() const {
  std::ostringstream out;
  out << "# qprobe intervals v" << kVersion << "\n";
  out << "# delta_eta " << format_double(delta_eta) << "\n";
  out << "# a_lo " << format_double(a_lo) << " a_hi " << format_double(a_hi) << "\n";
  out << "label,tau_start,tau_end\n";
  for (const auto& span : spans) {
    out << to_string(span.label) << ',' << format_double(span.tau_start) << ','
        << format_double(span.tau_end) << '\n';
  }
  return out.str();
}

namespace {

std::string write_file(const std::string& out_dir, const std::string& name,
                       const std::string& content) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open " + path.string());
  out << content;
  if (!out) throw std::runtime_error("emit: write failed for " + path.string());
  return path.string();
}

}  // namespace

std::vector<std::string> emit_sweep(const SweepReport& report, const std::string& out_dir,
                                    EmitFormat format) {
  std::vector<std::string> paths;
  paths.push_back(write_file(out_dir, "sweep.csv", report.to_csv()));
  if (format != EmitFormat::Csv) {
    paths.push_back(write_file(out_dir, "sweep.svg", render_sweep_svg(report)));
  }
  return paths;
}

std::vector<std::string> emit_intervals(const IntervalReport& report,
                                        const std::string& out_dir, EmitFormat format) {
  std::vector<std::string> paths;
  paths.push_back(write_file(out_dir, "intervals.csv", report.to_csv()));
  if (format != EmitFormat::Csv) {
    paths.push_back(write_file(out_dir, "intervals.svg", render_intervals_svg(report)));
  }
  return paths;
}

}  // namespace qprobe
