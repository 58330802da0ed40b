#include "qprobe/checks.hpp"
#include "qprobe/dephasing.hpp"
#include "qprobe/report.hpp"
#include "qprobe/svg.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qprobe;

EmitFormat parse_format(const std::string& name) {
  if (name == "csv") return EmitFormat::Csv;
  if (name == "svg") return EmitFormat::Svg;
  if (name == "both") return EmitFormat::Both;
  throw CLI::ValidationError("--format", "must be csv, svg or both");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string write_file(const std::string& out_dir, const std::string& name,
                       const std::string& content) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
  return path.string();
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool noiseless = false;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--out", opts.out_dir, "output directory (default: config out_dir)");
  cmd->add_option("--format", opts.format, "csv|svg|both")->check(CLI::IsMember({"csv", "svg", "both"}));
  cmd->add_option("--seed", opts.seed, "override the config seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_flag("--noiseless", opts.noiseless, "exact probabilities, no photon counting");
  cmd->add_flag("--strict", opts.strict, "reject unknown config keys");
}

ExperimentConfig load_config(const CommonOpts& opts) {
  auto config = ExperimentConfig::load(opts.config_path, opts.strict);
  if (opts.seed_set) config.seed = opts.seed;
  if (opts.noiseless) config.noiseless = true;
  if (opts.strict) config.strict = true;
  return config;
}

int run_sweep_cmd(const CommonOpts& opts) {
  const auto config = load_config(opts);
  const auto report = run_sweep(config);
  const auto out = opts.out_dir.empty() ? config.out_dir : opts.out_dir;
  const auto paths = emit_sweep(report, out, parse_format(opts.format));
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
  std::size_t errors = 0;
  for (const auto& row : report.rows) {
    if (!row.error.empty()) ++errors;
  }
  if (errors > 0) {
    std::cerr << errors << " of " << report.rows.size() << " rows failed numerically\n";
  }
  return 0;
}

int run_intervals_cmd(const CommonOpts& opts, double a_lo, double a_hi, bool bounds_set) {
  const auto config = load_config(opts);
  std::optional<std::pair<double, double>> bounds;
  if (bounds_set) bounds = {a_lo, a_hi};
  const auto report = run_intervals(config, bounds);
  const auto out = opts.out_dir.empty() ? config.out_dir : opts.out_dir;
  const auto paths = emit_intervals(report, out, parse_format(opts.format));
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
  return 0;
}

int run_acrit_cmd(double eta_min, double eta_max, double eta_step, double tau_max,
                  const std::string& out_dir) {
  if (!(eta_step > 0.0) || eta_max < eta_min) {
    throw std::runtime_error("acrit: need eta_step > 0 and eta_max >= eta_min");
  }
  std::ostringstream csv;
  csv << "# qprobe acrit v" << kVersion << "\n";
  csv << "delta_eta,a_crit_numeric,a_crit_fit\n";
  for (double eta = eta_min; eta <= eta_max + 1e-12; eta += eta_step) {
    const auto numeric = a_crit_numeric(eta, tau_max);
    csv << format_double(eta) << ','
        << (numeric ? format_double(*numeric) : std::string()) << ','
        << format_double(a_crit_fit(eta)) << '\n';
  }
  const auto path = write_file(out_dir, "acrit.csv", csv.str());
  std::cout << "wrote " << path << "\n";
  return 0;
}

int run_check_cmd(std::size_t instances, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  const auto report = [&](const char* name, const FuzzResult& result, double seconds) {
    const bool ok = result.violations == 0;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << result.instances
              << " instances, " << result.violations << " violations, worst margin "
              << result.worst_margin << " (" << seconds << " s)\n";
    if (!ok) {
      std::cout << "  worst case: " << result.worst_case << "\n";
      ++failures;
    }
  };
  auto timed = [&](auto fn) {
    const auto start = clock::now();
    auto result = fn();
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();
    return std::pair{result, seconds};
  };
  {
    auto [r, s] = timed([&] { return fuzz_gdpi_fidelity(instances, seed); });
    report("gdpi_alpha_fidelity", r, s);
  }
  {
    auto [r, s] = timed([&] { return fuzz_gdpi_trace(instances, seed + 1); });
    report("gdpi_trace_distance", r, s);
  }
  {
    auto [r, s] = timed([&] { return fuzz_soundness(instances, seed + 2); });
    report("bound_soundness", r, s);
  }
  return failures == 0 ? 0 : 1;
}

int run_report_cmd(const std::string& csv_path, const std::string& out_dir) {
  const auto rows = parse_sweep_csv(read_file(csv_path));
  const auto path = write_file(out_dir, "sweep.svg", render_sweep_svg(rows));
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qprobe: single-photon dephasing simulation and unknown-coupling probing"};
  app.require_subcommand(1);

  CommonOpts sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "bounds and verdicts over plate thicknesses");
  add_common(sweep_cmd, sweep_opts);

  CommonOpts interval_opts;
  double a_lo = 0.0, a_hi = 1.0;
  auto* intervals_cmd =
      app.add_subcommand("intervals", "classify Markovian/non-Markovian time intervals");
  add_common(intervals_cmd, interval_opts);
  auto* alo_opt = intervals_cmd->add_option("--a-lo", a_lo, "amplitude lower bound");
  auto* ahi_opt = intervals_cmd->add_option("--a-hi", a_hi, "amplitude upper bound");
  alo_opt->needs(ahi_opt);
  ahi_opt->needs(alo_opt);

  double eta_min = 0.0, eta_max = 20.0, eta_step = 0.5, acrit_tau_max = 50.0;
  std::string acrit_out = "out";
  auto* acrit_cmd = app.add_subcommand("acrit", "critical amplitude vs peak separation");
  acrit_cmd->add_option("--eta-min", eta_min, "first delta_eta");
  acrit_cmd->add_option("--eta-max", eta_max, "last delta_eta");
  acrit_cmd->add_option("--eta-step", eta_step, "grid step");
  acrit_cmd->add_option("--tau-max", acrit_tau_max, "search horizon for the solver");
  acrit_cmd->add_option("--out", acrit_out, "output directory");

  std::size_t check_instances = 1000;
  std::uint64_t check_seed = 20240809;
  auto* check_cmd = app.add_subcommand("check", "run the randomized inequality suites");
  check_cmd->add_option("--instances", check_instances, "instances per suite");
  check_cmd->add_option("--seed", check_seed, "fuzz seed");

  std::string report_csv, report_out = "out";
  auto* report_cmd = app.add_subcommand("report", "render SVG from an existing sweep CSV");
  report_cmd->add_option("--csv", report_csv, "sweep CSV path")->required();
  report_cmd->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_opts);
    if (intervals_cmd->parsed()) {
      return run_intervals_cmd(interval_opts, a_lo, a_hi, alo_opt->count() > 0);
    }
    if (acrit_cmd->parsed()) {
      return run_acrit_cmd(eta_min, eta_max, eta_step, acrit_tau_max, acrit_out);
    }
    if (check_cmd->parsed()) return run_check_cmd(check_instances, check_seed);
    if (report_cmd->parsed()) return run_report_cmd(report_csv, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
