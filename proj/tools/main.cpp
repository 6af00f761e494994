#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "pwret/io.hpp"
#include "scenario.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitPipelineFailure = 1;
constexpr int kExitConfigError = 2;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    write_file(out_path, content);
}

pwret::cli::ScenarioConfig load_with_overrides(
    const std::string& config_path, const std::optional<std::uint64_t>& seed,
    const std::optional<double>& tolerance) {
  pwret::cli::ScenarioConfig config = pwret::cli::load_config(config_path);
  if (seed) config.signal_seed = *seed;
  if (tolerance) config.tolerance = *tolerance;
  pwret::cli::validate_config(config);
  return config;
}

int cmd_roundtrip(const std::string& config_path, const std::string& out_dir,
                  const std::optional<std::uint64_t>& seed,
                  const std::optional<double>& tolerance) {
  const pwret::cli::ScenarioConfig config =
      load_with_overrides(config_path, seed, tolerance);
  const pwret::cli::RoundtripOutcome outcome =
      pwret::cli::run_roundtrip(config);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_file(dir / "result.txt", pwret::cli::result_record(config, outcome));
  write_file(dir / "measurements.csv",
             pwret::io::write_measurements(outcome.instruments.measurements));
  write_file(dir / "fourier_values.csv",
             pwret::io::write_fourier_values_csv(outcome.instruments.grid,
                                                 outcome.result.fourier_values,
                                                 outcome.result.resolved));

  std::cout << "status = " << pwret::to_string(outcome.result.status) << "\n"
            << "phase_aligned_error = "
            << pwret::io::format_double(outcome.error) << "\n"
            << "pass = " << (outcome.pass ? 1 : 0) << "\n";
  return outcome.pass ? kExitSuccess : kExitPipelineFailure;
}

int cmd_verify_frame(const std::string& frame_path) {
  pwret::FrameFamily frame = pwret::FrameFamily::canonical_k2();
  if (!frame_path.empty()) {
    std::ifstream in(frame_path);
    if (!in)
      throw std::invalid_argument("cannot open frame file '" + frame_path +
                                  "'");
    frame = pwret::io::read_frame(in);
  }
  const pwret::TightnessReport tight = frame.verify_tight(1e-10);
  const pwret::UniformityReport uniform = frame.verify_two_uniform(1e-10);
  const bool pass = tight.ok && uniform.ok;
  std::cout << "K = " << frame.dim() << "\n"
            << "M = " << frame.count() << "\n"
            << "tightness_target = "
            << pwret::io::format_double(tight.target_scale) << "\n"
            << "tightness_deviation = "
            << pwret::io::format_double(tight.max_deviation) << "\n"
            << "uniformity_common = "
            << pwret::io::format_double(uniform.common_value) << "\n"
            << "uniformity_spread = "
            << pwret::io::format_double(uniform.max_spread) << "\n"
            << "verdict = " << (pass ? "pass" : "fail") << "\n";
  return pass ? kExitSuccess : kExitPipelineFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval scenarios for modulated time-limited signals"};
  app.require_subcommand(1);

  std::string config_path, frame_path, parameter;
  std::string out_dir = ".", out_file;
  std::optional<std::uint64_t> seed_override;
  std::optional<double> tolerance_override;
  std::vector<double> values, ratios = {1.0, 1.1, 1.25, 1.5};
  std::vector<int> dims = {2, 3, 4, 5, 6}, overlaps = {1, 2, 3};
  int seeds_per_value = 1;

  CLI::App* roundtrip =
      app.add_subcommand("roundtrip", "synthesize, measure, recover, compare");
  roundtrip->add_option("--config", config_path, "scenario file")->required();
  roundtrip->add_option("--out", out_dir, "output directory");
  roundtrip->add_option("--seed", seed_override, "override the signal seed");
  roundtrip->add_option("--tolerance", tolerance_override,
                        "override the pass tolerance");

  CLI::App* verify = app.add_subcommand(
      "verify-frame", "check tightness and two-uniformity at 1e-10");
  verify->add_option("--frame", frame_path,
                     "frame file (canonical family when omitted)");

  CLI::App* rate =
      app.add_subcommand("rate-table", "intensity sampling rates (CSV)");
  rate->add_option("--dims", dims, "values of K")->delimiter(',');
  rate->add_option("--overlaps", overlaps, "values of a")->delimiter(',');
  rate->add_option("--ratios", ratios, "values of T'/T")->delimiter(',');
  rate->add_option("--out", out_file, "output file (stdout when omitted)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "repeat a scenario over one parameter (CSV)");
  sweep->add_option("--config", config_path, "base scenario file")->required();
  sweep
      ->add_option("--parameter", parameter,
                   "noise_sigma | a | K | T_ratio | J")
      ->required();
  sweep->add_option("--values", values, "parameter values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seeds", seeds_per_value, "seeds per value")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_file, "output file (stdout when omitted)");

  CLI::App* emit_grid =
      app.add_subcommand("emit-grid", "write the scenario grid as CSV");
  emit_grid->add_option("--config", config_path, "scenario file")->required();
  emit_grid->add_option("--out", out_file, "output file (stdout when omitted)");

  CLI::App* emit_ms = app.add_subcommand(
      "emit-measurements", "write the scenario measurement set");
  emit_ms->add_option("--config", config_path, "scenario file")->required();
  emit_ms->add_option("--out", out_file, "output file (stdout when omitted)");
  emit_ms->add_option("--seed", seed_override, "override the signal seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitConfigError;
  }

  try {
    if (roundtrip->parsed())
      return cmd_roundtrip(config_path, out_dir, seed_override,
                           tolerance_override);
    if (verify->parsed()) return cmd_verify_frame(frame_path);
    if (rate->parsed()) {
      emit(out_file, pwret::cli::rate_table_csv(dims, overlaps, ratios));
      return kExitSuccess;
    }
    if (sweep->parsed()) {
      const pwret::cli::ScenarioConfig config =
          pwret::cli::load_config(config_path);
      emit(out_file, pwret::cli::sweep_csv(pwret::cli::run_sweep(
                         config, parameter, values, seeds_per_value)));
      return kExitSuccess;
    }
    if (emit_grid->parsed()) {
      const pwret::cli::ScenarioConfig config =
          pwret::cli::load_config(config_path);
      pwret::InterpolationGrid grid = pwret::InterpolationGrid::shannon(
          config.t_prime, config.dim, config.overlap, config.n_min,
          config.n_max, config.anchor_shift);
      if (!config.eta.empty()) grid = grid.with_imaginary_shift(config.eta);
      emit(out_file, pwret::io::write_grid_csv(grid));
      return kExitSuccess;
    }
    if (emit_ms->parsed()) {
      pwret::cli::ScenarioConfig config = pwret::cli::load_config(config_path);
      if (seed_override) config.signal_seed = *seed_override;
      const pwret::cli::Instruments instruments =
          pwret::cli::build_instruments(config);
      emit(out_file, pwret::io::write_measurements(instruments.measurements));
      return kExitSuccess;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipelineFailure;
  }
  return kExitConfigError;
}
