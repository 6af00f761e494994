#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwret/types.hpp"

namespace pwret::cli {

/// Scenario description parsed from a sectioned key = value file. Unset
/// optional fields keep their defaults here; `resolved_text` re-serializes
/// the effective configuration (after command-line overrides) so every
/// result record is reproducible from its own header.
struct ScenarioConfig {
  // [signal]
  std::string signal_type = "random";  // random | inline
  double interval_length = 1.0;
  int max_harmonic = 0;
  std::uint64_t signal_seed = 1;
  std::vector<Complex> coefficients;  // inline only, ascending j

  // [grid]
  double t_prime = 1.0;
  int dim = 2;      // K
  int overlap = 1;  // a
  int n_min = 0;
  int n_max = 0;
  double anchor_shift = 0.0;
  std::vector<double> eta;  // optional imaginary shift per offset

  // [frame]
  std::string frame_type = "canonical_k2";  // canonical_k2 | file
  std::string frame_path;                   // resolved relative to the config
  std::vector<std::pair<int, std::string>> frame_paths_by_dim;

  // [pipeline]
  std::string pipeline_mode = "plain";  // plain | augmented
  double l1_margin = 1.25;

  // [noise]
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;

  // [recovery]
  std::string backend = "least_squares";
  double zero_tol_factor = 1e-8;
  double truncation_radius = 0.0;
  double min_singular_threshold = 1e-10;
  double rank1_fallback_threshold = 1e-6;
  std::optional<int> start_block;

  // [output]
  double tolerance = 1e-8;
};

/// Parses a scenario file. Relative frame paths are resolved against the
/// config file's directory. Throws std::invalid_argument with a
/// line-numbered message on malformed input, unknown keys, or inconsistent
/// values (e.g. augmented mode with T' <= T).
ScenarioConfig load_config(const std::string& path);

/// Parse from text (for tests and embedding); `base_dir` anchors relative
/// frame paths.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& base_dir);

/// Cross-field validation shared by load and by command-line overrides.
void validate_config(const ScenarioConfig& config);

/// Canonical re-serialization of the effective configuration.
std::string resolved_text(const ScenarioConfig& config);

/// Frame file path for a given dimension: an exact `path_k<dim>` entry wins,
/// then the generic `path`. Empty when neither is configured.
std::string frame_path_for_dim(const ScenarioConfig& config, int dim);

}  // namespace pwret::cli
