#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "pwret/recovery.hpp"

namespace pwret::cli {

/// Everything a scenario synthesizes before recovery runs.
struct Instruments {
  TimeLimitedSignal truth;
  FrameFamily frame;
  InterpolationGrid grid;  // effective grid (after any imaginary shift)
  MeasurementSet measurements;
  /// Augmented scenarios: whether the grid cleared the minimum-modulus
  /// certificate (always true for the plain pipeline).
  bool certified_shift = true;
};

/// Synthesizes the signal, frame, grid, and measurement set a config
/// describes, including the automatic imaginary-shift search for augmented
/// scenarios without an explicit eta.
Instruments build_instruments(const ScenarioConfig& config);

struct RoundtripOutcome {
  Instruments instruments;
  ReconstructionResult result;
  double error = 0.0;  // phase-aligned, against the synthesized truth
  double runtime_ms = 0.0;
  bool pass = false;  // status == success and error <= config tolerance
};

RoundtripOutcome run_roundtrip(const ScenarioConfig& config);

/// Structured-text report: status, error, diagnostics, recovered
/// coefficients, and the full resolved config. Deterministic except for the
/// single `# generated_at` header line (suppressed when `timestamp` is
/// false).
std::string result_record(const ScenarioConfig& config,
                          const RoundtripOutcome& outcome,
                          bool timestamp = true);

struct SweepRow {
  double value = 0.0;
  std::string status;
  double error = 0.0;
  double runtime_ms = 0.0;
};

/// Repeats the scenario once per (value, seed) pair with the parameter
/// applied and seeds offset from the config's. Parameters: noise_sigma, a,
/// K, T_ratio, J. Rows keep the input value order, seeds ascending within a
/// value.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base,
                                const std::string& parameter,
                                const std::vector<double>& values,
                                int seeds_per_value);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// CSV of intensity sampling rates over the requested design space; rows
/// ordered by (K, a, ratio), overlaps filtered to a < K.
std::string rate_table_csv(const std::vector<int>& dims,
                           const std::vector<int>& overlaps,
                           const std::vector<double>& t_ratios);

}  // namespace pwret::cli
