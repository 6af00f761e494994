#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwret/frames.hpp"
#include "pwret/grid.hpp"
#include "pwret/measurement.hpp"
#include "pwret/signal.hpp"
#include "pwret/types.hpp"

namespace pwret {

/// Thrown when a block is asked to anchor at a position whose recovered
/// magnitude is below the zero tolerance; the phase there is meaningless.
class AnchorTooSmall : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnchorInfo {
  int position = -1;   // k within the block
  double phase = 0.0;  // assigned arg at that position
  bool initial = false;
};

/// Per-block result of intensity inversion. `gram` estimates the outer
/// product of the block's transform values; `vector` is filled once a phase
/// anchor fixes the block's overall phase. When vector is present,
/// outer_product(*vector) approximates gram up to the rank-one residual.
struct BlockEstimate {
  int block_index = 0;
  GramMatrix gram{1};
  /// Magnitude of the largest non-principal eigenvalue over the principal
  /// one; 0 for exact rank-one (and for the all-zero block).
  double rank1_residual = 0.0;
  std::optional<std::vector<Complex>> vector;
  std::optional<AnchorInfo> anchor;
};

/// Inverts one block of intensities (branch-major slice of a measurement
/// set) to its Gram estimate and eigenvalue diagnostics.
BlockEstimate recover_block_gram(std::span<const double> intensities,
                                 const FrameFamily& frame, int block_index);

/// Reads the block's vector off the Gram estimate given the phase at one
/// position i:
///
///   v_k = sqrt(Q_kk) exp(i (phi - arg(Q_ik))),   v_i = sqrt(Q_ii) e^{i phi}.
///
/// Exact for exact rank-one Gram matrices. Throws AnchorTooSmall when
/// sqrt(Q_ii) <= zero_tol.
BlockEstimate anchor_block_vector(BlockEstimate estimate, int anchor_position,
                                  double anchor_phase, double zero_tol);

enum class RecoveryStatus {
  success,
  phase_link_break,   // adjacent blocks share no point above zero_tol
  ill_conditioned,    // reconstruction system below singular threshold
  insufficient_points,
  zero_start_block,   // requested start block entirely below zero_tol
};

std::string to_string(RecoveryStatus status);

struct PhaseLink {
  int block = 0;            // block index n
  int anchor_position = 0;  // k used to inherit phase
  double anchor_phase = 0.0;
  double anchor_magnitude = 0.0;
  bool initial = false;          // start block (phase fixed arbitrarily to 0)
  bool eigen_fallback = false;   // principal-eigenvector read-off used
};

struct PropagationResult {
  RecoveryStatus status = RecoveryStatus::success;
  int start_block = 0;
  int break_block = 0;  // meaningful when status == phase_link_break
  /// One entry per distinct grid point; meaningful where resolved.
  std::vector<Complex> values;
  std::vector<bool> resolved;
  std::vector<PhaseLink> links;
  /// Largest disagreement between a freshly anchored block and values already
  /// written at shared points (roundoff scale when exact, grows with noise).
  double max_overlap_mismatch = 0.0;
  double zero_tol = 0.0;
  bool eigen_fallback_used = false;
};

/// Chains block phases across overlaps: anchors the start block at its
/// largest diagonal entry with phase 0, then walks outward in both
/// directions, each new block inheriting phase from its largest
/// already-resolved point above zero_tol. All recovered values share one
/// unknown global phase; it is never estimated. A block whose shared points
/// all sit below zero_tol stops the walk in that direction and the result is
/// flagged phase_link_break with partial values retained. Blocks whose
/// rank-one residual exceeds rank1_fallback_threshold are read off the
/// principal eigenvector instead of the direct formula.
PropagationResult propagate_phases(std::vector<BlockEstimate>& blocks,
                                   const InterpolationGrid& grid,
                                   double zero_tol, int start_block,
                                   double rank1_fallback_threshold = 1e-6);

enum class ReconstructionBackend {
  /// Coefficients read directly off grid points at 2 pi j / T (requires the
  /// grid to cover them; exact when T' = T).
  shannon_closed_form,
  /// Least-squares fit of the closed-form transform model at all resolved
  /// points; reports conditioning.
  least_squares,
  /// Truncated interpolation series x(z) = sum_n values[n] psi_n(z) evaluated
  /// at 2 pi j / T; needs a truncation radius.
  generating_function_series,
};

struct ReconstructOptions {
  ReconstructionBackend backend = ReconstructionBackend::least_squares;
  double truncation_radius = 0.0;          // generating_function_series only
  double min_singular_threshold = 1e-10;   // least_squares conditioning gate
};

struct ReconstructOutput {
  TimeLimitedSignal signal;
  RecoveryStatus status = RecoveryStatus::success;
  double smallest_singular_value = 0.0;
  double largest_singular_value = 0.0;
  double residual_norm = 0.0;
};

/// Fits the coefficient model to resolved transform values. values/resolved
/// are indexed like grid.point_index. Needs at least 2J+1 resolved points
/// (status insufficient_points otherwise).
ReconstructOutput reconstruct_signal(std::span<const Complex> values,
                                     const std::vector<bool>& resolved,
                                     const InterpolationGrid& grid,
                                     double interval_length, int max_harmonic,
                                     const ReconstructOptions& options);

struct RecoverOptions {
  int max_harmonic = 0;           // J of the model to fit
  double interval_length = 1.0;   // T of the model
  ReconstructionBackend backend = ReconstructionBackend::least_squares;
  double truncation_radius = 0.0;
  double min_singular_threshold = 1e-10;
  /// zero_tol = zero_tol_factor * (largest recovered point magnitude).
  double zero_tol_factor = 1e-8;
  double rank1_fallback_threshold = 1e-6;
  /// Start block for propagation; default picks the largest Gram trace.
  /// Falls back to the trace ordering when the requested block is dead.
  std::optional<int> start_block;
};

struct ReconstructionResult {
  RecoveryStatus status = RecoveryStatus::success;
  /// Transform values (times the unknown global phase) per grid point.
  std::vector<Complex> fourier_values;
  std::vector<bool> resolved;
  TimeLimitedSignal signal;
  /// Always true: the recovered signal is e^{i theta} times the truth for
  /// some unknowable theta. Kept explicit so downstream comparisons remember
  /// to align phases.
  bool global_phase_ambiguous = true;

  // Diagnostics.
  std::vector<double> block_rank1_residuals;
  std::vector<PhaseLink> phase_links;
  double max_overlap_mismatch = 0.0;
  double zero_tol = 0.0;
  int start_block = 0;
  int break_block = 0;  // when status == phase_link_break
  bool eigen_fallback_used = false;
  double smallest_singular_value = 0.0;
  double largest_singular_value = 0.0;
  double residual_norm = 0.0;
  /// Augmented pipeline only: fitted coefficient of the cosine column and
  /// the deviation | |1 - gamma / l1_bound| - 1 |, which is 0 in exact
  /// arithmetic. Reported, not enforced.
  Complex cosine_coefficient = 0.0;
  double gamma_consistency_deviation = 0.0;
};

/// Full pipeline on plain measurements: per-block Gram inversion, phase
/// propagation, reconstruction. Never returns zero_start_block (the start
/// policy rescans by trace); an all-zero measurement set reconstructs the
/// zero signal with status success.
ReconstructionResult recover(const MeasurementSet& measurements,
                             const RecoverOptions& options);

/// Pipeline for augmented measurements (measure_augmented): recovers yhat up
/// to a global phase, converts back through the cosine bound, and fits the
/// extended model with the extra cos(T' z / 2) column by least squares
/// (2J+2 unknowns). Requires measurements.augmented().enabled.
ReconstructionResult recover_augmented(const MeasurementSet& measurements,
                                       const RecoverOptions& options);

/// Relative L2 distance after optimally aligning the global phase:
///
///   min_theta ||recovered e^{-i theta} - truth||_2 / ||truth||_2.
///
/// The optimal rotation comes in closed form from the coefficient inner
/// product; the distance at that rotation is then evaluated pointwise, which
/// stays accurate down to roundoff where the expanded norm form would floor
/// at sqrt(eps). Zero truth falls back to the absolute L2 norm of
/// `recovered`. Signals must share the same interval length; harmonics may
/// differ (the shorter one is zero padded).
double phase_aligned_error(const TimeLimitedSignal& recovered,
                           const TimeLimitedSignal& truth);

}  // namespace pwret
