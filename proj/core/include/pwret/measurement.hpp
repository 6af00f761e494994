#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "pwret/frames.hpp"
#include "pwret/grid.hpp"
#include "pwret/signal.hpp"
#include "pwret/types.hpp"

namespace pwret {

/// The acquisition front end: M = frame.count() modulators
///
///   p_m(t) = sum_k conj(a_{m,k}) exp(i lambda_k t)
///
/// built from the frame vectors and the grid offsets. Branch m of block n
/// measures |F[p_m x](n beta)|^2, which equals |<xhat_n, a_m>|^2 for the
/// vector xhat_n of transform values at the block's points.
class ModulatorBank {
 public:
  /// frame.dim() must equal grid.dim().
  ModulatorBank(FrameFamily frame, InterpolationGrid grid);

  const FrameFamily& frame() const { return frame_; }
  const InterpolationGrid& grid() const { return grid_; }

  Complex modulator(int branch, double t) const;

 private:
  FrameFamily frame_;
  InterpolationGrid grid_;
};

struct NoiseDescriptor {
  bool enabled = false;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct AugmentedDescriptor {
  bool enabled = false;
  double l1_bound = 0.0;
  double t_prime = 0.0;
};

/// Intensity samples indexed by (block n, branch m), stored row major in n
/// then m, together with the grid and frame that produced them and metadata
/// describing any noise or cosine augmentation applied.
class MeasurementSet {
 public:
  MeasurementSet(InterpolationGrid grid, FrameFamily frame,
                 std::vector<double> samples, NoiseDescriptor noise = {},
                 AugmentedDescriptor augmented = {});

  const InterpolationGrid& grid() const { return grid_; }
  const FrameFamily& frame() const { return frame_; }
  int branch_count() const { return frame_.count(); }

  double sample(int n, int m) const;
  std::span<const double> samples() const { return samples_; }

  const NoiseDescriptor& noise() const { return noise_; }
  const AugmentedDescriptor& augmented() const { return augmented_; }

 private:
  InterpolationGrid grid_;
  FrameFamily frame_;
  std::vector<double> samples_;
  NoiseDescriptor noise_;
  AugmentedDescriptor augmented_;
};

/// Noiseless samples via the closed-form transform: for each block,
/// c_{n,m} = |sum_k conj(a_{m,k}) xhat(n beta + lambda_k)|^2.
MeasurementSet measure(const TimeLimitedSignal& x, const ModulatorBank& bank);

/// Independent oracle for a single sample: integrates p_m(t) x(t) exp(i t n
/// beta) by Simpson quadrature over the support and squares the magnitude.
/// Slow; for tests.
double measure_via_modulation_oracle(const TimeLimitedSignal& x,
                                     const ModulatorBank& bank, int block,
                                     int branch, int nodes = 4001);

/// Adds iid Gaussian noise of the given sigma to every sample and clamps at
/// zero (intensities stay nonnegative). Deterministic in the seed.
MeasurementSet add_noise(const MeasurementSet& in, double sigma,
                         std::uint64_t seed);

/// Samples of the augmented transform
///
///   yhat(z) = l1_bound * cos(t_prime z / 2) - xhat(z)
///
/// instead of xhat. On a grid for interval length t_prime strictly larger
/// than the signal's support length, yhat cannot vanish on a suitable
/// imaginary-shifted point set, which removes the zero-sample failure mode of
/// phase propagation. Requires t_prime > x.interval_length().
MeasurementSet measure_augmented(const L1BoundedSignal& x,
                                 const ModulatorBank& bank, double t_prime);

/// min over the grid's points of |yhat|, the quantity that must stay away
/// from zero for propagation on augmented measurements. Simulation-side
/// certificate; uses the ground-truth signal.
double augmented_min_modulus(const L1BoundedSignal& x,
                             const InterpolationGrid& grid, double t_prime);

/// Scans uniform imaginary shifts h, 2h, 4h, ... (max_doublings steps) and
/// returns the first shifted grid on which min |yhat| exceeds
/// 10 * zero_tol_factor * max |yhat|, i.e. comfortably clears the tolerance
/// phase propagation will use. Returns nullopt if no shift in range
/// certifies.
std::optional<InterpolationGrid> certify_imaginary_shift(
    const L1BoundedSignal& x, const InterpolationGrid& grid, double t_prime,
    double zero_tol_factor, double h0 = 1.0, int max_doublings = 12);

}  // namespace pwret
