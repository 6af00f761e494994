#pragma once

#include <span>
#include <vector>

#include "pwret/types.hpp"

namespace pwret {

struct OverlapReport {
  bool ok = false;
  double worst_violation = 0.0;
};

/// Block-structured interpolation grid. Block n carries the K points
///
///   lambda_{n,k} = n * beta + offsets[k],   k = 0..K-1,
///
/// for n in [n_min, n_max]. When the offsets satisfy the overlap condition
///
///   offsets[K-a+i] = offsets[i] + beta   for i = 0..a-1,
///
/// the last a points of block n coincide with the first a points of block
/// n+1; those shared points are what lets phase propagate between blocks.
/// The constructor checks shape only (sorted distinct offsets, 1 <= a < K,
/// beta > 0), so perturbed grids can be built and fed to
/// validate_overlap_condition.
///
/// Distinct points in the window are enumerated by
///
///   point_index(n, k) = (n - n_min) * (K - a) + k,
///
/// under which the overlap condition makes shared points collide exactly.
class InterpolationGrid {
 public:
  InterpolationGrid(std::vector<Complex> offsets, double block_spacing,
                    int overlap, int n_min, int n_max);

  /// Grid whose points are consecutive multiples of delta = 2 pi / t_prime
  /// (plus an optional constant shift): offsets[k] = (k+1) delta +
  /// anchor_shift and beta = (K-a) delta. The union of blocks is then a
  /// contiguous run of the Shannon lattice for interval length t_prime.
  static InterpolationGrid shannon(double t_prime, int dim, int overlap,
                                   int n_min, int n_max,
                                   double anchor_shift = 0.0);

  /// Same grid with offsets[k] + i eta[k]. eta must respect the overlap
  /// condition (eta[K-a+i] = eta[i]) or the shared points of adjacent blocks
  /// would no longer coincide; violations throw std::invalid_argument.
  InterpolationGrid with_imaginary_shift(std::span<const double> eta) const;

  int dim() const { return static_cast<int>(offsets_.size()); }  // K
  int overlap() const { return overlap_; }                       // a
  double block_spacing() const { return block_spacing_; }        // beta
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  int block_count() const { return n_max_ - n_min_ + 1; }
  std::span<const Complex> offsets() const { return offsets_; }

  std::vector<Complex> block_points(int n) const;

  /// The a points shared by blocks n and n+1 (positions K-a..K-1 of block n,
  /// positions 0..a-1 of block n+1).
  std::vector<Complex> overlap_points(int n) const;

  OverlapReport validate_overlap_condition(double tol = 1e-12) const;

  int point_count() const;
  int point_index(int n, int k) const;
  Complex point(int index) const;
  std::vector<Complex> points() const;

 private:
  std::vector<Complex> offsets_;
  double block_spacing_;
  int overlap_;
  int n_min_;
  int n_max_;
};

/// Truncated canonical product over the grid points inside |lambda| < radius:
///
///   S(z) = z^d * prod_{0 < |lambda| < radius} (1 - z / lambda),
///
/// where d is 1 if the origin is among the points and 0 otherwise. For the
/// Shannon lattice of interval length T' the full product is sin(T' z / 2)
/// up to the constant 2/T'; truncation at a finite radius leaves an error
/// that decays roughly like |z sin| / radius, so tight accuracy targets need
/// radii far beyond the sampling window (see the convergence tests).
Complex generating_function(std::span<const Complex> points, Complex z,
                            double radius);

/// Fourier transform of the member-th interpolation basis function,
///
///   psi_n(z) = S(z) / (S'(lambda_n) (z - lambda_n)),
///
/// evaluated through the leave-one-out form of the truncated product, which
/// cancels the removable singularity exactly: the result is exactly 1 at
/// lambda_n and exactly 0 at every other point inside the radius. member
/// indexes `points` and must lie inside the radius.
Complex dual_basis_transform(std::span<const Complex> points,
                             std::size_t member, Complex z, double radius);

struct RateFigure {
  int dim = 0;
  int overlap = 0;
  double t_prime = 0.0;
  double interval_length = 0.0;
  double rate = 0.0;              // K^2/(K-a) * T'/(2 pi), samples per unit z
  double nyquist_multiple = 0.0;  // rate / (T / (2 pi)) = K^2/(K-a) * T'/T
};

/// Average intensity sampling rate of the scheme: M = K^2 branches, one block
/// of samples per beta = (K-a) 2 pi / T'. Minimum 4x Nyquist at K = 2, a = 1,
/// T' = T. Requires K >= 2, 1 <= a < K, T' >= T > 0.
RateFigure sampling_rate(int dim, int overlap, double t_prime,
                         double interval_length);

}  // namespace pwret
