#pragma once

#include <span>
#include <vector>

#include "pwret/types.hpp"

namespace pwret {

/// Hermitian K x K matrix, row major. Produced by intensity inversion, where
/// it estimates the rank-one outer product of a vector with itself.
class GramMatrix {
 public:
  explicit GramMatrix(int dim);
  GramMatrix(int dim, std::vector<Complex> entries);

  int dim() const { return dim_; }
  const Complex& operator()(int r, int c) const { return entries_[r * dim_ + c]; }
  Complex& at(int r, int c) { return entries_[r * dim_ + c]; }
  std::span<const Complex> entries() const { return entries_; }

  double trace() const;                // sum of diagonal real parts
  double max_abs() const;              // largest entry magnitude
  double hermitian_deviation() const;  // max |Q - Q^H| entry

 private:
  int dim_;
  std::vector<Complex> entries_;
};

/// v v^* for a vector v.
GramMatrix outer_product(std::span<const Complex> v);

struct TightnessReport {
  bool ok = false;
  double max_deviation = 0.0;  // max entry of |sum_m a_m a_m^* - (M/K) I|
  double target_scale = 0.0;   // M/K
};

struct UniformityReport {
  bool ok = false;
  double common_value = 0.0;  // mean of |<a_m, a_m'>|^2 over pairs
  double max_spread = 0.0;    // max - min over pairs
};

/// A family of M vectors in C^K used as modulation coefficient patterns.
/// Construction only checks shape (equal, nonzero dimensions); the analytic
/// properties needed for exact intensity inversion are checked by the two
/// verify methods, so deliberately broken families can be built and examined.
class FrameFamily {
 public:
  explicit FrameFamily(std::vector<std::vector<Complex>> vectors);

  /// The K = 2, M = 4 family
  ///   (a, b), (b, a), (a, -b), (-b, a)
  /// with a = sqrt((1 - 1/sqrt(3))/2) and b = exp(i 5 pi / 4) sqrt((1 +
  /// 1/sqrt(3))/2). It is tight with frame bound M/K = 2 and has constant
  /// cross correlation |<a_m, a_m'>|^2 = 1/3; both are asserted here to
  /// 1e-12 at construction.
  static FrameFamily canonical_k2();

  int dim() const { return dim_; }           // K
  int count() const { return static_cast<int>(vectors_.size()); }  // M
  std::span<const Complex> vector(int m) const { return vectors_[m]; }

  /// Checks sum_m a_m a_m^* = (M/K) I entrywise within tol.
  TightnessReport verify_tight(double tol) const;

  /// Checks that |<a_m, a_m'>|^2 is constant over all pairs m != m' within
  /// tol (max minus min at most tol). Families with fewer than two vectors
  /// pass vacuously with common_value 0.
  UniformityReport verify_two_uniform(double tol) const;

 private:
  int dim_;
  std::vector<std::vector<Complex>> vectors_;
};

/// Inverts intensity samples c_m = |<v, a_m>|^2 to the outer product v v^*:
///
///   Q = (K+1)/K sum_m c_m a_m a_m^*  -  (1/K) (sum_m c_m) I.
///
/// Exact (up to roundoff) whenever the family is tight with M = K^2 vectors
/// and constant cross correlation 1/(K+1). Throws std::invalid_argument on a
/// length mismatch or a negative intensity.
GramMatrix rank_one_recover(std::span<const double> intensities,
                            const FrameFamily& frame);

/// Eigenvalues of a Gram matrix, ascending.
std::vector<double> gram_eigenvalues(const GramMatrix& q);

}  // namespace pwret
