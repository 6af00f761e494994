#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pwret/types.hpp"

namespace pwret {

/// sin(z)/z extended over the removable singularity. Switches to the series
/// 1 - z^2/6 for |z| < 1e-4, where the direct quotient starts losing digits.
Complex cardinal_sine(Complex z);

/// Finite trigonometric sum supported on [-T/2, T/2]:
///
///   x(t) = sum_{j=-J..J} c_j exp(-i 2 pi j t / T),   x(t) = 0 outside.
///
/// Its Fourier transform z -> integral x(t) exp(i t z) dt extends to an entire
/// function and is available in closed form as a sum of shifted cardinal
/// sines. Coefficients are stored in ascending order j = -J..J.
class TimeLimitedSignal {
 public:
  /// coefficients.size() must be odd (2J+1); interval_length must be > 0.
  TimeLimitedSignal(double interval_length, std::vector<Complex> coefficients);

  static TimeLimitedSignal zero(double interval_length, int max_harmonic);

  /// Coefficients drawn iid with standard normal real and imaginary parts
  /// from a fixed-width generator, so a seed pins the signal on any platform.
  static TimeLimitedSignal random(double interval_length, int max_harmonic,
                                  std::uint64_t seed);

  double interval_length() const { return interval_length_; }
  int max_harmonic() const { return max_harmonic_; }
  std::span<const Complex> coefficients() const { return coefficients_; }

  /// c_j for any j; zero outside [-J, J].
  Complex coefficient(int j) const;

  /// T * sum |c_j|^2 (squared L2 norm over the support).
  double energy() const;

  Complex evaluate_time(double t) const;

  /// Closed form: sum_j c_j T sinc(T/2 (z - 2 pi j / T)).
  Complex fourier_transform(Complex z) const;

  TimeLimitedSignal scaled(Complex factor) const;

 private:
  double interval_length_;
  int max_harmonic_;
  std::vector<Complex> coefficients_;
};

/// Composite Simpson quadrature of x(t) exp(i t z) over the support. Used as
/// an independent oracle against the closed-form transform; `nodes` is rounded
/// up to the next odd count.
Complex fourier_transform_quadrature(const TimeLimitedSignal& x, Complex z,
                                     int nodes);

/// Quadrature estimate of the L1 norm over the support.
double l1_norm(const TimeLimitedSignal& x, int nodes = 4001);

/// A signal together with a certified bound on its L1 norm. The bound is
/// checked by quadrature at construction and rejected if the signal exceeds
/// it.
class L1BoundedSignal {
 public:
  L1BoundedSignal(TimeLimitedSignal signal, double l1_bound,
                  int check_nodes = 4001);

  const TimeLimitedSignal& signal() const { return signal_; }
  double l1_bound() const { return l1_bound_; }

 private:
  TimeLimitedSignal signal_;
  double l1_bound_;
};

}  // namespace pwret
