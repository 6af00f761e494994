#include "pwret/signal.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gauss.hpp"

namespace pwret {

namespace {

// Composite Simpson weights over [-T/2, T/2] applied to f; nodes is forced
// odd so the panel count is even.
template <typename F>
auto simpson(double half_width, int nodes, F&& f) {
  if (nodes < 3) throw std::invalid_argument("quadrature needs >= 3 nodes");
  const int n = (nodes % 2 == 0) ? nodes + 1 : nodes;
  const double h = 2.0 * half_width / (n - 1);
  auto acc = f(-half_width) + f(half_width);
  for (int i = 1; i + 1 < n; ++i) {
    const double t = -half_width + h * i;
    acc += f(t) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return acc * (h / 3.0);
}

}  // namespace

Complex cardinal_sine(Complex z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

TimeLimitedSignal::TimeLimitedSignal(double interval_length,
                                     std::vector<Complex> coefficients)
    : interval_length_(interval_length),
      coefficients_(std::move(coefficients)) {
  if (!(interval_length_ > 0.0))
    throw std::invalid_argument("signal interval length must be positive");
  if (coefficients_.empty() || coefficients_.size() % 2 == 0)
    throw std::invalid_argument(
        "signal needs an odd coefficient count (j = -J..J)");
  max_harmonic_ = static_cast<int>(coefficients_.size() / 2);
}

TimeLimitedSignal TimeLimitedSignal::zero(double interval_length,
                                          int max_harmonic) {
  return TimeLimitedSignal(
      interval_length, std::vector<Complex>(2 * max_harmonic + 1, 0.0));
}

TimeLimitedSignal TimeLimitedSignal::random(double interval_length,
                                            int max_harmonic,
                                            std::uint64_t seed) {
  detail::GaussianStream gauss(seed);
  std::vector<Complex> coeffs(2 * max_harmonic + 1);
  for (Complex& c : coeffs) {
    const double re = gauss.next();
    const double im = gauss.next();
    c = Complex(re, im);
  }
  return TimeLimitedSignal(interval_length, std::move(coeffs));
}

Complex TimeLimitedSignal::coefficient(int j) const {
  if (j < -max_harmonic_ || j > max_harmonic_) return 0.0;
  return coefficients_[j + max_harmonic_];
}

double TimeLimitedSignal::energy() const {
  double s = 0.0;
  for (const Complex& c : coefficients_) s += std::norm(c);
  return interval_length_ * s;
}

Complex TimeLimitedSignal::evaluate_time(double t) const {
  if (std::abs(t) > 0.5 * interval_length_) return 0.0;
  // Horner in w = exp(-i 2 pi t / T); the trailing rotation undoes the
  // power shift from summing over j + J instead of j.
  const Complex w = std::polar(1.0, -kTwoPi * t / interval_length_);
  Complex acc = 0.0;
  for (int idx = static_cast<int>(coefficients_.size()) - 1; idx >= 0; --idx)
    acc = acc * w + coefficients_[idx];
  return acc * std::polar(1.0, kTwoPi * t * max_harmonic_ / interval_length_);
}

Complex TimeLimitedSignal::fourier_transform(Complex z) const {
  const double carrier = kTwoPi / interval_length_;
  Complex sum = 0.0;
  for (int j = -max_harmonic_; j <= max_harmonic_; ++j)
    sum += coefficients_[j + max_harmonic_] *
           cardinal_sine(0.5 * interval_length_ * (z - j * carrier));
  return interval_length_ * sum;
}

TimeLimitedSignal TimeLimitedSignal::scaled(Complex factor) const {
  std::vector<Complex> coeffs(coefficients_.begin(), coefficients_.end());
  for (Complex& c : coeffs) c *= factor;
  return TimeLimitedSignal(interval_length_, std::move(coeffs));
}

Complex fourier_transform_quadrature(const TimeLimitedSignal& x, Complex z,
                                     int nodes) {
  return simpson(0.5 * x.interval_length(), nodes, [&x, z](double t) {
    // exp(i t z) for complex z, i t z = (-t Im z) + i (t Re z).
    const Complex rot = std::exp(Complex(-t * z.imag(), t * z.real()));
    return x.evaluate_time(t) * rot;
  });
}

double l1_norm(const TimeLimitedSignal& x, int nodes) {
  return simpson(0.5 * x.interval_length(), nodes,
                 [&x](double t) { return std::abs(x.evaluate_time(t)); });
}

L1BoundedSignal::L1BoundedSignal(TimeLimitedSignal signal, double l1_bound,
                                 int check_nodes)
    : signal_(std::move(signal)), l1_bound_(l1_bound) {
  if (!(l1_bound_ > 0.0))
    throw std::invalid_argument("l1 bound must be positive");
  const double estimate = l1_norm(signal_, check_nodes);
  if (estimate > l1_bound_ * (1.0 + 1e-12))
    throw std::invalid_argument("signal exceeds the declared l1 bound");
}

}  // namespace pwret
