#include "pwret/measurement.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "gauss.hpp"

namespace pwret {

namespace {

// exp(i t z) for complex z.
Complex phase_factor(double t, Complex z) {
  return std::exp(Complex(-t * z.imag(), t * z.real()));
}

std::vector<Complex> transform_at_block(const TimeLimitedSignal& x,
                                        const InterpolationGrid& grid, int n) {
  std::vector<Complex> values = grid.block_points(n);
  for (Complex& v : values) v = x.fourier_transform(v);
  return values;
}

Complex branch_projection(std::span<const Complex> transform_values,
                          std::span<const Complex> frame_vector) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < frame_vector.size(); ++k)
    s += std::conj(frame_vector[k]) * transform_values[k];
  return s;
}

}  // namespace

ModulatorBank::ModulatorBank(FrameFamily frame, InterpolationGrid grid)
    : frame_(std::move(frame)), grid_(std::move(grid)) {
  if (frame_.dim() != grid_.dim())
    throw std::invalid_argument(
        "frame dimension must match points per grid block");
}

Complex ModulatorBank::modulator(int branch, double t) const {
  if (branch < 0 || branch >= frame_.count())
    throw std::out_of_range("modulator branch index out of range");
  const auto alpha = frame_.vector(branch);
  const auto offsets = grid_.offsets();
  Complex s = 0.0;
  for (int k = 0; k < grid_.dim(); ++k)
    s += std::conj(alpha[k]) * phase_factor(t, offsets[k]);
  return s;
}

MeasurementSet::MeasurementSet(InterpolationGrid grid, FrameFamily frame,
                               std::vector<double> samples,
                               NoiseDescriptor noise,
                               AugmentedDescriptor augmented)
    : grid_(std::move(grid)),
      frame_(std::move(frame)),
      samples_(std::move(samples)),
      noise_(noise),
      augmented_(augmented) {
  const std::size_t expected =
      static_cast<std::size_t>(grid_.block_count()) * frame_.count();
  if (samples_.size() != expected)
    throw std::invalid_argument(
        "sample count must be block count times branch count");
}

double MeasurementSet::sample(int n, int m) const {
  if (n < grid_.n_min() || n > grid_.n_max())
    throw std::out_of_range("block index outside the measurement window");
  if (m < 0 || m >= branch_count())
    throw std::out_of_range("branch index out of range");
  return samples_[static_cast<std::size_t>(n - grid_.n_min()) *
                      branch_count() +
                  m];
}

MeasurementSet measure(const TimeLimitedSignal& x, const ModulatorBank& bank) {
  const InterpolationGrid& grid = bank.grid();
  const FrameFamily& frame = bank.frame();
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(grid.block_count()) *
                  frame.count());
  for (int n = grid.n_min(); n <= grid.n_max(); ++n) {
    const std::vector<Complex> xs = transform_at_block(x, grid, n);
    for (int m = 0; m < frame.count(); ++m)
      samples.push_back(std::norm(branch_projection(xs, frame.vector(m))));
  }
  return MeasurementSet(grid, frame, std::move(samples));
}

double measure_via_modulation_oracle(const TimeLimitedSignal& x,
                                     const ModulatorBank& bank, int block,
                                     int branch, int nodes) {
  const InterpolationGrid& grid = bank.grid();
  if (block < grid.n_min() || block > grid.n_max())
    throw std::out_of_range("block index outside the grid window");
  if (nodes < 3) throw std::invalid_argument("oracle needs >= 3 nodes");

  // Simpson quadrature of p_m(t) x(t) exp(i t n beta) over the support.
  const double half = 0.5 * x.interval_length();
  const double zb = block * grid.block_spacing();
  const int n = (nodes % 2 == 0) ? nodes + 1 : nodes;
  const double h = 2.0 * half / (n - 1);
  auto f = [&](double t) {
    return bank.modulator(branch, t) * x.evaluate_time(t) *
           phase_factor(t, zb);
  };
  Complex acc = f(-half) + f(half);
  for (int i = 1; i + 1 < n; ++i)
    acc += f(-half + h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
  return std::norm(acc * (h / 3.0));
}

MeasurementSet add_noise(const MeasurementSet& in, double sigma,
                         std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
  detail::GaussianStream gauss(seed);
  std::vector<double> noisy(in.samples().begin(), in.samples().end());
  for (double& v : noisy) v = std::max(0.0, v + sigma * gauss.next());
  return MeasurementSet(in.grid(), in.frame(), std::move(noisy),
                        NoiseDescriptor{true, sigma, seed}, in.augmented());
}

namespace {

Complex augmented_transform(const L1BoundedSignal& x, double t_prime,
                            Complex z) {
  return x.l1_bound() * std::cos(0.5 * t_prime * z) -
         x.signal().fourier_transform(z);
}

}  // namespace

MeasurementSet measure_augmented(const L1BoundedSignal& x,
                                 const ModulatorBank& bank, double t_prime) {
  if (!(t_prime > x.signal().interval_length()))
    throw std::invalid_argument(
        "augmented sampling needs a grid interval strictly beyond the "
        "signal support");
  const InterpolationGrid& grid = bank.grid();
  const FrameFamily& frame = bank.frame();
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(grid.block_count()) *
                  frame.count());
  std::vector<Complex> ys(grid.dim());
  for (int n = grid.n_min(); n <= grid.n_max(); ++n) {
    const std::vector<Complex> pts = grid.block_points(n);
    for (int k = 0; k < grid.dim(); ++k)
      ys[k] = augmented_transform(x, t_prime, pts[k]);
    for (int m = 0; m < frame.count(); ++m)
      samples.push_back(std::norm(branch_projection(ys, frame.vector(m))));
  }
  return MeasurementSet(grid, frame, std::move(samples), NoiseDescriptor{},
                        AugmentedDescriptor{true, x.l1_bound(), t_prime});
}

double augmented_min_modulus(const L1BoundedSignal& x,
                             const InterpolationGrid& grid, double t_prime) {
  double lo = std::numeric_limits<double>::infinity();
  for (const Complex& p : grid.points())
    lo = std::min(lo, std::abs(augmented_transform(x, t_prime, p)));
  return lo;
}

std::optional<InterpolationGrid> certify_imaginary_shift(
    const L1BoundedSignal& x, const InterpolationGrid& grid, double t_prime,
    double zero_tol_factor, double h0, int max_doublings) {
  if (!(h0 > 0.0)) throw std::invalid_argument("shift step must be positive");
  double h = h0;
  for (int step = 0; step <= max_doublings; ++step, h *= 2.0) {
    const std::vector<double> eta(grid.dim(), h);
    const InterpolationGrid shifted = grid.with_imaginary_shift(eta);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const Complex& p : shifted.points()) {
      const double mag = std::abs(augmented_transform(x, t_prime, p));
      lo = std::min(lo, mag);
      hi = std::max(hi, mag);
    }
    if (lo > 10.0 * zero_tol_factor * hi) return shifted;
  }
  return std::nullopt;
}

}  // namespace pwret
