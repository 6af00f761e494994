#include "pwret/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pwret {

namespace {

// Points this close to 0 are treated as the origin when forming canonical
// products. Grids here have spacing well above this; it only absorbs the
// roundoff in n * beta + offset when the exact value is 0.
constexpr double kOriginTol = 1e-9;

}  // namespace

InterpolationGrid::InterpolationGrid(std::vector<Complex> offsets,
                                     double block_spacing, int overlap,
                                     int n_min, int n_max)
    : offsets_(std::move(offsets)),
      block_spacing_(block_spacing),
      overlap_(overlap),
      n_min_(n_min),
      n_max_(n_max) {
  const int k = static_cast<int>(offsets_.size());
  if (k < 2) throw std::invalid_argument("grid needs at least two offsets");
  if (overlap_ < 1 || overlap_ >= k)
    throw std::invalid_argument("grid overlap must satisfy 1 <= a < K");
  if (!(block_spacing_ > 0.0))
    throw std::invalid_argument("block spacing must be positive");
  if (n_min_ > n_max_)
    throw std::invalid_argument("grid block range is empty");
  for (int i = 1; i < k; ++i)
    if (!(offsets_[i].real() > offsets_[i - 1].real()))
      throw std::invalid_argument(
          "grid offsets must have strictly increasing real parts");
}

InterpolationGrid InterpolationGrid::shannon(double t_prime, int dim,
                                             int overlap, int n_min, int n_max,
                                             double anchor_shift) {
  if (!(t_prime > 0.0))
    throw std::invalid_argument("interval length must be positive");
  const double delta = kTwoPi / t_prime;
  std::vector<Complex> offsets(dim > 0 ? dim : 0);
  for (int k = 0; k < dim; ++k) offsets[k] = (k + 1) * delta + anchor_shift;
  return InterpolationGrid(std::move(offsets), (dim - overlap) * delta,
                           overlap, n_min, n_max);
}

InterpolationGrid InterpolationGrid::with_imaginary_shift(
    std::span<const double> eta) const {
  const int k = dim();
  if (eta.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("imaginary shift needs one entry per offset");
  for (int i = 0; i < overlap_; ++i) {
    const double diff = std::abs(eta[k - overlap_ + i] - eta[i]);
    if (diff > 1e-12 * std::max(1.0, std::abs(eta[i])))
      throw std::invalid_argument(
          "imaginary shift must repeat on overlapping positions");
  }
  std::vector<Complex> shifted(offsets_.begin(), offsets_.end());
  for (int i = 0; i < k; ++i) shifted[i] += Complex(0.0, eta[i]);
  return InterpolationGrid(std::move(shifted), block_spacing_, overlap_,
                           n_min_, n_max_);
}

std::vector<Complex> InterpolationGrid::block_points(int n) const {
  if (n < n_min_ || n > n_max_)
    throw std::out_of_range("block index outside the grid window");
  std::vector<Complex> pts(offsets_.begin(), offsets_.end());
  for (Complex& p : pts) p += n * block_spacing_;
  return pts;
}

std::vector<Complex> InterpolationGrid::overlap_points(int n) const {
  if (n < n_min_ || n + 1 > n_max_)
    throw std::out_of_range("overlap needs two adjacent blocks in the window");
  const std::vector<Complex> next = block_points(n + 1);
  return {next.begin(), next.begin() + overlap_};
}

OverlapReport InterpolationGrid::validate_overlap_condition(double tol) const {
  const int k = dim();
  OverlapReport report;
  for (int i = 0; i < overlap_; ++i) {
    const double diff = std::abs(offsets_[k - overlap_ + i] - offsets_[i] -
                                 Complex(block_spacing_));
    report.worst_violation = std::max(report.worst_violation, diff);
  }
  report.ok = report.worst_violation <= tol;
  return report;
}

int InterpolationGrid::point_count() const {
  return (n_max_ - n_min_) * (dim() - overlap_) + dim();
}

int InterpolationGrid::point_index(int n, int k) const {
  if (n < n_min_ || n > n_max_)
    throw std::out_of_range("block index outside the grid window");
  if (k < 0 || k >= dim())
    throw std::out_of_range("position index outside the block");
  return (n - n_min_) * (dim() - overlap_) + k;
}

Complex InterpolationGrid::point(int index) const {
  if (index < 0 || index >= point_count())
    throw std::out_of_range("point index outside the grid window");
  const int k = dim();
  const int span = k - overlap_;
  // Smallest block containing the point: positions above K-1 spill into
  // later blocks span at a time.
  const int rel = index <= k - 1 ? 0 : (index - (k - 1) + span - 1) / span;
  return (n_min_ + rel) * block_spacing_ + offsets_[index - rel * span];
}

std::vector<Complex> InterpolationGrid::points() const {
  std::vector<Complex> pts(point_count());
  for (int i = 0; i < point_count(); ++i) pts[i] = point(i);
  return pts;
}

Complex generating_function(std::span<const Complex> points, Complex z,
                            double radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("truncation radius must be positive");
  Complex product = 1.0;
  bool origin_in_set = false;
  for (const Complex& lambda : points) {
    if (std::abs(lambda) >= radius) continue;
    if (std::abs(lambda) < kOriginTol) {
      origin_in_set = true;
      continue;
    }
    product *= 1.0 - z / lambda;
  }
  if (origin_in_set) product *= z;
  return product;
}

Complex dual_basis_transform(std::span<const Complex> points,
                             std::size_t member, Complex z, double radius) {
  if (member >= points.size())
    throw std::invalid_argument("dual basis member index out of range");
  const Complex lambda_n = points[member];
  if (std::abs(lambda_n) >= radius)
    throw std::invalid_argument("dual basis member lies outside the radius");

  // Leave-one-out quotient: numerator and denominator run over identical
  // factors, once at z and once at lambda_n, so the value is exactly 1 at
  // lambda_n and exactly 0 at the other retained points.
  Complex num = 1.0;
  Complex den = 1.0;
  for (std::size_t m = 0; m < points.size(); ++m) {
    if (m == member) continue;
    const Complex lambda = points[m];
    if (std::abs(lambda) >= radius) continue;
    if (std::abs(lambda) < kOriginTol) {
      num *= z;
      den *= lambda_n;
    } else {
      num *= 1.0 - z / lambda;
      den *= 1.0 - lambda_n / lambda;
    }
  }
  return num / den;
}

RateFigure sampling_rate(int dim, int overlap, double t_prime,
                         double interval_length) {
  if (dim < 2) throw std::invalid_argument("sampling rate needs K >= 2");
  if (overlap < 1 || overlap >= dim)
    throw std::invalid_argument("sampling rate needs 1 <= a < K");
  if (!(interval_length > 0.0))
    throw std::invalid_argument("interval length must be positive");
  if (t_prime < interval_length)
    throw std::invalid_argument("grid interval must be >= signal interval");

  RateFigure figure;
  figure.dim = dim;
  figure.overlap = overlap;
  figure.t_prime = t_prime;
  figure.interval_length = interval_length;
  const double branches_per_spacing =
      static_cast<double>(dim) * dim / (dim - overlap);
  figure.rate = branches_per_spacing * t_prime / kTwoPi;
  figure.nyquist_multiple = branches_per_spacing * t_prime / interval_length;
  return figure;
}

}  // namespace pwret
