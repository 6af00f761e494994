#include "pwret/frames.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pwret/linalg.hpp"

namespace pwret {

namespace {

// <x, y> = y^H x: second argument conjugated, matching the measurement
// convention c = |<xhat, a>|^2.
Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

}  // namespace

GramMatrix::GramMatrix(int dim) : dim_(dim), entries_(dim * dim, 0.0) {
  if (dim_ <= 0) throw std::invalid_argument("gram matrix dim must be >= 1");
}

GramMatrix::GramMatrix(int dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ <= 0) throw std::invalid_argument("gram matrix dim must be >= 1");
  if (entries_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw std::invalid_argument("gram matrix entry count mismatch");
}

double GramMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i).real();
  return s;
}

double GramMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& v : entries_) m = std::max(m, std::abs(v));
  return m;
}

double GramMatrix::hermitian_deviation() const {
  double m = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c <= r; ++c)
      m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return m;
}

GramMatrix outer_product(std::span<const Complex> v) {
  GramMatrix q(static_cast<int>(v.size()));
  for (int r = 0; r < q.dim(); ++r)
    for (int c = 0; c < q.dim(); ++c) q.at(r, c) = v[r] * std::conj(v[c]);
  return q;
}

FrameFamily::FrameFamily(std::vector<std::vector<Complex>> vectors)
    : vectors_(std::move(vectors)) {
  if (vectors_.empty())
    throw std::invalid_argument("frame family needs at least one vector");
  dim_ = static_cast<int>(vectors_.front().size());
  if (dim_ == 0) throw std::invalid_argument("frame vectors must be nonempty");
  for (const auto& v : vectors_)
    if (static_cast<int>(v.size()) != dim_)
      throw std::invalid_argument("frame vectors must share one dimension");
}

FrameFamily FrameFamily::canonical_k2() {
  const double inv_r3 = 1.0 / std::sqrt(3.0);
  const double a = std::sqrt(0.5 * (1.0 - inv_r3));
  const Complex b = std::polar(std::sqrt(0.5 * (1.0 + inv_r3)), 5.0 * kPi / 4.0);
  FrameFamily family({{a, b}, {b, a}, {a, -b}, {-b, a}});

  const TightnessReport tight = family.verify_tight(1e-12);
  const UniformityReport uniform = family.verify_two_uniform(1e-12);
  if (!tight.ok || !uniform.ok ||
      std::abs(uniform.common_value - 1.0 / 3.0) > 1e-12)
    throw std::logic_error("canonical family failed its construction checks");
  return family;
}

TightnessReport FrameFamily::verify_tight(double tol) const {
  const double target = static_cast<double>(count()) / dim_;
  GramMatrix sum(dim_);
  for (const auto& v : vectors_)
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) sum.at(r, c) += v[r] * std::conj(v[c]);

  TightnessReport report;
  report.target_scale = target;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) {
      const Complex want = (r == c) ? Complex(target) : Complex(0.0);
      report.max_deviation =
          std::max(report.max_deviation, std::abs(sum(r, c) - want));
    }
  report.ok = report.max_deviation <= tol;
  return report;
}

UniformityReport FrameFamily::verify_two_uniform(double tol) const {
  UniformityReport report;
  const int m = count();
  if (m < 2) {
    report.ok = true;
    return report;
  }
  double lo = 0.0, hi = 0.0, sum = 0.0;
  int pairs = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double val = std::norm(inner(vectors_[i], vectors_[j]));
      if (pairs == 0) lo = hi = val;
      lo = std::min(lo, val);
      hi = std::max(hi, val);
      sum += val;
      ++pairs;
    }
  report.common_value = sum / pairs;
  report.max_spread = hi - lo;
  report.ok = report.max_spread <= tol;
  return report;
}

GramMatrix rank_one_recover(std::span<const double> intensities,
                            const FrameFamily& frame) {
  if (intensities.size() != static_cast<std::size_t>(frame.count()))
    throw std::invalid_argument(
        "intensity count must match the frame vector count");
  for (const double c : intensities)
    if (c < 0.0)
      throw std::invalid_argument("intensities must be nonnegative");

  const int k = frame.dim();
  const double lead = static_cast<double>(k + 1) / k;
  double total = 0.0;
  GramMatrix q(k);
  for (int m = 0; m < frame.count(); ++m) {
    const double c = intensities[m];
    total += c;
    const auto v = frame.vector(m);
    // Fill the upper triangle only; mirror below to keep Q exactly Hermitian.
    for (int r = 0; r < k; ++r)
      for (int col = r; col < k; ++col)
        q.at(r, col) += (lead * c) * v[r] * std::conj(v[col]);
  }
  for (int r = 0; r < k; ++r) {
    q.at(r, r) = Complex(q(r, r).real() - total / k, 0.0);
    for (int col = r + 1; col < k; ++col) q.at(col, r) = std::conj(q(r, col));
  }
  return q;
}

std::vector<double> gram_eigenvalues(const GramMatrix& q) {
  ComplexMatrix m(q.dim(), q.dim());
  for (int r = 0; r < q.dim(); ++r)
    for (int c = 0; c < q.dim(); ++c) m(r, c) = q(r, c);
  return hermitian_eigen(m).values;
}

}  // namespace pwret
