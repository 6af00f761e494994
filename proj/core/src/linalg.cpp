#include "pwret/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pwret {

namespace {

// Unitary 2x2 diagonalizing the Hermitian pair [[app, g], [conj(g), aqq]]:
//
//   U = [[ c,            s           ],
//        [-s conj(ph),   c conj(ph) ]],   ph = g / |g|,
//
// with the classic small-angle Jacobi choice of c, s. Columns of U are the
// eigenvectors; U^H A U is diagonal on the pair.
struct PairRotation {
  double c = 1.0;
  double s = 0.0;
  Complex phase = 1.0;  // ph
  bool identity = true;
};

PairRotation make_rotation(double app, double aqq, Complex g) {
  const double mag = std::abs(g);
  if (mag == 0.0) return {};
  PairRotation rot;
  rot.identity = false;
  rot.phase = g / mag;
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  rot.c = 1.0 / std::sqrt(1.0 + t * t);
  rot.s = t * rot.c;
  return rot;
}

// B <- B U on columns p, q (U as above).
void apply_right(ComplexMatrix& b, std::size_t p, std::size_t q,
                 const PairRotation& r) {
  const Complex cph = std::conj(r.phase);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    const Complex bp = b(i, p);
    const Complex bq = b(i, q);
    b(i, p) = bp * r.c - bq * (r.s * cph);
    b(i, q) = bp * r.s + bq * (r.c * cph);
  }
}

// B <- U^H B on rows p, q.
void apply_left_adjoint(ComplexMatrix& b, std::size_t p, std::size_t q,
                        const PairRotation& r) {
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const Complex bp = b(p, j);
    const Complex bq = b(q, j);
    b(p, j) = bp * r.c - bq * (r.s * r.phase);
    b(q, j) = bp * r.s + bq * (r.c * r.phase);
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const Complex& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Eigensystem hermitian_eigen(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n)
    throw std::invalid_argument("hermitian_eigen: matrix must be square");
  const double scale = frobenius_norm(a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-10 * (scale + 1.0))
        throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");

  ComplexMatrix work = a;
  ComplexMatrix vec = ComplexMatrix::identity(n);

  // Cyclic Jacobi; a single pass is the exact closed form when n == 2.
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (off_diagonal_norm(work) <= 1e-15 * (scale + 1.0)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const PairRotation rot =
            make_rotation(work(p, p).real(), work(q, q).real(), work(p, q));
        if (rot.identity) continue;
        apply_right(work, p, q, rot);
        apply_left_adjoint(work, p, q, rot);
        apply_right(vec, p, q, rot);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = work(i, i).real();
  std::sort(order.begin(), order.end(),
            [&diag](std::size_t l, std::size_t r) { return diag[l] < diag[r]; });

  Eigensystem out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vec(i, order[j]);
  }
  return out;
}

LeastSquaresSolution solve_least_squares(const ComplexMatrix& a,
                                         std::span<const Complex> b,
                                         double rcond) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  if (rows < cols)
    throw std::invalid_argument("solve_least_squares: needs rows >= cols");
  if (b.size() != rows)
    throw std::invalid_argument("solve_least_squares: right-hand side size");

  // One-sided Jacobi: rotate column pairs of W until they are mutually
  // orthogonal; the column norms are then the singular values and the
  // accumulated rotations form V.
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::identity(cols);

  auto column_dot = [&w, rows](std::size_t i, std::size_t j) {
    Complex s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += std::conj(w(r, i)) * w(r, j);
    return s;
  };

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double npp = std::real(column_dot(p, p));
        const double nqq = std::real(column_dot(q, q));
        const Complex g = column_dot(p, q);
        if (std::abs(g) <= 1e-15 * std::sqrt(npp * nqq) || std::abs(g) == 0.0)
          continue;
        const PairRotation rot = make_rotation(npp, nqq, g);
        apply_right(w, p, q, rot);
        apply_right(v, p, q, rot);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += std::norm(w(r, j));
    sigma[j] = std::sqrt(s);
  }

  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&sigma](std::size_t l, std::size_t r) {
    return sigma[l] > sigma[r];
  });

  LeastSquaresSolution out;
  out.largest_singular_value = sigma[order.front()];
  out.smallest_singular_value = sigma[order.back()];

  // x = sum over kept directions of v_j <u_j, b> / sigma_j.
  const double cutoff = rcond * out.largest_singular_value;
  out.x.assign(cols, 0.0);
  for (std::size_t jj = 0; jj < cols; ++jj) {
    const std::size_t j = order[jj];
    if (sigma[j] <= cutoff || sigma[j] == 0.0) continue;
    Complex ub = 0.0;  // <u_j, b> with u_j = w(:,j)/sigma_j
    for (std::size_t r = 0; r < rows; ++r) ub += std::conj(w(r, j)) * b[r];
    ub /= sigma[j] * sigma[j];
    for (std::size_t i = 0; i < cols; ++i) out.x[i] += v(i, j) * ub;
  }

  double res = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    Complex ax = 0.0;
    for (std::size_t i = 0; i < cols; ++i) ax += a(r, i) * out.x[i];
    res += std::norm(ax - b[r]);
  }
  out.residual_norm = std::sqrt(res);
  return out;
}

}  // namespace pwret
