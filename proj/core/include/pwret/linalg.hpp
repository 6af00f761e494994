#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pwret/types.hpp"

namespace pwret {

/// Dense row-major complex matrix. Small and dependency free; everything in
/// this project is at most a few hundred rows.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

struct Eigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column j pairs with values[j]; unit norm
};

/// Eigendecomposition of a Hermitian matrix. Uses the closed-form rotation for
/// 2x2 and cyclic Jacobi sweeps otherwise. Throws std::invalid_argument if the
/// matrix is not square or not Hermitian to working precision.
Eigensystem hermitian_eigen(const ComplexMatrix& a);

struct LeastSquaresSolution {
  std::vector<Complex> x;
  double smallest_singular_value = 0.0;
  double largest_singular_value = 0.0;
  double residual_norm = 0.0;  // ||A x - b||_2
};

/// Minimum-norm least squares for an overdetermined system via one-sided
/// Jacobi SVD. Singular values below rcond * sigma_max are treated as zero.
/// Requires rows >= cols and b.size() == rows.
LeastSquaresSolution solve_least_squares(const ComplexMatrix& a,
                                         std::span<const Complex> b,
                                         double rcond = 1e-13);

}  // namespace pwret
