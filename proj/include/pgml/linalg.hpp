#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pgml {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  static DenseMatrix identity(std::size_t n);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);

/// LU factorization with partial pivoting. Throws SingularMatrixError when a
/// pivot's magnitude falls below 1e-13.
class LuDecomposition {
 public:
  explicit LuDecomposition(DenseMatrix a);

  std::size_t size() const { return lu_.rows(); }
  std::vector<double> solve(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> pivots_;
};

/// Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(DenseMatrix a, std::span<const double> b);

double max_abs(std::span<const double> v);

}  // namespace pgml
