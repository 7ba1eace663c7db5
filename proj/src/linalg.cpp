#include "pgml/linalg.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pgml/error.hpp"

namespace pgml {

namespace {
constexpr double kMinPivot = 1e-13;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw ShapeError("matrix-vector product: width mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

LuDecomposition::LuDecomposition(DenseMatrix a) : lu_(std::move(a)), pivots_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw ShapeError("LU factorization needs a square matrix");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(lu_(r, k)) > best) {
        best = std::abs(lu_(r, k));
        p = r;
      }
    }
    if (!(best >= kMinPivot)) throw SingularMatrixError("matrix is singular at column " + std::to_string(k));
    pivots_[k] = p;
    if (p != k)
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
    const double inv = 1.0 / lu_(k, k);
    const auto pivot_row = lu_.row(k);
    for (std::size_t r = k + 1; r < n; ++r) {
      auto row = lu_.row(r);
      const double f = row[k] * inv;
      row[k] = f;
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) row[c] -= f * pivot_row[c];
    }
  }
}

std::vector<double> LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw ShapeError("right-hand side has " + std::to_string(b.size()) + " entries, expected " +
                                      std::to_string(n));
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[pivots_[k]]);
  // Forward substitution with unit lower factor.
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = lu_.row(r);
    double s = x[r];
    for (std::size_t c = 0; c < r; ++c) s -= row[c] * x[c];
    x[r] = s;
  }
  for (std::size_t r = n; r-- > 0;) {
    const auto row = lu_.row(r);
    double s = x[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= row[c] * x[c];
    x[r] = s / row[r];
  }
  return x;
}

std::vector<double> solve_dense(DenseMatrix a, std::span<const double> b) {
  if (a.rows() != a.cols()) throw ShapeError("solve_dense needs a square matrix");
  if (b.size() != a.rows()) throw ShapeError("solve_dense: right-hand side does not conform");
  return LuDecomposition(std::move(a)).solve(b);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace pgml
