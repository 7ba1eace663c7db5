#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pgml/error.hpp"
#include "pgml/linalg.hpp"
#include "pgml/rng.hpp"

using namespace pgml;

namespace {

double residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b) {
  auto ax = multiply(a, x);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= b[i];
  return max_abs(ax);
}

}  // namespace

TEST_CASE("identity system returns the right-hand side") {
  const std::vector<double> b{3.0, -1.0, 0.5, 7.0};
  CHECK(solve_dense(DenseMatrix::identity(4), b) == b);
  CHECK(LuDecomposition(DenseMatrix::identity(4)).solve(b) == b);
}

TEST_CASE("diagonal system") {
  DenseMatrix a(2, 2);
  a(0, 0) = 2;
  a(1, 1) = 4;
  const auto x = solve_dense(a, std::vector<double>{2, 8});
  CHECK(x[0] == 1.0);
  CHECK(x[1] == 2.0);
}

TEST_CASE("pivoting handles a zero leading entry") {
  DenseMatrix a(2, 2);
  a(0, 1) = 1;
  a(1, 0) = 1;
  const auto x = solve_dense(a, std::vector<double>{3, 5});
  CHECK(x[0] == 5.0);
  CHECK(x[1] == 3.0);
}

TEST_CASE("random well-conditioned 50x50 systems") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(splitmix64(seed));
    const std::size_t n = 50;
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
      a(i, i) += static_cast<double>(n);
    }
    std::vector<double> x0(n);
    for (auto& v : x0) v = rng.uniform(-5.0, 5.0);
    const auto b = multiply(a, x0);

    const auto x = solve_dense(a, b);
    CHECK(residual(a, x, b) < 1e-9);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x0[i]).epsilon(1e-10));

    const LuDecomposition lu(a);
    const auto y = lu.solve(b);
    CHECK(residual(a, y, b) < 1e-9);
    // Factor once, solve many.
    std::vector<double> b2(n, 1.0);
    CHECK(residual(a, lu.solve(b2), b2) < 1e-9);
  }
}

TEST_CASE("random non-dominant system still solves with pivoting") {
  Rng rng(99);
  const std::size_t n = 30;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
  std::vector<double> b(n);
  for (auto& v : b) v = rng.normal();
  CHECK(residual(a, solve_dense(a, b), b) < 1e-9);
}

TEST_CASE("singular matrices are reported") {
  DenseMatrix a(3, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    a(0, j) = 1.0 + j;
    a(1, j) = 2.0 * (1.0 + j);
    a(2, j) = static_cast<double>(j * j);
  }
  CHECK_THROWS_AS(solve_dense(a, std::vector<double>{1, 2, 3}), SingularMatrixError);
  CHECK_THROWS_AS(LuDecomposition{DenseMatrix(2, 2)}, SingularMatrixError);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(solve_dense(DenseMatrix(2, 3), std::vector<double>{1, 2}), ShapeError);
  CHECK_THROWS_AS(solve_dense(DenseMatrix::identity(2), std::vector<double>{1, 2, 3}), ShapeError);
}
