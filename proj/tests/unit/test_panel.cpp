#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pgml/error.hpp"
#include "pgml/panel.hpp"

using namespace pgml;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson over the segment of the point-source kernel.
Velocity quadrature_source(Point a, Point b, Point p, bool vortex) {
  const int n = 20000;
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  double u = 0.0, v = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double dx = p.x - (a.x + t * (b.x - a.x));
    const double dy = p.y - (a.y + t * (b.y - a.y));
    const double r2 = dx * dx + dy * dy;
    if (vortex) {
      // Clockwise circulation: velocity is the source kernel rotated by -90 degrees.
      u += w * dy / r2;
      v -= w * dx / r2;
    } else {
      u += w * dx / r2;
      v += w * dy / r2;
    }
  }
  const double scale = len / (3.0 * n) / (2.0 * kPi);
  return {u * scale, v * scale};
}

double max_cp(const PanelSolution& s) { return *std::max_element(s.cp.begin(), s.cp.end()); }

}  // namespace

TEST_CASE("panel orientation follows atan2") {
  CHECK(panel_orientation({0, 0}, {1, 0}) == 0.0);
  CHECK(panel_orientation({1, 0}, {0, 0}) == doctest::Approx(kPi));
  CHECK(panel_orientation({0, 0}, {0, 1}) == doctest::Approx(kPi / 2));
}

TEST_CASE("panel geometry") {
  const auto a = naca("2412", 201);
  const auto g = build_panels(a);
  CHECK(g.size() == 200);
  REQUIRE(g.nodes.size() == 201);
  double perimeter = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    perimeter += std::hypot(a.points()[i + 1].x - a.points()[i].x, a.points()[i + 1].y - a.points()[i].y);
    CHECK(g.nodes[i].x == a.points()[i].x);
    CHECK(g.control_points[i].x == doctest::Approx(0.5 * (g.nodes[i].x + g.nodes[i + 1].x)));
    CHECK(g.lengths[i] > 0.0);
    const auto n = g.normal(i);
    const auto t = g.tangent(i);
    CHECK(n.x * t.x + n.y * t.y == doctest::Approx(0.0).epsilon(1e-15));
  }
  CHECK(std::abs(g.perimeter() - perimeter) < 1e-12);
  // Outward normals: upper surface near mid-chord points up, lower points down.
  CHECK(g.normal(50).y > 0.0);
  CHECK(g.normal(150).y < 0.0);
}

TEST_CASE("panel count limits and zero-length panels") {
  CHECK(build_panels(naca("0012", 41)).size() == 40);
  const auto base = naca("0012", 21 + 20);
  std::vector<Point> pts(base.points().begin(), base.points().end());
  std::vector<Point> few;
  for (std::size_t i = 0; i < pts.size(); i += 2) few.push_back(pts[i]);
  CHECK_THROWS_AS(build_panels(Airfoil("coarse", few)), GeometryError);

  auto dup = pts;
  dup.insert(dup.begin() + 10, dup[10]);
  dup.insert(dup.begin() + 32, dup[32]);
  try {
    build_panels(Airfoil("dup", dup));
    FAIL("expected GeometryError");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("panel 10") != std::string::npos);
  }
}

TEST_CASE("closed-form panel influences match numerical quadrature") {
  const Point a{0.2, 0.1}, b{0.5, -0.05};
  for (Point p : {Point{0.35, 0.3}, Point{-0.2, 0.0}, Point{0.6, -0.2}, Point{0.36, 0.05}}) {
    const auto s = source_panel_velocity(a, b, p);
    const auto sq = quadrature_source(a, b, p, false);
    CHECK(s.u == doctest::Approx(sq.u).epsilon(1e-8));
    CHECK(s.v == doctest::Approx(sq.v).epsilon(1e-8));
    const auto v = vortex_panel_velocity(a, b, p);
    const auto vq = quadrature_source(a, b, p, true);
    CHECK(v.u == doctest::Approx(vq.u).epsilon(1e-8));
    CHECK(v.v == doctest::Approx(vq.v).epsilon(1e-8));
  }
}

TEST_CASE("linear system shape and residual") {
  const auto a = naca("2412", 201);
  const PanelSolver solver(a);
  const auto sys = solver.system(3.0);
  CHECK(sys.a.rows() == 201);
  CHECK(sys.a.cols() == 201);
  CHECK(sys.b.size() == 201);
  const auto s = solver.solve(3.0);
  std::vector<double> x = s.source_strengths;
  x.push_back(s.vortex_strength);
  auto ax = multiply(sys.a, x);
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= sys.b[i];
  CHECK(max_abs(ax) < 1e-10);

  const auto direct = assemble_system(build_panels(a), 3.0);
  CHECK(direct.b == sys.b);
  const auto flow = solve_flow(a, 3.0);
  CHECK(flow.cl == s.cl);
}

TEST_CASE("symmetric airfoil at zero incidence carries no lift") {
  const auto s = solve_flow(naca("0012"), 0.0);
  CHECK(std::abs(s.vortex_strength) < 1e-10);
  CHECK(std::abs(s.cl) < 1e-8);
  CHECK(std::abs(s.cdp) < 5e-3);
}

TEST_CASE("thin symmetric section approaches the thin-airfoil lift") {
  const double thin = 2.0 * kPi * (2.0 * kPi / 180.0);
  CHECK(thin == doctest::Approx(0.2193).epsilon(1e-3));
  const auto s = solve_flow(naca("0006"), 2.0);
  CHECK(std::abs(s.cl - thin) <= 0.10 * thin);
}

TEST_CASE("tangency and Kutta residuals") {
  for (const char* d : {"0012", "2412", "23024"}) {
    const PanelSolver solver(naca(d));
    for (double alpha : {-8.0, 0.0, 5.0, 15.0}) {
      const auto s = solver.solve(alpha);
      CHECK(max_abs(s.normal_velocity) < 1e-8);
      CHECK(std::abs(s.kutta_residual()) < 1e-8);
    }
  }
}

TEST_CASE("antisymmetry for symmetric sections") {
  const PanelSolver solver(naca("0012"));
  for (double alpha = -5.0; alpha <= 5.0; alpha += 1.0) {
    const auto p = solver.solve(alpha);
    const auto m = solver.solve(-alpha);
    CHECK(std::abs(p.cl + m.cl) < 1e-8);
    CHECK(std::abs(p.cdp - m.cdp) < 1e-8);
  }
}

TEST_CASE("force integration") {
  const auto g = build_panels(naca("2412"));
  const std::vector<double> uniform(g.size(), 0.7);
  const auto f = force_coefficients(g, uniform, 6.0);
  CHECK(std::abs(f.cl) < 1e-12);
  CHECK(std::abs(f.cdp) < 1e-12);
  CHECK_THROWS_AS(force_coefficients(g, std::vector<double>(3, 0.0), 0.0), ShapeError);

  const PanelSolver solver(naca("2412"));
  const auto s = solver.solve(4.0);
  const double kj = circulation_lift(solver.geometry(), s.vortex_strength);
  CHECK(std::abs(s.cl - kj) <= 0.02 * std::abs(kj));
}

TEST_CASE("lift slope near zero incidence") {
  double previous = 0.0;
  for (const char* d : {"0006", "0009", "0012"}) {
    const PanelSolver solver(naca(d));
    const double slope = (solver.solve(0.5).cl - solver.solve(-0.5).cl) / (1.0 * kPi / 180.0);
    CHECK(std::abs(slope - 2.0 * kPi) <= 0.15 * 2.0 * kPi);
    CHECK(slope > previous);
    previous = slope;
  }
}

TEST_CASE("grid convergence") {
  const double coarse = solve_flow(naca("2412", 201), 4.0).cl;
  const double fine = solve_flow(naca("2412", 401), 4.0).cl;
  CHECK(std::abs(fine - coarse) < 0.005 * std::abs(fine));
}

TEST_CASE("pressure coefficient bounds") {
  for (const char* d : {"0012", "2412"}) {
    const PanelSolver solver(naca(d));
    for (double alpha : {-4.0, 0.0, 4.0, 8.0}) {
      const auto s = solver.solve(alpha);
      CHECK(max_cp(s) <= 1.0 + 1e-3);
      CHECK(std::abs(max_cp(s) - 1.0) <= 0.02);
    }
  }
  const auto thin = solve_flow(naca("0006"), 3.0);
  CHECK(max_cp(thin) <= 1.0 + 1e-3);
}

TEST_CASE("validity flag and input checks") {
  const PanelSolver solver(naca("0012"));
  CHECK_FALSE(solver.solve(30.0).outside_validity);
  CHECK(solver.solve(35.0).outside_validity);
  CHECK_THROWS_AS(solver.solve(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS((FlowCondition{-1.0, 0.0}.validate()), InvalidArgument);
}
