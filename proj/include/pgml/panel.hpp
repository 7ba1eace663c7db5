#pragma once

#include <span>
#include <vector>

#include "pgml/geometry.hpp"
#include "pgml/linalg.hpp"

namespace pgml {

/// Freestream state. Only alpha enters the inviscid solve; the Reynolds
/// number labels samples and is injected into the networks directly.
struct FlowCondition {
  double reynolds = 3e6;
  double alpha_deg = 0.0;

  void validate() const;
};

/// Straight-segment discretization of an airfoil contour.
struct PanelGeometry {
  std::vector<Point> nodes;           // N + 1, identical to the airfoil points
  std::vector<Point> control_points;  // N panel midpoints
  std::vector<double> lengths;        // N
  std::vector<double> orientations;   // N, atan2(dy, dx) of each panel

  std::size_t size() const { return lengths.size(); }
  double perimeter() const;
  /// Outward unit normal of panel j, to the right of the panel direction.
  Point normal(std::size_t j) const;
  Point tangent(std::size_t j) const;
};

/// Inclination of the segment a -> b measured from +x, in (-pi, pi].
double panel_orientation(Point a, Point b);

/// Throws GeometryError naming the first zero-length panel, or when the
/// contour has fewer than 40 panels.
PanelGeometry build_panels(const Airfoil& airfoil);

struct Velocity {
  double u = 0.0;
  double v = 0.0;
};

/// Velocity at `at` induced by a unit-strength constant source distribution
/// on the segment start -> end. `at` must not lie on the segment.
Velocity source_panel_velocity(Point start, Point end, Point at);
/// Same for a unit-strength vortex distribution, clockwise positive.
Velocity vortex_panel_velocity(Point start, Point end, Point at);

/// Unknowns are the N source strengths followed by the shared vortex strength.
struct LinearSystem {
  DenseMatrix a;
  std::vector<double> b;
};

struct PanelSolution {
  std::vector<double> source_strengths;
  double vortex_strength = 0.0;
  std::vector<double> tangential_velocity;
  /// Reconstructed normal velocity at each control point; zero up to round-off.
  std::vector<double> normal_velocity;
  std::vector<double> cp;
  double cl = 0.0;
  double cdp = 0.0;
  double alpha_deg = 0.0;
  /// Set when |alpha| > 30 deg, where potential flow says nothing useful.
  bool outside_validity = false;

  /// Sum of the tangential velocities on the two trailing-edge panels.
  double kutta_residual() const { return tangential_velocity.front() + tangential_velocity.back(); }
};

struct ForceCoefficients {
  double cl = 0.0;
  double cdp = 0.0;
};

/// Integrates -cp n l over the panels and resolves the force normal and
/// parallel to the freestream.
ForceCoefficients force_coefficients(const PanelGeometry& geom, std::span<const double> cp, double alpha_deg);

/// Lift from the Kutta-Joukowski relation, 2 * tau * perimeter.
double circulation_lift(const PanelGeometry& geom, double vortex_strength);

/// Hess-Smith solver for one airfoil. The influence matrix does not depend on
/// alpha, so it is assembled and factored once and reused for every angle.
class PanelSolver {
 public:
  explicit PanelSolver(const Airfoil& airfoil);

  const PanelGeometry& geometry() const { return geom_; }
  LinearSystem system(double alpha_deg) const;
  PanelSolution solve(double alpha_deg) const;

 private:
  PanelGeometry geom_;
  // Per control point i: influence of source j (columns 0..N-1) and of the
  // vortex (column N) on the normal and tangential velocity.
  DenseMatrix normal_influence_;
  DenseMatrix tangential_influence_;
  DenseMatrix system_;
  LuDecomposition lu_;
};

LinearSystem assemble_system(const PanelGeometry& geom, double alpha_deg);
PanelSolution solve_flow(const Airfoil& airfoil, double alpha_deg);

}  // namespace pgml
