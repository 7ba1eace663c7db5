#include "pgml/panel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pgml/error.hpp"

namespace pgml {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMinPanels = 40;

double to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

// Panel-local quantities at a field point: the log of the node-distance
// ratio and the angle the panel subtends.
struct LocalTerms {
  double log_ratio;
  double beta;
};

LocalTerms local_terms(Point start, Point end, Point at) {
  const double theta = std::atan2(end.y - start.y, end.x - start.x);
  const double c = std::cos(theta), s = std::sin(theta);
  const double len = std::hypot(end.x - start.x, end.y - start.y);
  const double dx = at.x - start.x, dy = at.y - start.y;
  const double xl = dx * c + dy * s;
  const double yl = -dx * s + dy * c;
  const double r1 = std::hypot(xl, yl);
  const double r2 = std::hypot(xl - len, yl);
  return {std::log(r1 / r2), std::atan2(yl * len, xl * (xl - len) + yl * yl)};
}

Velocity to_global(double u_local, double v_local, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {u_local * c - v_local * s, u_local * s + v_local * c};
}

DenseMatrix build_system(const DenseMatrix& normal, const DenseMatrix& tangential) {
  const std::size_t n = normal.rows();
  DenseMatrix a(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= n; ++j) a(i, j) = normal(i, j);
  for (std::size_t j = 0; j <= n; ++j) a(n, j) = tangential(0, j) + tangential(n - 1, j);
  return a;
}

struct Influence {
  DenseMatrix normal;
  DenseMatrix tangential;
};

Influence influence_matrices(const PanelGeometry& geom) {
  const std::size_t n = geom.size();
  Influence inf{DenseMatrix(n, n + 1), DenseMatrix(n, n + 1)};
  for (std::size_t i = 0; i < n; ++i) {
    const Point nrm = geom.normal(i);
    const Point tan = geom.tangent(i);
    double vortex_normal = 0.0, vortex_tangential = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double log_ratio, beta;
      if (i == j) {
        // Limit from the outward side, which is local -y on a counterclockwise contour.
        log_ratio = 0.0;
        beta = -std::numbers::pi;
      } else {
        const auto t = local_terms(geom.nodes[j], geom.nodes[j + 1], geom.control_points[i]);
        log_ratio = t.log_ratio;
        beta = t.beta;
      }
      const double theta = geom.orientations[j];
      const Velocity src = to_global(log_ratio / kTwoPi, beta / kTwoPi, theta);
      const Velocity vtx = to_global(beta / kTwoPi, -log_ratio / kTwoPi, theta);
      inf.normal(i, j) = src.u * nrm.x + src.v * nrm.y;
      inf.tangential(i, j) = src.u * tan.x + src.v * tan.y;
      vortex_normal += vtx.u * nrm.x + vtx.v * nrm.y;
      vortex_tangential += vtx.u * tan.x + vtx.v * tan.y;
    }
    inf.normal(i, n) = vortex_normal;
    inf.tangential(i, n) = vortex_tangential;
  }
  return inf;
}

std::vector<double> right_hand_side(const PanelGeometry& geom, double alpha_deg) {
  const std::size_t n = geom.size();
  const double a = to_radians(alpha_deg);
  const Point freestream{std::cos(a), std::sin(a)};
  std::vector<double> b(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point nrm = geom.normal(i);
    b[i] = -(freestream.x * nrm.x + freestream.y * nrm.y);
  }
  const Point t0 = geom.tangent(0), tn = geom.tangent(n - 1);
  b[n] = -(freestream.x * (t0.x + tn.x) + freestream.y * (t0.y + tn.y));
  return b;
}

}  // namespace

void FlowCondition::validate() const {
  if (!(reynolds > 0.0) || !std::isfinite(reynolds)) throw InvalidArgument("Reynolds number must be positive");
  if (!std::isfinite(alpha_deg)) throw InvalidArgument("angle of attack must be finite");
}

double PanelGeometry::perimeter() const {
  double p = 0.0;
  for (double l : lengths) p += l;
  return p;
}

Point PanelGeometry::normal(std::size_t j) const {
  return {std::sin(orientations[j]), -std::cos(orientations[j])};
}

Point PanelGeometry::tangent(std::size_t j) const { return {std::cos(orientations[j]), std::sin(orientations[j])}; }

double panel_orientation(Point a, Point b) { return std::atan2(b.y - a.y, b.x - a.x); }

PanelGeometry build_panels(const Airfoil& airfoil) {
  const auto pts = airfoil.points();
  const std::size_t n = pts.size() - 1;
  if (n < kMinPanels)
    throw GeometryError("airfoil '" + airfoil.name() + "' yields " + std::to_string(n) + " panels, need at least " +
                        std::to_string(kMinPanels));
  PanelGeometry g;
  g.nodes.assign(pts.begin(), pts.end());
  g.control_points.resize(n);
  g.lengths.resize(n);
  g.orientations.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Point a = pts[j], b = pts[j + 1];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (!(len > 0.0)) throw GeometryError("panel " + std::to_string(j) + " has zero length");
    g.lengths[j] = len;
    g.control_points[j] = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    g.orientations[j] = panel_orientation(a, b);
  }
  return g;
}

Velocity source_panel_velocity(Point start, Point end, Point at) {
  const auto t = local_terms(start, end, at);
  return to_global(t.log_ratio / kTwoPi, t.beta / kTwoPi, std::atan2(end.y - start.y, end.x - start.x));
}

Velocity vortex_panel_velocity(Point start, Point end, Point at) {
  const auto t = local_terms(start, end, at);
  return to_global(t.beta / kTwoPi, -t.log_ratio / kTwoPi, std::atan2(end.y - start.y, end.x - start.x));
}

ForceCoefficients force_coefficients(const PanelGeometry& geom, std::span<const double> cp, double alpha_deg) {
  if (cp.size() != geom.size())
    throw ShapeError("cp has " + std::to_string(cp.size()) + " values for " + std::to_string(geom.size()) + " panels");
  double fx = 0.0, fy = 0.0;
  for (std::size_t j = 0; j < geom.size(); ++j) {
    const Point nrm = geom.normal(j);
    fx -= cp[j] * nrm.x * geom.lengths[j];
    fy -= cp[j] * nrm.y * geom.lengths[j];
  }
  const double a = to_radians(alpha_deg);
  return {-fx * std::sin(a) + fy * std::cos(a), fx * std::cos(a) + fy * std::sin(a)};
}

double circulation_lift(const PanelGeometry& geom, double vortex_strength) {
  return 2.0 * vortex_strength * geom.perimeter();
}

PanelSolver::PanelSolver(const Airfoil& airfoil) : geom_(build_panels(airfoil)), lu_(DenseMatrix::identity(1)) {
  auto inf = influence_matrices(geom_);
  normal_influence_ = std::move(inf.normal);
  tangential_influence_ = std::move(inf.tangential);
  system_ = build_system(normal_influence_, tangential_influence_);
  lu_ = LuDecomposition(system_);
}

LinearSystem PanelSolver::system(double alpha_deg) const { return {system_, right_hand_side(geom_, alpha_deg)}; }

PanelSolution PanelSolver::solve(double alpha_deg) const {
  if (!std::isfinite(alpha_deg)) throw InvalidArgument("angle of attack must be finite");
  const std::size_t n = geom_.size();
  const auto x = lu_.solve(right_hand_side(geom_, alpha_deg));

  PanelSolution sol;
  sol.alpha_deg = alpha_deg;
  sol.outside_validity = std::abs(alpha_deg) > 30.0;
  sol.source_strengths.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  sol.vortex_strength = x[n];
  sol.tangential_velocity.resize(n);
  sol.normal_velocity.resize(n);
  sol.cp.resize(n);

  const double a = to_radians(alpha_deg);
  const Point freestream{std::cos(a), std::sin(a)};
  for (std::size_t i = 0; i < n; ++i) {
    const Point tan = geom_.tangent(i), nrm = geom_.normal(i);
    double vt = freestream.x * tan.x + freestream.y * tan.y;
    double vn = freestream.x * nrm.x + freestream.y * nrm.y;
    const auto trow = tangential_influence_.row(i);
    const auto nrow = normal_influence_.row(i);
    for (std::size_t j = 0; j <= n; ++j) {
      vt += trow[j] * x[j];
      vn += nrow[j] * x[j];
    }
    sol.tangential_velocity[i] = vt;
    sol.normal_velocity[i] = vn;
    sol.cp[i] = 1.0 - vt * vt;
  }
  const auto forces = force_coefficients(geom_, sol.cp, alpha_deg);
  sol.cl = forces.cl;
  sol.cdp = forces.cdp;
  return sol;
}

LinearSystem assemble_system(const PanelGeometry& geom, double alpha_deg) {
  const auto inf = influence_matrices(geom);
  return {build_system(inf.normal, inf.tangential), right_hand_side(geom, alpha_deg)};
}

PanelSolution solve_flow(const Airfoil& airfoil, double alpha_deg) { return PanelSolver(airfoil).solve(alpha_deg); }

}  // namespace pgml
