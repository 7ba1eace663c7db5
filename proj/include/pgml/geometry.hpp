#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pgml {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Closed, chord-normalized airfoil contour.
///
/// Points run from the trailing edge along the upper surface to the leading
/// edge and back along the lower surface to the trailing edge
/// (counterclockwise).
/// The count is odd so the leading edge is a shared node; point k and point
/// n-1-k sit at the same chordwise station on opposite surfaces.
///
/// Construction validates the contour and throws GeometryError otherwise.
class Airfoil {
 public:
  Airfoil(std::string name, std::vector<Point> points);

  const std::string& name() const { return name_; }
  std::span<const Point> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t leading_edge_index() const { return points_.size() / 2; }

 private:
  std::string name_;
  std::vector<Point> points_;
};

/// Analytic NACA section: camber line and thickness distribution in chord units.
class NacaProfile {
 public:
  enum class Family { four_digit, five_digit };

  /// Accepts "2412", "NACA2412", "naca 23012". Throws ParseError on malformed
  /// text and UnsupportedDesignation on unknown 5-digit camber codes.
  static NacaProfile parse(std::string_view designation);

  const std::string& name() const { return name_; }
  Family family() const { return family_; }
  double thickness_ratio() const { return thickness_; }

  double camber(double x) const;
  double camber_slope(double x) const;
  /// Half thickness with the closed trailing-edge coefficient (-0.1036).
  double half_thickness(double x) const;

 private:
  std::string name_;
  Family family_ = Family::four_digit;
  double thickness_ = 0.0;
  // Four-digit: max camber and its chordwise position.
  double max_camber_ = 0.0;
  double max_camber_x_ = 0.0;
  // Five-digit: transition point and cubic scale from the standard table.
  double transition_ = 0.0;
  double k1_ = 0.0;
};

/// x_k = (1 - cos(k pi / (n-1))) / 2, k = 0..n-1.
std::vector<double> cosine_spacing(int n);

Airfoil naca4(std::string_view designation, int n_points = 201);
Airfoil naca5(std::string_view designation, int n_points = 201);
/// Dispatches on digit count.
Airfoil naca(std::string_view designation, int n_points = 201);

/// Selig-format text: name line, then "x y" per point.
std::string write_dat(const Airfoil& airfoil);
Airfoil read_dat(std::string_view content);

struct ThicknessPeak {
  double thickness = 0.0;
  double x = 0.0;
};

/// Largest distance between paired upper/lower points (k, n-1-k).
ThicknessPeak max_thickness(const Airfoil& airfoil);

struct CamberPeak {
  double height = 0.0;
  double x = 0.0;
};

/// Scans the analytic camber line on a uniform grid of `samples` stations.
CamberPeak max_camber(const NacaProfile& profile, int samples = 100001);

}  // namespace pgml
