#include "pgml/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pgml/error.hpp"
#include "pgml/text.hpp"

namespace pgml {

namespace {

constexpr double kCoordinateSlack = 1e-12;
constexpr double kTrailingEdgeGap = 1e-6;

double signed_area(std::span<const Point> pts) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) twice += pts[i].x * pts[i + 1].y - pts[i + 1].x * pts[i].y;
  twice += pts.back().x * pts.front().y - pts.front().x * pts.back().y;
  return 0.5 * twice;
}

std::string digits_of(std::string_view designation) {
  std::string_view s = text::trim(designation);
  if (s.size() >= 4 && (s.substr(0, 4) == "NACA" || s.substr(0, 4) == "naca" || s.substr(0, 4) == "Naca"))
    s.remove_prefix(4);
  std::string digits;
  for (char c : s) {
    if (c == ' ' || c == '-' || c == '_') continue;
    if (c < '0' || c > '9') throw ParseError("designation '" + std::string(designation) + "' is not numeric");
    digits.push_back(c);
  }
  if (digits.size() != 4 && digits.size() != 5)
    throw ParseError("designation '" + std::string(designation) + "' must have 4 or 5 digits");
  return digits;
}

int two_digits(const std::string& d, std::size_t at) { return (d[at] - '0') * 10 + (d[at + 1] - '0'); }

struct FiveDigitCamber {
  const char* code;
  double transition;
  double k1;
};

// Standard non-reflexed camber lines (design lift coefficient 0.3).
constexpr FiveDigitCamber kFiveDigitTable[] = {
    {"210", 0.0580, 361.400}, {"220", 0.1260, 51.640}, {"230", 0.2025, 15.957},
    {"240", 0.2900, 6.643},   {"250", 0.3910, 3.230},
};

void check_point_count(int n_points) {
  if (n_points % 2 == 0) throw InvalidArgument("point count must be odd, got " + std::to_string(n_points));
  if (n_points < 41) throw InvalidArgument("point count must be at least 41, got " + std::to_string(n_points));
}

Airfoil build_contour(const NacaProfile& profile, int n_points) {
  check_point_count(n_points);
  const int per_surface = (n_points + 1) / 2;
  const auto stations = cosine_spacing(per_surface);

  auto surface_point = [&](int k, bool upper) -> Point {
    const double x = stations[static_cast<std::size_t>(k)];
    if (k == 0) return {0.0, profile.camber(0.0)};
    if (k == per_surface - 1) return {1.0, profile.camber(1.0)};
    const double theta = std::atan(profile.camber_slope(x));
    const double yt = profile.half_thickness(x);
    const double yc = profile.camber(x);
    const double sign = upper ? 1.0 : -1.0;
    return {x - sign * yt * std::sin(theta), yc + sign * yt * std::cos(theta)};
  };

  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n_points));
  for (int k = per_surface - 1; k >= 0; --k) pts.push_back(surface_point(k, true));
  for (int k = 1; k < per_surface; ++k) pts.push_back(surface_point(k, false));

  // Perpendicular thickness pushes the nose slightly ahead of x = 0 on
  // cambered sections; rescale so the contour spans exactly [0, 1].
  double xmin = 0.0;
  double xmax = 1.0;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
  }
  if (xmin < 0.0 || xmax > 1.0) {
    const double scale = 1.0 / (xmax - xmin);
    for (auto& p : pts) p = {(p.x - xmin) * scale, p.y * scale};
    pts.front().x = 1.0;
    pts.back().x = 1.0;
  }
  return Airfoil(profile.name(), std::move(pts));
}

}  // namespace

Airfoil::Airfoil(std::string name, std::vector<Point> points) : name_(std::move(name)), points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (n < 5) throw GeometryError("airfoil '" + name_ + "' has " + std::to_string(n) + " points, need at least 5");
  if (n % 2 == 0) throw GeometryError("airfoil '" + name_ + "' has an even point count " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw GeometryError("airfoil '" + name_ + "' point " + std::to_string(i) + " is not finite");
    if (p.x < -kCoordinateSlack || p.x > 1.0 + kCoordinateSlack)
      throw GeometryError("airfoil '" + name_ + "' point " + std::to_string(i) + " has x outside [0, 1]");
  }
  if (std::abs(points_.front().x - 1.0) > 1e-9 || std::abs(points_.back().x - 1.0) > 1e-9)
    throw GeometryError("airfoil '" + name_ + "' must start and end at the trailing edge x = 1");
  if (std::abs(points_.front().y - points_.back().y) > kTrailingEdgeGap)
    throw GeometryError("airfoil '" + name_ + "' trailing edge is not closed");
  if (signed_area(points_) <= 0.0)
    throw GeometryError("airfoil '" + name_ + "' is not ordered trailing edge -> upper -> leading edge -> lower");
}

NacaProfile NacaProfile::parse(std::string_view designation) {
  const std::string d = digits_of(designation);
  NacaProfile p;
  p.name_ = "NACA" + d;
  if (d.size() == 4) {
    p.family_ = Family::four_digit;
    p.max_camber_ = (d[0] - '0') / 100.0;
    p.max_camber_x_ = (d[1] - '0') / 10.0;
    p.thickness_ = two_digits(d, 2) / 100.0;
    if (p.max_camber_ > 0.0 && p.max_camber_x_ == 0.0)
      throw UnsupportedDesignation(p.name_ + ": cambered section needs a nonzero camber position");
    if (p.max_camber_ == 0.0) p.max_camber_x_ = 0.0;
  } else {
    p.family_ = Family::five_digit;
    const auto code = d.substr(0, 3);
    const auto* row = std::find_if(std::begin(kFiveDigitTable), std::end(kFiveDigitTable),
                                   [&](const FiveDigitCamber& c) { return code == c.code; });
    if (row == std::end(kFiveDigitTable))
      throw UnsupportedDesignation(p.name_ + ": camber-line code " + code + " is not supported");
    p.transition_ = row->transition;
    p.k1_ = row->k1;
    p.thickness_ = two_digits(d, 3) / 100.0;
  }
  if (p.thickness_ <= 0.0) throw UnsupportedDesignation(p.name_ + ": zero thickness");
  return p;
}

double NacaProfile::camber(double x) const {
  if (family_ == Family::four_digit) {
    const double m = max_camber_, p = max_camber_x_;
    if (m == 0.0) return 0.0;
    if (x < p) return m / (p * p) * (2.0 * p * x - x * x);
    return m / ((1.0 - p) * (1.0 - p)) * ((1.0 - 2.0 * p) + 2.0 * p * x - x * x);
  }
  const double r = transition_;
  if (x < r) return k1_ / 6.0 * (x * x * x - 3.0 * r * x * x + r * r * (3.0 - r) * x);
  return k1_ * r * r * r / 6.0 * (1.0 - x);
}

double NacaProfile::camber_slope(double x) const {
  if (family_ == Family::four_digit) {
    const double m = max_camber_, p = max_camber_x_;
    if (m == 0.0) return 0.0;
    if (x < p) return 2.0 * m / (p * p) * (p - x);
    return 2.0 * m / ((1.0 - p) * (1.0 - p)) * (p - x);
  }
  const double r = transition_;
  if (x < r) return k1_ / 6.0 * (3.0 * x * x - 6.0 * r * x + r * r * (3.0 - r));
  return -k1_ * r * r * r / 6.0;
}

double NacaProfile::half_thickness(double x) const {
  return 5.0 * thickness_ *
         (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x - 0.1036 * x * x * x * x);
}

std::vector<double> cosine_spacing(int n) {
  if (n < 2) throw InvalidArgument("cosine_spacing needs n >= 2, got " + std::to_string(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = 0.5 * (1.0 - std::cos(k * std::numbers::pi / (n - 1)));
  x.front() = 0.0;
  x.back() = 1.0;
  // cos(pi/2) is not exactly zero in floating point.
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.5;
  return x;
}

Airfoil naca4(std::string_view designation, int n_points) {
  const auto profile = NacaProfile::parse(designation);
  if (profile.family() != NacaProfile::Family::four_digit)
    throw ParseError("'" + std::string(designation) + "' is not a 4-digit designation");
  return build_contour(profile, n_points);
}

Airfoil naca5(std::string_view designation, int n_points) {
  const auto profile = NacaProfile::parse(designation);
  if (profile.family() != NacaProfile::Family::five_digit)
    throw ParseError("'" + std::string(designation) + "' is not a 5-digit designation");
  return build_contour(profile, n_points);
}

Airfoil naca(std::string_view designation, int n_points) {
  return build_contour(NacaProfile::parse(designation), n_points);
}

std::string write_dat(const Airfoil& airfoil) {
  std::string out = airfoil.name() + "\n";
  for (const auto& p : airfoil.points()) out += text::format_exact(p.x) + " " + text::format_exact(p.y) + "\n";
  return out;
}

Airfoil read_dat(std::string_view content) {
  const auto lines = text::split_lines(content);
  std::size_t i = 0;
  while (i < lines.size() && text::trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw InvalidFile("airfoil file is empty");
  std::string name(text::trim(lines[i]));
  ++i;
  std::vector<Point> pts;
  for (; i < lines.size(); ++i) {
    const auto fields = text::split_whitespace(lines[i]);
    if (fields.empty()) continue;
    if (fields.size() != 2) throw ParseError("expected two numbers per line", i + 1);
    const auto x = text::parse_double(fields[0]);
    const auto y = text::parse_double(fields[1]);
    if (!x || !y) throw ParseError("malformed coordinate '" + std::string(text::trim(lines[i])) + "'", i + 1);
    pts.push_back({*x, *y});
  }
  if (pts.size() < 5)
    throw InvalidFile("airfoil file has " + std::to_string(pts.size()) + " points, need at least 5");
  try {
    return Airfoil(std::move(name), std::move(pts));
  } catch (const GeometryError& e) {
    throw InvalidFile(e.what());
  }
}

ThicknessPeak max_thickness(const Airfoil& airfoil) {
  const auto pts = airfoil.points();
  const std::size_t n = pts.size();
  ThicknessPeak peak;
  for (std::size_t k = 0; k < n / 2; ++k) {
    const auto& u = pts[k];
    const auto& l = pts[n - 1 - k];
    const double t = std::hypot(u.x - l.x, u.y - l.y);
    if (t > peak.thickness) peak = {t, 0.5 * (u.x + l.x)};
  }
  return peak;
}

CamberPeak max_camber(const NacaProfile& profile, int samples) {
  CamberPeak peak;
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / (samples - 1);
    const double h = profile.camber(x);
    if (std::abs(h) > std::abs(peak.height)) peak = {h, x};
  }
  return peak;
}

}  // namespace pgml
