#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pgml/error.hpp"
#include "pgml/geometry.hpp"
#include "pgml/text.hpp"

using namespace pgml;

namespace {

double signed_area(const Airfoil& a) {
  const auto p = a.points();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) s += p[i].x * p[i + 1].y - p[i + 1].x * p[i].y;
  return 0.5 * s;
}

void check_invariants(const Airfoil& a) {
  const auto p = a.points();
  CHECK(p.size() % 2 == 1);
  CHECK(p.front().x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.back().x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(p.front().y - p.back().y) <= 1e-6);
  for (const auto& q : p) {
    CHECK(q.x >= -1e-12);
    CHECK(q.x <= 1.0 + 1e-12);
  }
  CHECK(signed_area(a) > 0.0);
}

// Closed-form location of the 5-digit camber peak: the root of the cubic's slope.
double five_digit_peak_x(double m) { return m * (1.0 - std::sqrt(m / 3.0)); }

}  // namespace

TEST_CASE("cosine spacing") {
  CHECK(cosine_spacing(2) == std::vector<double>{0.0, 1.0});
  CHECK(cosine_spacing(3) == std::vector<double>{0.0, 0.5, 1.0});
  const auto x5 = cosine_spacing(5);
  REQUIRE(x5.size() == 5);
  CHECK(x5[1] == doctest::Approx((1.0 - std::cos(std::numbers::pi / 4.0)) / 2.0).epsilon(1e-15));
  CHECK(x5[1] == doctest::Approx(0.1464466094));
  CHECK(x5[2] == 0.5);
  CHECK(x5[3] == doctest::Approx(0.8535533906));
  CHECK_THROWS_AS(cosine_spacing(1), InvalidArgument);
}

TEST_CASE("designation parsing") {
  CHECK(NacaProfile::parse("2412").name() == "NACA2412");
  CHECK(NacaProfile::parse("naca 23012").name() == "NACA23012");
  CHECK(NacaProfile::parse("NACA-0012").thickness_ratio() == doctest::Approx(0.12));
  CHECK(NacaProfile::parse("23012").family() == NacaProfile::Family::five_digit);
  CHECK_THROWS_AS(NacaProfile::parse("99Z9"), ParseError);
  CHECK_THROWS_AS(NacaProfile::parse("123"), ParseError);
  CHECK_THROWS_AS(NacaProfile::parse(""), ParseError);
  CHECK_THROWS_AS(NacaProfile::parse("23512"), UnsupportedDesignation);
  CHECK_THROWS_AS(NacaProfile::parse("2012"), UnsupportedDesignation);
  CHECK_THROWS_AS(NacaProfile::parse("0000"), UnsupportedDesignation);
}

TEST_CASE("NACA0012 is symmetric with 12 percent thickness near 30 percent chord") {
  const auto a = naca4("0012", 201);
  REQUIRE(a.size() == 201);
  check_invariants(a);
  const auto p = a.points();
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    worst = std::max(worst, std::abs(p[k].y + p[p.size() - 1 - k].y));
    CHECK(p[k].x == p[p.size() - 1 - k].x);
  }
  CHECK(worst < 1e-12);
  CHECK(p[a.leading_edge_index()].x == 0.0);
  CHECK(p[a.leading_edge_index()].y == 0.0);

  const auto t = max_thickness(a);
  CHECK(t.thickness == doctest::Approx(0.120).epsilon(0.001 / 0.120));
  CHECK(t.x == doctest::Approx(0.30).epsilon(0.02 / 0.30));
}

TEST_CASE("thickness distribution matches the polynomial scan") {
  const auto prof = NacaProfile::parse("0012");
  double best = 0.0, best_x = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double x = i / 100000.0;
    const double yt = 5.0 * 0.12 *
                      (0.2969 * std::sqrt(x) - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x - 0.1036 * x * x * x * x);
    CHECK(prof.half_thickness(x) == doctest::Approx(yt).epsilon(1e-14));
    if (yt > best) best = yt, best_x = x;
  }
  CHECK(2 * best == doctest::Approx(0.12).epsilon(0.001 / 0.12));
  CHECK(best_x == doctest::Approx(0.30).epsilon(0.01 / 0.30));
  CHECK(prof.half_thickness(1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("NACA2412 camber peak is 2 percent at 40 percent chord") {
  const auto prof = NacaProfile::parse("2412");
  CHECK(prof.camber(0.4) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(prof.camber_slope(0.4) == doctest::Approx(0.0).epsilon(1e-15));
  const auto peak = max_camber(prof);
  CHECK(std::abs(peak.height - 0.020) <= 1e-6);
  CHECK(std::abs(peak.x - 0.40) <= 1e-4);
  check_invariants(naca4("2412", 201));
  CHECK(prof.camber(0.0) == 0.0);
  CHECK(prof.camber(1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("camber slope is the derivative of the camber line") {
  for (const char* d : {"2412", "6315", "23012", "21009", "25018"}) {
    const auto prof = NacaProfile::parse(d);
    for (double x : {0.03, 0.1, 0.14, 0.3, 0.55, 0.9}) {
      const double h = 1e-6;
      const double fd = (prof.camber(x + h) - prof.camber(x - h)) / (2 * h);
      CHECK(prof.camber_slope(x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("NACA23012 and NACA23024") {
  const auto a = naca5("23012", 201);
  check_invariants(a);
  CHECK(max_thickness(a).thickness == doctest::Approx(0.120).epsilon(0.001 / 0.120));
  const auto peak = max_camber(NacaProfile::parse("23012"));
  CHECK(peak.x == doctest::Approx(five_digit_peak_x(0.2025)).epsilon(1e-4));
  CHECK(std::abs(peak.x - 0.15) < 0.005);

  const auto b = naca5("23024", 201);
  check_invariants(b);
  CHECK(max_thickness(b).thickness == doctest::Approx(0.240).epsilon(0.002 / 0.240));
}

TEST_CASE("every supported 5-digit series peaks where the cubic's slope vanishes") {
  const double m[] = {0.0580, 0.1260, 0.2025, 0.2900, 0.3910};
  const char* codes[] = {"21012", "22012", "23012", "24012", "25012"};
  for (int i = 0; i < 5; ++i) {
    const auto prof = NacaProfile::parse(codes[i]);
    CHECK(max_camber(prof).x == doctest::Approx(five_digit_peak_x(m[i])).epsilon(1e-4));
    // Cubic and linear pieces meet continuously at the transition point.
    CHECK(prof.camber(m[i] - 1e-12) == doctest::Approx(prof.camber(m[i] + 1e-12)).epsilon(1e-9));
    check_invariants(naca(codes[i]));
  }
}

TEST_CASE("point count validation and family dispatch") {
  CHECK(naca("0012", 41).size() == 41);
  CHECK_THROWS_AS(naca("0012", 200), InvalidArgument);
  CHECK_THROWS_AS(naca("0012", 39), InvalidArgument);
  CHECK_THROWS_AS(naca4("23012"), ParseError);
  CHECK_THROWS_AS(naca5("2412"), ParseError);
}

TEST_CASE("dat round trip is exact") {
  for (const char* d : {"0012", "2412", "23024"}) {
    const auto a = naca(d);
    const auto b = read_dat(write_dat(a));
    CHECK(b.name() == a.name());
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(b.points()[i].x == a.points()[i].x);
      CHECK(b.points()[i].y == a.points()[i].y);
    }
  }
}

TEST_CASE("dat parse errors") {
  try {
    read_dat(text::read_file(PGML_FIXTURES "/bad_token.dat"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.line().has_value());
    CHECK(*e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(read_dat(text::read_file(PGML_FIXTURES "/naca0012_short.dat")), InvalidFile);
  CHECK_THROWS_AS(read_dat("x\n1 0 0\n"), ParseError);
  CHECK_THROWS_AS(read_dat(""), InvalidFile);
}

TEST_CASE("airfoil constructor rejects broken contours") {
  const auto base = naca("0012");
  const std::vector<Point> pts(base.points().begin(), base.points().end());
  CHECK_THROWS_AS(Airfoil("even", std::vector<Point>(pts.begin(), pts.end() - 1)), GeometryError);
  auto reversed = pts;
  std::reverse(reversed.begin(), reversed.end());
  CHECK_THROWS_AS(Airfoil("clockwise", reversed), GeometryError);
  auto open = pts;
  open.back().y -= 1e-3;
  CHECK_THROWS_AS(Airfoil("open", open), GeometryError);
  auto wide = pts;
  wide[50].x = 1.5;
  CHECK_THROWS_AS(Airfoil("wide", wide), GeometryError);
  auto nan = pts;
  nan[10].y = std::nan("");
  CHECK_THROWS_AS(Airfoil("nan", nan), GeometryError);
}
