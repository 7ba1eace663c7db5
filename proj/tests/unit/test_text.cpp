#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pgml/error.hpp"
#include "pgml/parallel.hpp"
#include "pgml/rng.hpp"
#include "pgml/text.hpp"

using namespace pgml;

TEST_CASE("exact formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.99975567149467848}) {
    const auto s = text::format_exact(v);
    CHECK(*text::parse_double(s) == v);
  }
}

TEST_CASE("report formatting uses ten significant digits and drops negative zero") {
  CHECK(text::format_report(1.0 / 3.0) == "0.3333333333");
  CHECK(text::format_report(-0.0) == "0");
  CHECK(text::format_report(3e6) == "3000000");
}

TEST_CASE("number parsing is strict") {
  CHECK(text::parse_double("1.5e3").value() == 1500.0);
  CHECK_FALSE(text::parse_double("abc"));
  CHECK_FALSE(text::parse_double("1.5x"));
  CHECK_FALSE(text::parse_double(""));
  CHECK(text::parse_integer("42").value() == 42);
  CHECK_FALSE(text::parse_integer("4.2"));
}

TEST_CASE("splitting") {
  const auto lines = text::split_lines("a\r\nb\n\nc");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "a");
  CHECK(lines[2].empty());
  const auto words = text::split_whitespace("  1.0\t 2.0  ");
  REQUIRE(words.size() == 2);
  CHECK(words[1] == "2.0");
  CHECK(text::split_char("a,,b", ',').size() == 3);
  CHECK(text::trim("  x ") == "x");
}

TEST_CASE("fingerprint is stable and content-sensitive") {
  CHECK(text::hex64(text::fnv1a("")) == "cbf29ce484222325");
  CHECK(text::fnv1a("abc") != text::fnv1a("abd"));
}

TEST_CASE("missing file raises InvalidFile") {
  CHECK_THROWS_AS(text::read_file("/nonexistent/pgml/file.txt"), InvalidFile);
}

TEST_CASE("rng streams are reproducible and in range") {
  Rng a(splitmix64(7)), b(splitmix64(7)), c(splitmix64(8));
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
    if (u != c.uniform()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("shuffle is a permutation") {
  std::vector<std::size_t> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  Rng r(3);
  r.shuffle(v);
  CHECK(std::set<std::size_t>(v.begin(), v.end()).size() == 100);
}

TEST_CASE("parallel_for covers every index once and rethrows the lowest failure") {
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);

  try {
    parallel_for(50, 3, [](std::size_t i) {
      if (i == 17 || i == 31) throw InvalidArgument("index " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()) == "index 17");
  }
}
