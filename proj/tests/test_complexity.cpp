#include <doctest.h>

#include <boost/math/special_functions/binomial.hpp>

#include "oracle.hpp"
#include "silverdt/chart.hpp"
#include "silverdt/complexity.hpp"

using namespace silverdt;

TEST_CASE("beam space bound") {
  CHECK(beam_space_bound(20, 10) == 23600);
  CHECK(beam_space_bound(100, 1) == 40396);
  CHECK(beam_space_bound(1, 1) == 4);
  CHECK(beam_space_bound(20, 100) == 920000);
  CHECK(beam_space_bound(2, 1) == 20);
  for (std::uint64_t n = 1; n < 60; n += 7)
    for (std::uint64_t b = 1; b < 200; b += 13) CHECK(beam_space_bound(n, b) == 4 * n * n * b + 4 * (n - 1) * b * b);
  CHECK_THROWS_AS(beam_space_bound(0, 1), DomainError);
  CHECK_THROWS_AS(beam_space_bound(1, 0), DomainError);
  CHECK_THROWS_AS(beam_space_bound(1ull << 40, 1ull << 30), DomainError);
}

TEST_CASE("exact space bound") {
  CHECK(exact_space_bound(3) == 12);
  CHECK(exact_space_bound(20) == BigInt("3607039876"));
  CHECK(exact_space_bound(30) == BigInt("1947172387276044"));
  for (int n = 2; n <= 120; ++n) CHECK(exact_space_bound(n) == oracle::exact_space(n));
  CHECK_THROWS_AS(exact_space_bound(1), DomainError);
}

TEST_CASE("unit formatting") {
  CHECK(format_units(20) == "20B");
  CHECK(format_units(999) == "999B");
  CHECK(format_units(1000) == "1.0KB");
  CHECK(format_units(1640) == "1.6KB");
  CHECK(format_units(1699) == "1.6KB");
  CHECK(format_units(23600) == "24KB");
  CHECK(format_units(920000) == "920KB");
  CHECK(format_units(BigInt("3607039876")) == "3.6GB");
  CHECK(format_units(BigInt("1947172387276044")) == "1.9PB");
  CHECK(format_units(exact_space_bound(100)) == "4.1e56B");
}

TEST_CASE("bounds table reproduces the published grid") {
  const auto t = bounds_table({20, 30, 100}, {1, 10, 100});
  CHECK(t.entries.size() == 12);
  const std::vector<std::tuple<int, std::uint64_t, std::string>> grid{
      {20, 10, "24KB"}, {30, 10, "48KB"}, {100, 10, "440KB"},
      {20, 100, "920KB"}, {30, 100, "1.5MB"}, {100, 100, "7.9MB"},
      {20, 1, "1.6KB"}, {30, 1, "3.7KB"}, {100, 1, "40KB"}};
  for (const auto& [n, b, text] : grid) {
    const BoundsEntry* e = t.find(n, b);
    REQUIRE(e);
    CHECK(e->formatted == text);
  }
  CHECK(t.find(20, std::nullopt)->formatted == "3.6GB");
  CHECK(t.find(30, std::nullopt)->formatted == "1.9PB");
  CHECK_THROWS_AS(bounds_table({}, {1}), DomainError);
  CHECK(t.render().find("920KB") != std::string::npos);
}

TEST_CASE("bound properties") {
  for (std::uint64_t n = 1; n < 80; ++n)
    for (std::uint64_t b = 1; b < 80; ++b) {
      CHECK(beam_space_bound(n, b + 1) > beam_space_bound(n, b));
      CHECK(beam_space_bound(n + 1, b) > beam_space_bound(n, b));
    }
  // For a fixed beam the unconstrained bound overtakes the beam bound at some
  // length and stays ahead from there on.
  for (std::uint64_t b : {1, 10, 100}) {
    int first = 0;
    for (int n = 2; n <= 80; ++n) {
      const bool ahead = exact_space_bound(n) >= BigInt(beam_space_bound(static_cast<std::uint64_t>(n), b));
      if (ahead && first == 0) first = n;
      if (first) CHECK_MESSAGE(ahead, "n=" << n << " B=" << b);
    }
    CHECK(first > 0);
  }
  CHECK(exact_space_bound(4) < BigInt(beam_space_bound(4, 1)));
  for (unsigned i = 1; i <= 30; ++i) {
    const double c = boost::math::binomial_coefficient<double>(2 * i - 2, i - 1) / i;
    const bool same = BigInt(static_cast<long long>(std::llround(c))) == count_projective_trees(static_cast<int>(i));
    CHECK_MESSAGE(same, "i=" << i);
  }
}
