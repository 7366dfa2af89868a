#include <doctest.h>

#include "shadowlab/kneading.hpp"

using namespace shadowlab;

TEST_CASE("itineraries") {
  System g4(QuadraticMap(QuadraticFamily::logistic, 4));
  CHECK(itinerary(g4, 1, 4).symbols == "RLLL");
  System t2(tent_map(2));
  CHECK(itinerary(t2, 1, 3).symbols == "RLL");
  CHECK(itinerary(t2, Rational(1, 2), 5).symbols.front() == 'C');
  CHECK(kneading(t2, 3).symbols == "RLL");
}

TEST_CASE("the sequence K") {
  CHECK(k_prefix(15) == "RLLRRLRRRLRRRRL");
  std::string next;
  for (long n = 15; n <= 20; ++n) next += k_generator(n);
  CHECK(next == "RRRRRL");
  // Independent construction: R L L, then blocks R^j L for j = 2, 3, ...
  std::string k = "RLL";
  for (int j = 2; k.size() < 500; ++j) k += std::string(static_cast<std::size_t>(j), 'R') + "L";
  CHECK(k_prefix(500) == k.substr(0, 500));
  CHECK(k.substr(3).find("LL") == std::string::npos);
}

TEST_CASE("recurrence of prefixes") {
  CHECK_FALSE(is_recurrent_prefix(k_prefix(500), 3));
  CHECK(is_recurrent_prefix("RLRLRL", 2));
  CHECK(is_recurrent_prefix("RLL", 0));
}

TEST_CASE("parity-lexicographic order") {
  CHECK(parity_lex_compare("RL", "RR") == std::strong_ordering::greater);
  CHECK(parity_lex_compare("L", "R") == std::strong_ordering::less);
  CHECK(parity_lex_compare("RLR", "RLR") == std::strong_ordering::equal);
  CHECK(parity_lex_compare("LC", "LR") == std::strong_ordering::less);
  CHECK(parity_lex_compare("RLL", "RL") == std::strong_ordering::equal);
}

TEST_CASE("order matches points on the line for tent maps") {
  // Larger x with the same length-n itinerary prefix ordering as the line.
  System t(tent_map(Rational(7, 4)));
  for (int a = 1; a < 40; ++a) {
    Rational x(a, 41), y(a + 1, 41);
    auto ix = itinerary(t, x, 12).symbols, iy = itinerary(t, y, 12).symbols;
    CHECK(parity_lex_compare(ix, iy) != std::strong_ordering::greater);
  }
}

TEST_CASE("kneading words are monotone in the parameter") {
  std::vector<Rational> mus;
  for (int k = 0; k <= 100; ++k) mus.push_back(Rational(1) + Rational(k, 100));
  CHECK(kneading_monotone_on_grid(mus, 10));
}

TEST_CASE("parameter search") {
  auto zero = find_parameter("RLL", 3, 0);
  CHECK(zero.steps == 0);
  CHECK(zero.mu == Rational(3, 2));
  auto full = find_parameter("RLLLLLLL", 8, 40);
  CHECK(full.matched);
  CHECK(Rational(2) - full.mu < Rational(1, 1000));
  auto k = find_parameter(k_prefix(15), 15, 40);
  CHECK(k.matched);
  CHECK(k.achieved.symbols.substr(0, 15) == k_prefix(15));
  CHECK(k.lo <= k.mu);
  CHECK(k.mu <= k.hi);
}

TEST_CASE("critical orbit gap") {
  QuadraticMap f2(QuadraticFamily::quadratic, 2);
  // f_2: 0 -> 1 -> -1 -> -1, never back to 0.
  CHECK(critical_orbit_gap(f2, 2, 20, 256) == Rational(1));
  QuadraticMap f1(QuadraticFamily::quadratic, 1);
  // f_1: 0 -> 1 -> 0 is periodic.
  CHECK(critical_orbit_gap(f1, 2, 5, 256) == Rational(0));
}
