#include <doctest.h>

#include "shadowlab/numerics.hpp"

using namespace shadowlab;

namespace {
IntervalSet set(std::vector<ClosedInterval> parts) { return IntervalSet::normalize(std::move(parts)); }
ClosedInterval iv(Rational a, Rational b) { return {std::move(a), std::move(b)}; }
}  // namespace

TEST_CASE("rational parse and canonical form") {
  CHECK(Rational::parse("6/8").str() == "3/4");
  CHECK(Rational::parse("-3").str() == "-3/1");
  CHECK_THROWS_AS(Rational::parse("2/-4"), Error);
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("abc"), Error);
  CHECK(Rational::pow2(-3) == Rational(1, 8));
  CHECK(Rational::pow3(2) == Rational(9));
  CHECK(power(Rational(2, 3), 3) == Rational(8, 27));
}

TEST_CASE("dyadic rounding brackets the value") {
  Rational x(1, 3);
  CHECK(floor_dyadic(x, 4) == Rational(5, 16));
  CHECK(ceil_dyadic(x, 4) == Rational(6, 16));
  CHECK(floor_dyadic(Rational(1, 4), 4) == Rational(1, 4));
  auto [lo, hi] = sqrt_enclosure(Rational(2), 40);
  CHECK(lo * lo <= Rational(2));
  CHECK(Rational(2) <= hi * hi);
  CHECK(hi - lo <= Rational::pow2(-40));
}

TEST_CASE("normalize merges overlapping and touching intervals") {
  CHECK(set({iv(0, Rational(1, 2)), iv(Rational(1, 4), Rational(3, 4))}) == IntervalSet(iv(0, Rational(3, 4))));
  CHECK(set({iv(0, Rational(1, 3)), iv(Rational(1, 3), 1)}) == IntervalSet(iv(0, 1)));
  CHECK(set({}).empty());
  auto s = set({iv(Rational(1, 2), 1), iv(0, Rational(1, 4))});
  REQUIRE(s.size() == 2);
  CHECK(s.parts()[0] == iv(0, Rational(1, 4)));
}

TEST_CASE("intersection") {
  CHECK(IntervalSet(iv(0, Rational(1, 2))).intersect(IntervalSet(iv(Rational(1, 4), 1))) ==
        IntervalSet(iv(Rational(1, 4), Rational(1, 2))));
  auto a = set({iv(0, Rational(1, 4)), iv(Rational(1, 2), 1)});
  auto b = IntervalSet(iv(Rational(1, 8), Rational(5, 8)));
  CHECK(a.intersect(b) == set({iv(Rational(1, 8), Rational(1, 4)), iv(Rational(1, 2), Rational(5, 8))}));
  CHECK(a.intersect(IntervalSet()).empty());
  // Touching closed intervals meet in a point.
  CHECK(IntervalSet(iv(0, Rational(1, 2))).intersect(IntervalSet(iv(Rational(1, 2), 1))) ==
        IntervalSet(ClosedInterval::point(Rational(1, 2))));
}

TEST_CASE("affine images") {
  CHECK(IntervalSet(iv(0, 1)).affine_image(3, 2) == IntervalSet(iv(2, 5)));
  CHECK(IntervalSet(iv(Rational(2, 27), Rational(1, 9))).affine_image(9, 0) == IntervalSet(iv(Rational(2, 3), 1)));
  CHECK(IntervalSet(iv(0, 1)).affine_image(-2, 2) == IntervalSet(iv(0, 2)));
  CHECK_THROWS_AS(IntervalSet(iv(0, 1)).affine_image(0, 1), Error);
}

TEST_CASE("set queries") {
  auto s = set({iv(0, Rational(1, 4)), iv(Rational(1, 2), 1)});
  CHECK(s.measure() == Rational(3, 4));
  CHECK(s.contains(Rational(1, 4)));
  CHECK_FALSE(s.contains(Rational(1, 3)));
  CHECK(s.distance_to(Rational(3, 8)) == Rational(1, 8));
  CHECK(s.inflate(Rational(1, 8)) == IntervalSet(iv(Rational(-1, 8), Rational(9, 8))));
  CHECK(s.hull() == iv(0, 1));
  CHECK(s.leftmost() == Rational(0));
  CHECK(s.contains(IntervalSet(iv(Rational(1, 2), Rational(3, 4)))));
  CHECK(s.unite(IntervalSet(iv(Rational(1, 4), Rational(1, 2)))) == IntervalSet(iv(0, 1)));
  CHECK_THROWS_AS(ClosedInterval(1, 0), Error);
}

TEST_CASE("rng is deterministic and stays in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    Rational x = a.uniform(Rational(1, 3), Rational(1, 2));
    CHECK(x == b.uniform(Rational(1, 3), Rational(1, 2)));
    CHECK(Rational(1, 3) <= x);
    CHECK(x <= Rational(1, 2));
    CHECK(a.below(7) == b.below(7));
  }
  Rng c(1);
  auto s = set({iv(0, Rational(1, 8)), iv(Rational(7, 8), 1)});
  for (int i = 0; i < 100; ++i) CHECK(s.contains(c.uniform(s)));
}
