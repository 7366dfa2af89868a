#include <doctest.h>

#include "shadowlab/pseudo_orbits.hpp"

using namespace shadowlab;

namespace {
const Rational half(1, 2);
PseudoOrbit orbit_of(std::vector<Rational> xs) {
  PseudoOrbit o;
  for (auto& x : xs) o.points.emplace_back(x);
  return o;
}
}  // namespace

TEST_CASE("jumps of true and perturbed orbits") {
  System t2(tent_map(2));
  CHECK(verify_jumps(t2, orbit_of({Rational(1, 3), Rational(2, 3), Rational(2, 3)})) == Rational(0));
  CHECK(verify_jumps(t2, orbit_of({Rational(1, 4), half + Rational(1, 100)})) == Rational(1, 100));
  CHECK(verify_jumps(t2, true_orbit(t2, Point(Rational(1, 7)), 20)) == Rational(0));
  CHECK(verify_jumps(t2, orbit_of({Rational(1, 5)})) == Rational(0));
}

TEST_CASE("perturbed orbits respect delta and the seed") {
  System t2(tent_map(2));
  Rational delta(1, 100);
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    PseudoOrbit o = perturbed_orbit(t2, Point(Rational(1, 3)), 50, delta, seed);
    CHECK(o.size() == 50);
    CHECK(verify_jumps(t2, o) < delta);
    PseudoOrbit again = perturbed_orbit(t2, Point(Rational(1, 3)), 50, delta, seed);
    CHECK(o.points == again.points);
  }
  CHECK_THROWS_AS(perturbed_orbit(t2, Point(Rational(1, 3)), 5, Rational(0), 1), Error);
}

TEST_CASE("decaying orbits respect the schedule") {
  System t2(tent_map(2));
  DecaySchedule sch{Rational(1, 10)};
  PseudoOrbit o = decaying_orbit(t2, Point(Rational(1, 3)), 30, sch, 4);
  auto j = jumps(t2, o);
  for (std::size_t i = 0; i < j.size(); ++i) CHECK(j[i] <= sch.bound(i));
}

TEST_CASE("symbolic perturbations stay in the space") {
  ShiftSystem gm("01", {"11"});
  System s(gm);
  PseudoOrbit o = perturbed_orbit(s, Point(SymbolWord::parse("(01)")), 20, Rational(1, 8), 3);
  for (const auto& p : o.points) CHECK(gm.contains(as_word(p)));
  CHECK(verify_jumps(s, o) < Rational(1, 8));
}

TEST_CASE("deviation") {
  System t2(tent_map(2));
  PseudoOrbit t = true_orbit(t2, Point(Rational(1, 5)), 10);
  auto d = deviation(t2, t.points[0], t);
  CHECK(d.max_deviation == Rational(0));
  CHECK(d.exact_hit);
  auto e = deviation(t2, Point(Rational(0)), orbit_of({0, Rational(1, 10)}));
  CHECK(e.per_step == std::vector<Rational>{0, Rational(1, 10)});
  CHECK(e.max_deviation == Rational(1, 10));
  CHECK_FALSE(e.exact_hit);
}

TEST_CASE("s-limit witness deviates at step 0") {
  SLimitSystem sl(64);
  System s(sl);
  const int n = 4;
  Rational tail = -Rational::pow2(-n);
  std::vector<Rational> xs{half};
  for (int i = 0; i < n; ++i) xs.push_back(sl.eval(xs.back()));
  xs.push_back(0);
  for (int i = 0; i < 3; ++i) xs.push_back(tail);
  auto d = deviation(s, Point(tail), orbit_of(xs));
  CHECK(d.per_step[0] == half + Rational::pow2(-n));
  CHECK(Rational(1, 4) < d.per_step[0]);
  CHECK(verify_jumps(s, orbit_of(xs)) < Rational(1, 10));
}

TEST_CASE("splice") {
  System t2(tent_map(2));
  PseudoOrbit o = true_orbit(t2, Point(Rational(1, 7)), 5);
  PseudoOrbit same = splice(t2, {}, o);
  CHECK(same.points == o.points);
  PseudoOrbit a = true_orbit(t2, Point(Rational(1, 9)), 3);
  Point bridge = eval(t2, a.points.back());
  PseudoOrbit b = true_orbit(t2, Point(as_rational(bridge) + Rational(1, 1000)), 4);
  PseudoOrbit s = splice(t2, a.points, b);
  CHECK(s.size() == 7);
  REQUIRE(s.claimed_delta);
  CHECK(*s.claimed_delta <= Rational(1, 500));
  CHECK(verify_jumps(t2, s) <= *s.claimed_delta);
}
