#include <doctest.h>

#include "shadowlab/expansivity.hpp"

using namespace shadowlab;

namespace {
const Rational half(1, 2);
System t2() { return System(tent_map(2)); }
bool symmetric(const ExpansivityVerdict& v) {
  if (!v.counterexample) return false;
  const auto& [x, y] = *v.counterexample;
  return as_rational(x) != as_rational(y) && as_rational(x) + as_rational(y) == Rational(1);
}
}  // namespace

TEST_CASE("expanding on T_2") {
  auto on_branch = check_expanding(t2(), RegionSpec::interval(0, Rational(2, 5)), Rational(1, 10), 2);
  CHECK(on_branch.holds == Holds::certified);
  auto whole = check_expanding(t2(), RegionSpec::interval(0, 1), Rational(1, 10), 2);
  REQUIRE(whole.holds == Holds::falsified);
  CHECK(symmetric(whole));
  // The counterexample re-checks by direct evaluation.
  const auto& [x, y] = *whole.counterexample;
  Rational dx = abs(as_rational(x) - as_rational(y));
  Rational dy = abs(eval(t2(), as_rational(x)) - eval(t2(), as_rational(y)));
  CHECK(dx < Rational(1, 10));
  CHECK(dy < Rational(2) * dx);
}

TEST_CASE("property star") {
  auto ok = check_star(t2(), RegionSpec::of_points({Point(Rational(1, 5))}), Rational(1, 10), 2);
  CHECK(ok.holds == Holds::certified);
  // At the turning point |f(1/2) - f(y)| = 2 |1/2 - y|, so mu = 2 still holds.
  auto at_c = check_star(t2(), RegionSpec::of_points({Point(half)}), Rational(1, 10), 2);
  CHECK(at_c.holds == Holds::certified);
  auto bad = check_star(t2(), RegionSpec::of_points({Point(half)}), Rational(1, 10), 3);
  CHECK(bad.holds == Holds::falsified);
  CHECK(bad.counterexample.has_value());
}

TEST_CASE("ball expanding") {
  std::vector<Rational> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(Rational(k, 44));
  auto v = check_ball_expanding(t2(), RegionSpec::interval(0, 1), 2, Rational(1, 4), grid);
  CHECK(v.holds == Holds::certified);
  CHECK_THROWS_AS(check_ball_expanding(t2(), RegionSpec::interval(0, 1), 1, Rational(1, 4), grid), Error);

  auto k = ball_expanding_constants(tent_map(Rational(9, 5)),
                                    IntervalSet::normalize({{Rational(1, 20), Rational(9, 20)},
                                                            {Rational(11, 20), Rational(19, 20)}}));
  REQUIRE(k);
  CHECK(k->mu == Rational(9, 5));
  CHECK(k->nu == Rational(1, 20));
}

TEST_CASE("cantor map is not ball expanding at 0") {
  CantorSystem cs(6);
  std::vector<Rational> grid{Rational(2, 81), Rational(2, 243)};
  auto v = check_ball_expanding(System(cs), RegionSpec::interval(0, 0), 3, Rational(1, 9), grid);
  CHECK(v.holds == Holds::falsified);
  auto w = cantor_window_image(cs, 5);
  CHECK(w.n == 5);
  CHECK(w.matches_corrected);
}

TEST_CASE("openness") {
  CHECK(check_open_at(t2(), Point(half)).holds == Holds::certified);
  System bump(PiecewiseLinearMap({0, half, 1}, {0, half, 0}));
  CHECK(check_open_at(bump, Point(half)).holds == Holds::falsified);
  System affine(PiecewiseLinearMap({0, 1}, {0, 1}));
  CHECK(check_open_at(affine, Point(Rational(1, 3))).holds == Holds::certified);
  CHECK(check_open_on(t2(), RegionSpec::interval(0, 1)).holds == Holds::certified);
}

TEST_CASE("local injectivity") {
  auto whole = check_locally_injective(t2(), RegionSpec::interval(0, 1));
  REQUIRE(whole.holds == Holds::falsified);
  CHECK(symmetric(whole));
  CHECK(check_locally_injective(t2(), RegionSpec::interval(0, Rational(2, 5))).holds == Holds::certified);
  CHECK(check_locally_injective(t2(), RegionSpec::of(IntervalSet())).holds == Holds::certified);
}

TEST_CASE("positive expansivity") {
  auto v = positively_expansive_falsify(t2(), Rational(1, 10), 20, 1);
  REQUIRE(v.holds == Holds::falsified);
  const auto& [x, y] = *v.counterexample;
  CHECK(eval(t2(), as_rational(x)) == eval(t2(), as_rational(y)));
  System full(ShiftSystem("01", {}));
  CHECK(positively_expansive_falsify(full, half, 10, 1).holds == Holds::undetermined);
  auto od = positively_expansive_falsify(System(OdometerSystem(8)), half, 10, 1);
  CHECK(od.holds == Holds::falsified);
  CHECK(certify_shift_positive_expansivity(ShiftSystem("01", {}), half).holds == Holds::certified);
}

TEST_CASE("schwarzian") {
  QuadraticMap f(QuadraticFamily::quadratic, Rational(3, 2));
  CHECK(schwarzian(f, half) == Rational(-6));
  CHECK(schwarzian(f, Rational(-1, 3)) == Rational(-27, 2));
  CHECK_THROWS_AS(schwarzian(f, 0), Error);
}

TEST_CASE("epsilon nets") {
  auto r = eps_net_check(t2(), {Point(half)}, 3, Rational(1, 10));
  CHECK(r.points == 8);
  CHECK(r.max_gap == Rational(1, 16));
  CHECK(r.is_net);
  auto single = eps_net_check(t2(), {Point(half)}, 0, Rational(1, 4));
  CHECK(single.max_gap == half);
  CHECK_FALSE(single.is_net);
  System affine(PiecewiseLinearMap({0, 1}, {0, 1}));
  auto a = eps_net_check(affine, {Point(half)}, 4, half);
  CHECK(a.points == 1);
  CHECK(a.is_net);
}

TEST_CASE("theorem 2.5 cross-check") {
  auto inner = theorem25_crosscheck(t2(), RegionSpec::interval(Rational(1, 10), Rational(2, 5)));
  CHECK(inner.side1 == Holds::certified);
  CHECK(inner.side2 == Holds::certified);
  CHECK(inner.consistent);
  auto whole = theorem25_crosscheck(t2(), RegionSpec::interval(0, 1));
  CHECK(whole.side1 == Holds::falsified);
  CHECK(whole.side2 == Holds::falsified);
  CHECK(whole.consistent);
  auto cantor = theorem25_crosscheck(System(CantorSystem(6)), RegionSpec::interval(0, 0));
  CHECK(cantor.side1 == Holds::falsified);
  CHECK(cantor.side2 == Holds::falsified);
  CHECK(cantor.consistent);
}
