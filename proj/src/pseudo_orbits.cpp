#include "shadowlab/pseudo_orbits.hpp"

#include "shadowlab/shadowing.hpp"

namespace shadowlab {

// The common-prefix length forced by d <= r in the symbolic metrics.
std::size_t detail::prefix_length_for(const Rational& r) {
  if (r.sign() <= 0) throw Error(ErrorCode::invalid_argument, "radius must be positive");
  std::size_t k = 0;
  while (r < Rational::pow2(-static_cast<long>(k))) ++k;
  return k;
}

namespace {

using detail::prefix_length_for;

const Rational kInset = Rational(1) - Rational::pow2(-10);

}  // namespace

std::size_t PseudoOrbit::last() const {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "empty pseudo-orbit");
  return points.size() - 1;
}

std::vector<Rational> jumps(const System& s, const PseudoOrbit& orbit) {
  if (orbit.points.empty()) throw Error(ErrorCode::invalid_argument, "empty pseudo-orbit");
  std::vector<Rational> out;
  for (std::size_t i = 0; i + 1 < orbit.points.size(); ++i)
    out.push_back(distance(s, eval(s, orbit.points[i]), orbit.points[i + 1]));
  return out;
}

Rational verify_jumps(const System& s, const PseudoOrbit& orbit) {
  Rational m(0);
  for (const auto& j : jumps(s, orbit)) m = max(m, j);
  return m;
}

PseudoOrbit true_orbit(const System& s, const Point& x0, std::size_t length) {
  if (length == 0) throw Error(ErrorCode::invalid_argument, "orbit length must be >= 1");
  PseudoOrbit o;
  o.points.push_back(x0);
  for (std::size_t i = 1; i < length; ++i) o.points.push_back(eval(s, o.points.back()));
  o.claimed_delta = Rational(0);
  return o;
}

Point sample_ball(const System& s, const Point& center, const Rational& r, Rng& rng) {
  if (r.sign() < 0) throw Error(ErrorCode::invalid_argument, "negative radius");
  if (auto* sh = std::get_if<ShiftSystem>(&s)) {
    if (r.is_zero()) return center;
    auto y = sh->random_extension(as_word(center).take(prefix_length_for(r)), rng);
    if (!y) throw Error(ErrorCode::domain, "no admissible point near " + point_str(center));
    return *y;
  }
  if (auto* od = std::get_if<OdometerSystem>(&s)) {
    if (r.is_zero()) return center;
    std::size_t k = prefix_length_for(r);
    if (k >= static_cast<std::size_t>(od->depth())) return center;
    std::uint64_t low = od->to_index(as_word(center)) & ((std::uint64_t{1} << k) - 1);
    std::uint64_t high = rng.below(std::uint64_t{1} << (od->depth() - static_cast<int>(k)));
    return od->from_index(low | (high << k));
  }
  const Rational& c = as_rational(center);
  if (auto* sl = std::get_if<SLimitSystem>(&s)) {
    if (c + r >= Rational(0) && max(c - r, Rational(0)) < min(c + r, Rational(1)))
      return rng.uniform(max(c - r, Rational(0)), min(c + r, Rational(1)));
    std::vector<Rational> isolated;
    for (int n = 1; n <= sl->tail_depth(); ++n) {
      Rational x = -Rational::pow2(-n);
      if (abs(x - c) <= r) isolated.push_back(x);
    }
    if (isolated.empty()) return center;
    return isolated[rng.below(isolated.size())];
  }
  ClosedInterval hull = space_hull(s);
  Rational lo = max(c - r, hull.lo), hi = min(c + r, hull.hi);
  Rational u = rng.uniform(lo, hi);
  if (std::holds_alternative<CantorSystem>(s)) {
    auto p = CantorSystem::ceil_point(u);
    if (p && *p <= hi) return *p;
    return *CantorSystem::ceil_point(lo);
  }
  return u;
}

PseudoOrbit perturbed_orbit(const System& s, const Point& x0, std::size_t length, const Rational& delta,
                            std::uint64_t seed) {
  if (delta.sign() <= 0) throw Error(ErrorCode::invalid_argument, "delta must be positive");
  if (length == 0) throw Error(ErrorCode::invalid_argument, "orbit length must be >= 1");
  if (!in_space(s, x0)) throw Error(ErrorCode::domain, "start point " + point_str(x0) + " outside the space");
  Rng rng(seed);
  PseudoOrbit o;
  o.points.push_back(x0);
  Rational r = delta * kInset;
  for (std::size_t i = 1; i < length; ++i) o.points.push_back(sample_ball(s, eval(s, o.points.back()), r, rng));
  o.claimed_delta = delta;
  return o;
}

PseudoOrbit decaying_orbit(const System& s, const Point& x0, std::size_t length, const DecaySchedule& schedule,
                           std::uint64_t seed) {
  if (schedule.scale.sign() <= 0) throw Error(ErrorCode::invalid_argument, "schedule scale must be positive");
  if (length == 0) throw Error(ErrorCode::invalid_argument, "orbit length must be >= 1");
  Rng rng(seed);
  PseudoOrbit o;
  o.points.push_back(x0);
  for (std::size_t i = 1; i < length; ++i)
    o.points.push_back(sample_ball(s, eval(s, o.points.back()), schedule.bound(i - 1) * kInset, rng));
  o.claimed_delta = schedule.bound(0);
  o.schedule = schedule;
  return o;
}

DeviationReport deviation(const System& s, const Point& y, const PseudoOrbit& orbit) {
  if (orbit.points.empty()) throw Error(ErrorCode::invalid_argument, "empty pseudo-orbit");
  DeviationReport rep;
  rep.max_deviation = Rational(0);
  Point cur = y;
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    if (i > 0) cur = eval(s, cur);
    Rational d = distance(s, cur, orbit.points[i]);
    rep.max_deviation = max(rep.max_deviation, d);
    rep.per_step.push_back(std::move(d));
  }
  rep.exact_hit = rep.per_step.back().is_zero();
  return rep;
}

PseudoOrbit splice(const System& s, const std::vector<Point>& prefix, const PseudoOrbit& suffix) {
  PseudoOrbit o;
  o.points = prefix;
  o.points.insert(o.points.end(), suffix.points.begin(), suffix.points.end());
  if (!o.points.empty()) o.claimed_delta = verify_jumps(s, o);
  return o;
}

}  // namespace shadowlab
