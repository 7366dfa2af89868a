#include <algorithm>

#include "shadowlab/shadowing.hpp"

namespace shadowlab {

std::string tri_name(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    default: return "unknown";
  }
}

namespace {

void check_inputs(const System& s, const PseudoOrbit& orbit, const Rational& epsilon) {
  if (orbit.points.empty()) throw Error(ErrorCode::invalid_argument, "empty pseudo-orbit");
  if (epsilon.sign() <= 0) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  for (std::size_t i = 0; i < orbit.points.size(); ++i)
    if (!in_space(s, orbit.points[i]))
      throw Error(ErrorCode::domain, "orbit point " + std::to_string(i) + " (" + point_str(orbit.points[i]) + ") outside the space");
}

IntervalSet tube(const System& s, const Point& x, const Rational& epsilon) {
  ClosedInterval hull = space_hull(s);
  const Rational& c = as_rational(x);
  Rational lo = max(c - epsilon, hull.lo), hi = min(c + epsilon, hull.hi);
  return IntervalSet(ClosedInterval(lo, hi));
}

// T_i = tube_i ∩ f^-1(T_{i+1}) for i = last..first; returns T_first.
IntervalSet backward_chain(const System& s, const PseudoOrbit& orbit, const Rational& epsilon, std::size_t last) {
  IntervalSet t = tube(s, orbit.points[last], epsilon);
  for (std::size_t i = last; i-- > 0;) {
    if (t.empty()) return t;
    t = tube(s, orbit.points[i], epsilon).intersect(preimage_set(s, t));
  }
  return t;
}

std::optional<Rational> leftmost_space_point(const System& s, const IntervalSet& set) {
  if (std::holds_alternative<CantorSystem>(s)) return CantorSystem::leftmost_point(set);
  return set.leftmost();
}

ShadowCertificate affine_oracle(const System& s, const PseudoOrbit& orbit, const Rational& epsilon,
                                const SolveOptions& opt) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  std::size_t m = orbit.last();
  cert.feasible = backward_chain(s, orbit, epsilon, m);
  if (opt.transcript)
    for (std::size_t i = 0; i <= m; ++i) cert.transcript.push_back(backward_chain(s, orbit, epsilon, i));
  if (auto y = leftmost_space_point(s, cert.feasible)) {
    cert.verdict = Tri::yes;
    cert.witness = *y;
    cert.report = deviation(s, *y, orbit);
  } else {
    cert.verdict = Tri::no;
    cert.note = "no point of the space stays in the closed tubes";
  }
  return cert;
}

// Exact image of a set under the affine branches of f.
IntervalSet image_set(const System& s, const IntervalSet& set) {
  std::vector<ClosedInterval> raw;
  for (const auto& b : branches(s, set)) {
    IntervalSet part = set.intersect(IntervalSet(b.domain));
    if (b.slope.is_zero()) {
      if (!part.empty()) raw.push_back(ClosedInterval::point(b.offset));
      continue;
    }
    IntervalSet img = part.affine_image(b.slope, b.offset);
    for (const auto& iv : img.parts()) raw.push_back(iv);
  }
  return IntervalSet::normalize(std::move(raw));
}

constexpr std::size_t kEnumerationCap = 64;

ShadowCertificate affine_h_solve(const System& s, const PseudoOrbit& orbit, const Rational& epsilon) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  std::size_t m = orbit.last();
  const bool pl = std::holds_alternative<PiecewiseLinearMap>(s);
  // reach[i]: points f^i(y) over all y whose first i + 1 iterates stay in the
  // tubes. Every point of reach[i] has such a past, so the backward pass
  // below never needs to backtrack.
  std::vector<IntervalSet> reach;
  if (pl) {
    reach.push_back(tube(s, orbit.points[0], epsilon));
    for (std::size_t i = 1; i <= m; ++i) reach.push_back(image_set(s, reach.back()).intersect(tube(s, orbit.points[i], epsilon)));
  }
  auto admissible = [&](const Rational& q, std::size_t i) {
    return abs(q - as_rational(orbit.points[i])) <= epsilon && (!pl || reach[i].contains(q));
  };
  const Rational& target = as_rational(orbit.points[m]);
  if (pl && !reach[m].contains(target)) {
    cert.verdict = Tri::no;
    cert.note = "no exact-hit point inside the tubes";
    return cert;
  }
  std::vector<Rational> pts{target};
  bool complete = true;
  for (std::size_t i = m; i-- > 0 && !pts.empty();) {
    std::vector<Rational> next;
    for (const auto& p : pts)
      for (auto& q : point_preimages(s, p))
        if (admissible(q, i)) next.push_back(std::move(q));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (pl && next.size() > kEnumerationCap) {
      complete = false;
      pts.assign(1, target);
      break;
    }
    pts.swap(next);
  }
  if (!complete) {
    // One admissible preimage per step, the leftmost.
    Rational p = target;
    for (std::size_t i = m; i-- > 0;) {
      std::optional<Rational> pick;
      for (auto& q : point_preimages(s, p))
        if (admissible(q, i) && (!pick || q < *pick)) pick = std::move(q);
      if (!pick) throw Error(ErrorCode::infeasible, "reachable-set invariant broken at step " + std::to_string(i));
      p = *pick;
    }
    pts.assign(1, p);
  }
  std::vector<ClosedInterval> parts;
  for (const auto& p : pts) parts.push_back(ClosedInterval::point(p));
  cert.feasible = IntervalSet::normalize(std::move(parts));
  if (pts.empty()) {
    cert.verdict = Tri::no;
    cert.note = "no exact-hit point inside the tubes";
    return cert;
  }
  if (!complete)
    cert.note = "more than " + std::to_string(kEnumerationCap) + " exact-hit points; feasible holds the witness only";
  cert.verdict = Tri::yes;
  cert.witness = pts.front();
  cert.report = deviation(s, pts.front(), orbit);
  return cert;
}

}  // namespace

ShadowCertificate shadow_oracle(const System& s, const PseudoOrbit& orbit, const Rational& epsilon,
                                const SolveOptions& opt) {
  check_inputs(s, orbit, epsilon);
  if (auto* q = std::get_if<QuadraticMap>(&s)) return detail::quadratic_oracle(*q, orbit, epsilon, opt);
  if (auto* sh = std::get_if<ShiftSystem>(&s)) return detail::shift_oracle(*sh, orbit, epsilon);
  if (auto* od = std::get_if<OdometerSystem>(&s)) return detail::odometer_oracle(*od, orbit, epsilon);
  if (std::holds_alternative<SLimitSystem>(s))
    throw Error(ErrorCode::unsupported, "the exact oracle needs affine branches; the s-limit map is x^2");
  return affine_oracle(s, orbit, epsilon, opt);
}

ShadowCertificate h_shadow_solve(const System& s, const PseudoOrbit& orbit, const Rational& epsilon,
                                 const SolveOptions& opt) {
  check_inputs(s, orbit, epsilon);
  if (auto* q = std::get_if<QuadraticMap>(&s)) return detail::quadratic_h_solve(*q, orbit, epsilon, opt);
  if (auto* sh = std::get_if<ShiftSystem>(&s)) return detail::shift_h_solve(*sh, orbit, epsilon);
  if (auto* od = std::get_if<OdometerSystem>(&s)) return detail::odometer_h_solve(*od, orbit, epsilon);
  if (std::holds_alternative<SLimitSystem>(s))
    throw Error(ErrorCode::unsupported, "the exact solver needs affine branches; the s-limit map is x^2");
  return affine_h_solve(s, orbit, epsilon);
}

BallExpandingDelta ball_expanding_delta(const Rational& mu, const Rational& nu, const Rational& epsilon) {
  if (mu <= Rational(1)) throw Error(ErrorCode::invalid_argument, "mu must exceed 1");
  if (nu.sign() <= 0 || epsilon.sign() <= 0) throw Error(ErrorCode::invalid_argument, "nu and epsilon must be positive");
  Rational ep = min(epsilon, nu);
  return {ep, (mu - Rational(1)) * ep};
}

Rational finite_horizon_delta(const Rational& lipschitz, int n, const Rational& epsilon) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "horizon must be >= 1");
  if (epsilon.sign() <= 0) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  Rational l = max(lipschitz, Rational(1));
  if (l == Rational(1)) return epsilon / Rational(n + 1);
  return epsilon * (l - Rational(1)) / (power(l, static_cast<unsigned>(n + 1)) - Rational(1));
}

}  // namespace shadowlab
