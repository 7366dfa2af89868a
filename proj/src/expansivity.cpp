#include "shadowlab/expansivity.hpp"

#include <algorithm>
#include <functional>

#include "shadowlab/pseudo_orbits.hpp"

namespace shadowlab {

std::string property_name(Property p) {
  switch (p) {
    case Property::expanding: return "expanding";
    case Property::star: return "star";
    case Property::ball_expanding: return "ball_expanding";
    case Property::open_on: return "open_on";
    case Property::locally_injective: return "locally_injective";
    default: return "positively_expansive";
  }
}

std::string holds_name(Holds h) {
  switch (h) {
    case Holds::certified: return "certified";
    case Holds::falsified: return "falsified";
    default: return "undetermined";
  }
}

RegionSpec RegionSpec::interval(const Rational& lo, const Rational& hi, const Rational& margin) {
  return of(IntervalSet(ClosedInterval(lo, hi)), margin);
}

RegionSpec RegionSpec::of(IntervalSet carrier, const Rational& margin) {
  if (margin.sign() < 0) throw Error(ErrorCode::invalid_argument, "region margin must be >= 0");
  RegionSpec r;
  r.carrier = std::move(carrier);
  r.margin = margin;
  return r;
}

RegionSpec RegionSpec::of_points(std::vector<Point> points) {
  RegionSpec r;
  // Rational points also form the carrier used by interval systems.
  std::vector<ClosedInterval> singles;
  for (const auto& p : points)
    if (auto* x = std::get_if<Rational>(&p)) singles.push_back(ClosedInterval::point(*x));
  r.carrier = IntervalSet::normalize(std::move(singles));
  r.points = std::move(points);
  return r;
}

namespace {

using Vertex = std::pair<Rational, Rational>;

const Rational kTiny = Rational::pow2(-20);

void require_constants(const Rational& delta, const Rational& mu) {
  if (delta.sign() <= 0) throw Error(ErrorCode::invalid_argument, "delta must be positive");
  if (mu <= Rational(1)) throw Error(ErrorCode::invalid_argument, "mu must exceed 1");
}

ExpansivityVerdict verdict(Property p) {
  ExpansivityVerdict v;
  v.property = p;
  return v;
}

Rational set_distance(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_argument, "distance to an empty set");
  std::optional<Rational> best;
  for (const auto& p : a.parts())
    for (const auto& q : b.parts()) {
      Rational gap = max(Rational(0), max(q.lo - p.hi, p.lo - q.hi));
      if (!best || gap < *best) best = gap;
    }
  return *best;
}

// Nearest point of a nonempty set to x.
Rational nearest(const IntervalSet& s, const Rational& x) {
  std::optional<Rational> best;
  for (const auto& p : s.parts()) {
    Rational c = min(max(x, p.lo), p.hi);
    if (!best || abs(c - x) < abs(*best - x)) best = c;
  }
  return *best;
}

// Sutherland-Hodgman against a x + b y <= c.
std::vector<Vertex> clip(const std::vector<Vertex>& poly, const Rational& a, const Rational& b, const Rational& c) {
  std::vector<Vertex> out;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex& p = poly[i];
    const Vertex& q = poly[(i + 1) % n];
    Rational vp = a * p.first + b * p.second - c;
    Rational vq = a * q.first + b * q.second - c;
    bool ip = vp.sign() <= 0, iq = vq.sign() <= 0;
    if (ip) out.push_back(p);
    if (ip != iq) {
      Rational t = vp / (vp - vq);
      out.push_back({p.first + t * (q.first - p.first), p.second + t * (q.second - p.second)});
    }
  }
  std::vector<Vertex> dedup;
  for (auto& v : out)
    if (dedup.empty() || dedup.back() != v) dedup.push_back(std::move(v));
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

// ix × iy cut down to |x - y| <= delta.
std::vector<Vertex> pair_polygon(const ClosedInterval& ix, const ClosedInterval& iy, const Rational& delta) {
  std::vector<Vertex> poly{{ix.lo, iy.lo}, {ix.hi, iy.lo}, {ix.hi, iy.hi}, {ix.lo, iy.hi}};
  poly = clip(poly, Rational(1), Rational(-1), delta);
  if (poly.empty()) return poly;
  return clip(poly, Rational(-1), Rational(1), delta);
}

struct PairOutcome {
  bool ok = true;  // the continuum lower bound reaches mu
  std::optional<Vertex> counter;
};

// Ratio |f(x) - f(y)| / |x - y| for x in piece a, y in piece b over the
// clipped rectangle. The ratio is linear-fractional, so its infimum sits at
// vertices; a vertex on the diagonal contributes the two one-sided slopes.
// When the bound is below mu, candidate points pulled towards the centroid
// are tested for a strict counterexample.
PairOutcome affine_pair(const AffinePiece& a, const ClosedInterval& ix, const AffinePiece& b, const ClosedInterval& iy,
                        bool same_piece, const Rational& delta, const Rational& mu,
                        const std::function<bool(const Vertex&)>& admissible) {
  PairOutcome out;
  auto poly = pair_polygon(ix, iy, delta);
  if (poly.empty()) return out;
  auto g = [&](const Vertex& v) { return a.apply(v.first) - b.apply(v.second); };
  auto h = [](const Vertex& v) { return v.first - v.second; };
  bool off_diagonal = std::any_of(poly.begin(), poly.end(), [&](const Vertex& v) { return !h(v).is_zero(); });
  if (!off_diagonal) return out;

  bool pos = false, neg = false;
  for (const auto& v : poly) {
    int sg = g(v).sign();
    pos = pos || sg > 0;
    neg = neg || sg < 0;
  }
  std::optional<Rational> lb;
  auto lower = [&](const Rational& r) { lb = lb ? min(*lb, r) : r; };
  if (same_piece) {
    lower(abs(a.slope));
  } else if (pos && neg) {
    lower(Rational(0));
  } else {
    for (const auto& v : poly) {
      if (h(v).is_zero()) {
        lower(abs(a.slope));
        lower(abs(b.slope));
      } else {
        lower(abs(g(v)) / abs(h(v)));
      }
    }
  }
  if (*lb >= mu) return out;
  out.ok = false;

  std::vector<Vertex> roots;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vertex& p = poly[i];
    const Vertex& q = poly[(i + 1) % poly.size()];
    Rational gp = g(p), gq = g(q);
    if (gp.is_zero()) roots.push_back(p);
    if (gp.sign() * gq.sign() < 0) {
      Rational t = gp / (gp - gq);
      roots.push_back({p.first + t * (q.first - p.first), p.second + t * (q.second - p.second)});
    }
  }
  // The midpoint of two roots has f(x) = f(y), the strongest violation.
  std::vector<Vertex> candidates;
  if (roots.size() >= 2)
    candidates.push_back({(roots[0].first + roots[1].first) / Rational(2), (roots[0].second + roots[1].second) / Rational(2)});
  candidates.insert(candidates.end(), poly.begin(), poly.end());
  candidates.insert(candidates.end(), roots.begin(), roots.end());
  Vertex centroid{Rational(0), Rational(0)};
  for (const auto& v : poly) {
    centroid.first += v.first;
    centroid.second += v.second;
  }
  Rational np(static_cast<long>(poly.size()));
  centroid = {centroid.first / np, centroid.second / np};
  candidates.push_back(centroid);

  auto strict = [&](const Vertex& v) {
    Rational hv = abs(h(v));
    return hv.sign() > 0 && hv < delta && abs(g(v)) < mu * hv && admissible(v);
  };
  for (const auto& c : candidates) {
    if (strict(c)) {
      out.counter = c;
      return out;
    }
    for (long k : {60L, 40L, 30L, 20L, 12L, 8L, 4L, 2L, 1L}) {
      Rational w = Rational::pow2(-k);
      Vertex v{c.first + (centroid.first - c.first) * w, c.second + (centroid.second - c.second) * w};
      if (strict(v)) {
        out.counter = v;
        return out;
      }
    }
  }
  return out;
}

Rational ratio(const System& s, const Point& x, const Point& y) {
  return distance(s, eval(s, x), eval(s, y)) / distance(s, x, y);
}

void set_counter(ExpansivityVerdict& v, const System& s, const Point& x, const Point& y) {
  v.holds = Holds::falsified;
  v.counterexample = std::make_pair(x, y);
  v.violating_quantity = ratio(s, x, y);
}

// ---- distance-type checks -------------------------------------------------

ExpansivityVerdict pl_pairs(const PiecewiseLinearMap& f, Property prop, const IntervalSet& xs, const IntervalSet& ys,
                            const Rational& delta, const Rational& mu) {
  ExpansivityVerdict v = verdict(prop);
  System sys(f);
  bool complete = true;
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    IntervalSet xi = xs.intersect(IntervalSet(ps[i].domain));
    for (std::size_t j = 0; j < ps.size() && !xi.empty(); ++j) {
      IntervalSet yj = ys.intersect(IntervalSet(ps[j].domain));
      for (const auto& ix : xi.parts())
        for (const auto& iy : yj.parts()) {
          if (max(iy.lo - ix.hi, ix.lo - iy.hi) >= delta) continue;
          auto r = affine_pair(ps[i], ix, ps[j], iy, i == j, delta, mu, [](const Vertex&) { return true; });
          if (r.counter) {
            set_counter(v, sys, r.counter->first, r.counter->second);
            v.detail = "pair below the required ratio";
            return v;
          }
          complete = complete && r.ok;
        }
    }
  }
  v.holds = complete ? Holds::certified : Holds::undetermined;
  if (!complete) v.detail = "continuum bound below mu but no strict counterexample located";
  return v;
}

// Points of X worth trying inside a closed interval.
std::vector<Rational> cantor_candidates(const ClosedInterval& iv) {
  std::vector<Rational> out;
  if (auto p = CantorSystem::ceil_point(iv.lo); p && *p <= iv.hi) out.push_back(*p);
  if (CantorSystem::contains(iv.hi)) out.push_back(iv.hi);
  if (auto p = CantorSystem::point_in_open(iv.lo, iv.hi)) out.push_back(*p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExpansivityVerdict cantor_pairs(const CantorSystem& c, Property prop, const IntervalSet& xs, const IntervalSet& ys,
                                const Rational& delta, const Rational& mu) {
  ExpansivityVerdict v = verdict(prop);
  System sys(c);
  std::vector<AffinePiece> pieces;
  for (const auto& p : c.pieces()) pieces.push_back(p.map);
  pieces.push_back({ClosedInterval::point(Rational(0)), Rational(1), Rational(0)});
  bool complete = true;
  std::string why;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    IntervalSet xi = xs.intersect(IntervalSet(pieces[i].domain));
    for (std::size_t j = 0; j < pieces.size() && !xi.empty(); ++j) {
      IntervalSet yj = ys.intersect(IntervalSet(pieces[j].domain));
      for (const auto& ix : xi.parts())
        for (const auto& iy : yj.parts()) {
          if (max(iy.lo - ix.hi, ix.lo - iy.hi) >= delta) continue;
          auto r = affine_pair(pieces[i], ix, pieces[j], iy, i == j, delta, mu, [](const Vertex&) { return false; });
          if (r.ok) continue;
          // The continuum bound fails; look for a pair of actual points of X.
          auto cx = cantor_candidates(ix);
          auto cy = cantor_candidates(iy);
          for (const auto& x : cx)
            for (const auto& y : cy) {
              Rational d = abs(x - y);
              if (d.sign() > 0 && d < delta && abs(c.eval(x) - c.eval(y)) < mu * d) {
                set_counter(v, sys, x, y);
                v.detail = "pair of points of X below the required ratio";
                return v;
              }
            }
          complete = false;
        }
    }
  }
  // Pairs reaching into the unresolved core are not enumerated.
  IntervalSet core(c.core());
  IntervalSet zero(ClosedInterval::point(Rational(0)));
  auto beyond_zero = [&](const IntervalSet& s) {
    IntervalSet k = s.intersect(core);
    return !k.empty() && !(k == zero);
  };
  if (beyond_zero(xs) || (beyond_zero(ys) && !xs.empty() && set_distance(xs, core) < delta)) {
    complete = false;
    why = "pairs inside the unresolved core [-3^-depth, 3^-depth]";
  }
  v.holds = complete ? Holds::certified : Holds::undetermined;
  if (!complete) v.detail = why.empty() ? "continuum bound below mu but no pair of points of X located" : why;
  return v;
}

// |f'(x)| = k |x - c| for both quadratic families.
Rational derivative_factor(const QuadraticMap& q) { return Rational(2) * q.parameter(); }

ExpansivityVerdict quadratic_pairs(const QuadraticMap& q, Property prop, const IntervalSet& xs, const IntervalSet& ys,
                                   const Rational& delta, const Rational& mu, std::uint64_t seed) {
  ExpansivityVerdict v = verdict(prop);
  System sys(q);
  ClosedInterval dom = q.domain();
  Rational c = q.critical_point();
  if (xs.empty()) {
    v.holds = Holds::certified;
    v.detail = "empty region";
    return v;
  }
  // Mean value bound over the delta-neighbourhood of the region.
  IntervalSet reach = xs.inflate(delta).intersect(IntervalSet(dom));
  Rational bound = derivative_factor(q) * reach.distance_to(c);
  v.constants["derivative_bound"] = bound;
  if (bound >= mu) {
    v.holds = Holds::certified;
    v.detail = "|f'| >= mu on the delta-neighbourhood";
    return v;
  }
  Rng rng(seed);
  std::vector<Rational> xc;
  for (const auto& p : xs.parts()) {
    xc.push_back(p.lo);
    xc.push_back(p.hi);
    xc.push_back(p.midpoint());
    if (p.contains(c)) xc.push_back(c);
  }
  xc.push_back(nearest(xs, c));
  for (int i = 0; i < 64; ++i) xc.push_back(rng.uniform(xs));
  for (const auto& x : xc) {
    std::vector<Rational> yc{Rational(2) * c - x};
    for (long k = 1; k <= 40; k += 3) {
      Rational step = delta * (Rational(1) - Rational::pow2(-k));
      yc.push_back(x + step);
      yc.push_back(x - step);
      yc.push_back(Rational(2) * c - x + step * Rational::pow2(-k));
    }
    for (const auto& y : yc) {
      if (!ys.contains(y)) continue;
      Rational d = abs(x - y);
      if (d.sign() > 0 && d < delta && abs(q.eval(x) - q.eval(y)) < mu * d) {
        set_counter(v, sys, x, y);
        v.detail = "sampled pair below the required ratio";
        return v;
      }
    }
  }
  v.holds = Holds::undetermined;
  v.detail = "derivative bound below mu and no sampled counterexample";
  return v;
}

ExpansivityVerdict symbolic_pairs(const System& s, Property prop, const RegionSpec& region, const Rational& delta,
                                  const Rational& mu) {
  ExpansivityVerdict v = verdict(prop);
  for (const auto& p : region.points)
    if (!in_space(s, p)) throw Error(ErrorCode::domain, "region point " + point_str(p) + " outside the space");
  if (prop == Property::expanding) {
    for (std::size_t i = 0; i < region.points.size(); ++i)
      for (std::size_t j = 0; j < region.points.size(); ++j) {
        const auto& x = region.points[i];
        const auto& y = region.points[j];
        Rational d = distance(s, x, y);
        if (d.sign() > 0 && d < delta && distance(s, eval(s, x), eval(s, y)) < mu * d) {
          set_counter(v, s, x, y);
          v.detail = "pair of region points below the required ratio";
          return v;
        }
      }
    v.holds = Holds::certified;
    v.detail = "all pairs of the finite region checked";
    return v;
  }
  // y ranges over the whole space.
  if (std::holds_alternative<OdometerSystem>(s)) {
    // An isometry: every close pair has ratio 1.
    for (const auto& x : region.points) {
      const auto& w = as_word(x);
      std::string flipped = w.prefix;
      flipped.back() = flipped.back() == '0' ? '1' : '0';
      SymbolWord y(flipped);
      if (distance(s, x, y) < delta) {
        set_counter(v, s, x, y);
        v.detail = "the odometer is an isometry";
        return v;
      }
    }
    v.holds = Holds::certified;
    v.detail = "delta below the finest odometer distance";
    return v;
  }
  const auto& sh = std::get<ShiftSystem>(s);
  // d(x, y) = 2^-k with k >= 1 gives d(σx, σy) = 2^-(k-1): ratio exactly 2.
  if (mu <= Rational(2) && delta <= Rational(1)) {
    v.holds = Holds::certified;
    v.detail = "shift doubles distances below 1";
    return v;
  }
  for (const auto& x : region.points) {
    const auto& w = as_word(x);
    for (std::size_t k = 1; k <= 64; ++k) {
      if (!(Rational::pow2(-static_cast<long>(k)) < delta)) continue;
      std::string head = w.take(k);
      for (char a : sh.followers(head)) {
        if (a == w.at(k)) continue;
        auto y = sh.extend(head + a);
        if (!y) continue;
        if (distance(s, eval(s, x), eval(s, *y)) < mu * distance(s, x, *y)) {
          set_counter(v, s, x, *y);
          v.detail = "shift pair below the required ratio";
          return v;
        }
      }
      break;
    }
  }
  v.holds = Holds::undetermined;
  v.detail = "no shift counterexample located";
  return v;
}

ExpansivityVerdict distance_check(const System& s, Property prop, const RegionSpec& region, const Rational& delta,
                                  const Rational& mu, std::uint64_t seed) {
  require_constants(delta, mu);
  ExpansivityVerdict v;
  if (is_symbolic(s)) {
    v = symbolic_pairs(s, prop, region, delta, mu);
  } else if (std::holds_alternative<SLimitSystem>(s)) {
    throw Error(ErrorCode::unsupported, "distance expansion checks need affine or quadratic maps");
  } else {
    IntervalSet space(space_hull(s));
    IntervalSet xs = region.carrier.intersect(space);
    IntervalSet ys = prop == Property::star ? space : xs;
    if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) v = pl_pairs(*f, prop, xs, ys, delta, mu);
    else if (auto* c = std::get_if<CantorSystem>(&s)) v = cantor_pairs(*c, prop, xs, ys, delta, mu);
    else v = quadratic_pairs(std::get<QuadraticMap>(s), prop, xs, ys, delta, mu, seed);
  }
  v.property = prop;
  v.constants["delta"] = delta;
  v.constants["mu"] = mu;
  return v;
}

// ---- ball expanding ---------------------------------------------------------

ClosedInterval pl_image(const PiecewiseLinearMap& f, const ClosedInterval& iv) {
  Rational lo = f.eval(iv.lo), hi = lo;
  auto take = [&](const Rational& y) {
    lo = min(lo, y);
    hi = max(hi, y);
  };
  take(f.eval(iv.hi));
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i < bp.size(); ++i)
    if (iv.lo < bp[i] && bp[i] < iv.hi) take(f.values()[i]);
  return {lo, hi};
}

// Parts of [0, 1] where the breakpoint analysis breaks down: turning points
// whose value is not the matching end of [0, 1], endpoints that are not, and
// flat pieces.
IntervalSet pl_bad_set(const PiecewiseLinearMap& f) {
  const auto& ps = f.pieces();
  const auto& vals = f.values();
  std::vector<ClosedInterval> bad;
  for (const auto& p : ps)
    if (p.slope.is_zero()) bad.push_back(p.domain);
  for (std::size_t i = 1; i < ps.size(); ++i) {
    int sl = ps[i - 1].slope.sign(), sr = ps[i].slope.sign();
    if (sl * sr >= 0) continue;
    Rational want = sl > 0 ? Rational(1) : Rational(0);
    if (vals[i] != want) bad.push_back(ClosedInterval::point(ps[i].domain.lo));
  }
  int s0 = ps.front().slope.sign(), s1 = ps.back().slope.sign();
  if (s0 != 0 && vals.front() != (s0 > 0 ? Rational(0) : Rational(1))) bad.push_back(ClosedInterval::point(Rational(0)));
  if (s1 != 0 && vals.back() != (s1 > 0 ? Rational(1) : Rational(0))) bad.push_back(ClosedInterval::point(Rational(1)));
  return IntervalSet::normalize(std::move(bad));
}

std::optional<Rational> min_slope_near(const PiecewiseLinearMap& f, const IntervalSet& window) {
  std::optional<Rational> m;
  for (const auto& p : f.pieces())
    if (!window.intersect(IntervalSet(p.domain)).empty()) m = m ? min(*m, abs(p.slope)) : abs(p.slope);
  return m;
}

struct BallTest {
  std::optional<Rational> missing;  // a point of the target outside the image
};

ClosedInterval clamp_ball(const ClosedInterval& hull, const Rational& x, const Rational& r) {
  return {max(x - r, hull.lo), min(x + r, hull.hi)};
}

std::optional<Rational> uncovered(const ClosedInterval& target, const ClosedInterval& image) {
  if (target.lo < image.lo) return target.lo;
  if (image.hi < target.hi) return target.hi;
  return std::nullopt;
}

// A point of X in A but not in B, if any.
std::optional<Rational> cantor_point_outside(const IntervalSet& a, const IntervalSet& b) {
  // Searches the piece of A between lo and hi; the flags say whether the ends
  // belong to it.
  auto probe = [](const Rational& lo, bool lo_closed, const Rational& hi, bool hi_closed) -> std::optional<Rational> {
    if (lo_closed && CantorSystem::contains(lo)) return lo;
    if (hi_closed && CantorSystem::contains(hi)) return hi;
    if (lo < hi) return CantorSystem::point_in_open(lo, hi);
    return std::nullopt;
  };
  for (const auto& p : a.parts()) {
    Rational cur = p.lo;
    bool cur_closed = true;
    bool done = false;
    for (const auto& q : b.parts()) {
      if (q.hi < cur) continue;
      if (p.hi < q.lo) break;
      if (cur < q.lo)
        if (auto z = probe(cur, cur_closed, q.lo, false)) return z;
      cur = q.hi;
      cur_closed = false;
      if (p.hi <= cur) {
        done = true;
        break;
      }
    }
    if (done) continue;
    if (cur < p.hi || cur_closed)
      if (auto z = probe(cur, cur_closed, p.hi, true)) return z;
  }
  return std::nullopt;
}

// f(X ∩ [x - eps, x + eps]) as X ∩ (returned set).
IntervalSet cantor_ball_image(const CantorSystem& c, const Rational& x, const Rational& eps) {
  ClosedInterval ball(x - eps, x + eps);
  ClosedInterval core = c.core();
  std::vector<ClosedInterval> parts;
  for (const auto& p : c.pieces()) {
    Rational lo = max(ball.lo, p.map.domain.lo), hi = min(ball.hi, p.map.domain.hi);
    if (hi < lo) continue;
    Rational a = p.map.apply(lo), b = p.map.apply(hi);
    parts.push_back({min(a, b), max(a, b)});
  }
  if (ball.lo <= core.lo && core.hi <= ball.hi) {
    parts.push_back({Rational(0), Rational::pow3(-(c.depth() - 2))});
  } else if (ball.contains(Rational(0)) || (core.lo <= ball.hi && ball.lo <= core.hi)) {
    IntervalSet meet = IntervalSet(ball).intersect(IntervalSet(core));
    bool only_gap = !meet.empty() && !CantorSystem::leftmost_point(meet).has_value();
    if (!only_gap)
      throw Error(ErrorCode::limit, "ball about " + x.str() + " cuts the unresolved core; raise the depth");
  }
  return IntervalSet::normalize(std::move(parts));
}

void fill_ball_counter(ExpansivityVerdict& v, const Rational& x, const Rational& z, const Rational& eps,
                       const Rational& fx) {
  v.holds = Holds::falsified;
  v.counterexample = std::make_pair(Point(x), Point(z));
  v.constants["counter_epsilon"] = eps;
  v.violating_quantity = abs(z - fx);
}

ExpansivityVerdict ball_pl(const PiecewiseLinearMap& f, const IntervalSet& region, const Rational& mu,
                           const Rational& nu, const std::vector<Rational>& grid, std::uint64_t seed, int samples) {
  ExpansivityVerdict v = verdict(Property::ball_expanding);
  ClosedInterval hull(0, 1);
  std::vector<std::pair<Rational, Rational>> tests;
  std::vector<Rational> xs;
  for (const auto& p : region.parts()) {
    xs.push_back(p.lo);
    xs.push_back(p.hi);
    for (const auto& b : f.breakpoints())
      if (p.contains(b)) xs.push_back(b);
  }
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) xs.push_back(rng.uniform(region));
  for (const auto& x : xs)
    for (const auto& e : grid) tests.push_back({x, e});

  IntervalSet bad = pl_bad_set(f);
  bool analysis = true;
  if (!bad.empty()) {
    Rational d = set_distance(region, bad);
    v.constants["bad_distance"] = d;
    if (d < nu) {
      analysis = false;
      // Balls from the nearest region points reaching the bad parts.
      for (const auto& part : bad.parts())
        for (const Rational& target : {part.lo, part.hi}) {
          Rational x = nearest(region, target);
          Rational gap = abs(x - target);
          if (gap < nu) {
            tests.push_back({x, (gap + nu) / Rational(2)});
            if (gap.sign() > 0) tests.push_back({x, gap});
          }
        }
    }
  }
  auto m = min_slope_near(f, region.inflate(nu).intersect(IntervalSet(hull)));
  if (!m || *m < mu) analysis = false;

  for (const auto& [x, e] : tests) {
    Rational fx = f.eval(x);
    ClosedInterval image = pl_image(f, clamp_ball(hull, x, e));
    ClosedInterval target = clamp_ball(hull, fx, mu * e);
    if (auto z = uncovered(target, image)) {
      fill_ball_counter(v, x, *z, e, fx);
      v.detail = "closed image ball misses part of the target ball";
      return v;
    }
  }
  v.constants["tests"] = Rational(static_cast<long>(tests.size()));
  if (analysis) {
    v.holds = Holds::certified;
    v.detail = "breakpoint analysis: slopes >= mu near the region and no bad turning point within nu";
  } else {
    v.holds = Holds::undetermined;
    v.detail = "grid tests pass but the breakpoint analysis does not certify";
  }
  return v;
}

ExpansivityVerdict ball_quadratic(const QuadraticMap& q, const IntervalSet& region, const Rational& mu,
                                  const std::vector<Rational>& grid, std::uint64_t seed, int samples) {
  ExpansivityVerdict v = verdict(Property::ball_expanding);
  ClosedInterval hull = q.domain();
  std::vector<Rational> xs;
  for (const auto& p : region.parts()) {
    xs.push_back(p.lo);
    xs.push_back(p.hi);
    if (p.contains(q.critical_point())) xs.push_back(q.critical_point());
  }
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) xs.push_back(rng.uniform(region));
  for (const auto& x : xs)
    for (const auto& e : grid) {
      Rational fx = q.eval(x);
      ClosedInterval image = q.image(clamp_ball(hull, x, e));
      if (auto z = uncovered(clamp_ball(hull, fx, mu * e), image)) {
        fill_ball_counter(v, x, *z, e, fx);
        v.detail = "closed image ball misses part of the target ball";
        return v;
      }
    }
  v.holds = Holds::undetermined;
  v.detail = "grid tests pass; no continuum certification for quadratic maps";
  return v;
}

ExpansivityVerdict ball_cantor(const CantorSystem& c, const IntervalSet& region, const Rational& mu,
                               const std::vector<Rational>& grid) {
  ExpansivityVerdict v = verdict(Property::ball_expanding);
  std::vector<Rational> xs;
  for (const auto& p : region.parts())
    for (const auto& x : cantor_candidates(p)) xs.push_back(x);
  IntervalSet space(ClosedInterval(-1, 1));
  std::size_t skipped = 0;
  for (const auto& x : xs)
    for (const auto& e : grid) {
      IntervalSet image;
      try {
        image = cantor_ball_image(c, x, e);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::limit) throw;
        ++skipped;
        continue;
      }
      Rational fx = c.eval(x);
      IntervalSet target = IntervalSet(ClosedInterval(fx - mu * e, fx + mu * e)).intersect(space);
      if (auto z = cantor_point_outside(target, image)) {
        fill_ball_counter(v, x, *z, e, fx);
        v.detail = "a point of X near f(x) is not the image of any point of the ball";
        return v;
      }
    }
  v.holds = Holds::undetermined;
  v.detail = "grid tests pass" + (skipped ? " (" + std::to_string(skipped) + " balls below the resolved depth skipped)"
                                          : std::string());
  return v;
}

// ---- openness and injectivity ---------------------------------------------

struct Sides {
  bool below = false;
  bool above = false;
};

bool open_from_sides(const Sides& s, const Rational& fx, const ClosedInterval& hull) {
  return (s.below || fx == hull.lo) && (s.above || fx == hull.hi);
}

ExpansivityVerdict open_pl(const PiecewiseLinearMap& f, const Rational& x) {
  ExpansivityVerdict v = verdict(Property::open_on);
  if (x < Rational(0) || Rational(1) < x) throw Error(ErrorCode::domain, "point " + x.str() + " outside [0,1]");
  const auto& ps = f.pieces();
  std::optional<Rational> sl, sr;
  for (const auto& p : ps) {
    if (p.domain.lo < x && x <= p.domain.hi) sl = p.slope;
    if (p.domain.lo <= x && x < p.domain.hi) sr = p.slope;
  }
  Sides s;
  s.below = (sl && sl->sign() > 0) || (sr && sr->sign() < 0);
  s.above = (sl && sl->sign() < 0) || (sr && sr->sign() > 0);
  Rational fx = f.eval(x);
  bool ok = open_from_sides(s, fx, ClosedInterval(0, 1));
  v.holds = ok ? Holds::certified : Holds::falsified;
  if (!ok) {
    v.counterexample = std::make_pair(Point(x), Point(fx));
    v.detail = std::string("small neighbourhoods miss values ") + (s.below ? "above" : "below") + " f(x)";
  }
  return v;
}

ExpansivityVerdict open_quadratic(const QuadraticMap& q, const Rational& x) {
  ExpansivityVerdict v = verdict(Property::open_on);
  ClosedInterval dom = q.domain();
  if (!dom.contains(x)) throw Error(ErrorCode::domain, "point " + x.str() + " outside the domain");
  int d = q.derivative(1, x).sign();
  Sides s;
  if (d == 0) {
    s.below = true;  // both families have a maximum at c
  } else if (x == dom.lo) {
    (d > 0 ? s.above : s.below) = true;
  } else if (x == dom.hi) {
    (d > 0 ? s.below : s.above) = true;
  } else {
    s.below = s.above = true;
  }
  Rational fx = q.eval(x);
  bool ok = open_from_sides(s, fx, dom);
  v.holds = ok ? Holds::certified : Holds::falsified;
  if (!ok) {
    v.counterexample = std::make_pair(Point(x), Point(fx));
    v.detail = std::string("small neighbourhoods miss values ") + (s.below ? "above" : "below") + " f(x)";
  }
  return v;
}

ExpansivityVerdict open_cantor(const CantorSystem& c, const Rational& x) {
  ExpansivityVerdict v = verdict(Property::open_on);
  if (!CantorSystem::contains(x)) throw Error(ErrorCode::domain, "point " + x.str() + " outside X");
  Rational fx = c.eval(x);
  bool ok;
  if (x.is_zero()) {
    // f(X ∩ (-r, r)) ⊆ [0, inf) while X accumulates at 0 from the left.
    ok = false;
    v.detail = "images of small balls about 0 lie in [0, 1]";
  } else {
    // Each piece is an affine bijection onto its image, so only the
    // one-sided accumulation at x and at f(x) can differ.
    bool left = !CantorSystem::accumulates_from_left(fx) || CantorSystem::accumulates_from_left(x);
    bool right = !CantorSystem::accumulates_from_right(fx) || CantorSystem::accumulates_from_right(x);
    ok = left && right;
    if (!ok) v.detail = std::string("X accumulates at f(x) from the ") + (left ? "right" : "left") + " but the piece does not";
  }
  v.holds = ok ? Holds::certified : Holds::falsified;
  if (!ok) v.counterexample = std::make_pair(Point(x), Point(fx));
  return v;
}

// Points x < y with f(x) = f(y) and y - x < cap near the critical point b.
std::optional<std::pair<Rational, Rational>> merge_pair(const PiecewiseLinearMap& f, const Rational& b,
                                                        const Rational& cap) {
  const auto& ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].slope.is_zero() && ps[i].domain.contains(b)) {
      Rational w = min(ps[i].domain.length() / Rational(4), cap / Rational(2));
      Rational x = ps[i].domain.lo + w;
      return std::make_pair(x, x + w);
    }
  }
  for (std::size_t i = 1; i < ps.size(); ++i) {
    if (ps[i].domain.lo != b) continue;
    Rational sl = abs(ps[i - 1].slope), sr = abs(ps[i].slope);
    Rational t = min(cap / (Rational(2) * (sl + sr)),
                     min(ps[i - 1].domain.length() / (Rational(2) * sr), ps[i].domain.length() / (Rational(2) * sl)));
    return std::make_pair(b - t * sr, b + t * sl);
  }
  return std::nullopt;
}

IntervalSet pl_critical_parts(const PiecewiseLinearMap& f) {
  std::vector<ClosedInterval> parts;
  for (const auto& c : critical_set(System(f))) parts.push_back(ClosedInterval::point(c));
  for (const auto& p : f.pieces())
    if (p.slope.is_zero()) parts.push_back(p.domain);
  return IntervalSet::normalize(std::move(parts));
}

// ---- positive expansivity ---------------------------------------------------

// The pair stays within b until the orbits merge or the pair state repeats,
// so it stays within b forever. Running out of horizon proves nothing.
bool stays_close(const System& s, Point x, Point y, const Rational& b, int horizon) {
  std::vector<std::pair<Point, Point>> seen;
  for (int n = 0; n <= horizon; ++n) {
    if (!(distance(s, x, y) < b)) return false;
    if (x == y) return true;
    for (const auto& st : seen)
      if (st.first == x && st.second == y) return true;
    seen.emplace_back(x, y);
    x = eval(s, x);
    y = eval(s, y);
  }
  return false;
}

}  // namespace

ExpansivityVerdict check_expanding(const System& s, const RegionSpec& region, const Rational& delta, const Rational& mu,
                                   std::uint64_t seed) {
  return distance_check(s, Property::expanding, region, delta, mu, seed);
}

ExpansivityVerdict check_star(const System& s, const RegionSpec& region, const Rational& delta, const Rational& mu,
                              std::uint64_t seed) {
  return distance_check(s, Property::star, region, delta, mu, seed);
}

ExpansivityVerdict check_ball_expanding(const System& s, const RegionSpec& region, const Rational& mu,
                                        const Rational& nu, const std::vector<Rational>& eps_grid, std::uint64_t seed,
                                        int samples) {
  if (mu <= Rational(1)) throw Error(ErrorCode::invalid_argument, "mu must exceed 1");
  if (nu.sign() <= 0) throw Error(ErrorCode::invalid_argument, "nu must be positive");
  for (const auto& e : eps_grid)
    if (e.sign() <= 0 || !(e < nu)) throw Error(ErrorCode::invalid_argument, "grid value " + e.str() + " outside (0, nu)");
  ExpansivityVerdict v;
  if (is_symbolic(s) || std::holds_alternative<SLimitSystem>(s))
    throw Error(ErrorCode::unsupported, "ball expansion checks need an interval or Cantor system");
  IntervalSet reg = region.carrier.intersect(IntervalSet(space_hull(s)));
  if (reg.empty()) {
    v = verdict(Property::ball_expanding);
    v.holds = Holds::certified;
    v.detail = "empty region";
  } else if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    v = ball_pl(*f, reg, mu, nu, eps_grid, seed, samples);
  } else if (auto* c = std::get_if<CantorSystem>(&s)) {
    v = ball_cantor(*c, reg, mu, eps_grid);
  } else {
    v = ball_quadratic(std::get<QuadraticMap>(s), reg, mu, eps_grid, seed, samples);
  }
  v.constants["mu"] = mu;
  v.constants["nu"] = nu;
  return v;
}

std::optional<BallConstants> ball_expanding_constants(const PiecewiseLinearMap& f, const IntervalSet& region,
                                                      const Rational& nu_cap) {
  if (region.empty()) return std::nullopt;
  IntervalSet bad = pl_bad_set(f);
  Rational nu = bad.empty() ? nu_cap : min(nu_cap, set_distance(region, bad));
  if (nu.sign() <= 0) return std::nullopt;
  auto m = min_slope_near(f, region.inflate(nu).intersect(IntervalSet(ClosedInterval(0, 1))));
  if (!m || *m <= Rational(1)) return std::nullopt;
  return BallConstants{*m, nu};
}

CantorWindowImage cantor_window_image(const CantorSystem& s, int n) {
  if (n < 4 || n > s.depth()) throw Error(ErrorCode::invalid_argument, "window index must lie in [4, depth]");
  CantorWindowImage out;
  out.n = n;
  // X ∩ (-2/3^n, 2/3^n) = {0} ∪ core ∪ C_k for n < |k| <= depth.
  std::vector<ClosedInterval> parts{{Rational(0), Rational::pow3(-(s.depth() - 2))}};
  for (const auto& p : s.pieces())
    if (std::abs(p.index) > n) parts.push_back(CantorSystem::image_hull(p.index));
  out.image = IntervalSet::normalize(std::move(parts));
  auto same = [&](const IntervalSet& other) {
    auto a = cantor_point_outside(out.image, other);
    auto b = cantor_point_outside(other, out.image);
    return std::make_pair(!a && !b, a ? a : b);
  };
  auto printed = same(IntervalSet(ClosedInterval(Rational(0), Rational::pow3(-(n - 3)))));
  auto corrected = same(IntervalSet(ClosedInterval(Rational(0), Rational::pow3(-(n - 2)))));
  out.matches_printed = printed.first;
  out.printed_mismatch = printed.second;
  out.matches_corrected = corrected.first;
  return out;
}

ExpansivityVerdict check_open_at(const System& s, const Point& x) {
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) return open_pl(*f, as_rational(x));
  if (auto* q = std::get_if<QuadraticMap>(&s)) return open_quadratic(*q, as_rational(x));
  if (auto* c = std::get_if<CantorSystem>(&s)) return open_cantor(*c, as_rational(x));
  throw Error(ErrorCode::unsupported, "openness is checked for interval and Cantor systems only");
}

ExpansivityVerdict check_open_on(const System& s, const RegionSpec& region) {
  ExpansivityVerdict v = verdict(Property::open_on);
  if (!is_interval_system(s) && !std::holds_alternative<CantorSystem>(s))
    throw Error(ErrorCode::unsupported, "openness is checked for interval and Cantor systems only");
  IntervalSet reg = region.carrier.intersect(IntervalSet(space_hull(s)));
  std::vector<Rational> probes;
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    for (const auto& p : f->pieces()) {
      IntervalSet meet = reg.intersect(IntervalSet(p.domain));
      if (p.slope.is_zero() && !meet.empty()) {
        Rational x = *meet.leftmost();
        v.holds = Holds::falsified;
        v.counterexample = std::make_pair(Point(x), Point(f->eval(x)));
        v.detail = "flat piece";
        return v;
      }
    }
    probes = f->breakpoints();
  } else if (auto* q = std::get_if<QuadraticMap>(&s)) {
    probes = {q->domain().lo, q->critical_point(), q->domain().hi};
  } else {
    // Only 0 and ±2/3 (the points sent to 0 from one side) can fail.
    probes = {Rational(-2, 3), Rational(0), Rational(2, 3)};
  }
  for (const auto& x : probes) {
    if (!reg.contains(x)) continue;
    auto at = check_open_at(s, x);
    if (at.holds == Holds::falsified) return at;
  }
  v.holds = Holds::certified;
  v.detail = "every probe point of the region is open";
  return v;
}

ExpansivityVerdict check_locally_injective(const System& s, const RegionSpec& region) {
  ExpansivityVerdict v = verdict(Property::locally_injective);
  if (!is_interval_system(s)) {
    v.holds = Holds::certified;
    v.detail = "injective on small balls (piecewise bijective or a cylinder shift)";
    return v;
  }
  IntervalSet reg = region.carrier.intersect(IntervalSet(space_hull(s)));
  if (reg.empty()) {
    v.holds = Holds::certified;
    v.detail = "empty region";
    return v;
  }
  if (std::holds_alternative<CantorSystem>(s) || std::holds_alternative<SLimitSystem>(s)) {
    v.holds = Holds::certified;
    v.detail = "injective on each piece and on small balls about fixed points";
    return v;
  }
  IntervalSet crit;
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) crit = pl_critical_parts(*f);
  else crit = IntervalSet(ClosedInterval::point(std::get<QuadraticMap>(s).critical_point()));
  if (crit.empty()) {
    v.holds = Holds::certified;
    v.constants["margin"] = Rational(1);
    v.detail = "no critical points";
    return v;
  }
  Rational gap = set_distance(reg, crit);
  if (gap.sign() > 0) {
    v.holds = Holds::certified;
    v.constants["margin"] = gap;
    if (region.margin > gap) v.detail = "region margin exceeds the distance to the critical set";
    return v;
  }
  Rational c = *reg.intersect(crit).leftmost();
  std::pair<Rational, Rational> pair;
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    auto mp = merge_pair(*f, c, Rational(1, 8));
    pair = *mp;
  } else {
    const auto& q = std::get<QuadraticMap>(s);
    Rational t = min(Rational(1, 16), (q.domain().hi - c) / Rational(2));
    pair = {c - t, c + t};
  }
  v.holds = Holds::falsified;
  v.counterexample = std::make_pair(Point(pair.first), Point(pair.second));
  v.violating_quantity = abs(eval(s, pair.first) - eval(s, pair.second));
  v.detail = "critical point " + c.str() + " in the region";
  return v;
}

ExpansivityVerdict positively_expansive_falsify(const System& s, const Rational& b, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "horizon must be >= 1");
  if (b.sign() <= 0) throw Error(ErrorCode::invalid_argument, "b must be positive");
  ExpansivityVerdict v = verdict(Property::positively_expansive);
  v.constants["b"] = b;
  v.constants["horizon"] = Rational(horizon);
  auto found = [&](const Point& x, const Point& y, const std::string& how) {
    v.holds = Holds::falsified;
    v.counterexample = std::make_pair(x, y);
    v.violating_quantity = distance(s, x, y);
    v.detail = how;
    return v;
  };
  // Structured pairs.
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    for (const auto& c : critical_set(s))
      if (auto mp = merge_pair(*f, c, b)) {
        if (mp->first != mp->second && stays_close(s, mp->first, mp->second, b, horizon))
          return found(mp->first, mp->second, "orbits merge after one step near a turning point");
      }
  } else if (auto* q = std::get_if<QuadraticMap>(&s)) {
    Rational c = q->critical_point();
    Rational t = min(b / Rational(4), (q->domain().hi - c) / Rational(2));
    if (stays_close(s, c - t, c + t, b, horizon))
      return found(c - t, c + t, "symmetric pair about the critical point merges after one step");
  } else if (auto* od = std::get_if<OdometerSystem>(&s)) {
    // Adding one preserves the lowest differing digit, so distances are invariant.
    for (int k = 0; k < od->depth(); ++k)
      if (Rational::pow2(-k) < b) {
        Point x = od->from_index(0), y = od->from_index(std::uint64_t{1} << k);
        return found(x, y, "the odometer is an isometry and the pair starts closer than b");
      }
  } else if (auto* sl = std::get_if<SLimitSystem>(&s)) {
    for (int n = 1; n < sl->tail_depth(); ++n) {
      Rational x = -Rational::pow2(-n), y = -Rational::pow2(-n - 1);
      if (stays_close(s, x, y, b, horizon)) return found(x, y, "isolated fixed points closer than b");
    }
  }
  // Seeded pairs.
  Rng rng(seed);
  for (int trial = 0; trial < 64; ++trial) {
    Point x;
    if (auto* od = std::get_if<OdometerSystem>(&s)) {
      x = od->from_index(rng.below(std::uint64_t{1} << od->depth()));
    } else if (auto* sh = std::get_if<ShiftSystem>(&s)) {
      auto w = sh->random_extension("", rng);
      if (!w) break;
      x = *w;
    } else {
      ClosedInterval hull = space_hull(s);
      Rational u = rng.uniform(hull.lo, hull.hi);
      if (std::holds_alternative<CantorSystem>(s)) {
        x = *CantorSystem::ceil_point(u);
      } else if (std::holds_alternative<SLimitSystem>(s)) {
        x = max(u, Rational(0));
      } else {
        x = u;
      }
    }
    Rational r = b * Rational::pow2(-static_cast<long>(1 + rng.below(24)));
    Point y = sample_ball(s, x, r, rng);
    if (x == y) continue;
    if (distance(s, x, y) < b && stays_close(s, x, y, b, horizon))
      return found(x, y, "sampled pair stays within b until its orbits merge or repeat");
  }
  v.holds = Holds::undetermined;
  v.detail = "no pair stayed within b up to the horizon";
  return v;
}

ExpansivityVerdict certify_shift_positive_expansivity(const ShiftSystem& s, const Rational& b) {
  ExpansivityVerdict v = verdict(Property::positively_expansive);
  v.constants["b"] = b;
  if (b.sign() <= 0) throw Error(ErrorCode::invalid_argument, "b must be positive");
  if (b <= Rational(1)) {
    v.holds = Holds::certified;
    v.detail = "distinct points reach distance 1 at their first disagreement";
    return v;
  }
  // Every distance is at most 1 < b.
  for (char a : s.alphabet())
    for (char c : s.alphabet()) {
      if (a >= c) continue;
      auto x = s.extend(std::string(1, a));
      auto y = s.extend(std::string(1, c));
      if (x && y) {
        v.holds = Holds::falsified;
        v.counterexample = std::make_pair(Point(*x), Point(*y));
        v.violating_quantity = Rational(1);
        v.detail = "all distances are at most 1";
        return v;
      }
    }
  v.holds = Holds::certified;
  v.detail = "at most one point";
  return v;
}

Rational schwarzian(const QuadraticMap& q, const Rational& x) {
  Rational d1 = q.derivative(1, x);
  if (d1.is_zero()) throw Error(ErrorCode::domain, "Schwarzian undefined at the critical point " + x.str());
  Rational d2 = q.derivative(2, x), d3 = q.derivative(3, x);
  Rational r = d2 / d1;
  return d3 / d1 - Rational(3, 2) * r * r;
}

EpsNetResult eps_net_check(const System& s, const std::vector<Point>& targets, int m, const Rational& epsilon,
                           std::size_t cap) {
  if (m < 0) throw Error(ErrorCode::invalid_argument, "m must be >= 0");
  if (epsilon.sign() <= 0) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  EpsNetResult out;
  ClosedInterval hull = space_hull(s);
  std::vector<ClosedInterval> level;
  for (const auto& t : targets) level.push_back(ClosedInterval::point(as_rational(t)));
  if (std::holds_alternative<PiecewiseLinearMap>(s)) {
    std::vector<Rational> pts;
    for (const auto& t : targets) pts.push_back(as_rational(t));
    for (int i = 0; i < m && out.complete; ++i) {
      std::vector<Rational> next;
      for (const auto& p : pts) {
        auto pre = point_preimages(s, p);
        next.insert(next.end(), pre.begin(), pre.end());
        if (next.size() > cap) {
          out.complete = false;
          break;
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      pts.swap(next);
    }
    level.clear();
    for (const auto& p : pts) level.push_back(ClosedInterval::point(p));
  } else if (std::holds_alternative<QuadraticMap>(s)) {
    out.enclosure = true;
    IntervalSet cur = IntervalSet::normalize(level);
    for (int i = 0; i < m && out.complete; ++i) {
      cur = preimage_set(s, cur, 128);
      if (cur.size() > cap) out.complete = false;
    }
    level = cur.parts();
  } else {
    throw Error(ErrorCode::unsupported, "epsilon-net checks need piecewise linear or quadratic maps");
  }
  std::sort(level.begin(), level.end(), [](const ClosedInterval& a, const ClosedInterval& b) { return a.lo < b.lo; });
  out.points = level.size();
  if (level.empty()) {
    out.max_gap = hull.length();
  } else {
    // Upper bounds on the distance from any point of the hull to the set.
    out.max_gap = max(level.front().hi - hull.lo, hull.hi - level.back().lo);
    for (std::size_t i = 0; i + 1 < level.size(); ++i)
      out.max_gap = max(out.max_gap, (level[i + 1].hi - level[i].lo) / Rational(2));
  }
  out.is_net = out.complete && out.max_gap <= epsilon;
  return out;
}

namespace {

Holds combine(Holds a, Holds b) {
  if (a == Holds::falsified || b == Holds::falsified) return Holds::falsified;
  if (a == Holds::certified && b == Holds::certified) return Holds::certified;
  return Holds::undetermined;
}

std::vector<Rational> grid_below(const Rational& nu, int count) {
  std::vector<Rational> g;
  for (int k = 1; k <= count; ++k) g.push_back(nu * Rational(k, count + 1));
  return g;
}

}  // namespace

Theorem25Report theorem25_crosscheck(const System& s, const RegionSpec& region, std::optional<Rational> margin) {
  if (!is_interval_system(s) && !std::holds_alternative<CantorSystem>(s))
    throw Error(ErrorCode::unsupported, "the cross-check needs an interval or Cantor system");
  if (std::holds_alternative<SLimitSystem>(s))
    throw Error(ErrorCode::unsupported, "the cross-check needs an affine, quadratic or Cantor system");
  Theorem25Report rep;
  ClosedInterval hull = space_hull(s);
  IntervalSet reg = region.carrier.intersect(IntervalSet(hull));
  if (!margin) {
    IntervalSet crit;
    if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) crit = pl_critical_parts(*f);
    else if (auto* q = std::get_if<QuadraticMap>(&s)) crit = IntervalSet(ClosedInterval::point(q->critical_point()));
    if (std::holds_alternative<CantorSystem>(s) || reg.empty()) margin = Rational(0);
    else if (crit.empty()) margin = Rational(1, 8);
    else margin = set_distance(reg, crit) / Rational(2);
  }
  IntervalSet u = margin->sign() > 0 ? reg.inflate(*margin).intersect(IntervalSet(hull)) : reg;
  rep.neighbourhood = RegionSpec::of(u, *margin);
  Rational delta = margin->sign() > 0 ? *margin : Rational(1, 8);
  Rational just_above_one = Rational(1) + kTiny;

  rep.open_on = check_open_on(s, rep.neighbourhood);
  rep.locally_injective = check_locally_injective(s, rep.neighbourhood);
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    auto m = u.empty() ? std::nullopt : min_slope_near(*f, u);
    Rational mu = m && *m > Rational(1) ? *m : just_above_one;
    rep.expanding = check_expanding(s, rep.neighbourhood, delta, mu);
    if (auto bc = ball_expanding_constants(*f, u)) {
      rep.ball_expanding = check_ball_expanding(s, rep.neighbourhood, bc->mu, bc->nu, grid_below(bc->nu, 8));
    } else {
      Rational nu(1, 4);
      rep.ball_expanding = check_ball_expanding(s, rep.neighbourhood, just_above_one, nu, grid_below(nu, 8));
    }
  } else if (auto* q = std::get_if<QuadraticMap>(&s)) {
    IntervalSet reach = u.empty() ? u : u.inflate(delta).intersect(IntervalSet(hull));
    Rational bound = reach.empty() ? Rational(2) : Rational(2) * q->parameter() * reach.distance_to(q->critical_point());
    rep.expanding = check_expanding(s, rep.neighbourhood, delta, bound > Rational(1) ? bound : just_above_one);
    Rational nu(1, 8);
    rep.ball_expanding = check_ball_expanding(s, rep.neighbourhood, just_above_one, nu, grid_below(nu, 8));
  } else {
    const auto& c = std::get<CantorSystem>(s);
    rep.expanding = check_expanding(s, rep.neighbourhood, Rational(1, 9), Rational(3));
    std::vector<Rational> grid;
    for (int n = 4; n <= c.depth(); ++n) grid.push_back(Rational(2) * Rational::pow3(-n));
    rep.ball_expanding = check_ball_expanding(s, rep.neighbourhood, Rational(3), Rational(1, 9), grid);
  }
  rep.side1 = combine(rep.open_on.holds, rep.expanding.holds);
  rep.side2 = combine(rep.ball_expanding.holds, rep.locally_injective.holds);
  bool clash = (rep.side1 == Holds::certified && rep.side2 == Holds::falsified) ||
               (rep.side1 == Holds::falsified && rep.side2 == Holds::certified);
  rep.consistent = !clash;
  return rep;
}

}  // namespace shadowlab
