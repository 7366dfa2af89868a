#include <algorithm>

#include "shadowlab/shadowing.hpp"

namespace shadowlab {

namespace {

const Rational kInset = Rational(1) - Rational::pow2(-10);

// Some z with f^k(z) in region for k <= steps and f^steps(z) = x, leftmost first.
std::optional<Rational> backward_extension(const System& s, const IntervalSet& region, const Rational& x, int steps) {
  if (steps == 0) return x;
  for (const auto& p : point_preimages(s, x)) {
    if (!region.contains(p)) continue;
    if (auto z = backward_extension(s, region, p, steps - 1)) return z;
  }
  return std::nullopt;
}

}  // namespace

bool covers_region(const System& s, const IntervalSet& region, std::uint64_t seed, int samples) {
  if (region.empty()) return true;
  std::vector<Rational> probes;
  for (const auto& iv : region.parts()) {
    probes.push_back(iv.lo);
    probes.push_back(iv.hi);
    probes.push_back(iv.midpoint());
  }
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) probes.push_back(rng.uniform(region));
  for (const auto& y : probes) {
    auto pre = point_preimages(s, y);
    if (std::none_of(pre.begin(), pre.end(), [&](const Rational& p) { return region.contains(p); })) return false;
  }
  return true;
}

ShadowCertificate h_shadow_via_iterate(const System& s, int n, const IntervalSet& region, const PseudoOrbit& orbit,
                                       const Rational& epsilon) {
  auto* f = std::get_if<PiecewiseLinearMap>(&s);
  if (!f) throw Error(ErrorCode::unsupported, "iterate reduction needs a piecewise linear map");
  if (n < 1) throw Error(ErrorCode::invalid_argument, "iterate must be >= 1");
  if (orbit.points.empty()) throw Error(ErrorCode::invalid_argument, "empty pseudo-orbit");
  for (const auto& p : orbit.points)
    if (!region.contains(as_rational(p))) throw Error(ErrorCode::domain, "orbit point " + point_str(p) + " outside the region");
  if (!covers_region(s, region, 0x5eed))
    throw Error(ErrorCode::domain, "f(region) does not cover the region");
  if (n == 1) return h_shadow_solve(s, orbit, epsilon);

  std::size_t m = orbit.last();
  int r = static_cast<int>(m % static_cast<std::size_t>(n));
  int pre = r == 0 ? 0 : n - r;
  auto z = backward_extension(s, region, as_rational(orbit.points[0]), pre);
  if (!z) throw Error(ErrorCode::infeasible, "no backward extension inside the region");

  std::vector<Point> y;
  Rational cur = *z;
  for (int k = 0; k < pre; ++k) {
    y.push_back(cur);
    cur = f->eval(cur);
  }
  y.insert(y.end(), orbit.points.begin(), orbit.points.end());

  PseudoOrbit sampled;
  for (std::size_t i = 0; i < y.size(); i += static_cast<std::size_t>(n)) sampled.points.push_back(y[i]);
  System big(iterate_map(*f, n));
  sampled.claimed_delta = verify_jumps(big, sampled);

  Rational lip = f->max_abs_slope();
  Rational eps_n = finite_horizon_delta(lip, n, epsilon);

  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  cert.constants["epsilon_iterate"] = eps_n;
  cert.constants["n"] = Rational(n);
  cert.constants["r"] = Rational(r);
  cert.constants["backward_steps"] = Rational(pre);
  cert.constants["sampled_max_jump"] = *sampled.claimed_delta;
  cert.constants["orbit_max_jump"] = verify_jumps(s, orbit);
  if (*z != as_rational(orbit.points[0])) cert.constants["backward_start"] = *z;

  ShadowCertificate inner = h_shadow_solve(big, sampled, eps_n);
  if (inner.verdict != Tri::yes) {
    cert.verdict = Tri::no;
    cert.note = "sampled orbit of f^" + std::to_string(n) + " has no exact-hit shadow at epsilon/amplification";
    return cert;
  }
  Point w = iterate(s, *inner.witness, pre);
  DeviationReport rep = deviation(s, w, orbit);
  bool ok = rep.exact_hit;
  for (std::size_t i = 0; i < m; ++i) ok = ok && rep.per_step[i] <= epsilon;
  cert.report = rep;
  if (!ok) {
    cert.verdict = Tri::no;
    cert.note = "pushed-forward witness leaves the epsilon tube between sample times";
    return cert;
  }
  cert.verdict = Tri::yes;
  cert.witness = w;
  cert.feasible = IntervalSet(ClosedInterval::point(as_rational(w)));
  return cert;
}

bool StagedShadowLog::complete() const {
  if (failed_stage || condition_checks.empty()) return false;
  for (const auto& c : condition_checks)
    if (!(c[0] && c[1] && c[2] && c[3])) return false;
  return true;
}

StagedShadowLog asymptotic_shadow(const System& s, const PseudoOrbit& orbit, const IntervalSet& region,
                                  const Rational& epsilon, const Rational& mu, const Rational& nu, int stages) {
  if (!orbit.schedule) throw Error(ErrorCode::invalid_argument, "asymptotic shadowing needs a decay schedule");
  if (stages < 0) throw Error(ErrorCode::invalid_argument, "stage count must be >= 0");
  if (epsilon.sign() <= 0) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  StagedShadowLog log;
  std::size_t m = orbit.last();
  log.truncation_horizon = m;
  std::vector<Rational> jump = jumps(s, orbit);

  auto region_ok = [&](const Point& p) { return region.distance_to(as_rational(p)) < epsilon; };

  if (verify_jumps(s, orbit).is_zero()) {
    log.stage_points.push_back(orbit.points[0]);
    log.stage_horizons = {0, m};
    log.stage_bounds.push_back(epsilon / Rational(2));
    log.stage_deltas.push_back(Rational(0));
    bool d_ok = std::all_of(orbit.points.begin(), orbit.points.end(), region_ok);
    log.condition_checks.push_back({true, true, true, d_ok});
    log.terminal_deviation = Rational(0);
    log.note = "true orbit: a single stage with z_0 = x_0";
    return log;
  }

  // Tolerances and horizons. Stage i solves at radius eps_i (1 - 2^-10) so the
  // strict bounds hold; k_i is the first index after k_{i-1} from which every
  // jump, and the schedule, is within delta_i.
  std::vector<Rational> eps, radius, delta;
  for (int i = 0; i <= stages + 1; ++i) {
    eps.push_back(epsilon * Rational::pow2(-(i + 1)));
    radius.push_back(eps.back() * kInset);
    delta.push_back(ball_expanding_delta(mu, nu, radius.back()).delta);
  }
  std::vector<std::size_t> k{0};
  for (int i = 1; i <= stages + 1; ++i) {
    std::size_t idx = k.back() + 1;
    while (idx <= m) {
      bool tail_ok = true;
      for (std::size_t t = idx; t < jump.size() && tail_ok; ++t) tail_ok = jump[t] <= delta[static_cast<std::size_t>(i)];
      bool sched_ok = orbit.schedule->bound(idx) * kInset <= delta[static_cast<std::size_t>(i)];
      if (tail_ok && sched_ok) break;
      ++idx;
    }
    if (idx > m) {
      log.note = "orbit truncated before stage horizon " + std::to_string(i);
      log.failed_stage = static_cast<std::size_t>(i - 1);
      return log;
    }
    k.push_back(idx);
  }
  // Every jump after k_stages is within delta_stages, so the last stage can
  // run to the end of the orbit and the terminal deviation covers the tail.
  k.back() = m;
  log.stage_horizons = k;

  for (int i = 0; i <= stages; ++i) {
    auto ui = static_cast<std::size_t>(i);
    log.stage_bounds.push_back(eps[ui]);
    log.stage_deltas.push_back(delta[ui]);
    PseudoOrbit spliced;
    if (i == 0) {
      spliced.points.assign(orbit.points.begin(), orbit.points.begin() + static_cast<long>(k[1]) + 1);
    } else {
      Point p = log.stage_points.back();
      for (std::size_t j = 0; j <= k[ui]; ++j) {
        spliced.points.push_back(p);
        if (j < k[ui]) p = eval(s, p);
      }
      spliced.points.insert(spliced.points.end(), orbit.points.begin() + static_cast<long>(k[ui]) + 1,
                            orbit.points.begin() + static_cast<long>(k[ui + 1]) + 1);
    }
    ShadowCertificate cert = h_shadow_solve(s, spliced, radius[ui]);
    if (cert.verdict != Tri::yes) {
      log.failed_stage = ui;
      log.note = "stage " + std::to_string(i) + " has no exact-hit shadow";
      return log;
    }
    Point z = *cert.witness;
    std::array<bool, 4> c{true, true, true, true};
    Point fz = z;
    Point fprev = i > 0 ? log.stage_points.back() : z;
    for (std::size_t j = 0; j <= k[ui + 1]; ++j) {
      if (j > 0) {
        fz = eval(s, fz);
        if (i > 0 && j <= k[ui]) fprev = eval(s, fprev);
      }
      if (i > 0 && j <= k[ui]) c[0] = c[0] && distance(s, fprev, fz) < eps[ui];
      if (j > k[ui] || (i == 0 && j == 0)) c[1] = c[1] && distance(s, fz, orbit.points[j]) < eps[ui];
      c[3] = c[3] && region_ok(fz);
    }
    c[2] = distance(s, fz, orbit.points[k[ui + 1]]).is_zero();
    log.stage_points.push_back(z);
    log.condition_checks.push_back(c);
    if (i == stages) {
      Rational worst(0);
      Point p = z;
      for (std::size_t j = 0; j <= k[ui + 1]; ++j) {
        if (j > 0) p = eval(s, p);
        if (j > k[ui]) worst = max(worst, distance(s, p, orbit.points[j]));
      }
      log.terminal_deviation = worst;
    }
  }
  return log;
}

NonShadowWitness nonshadow_witness_tent(const Rational& lambda, const Rational& epsilon, const Rational& delta,
                                        int recurrence_horizon, std::size_t max_length) {
  if (!(Rational(1) < lambda && lambda < Rational(2)))
    throw Error(ErrorCode::invalid_argument, "tent slope must satisfy 1 < lambda < 2");
  if (epsilon.sign() <= 0 || delta.sign() < 0) throw Error(ErrorCode::invalid_argument, "need epsilon > 0 and delta >= 0");
  if (recurrence_horizon < 1 || max_length < 4) throw Error(ErrorCode::invalid_argument, "horizon and length too small");
  System t(tent_map(lambda));
  const Rational c(1, 2);
  NonShadowWitness out;
  out.lambda = lambda;
  out.epsilon = epsilon;
  out.delta = delta;
  out.recurrence_horizon = recurrence_horizon;
  Rational x = c, gap(1);
  for (int k = 1; k <= recurrence_horizon; ++k) {
    x = eval(t, x);
    gap = min(gap, abs(x - c));
  }
  out.recurrence_gap = gap;
  if (gap <= Rational(2) * epsilon)
    throw Error(ErrorCode::infeasible, "critical orbit returns within 2 epsilon of c (gap " + gap.str() + ")");

  Rational tc = eval(t, c), t2c = eval(t, tc);
  auto build = [&](const Rational& x2, std::size_t len) {
    PseudoOrbit o;
    o.points = {c, tc, x2};
    while (o.points.size() < len) o.points.push_back(eval(t, o.points.back()));
    o.claimed_delta = delta;
    return o;
  };
  bool first = true;
  for (const char* side : {"below", "above"}) {
    Rational x2 = std::string(side) == "below" ? t2c - delta / Rational(2) : t2c + delta / Rational(2);
    if (x2 < Rational(0) || Rational(1) < x2) continue;
    PseudoOrbit longest = build(x2, max_length);
    ShadowCertificate cert = shadow_oracle(t, longest, epsilon);
    if (first || cert.verdict == Tri::no) {
      out.orbit = longest;
      out.certificate = cert;
      out.side = side;
      out.orbit_length = max_length;
      first = false;
    }
    if (cert.verdict != Tri::no) continue;
    // Emptiness is monotone in the length; find the shortest empty prefix.
    std::size_t lo = 3, hi = max_length;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (shadow_oracle(t, build(x2, mid), epsilon).verdict == Tri::no) hi = mid;
      else lo = mid + 1;
    }
    out.orbit = build(x2, hi);
    out.certificate = shadow_oracle(t, out.orbit, epsilon, SolveOptions{true});
    out.orbit_length = hi;
    return out;
  }
  return out;
}

int slimit_minimal_n(const Rational& delta) {
  if (delta.sign() <= 0) throw Error(ErrorCode::invalid_argument, "delta must be positive");
  for (int n = 1; n <= 62; ++n)
    if (Rational::pow2(-n) < delta && Rational::pow2(-(1L << n)) < delta) return n;
  throw Error(ErrorCode::limit, "delta too small for the tail depth cap");
}

SLimitCheck slimit_counterexample_check(const SLimitSystem& s, int n, const Rational& epsilon, const Rational& delta,
                                        std::size_t horizon) {
  if (n < 1 || n > s.tail_depth()) throw Error(ErrorCode::invalid_argument, "N must lie in [1, tail depth]");
  if (epsilon.sign() <= 0 || delta.sign() <= 0) throw Error(ErrorCode::invalid_argument, "epsilon and delta must be positive");
  System sys(s);
  Rational gn(1, 2);
  for (int k = 0; k < n; ++k) gn = s.eval(gn);
  Rational tail = -Rational::pow2(-n);
  if (!(gn < delta)) throw Error(ErrorCode::invalid_argument, "g^N(1/2) = " + gn.str() + " is not below delta");
  if (!(-tail < delta)) throw Error(ErrorCode::invalid_argument, "2^-N is not below delta");

  SLimitCheck out;
  out.n = n;
  out.epsilon = epsilon;
  out.delta = delta;
  out.horizon = horizon;
  Rational x(1, 2);
  for (int k = 0; k <= n; ++k) {
    out.gamma.points.push_back(x);
    x = s.eval(x);
  }
  out.gamma.points.push_back(Rational(0));
  for (std::size_t k = 0; k < horizon; ++k) out.gamma.points.push_back(tail);
  out.max_jump = verify_jumps(sys, out.gamma);
  out.gamma.claimed_delta = delta;
  out.is_pseudo_orbit = out.max_jump < delta;

  // Points <= 0 are fixed and isolated, [0,1] is invariant (g(0) = 0, g(1) = 1,
  // g increasing) and sits at distance 2^-N from the tail, so only the tail
  // point itself has an orbit converging to it.
  bool fixed = true;
  for (int k = 1; k <= s.tail_depth(); ++k) {
    Rational p = -Rational::pow2(-k);
    fixed = fixed && s.eval(p) == p;
  }
  bool invariant = s.eval(Rational(0)).is_zero() && s.eval(Rational(1)) == Rational(1) &&
                   s.eval(Rational(1, 3)) < s.eval(Rational(2, 3));
  out.tail_unique = fixed && invariant && Rational(0) - tail > Rational(0);

  DeviationReport rep = deviation(sys, tail, out.gamma);
  out.step0_deviation = rep.per_step[0];
  out.max_deviation = rep.max_deviation;
  out.deviation_exceeds = Rational(1, 2) <= rep.max_deviation && epsilon < rep.max_deviation;
  return out;
}

}  // namespace shadowlab
