#include "shadowlab/shadowing.hpp"

namespace shadowlab::detail {

namespace {

ClosedInterval round_out(const QuadraticMap& q, const ClosedInterval& iv, unsigned bits) {
  ClosedInterval dom = q.domain();
  return {max(floor_dyadic(iv.lo, bits), dom.lo), min(ceil_dyadic(iv.hi, bits), dom.hi)};
}

ClosedInterval tube(const QuadraticMap& q, const Rational& x, const Rational& eps) {
  ClosedInterval dom = q.domain();
  return {max(x - eps, dom.lo), min(x + eps, dom.hi)};
}

bool inside(const ClosedInterval& inner, const ClosedInterval& outer) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

Rational spread(const ClosedInterval& j, const Rational& x) { return max(abs(j.lo - x), abs(j.hi - x)); }

// Forward enclosures J_0 = start, J_{i+1} = round_out(f(J_i)). Fails (returns
// false) when some J_i with 0 < i <= check_to leaves its tube, or when
// monotone is requested and some J_i (i < steps) has c in its interior.
bool forward(const QuadraticMap& q, const PseudoOrbit& orbit, const Rational& eps, ClosedInterval start,
             std::size_t steps, std::size_t check_to, bool monotone, unsigned bits, std::vector<ClosedInterval>& out) {
  out.assign(1, start);
  Rational c = q.critical_point();
  for (std::size_t i = 1; i <= steps; ++i) {
    const ClosedInterval& prev = out.back();
    if (monotone && prev.lo < c && c < prev.hi) return false;
    ClosedInterval next = round_out(q, q.image(prev), bits);
    if (i <= check_to && !inside(next, tube(q, as_rational(orbit.points[i]), eps))) return false;
    out.push_back(next);
  }
  return true;
}

}  // namespace

ShadowCertificate quadratic_oracle(const QuadraticMap& q, const PseudoOrbit& orbit, const Rational& epsilon,
                                   const SolveOptions& opt) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  System sys(q);
  std::size_t m = orbit.last();
  for (unsigned bits = opt.precision; bits <= opt.max_precision; bits *= 2) {
    cert.precision_used = bits;
    IntervalSet t(tube(q, as_rational(orbit.points[m]), epsilon));
    std::vector<IntervalSet> chain{t};
    for (std::size_t i = m; i-- > 0 && !t.empty();) {
      t = IntervalSet(tube(q, as_rational(orbit.points[i]), epsilon)).intersect(preimage_set(sys, t, bits));
      chain.push_back(t);
    }
    cert.feasible = t;
    if (opt.transcript) cert.transcript.assign(chain.rbegin(), chain.rend());
    if (t.empty()) {
      cert.verdict = Tri::no;
      cert.note = "outer enclosure of the feasible set is empty";
      return cert;
    }
    std::vector<ClosedInterval> path;
    for (const auto& part : t.parts()) {
      for (const Rational& y : {floor_dyadic(part.midpoint(), bits), part.lo, part.hi}) {
        if (!part.contains(y)) continue;
        if (!forward(q, orbit, epsilon, ClosedInterval::point(y), m, m, false, bits, path)) continue;
        DeviationReport rep;
        rep.max_deviation = Rational(0);
        for (std::size_t i = 0; i <= m; ++i) {
          rep.per_step.push_back(spread(path[i], as_rational(orbit.points[i])));
          rep.max_deviation = max(rep.max_deviation, rep.per_step.back());
        }
        rep.exact_hit = false;
        cert.verdict = Tri::yes;
        cert.witness = y;
        cert.report = rep;
        cert.note = "per-step deviations are enclosure upper bounds";
        return cert;
      }
    }
  }
  cert.verdict = Tri::unknown;
  cert.note = "no certified witness up to the precision cap";
  return cert;
}

ShadowCertificate quadratic_h_solve(const QuadraticMap& q, const PseudoOrbit& orbit, const Rational& epsilon,
                                    const SolveOptions& opt) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  System sys(q);
  std::size_t m = orbit.last();
  const Rational& target = as_rational(orbit.points[m]);
  if (m == 0) {
    cert.verdict = Tri::yes;
    cert.witness = target;
    cert.report = deviation(sys, target, orbit);
    return cert;
  }
  for (unsigned bits = opt.precision; bits <= opt.max_precision; bits *= 2) {
    cert.precision_used = bits;
    IntervalSet t(ClosedInterval::point(target));
    for (std::size_t i = m; i-- > 0 && !t.empty();)
      t = IntervalSet(tube(q, as_rational(orbit.points[i]), epsilon)).intersect(preimage_set(sys, t, bits));
    cert.feasible = t;
    if (t.empty()) {
      cert.verdict = Tri::no;
      cert.note = "outer enclosure of the exact-hit set is empty";
      return cert;
    }
    Rational ulp = Rational::pow2(-static_cast<long>(bits));
    ClosedInterval t0 = tube(q, as_rational(orbit.points[0]), epsilon);
    // Where |f'| is small the end images of a narrow enclosure differ from
    // x_m by less than the rounding, so the enclosure is widened in steps.
    for (const auto& part : t.parts())
      for (long widen : {0L, 8L, 16L, 32L}) {
        Rational w = max(part.length(), ulp) * Rational::pow2(widen);
        Rational lo = max(part.lo - w, t0.lo), hi = min(part.hi + w, t0.hi);
        if (!(lo < hi)) continue;
        ClosedInterval start(lo, hi);
        std::vector<ClosedInterval> path, left, right;
        if (!forward(q, orbit, epsilon, start, m, m - 1, true, bits, path)) continue;
        forward(q, orbit, epsilon, ClosedInterval::point(lo), m, 0, false, bits, left);
        forward(q, orbit, epsilon, ClosedInterval::point(hi), m, 0, false, bits, right);
        const ClosedInterval& a = left.back();
        const ClosedInterval& b = right.back();
        bool bracket = (a.hi < target && target < b.lo) || (b.hi < target && target < a.lo);
        if (!bracket) continue;
        DeviationReport rep;
        rep.max_deviation = Rational(0);
        for (std::size_t i = 0; i < m; ++i) {
          rep.per_step.push_back(spread(path[i], as_rational(orbit.points[i])));
          rep.max_deviation = max(rep.max_deviation, rep.per_step.back());
        }
        rep.per_step.push_back(Rational(0));
        rep.exact_hit = true;
        cert.verdict = Tri::yes;
        cert.witness_enclosure = start;
        cert.witness = start.midpoint();
        cert.report = rep;
        cert.note = "f^m is monotone on the enclosure and its end images bracket x_m; deviations are upper bounds";
        return cert;
      }
  }
  cert.verdict = Tri::unknown;
  cert.note = "no bracketing monotone enclosure up to the precision cap";
  return cert;
}

}  // namespace shadowlab::detail
