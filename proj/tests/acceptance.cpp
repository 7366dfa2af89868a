// Acceptance criteria. Each criterion prints one line with its verdict, a
// short measurement and its wall time against a fixed budget. Oracles here
// recompute the claims with code independent of the solver under test.
//
//   acceptance        run all criteria
//   acceptance N      run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>

#include "shadowlab/scenarios.hpp"

using namespace shadowlab;

namespace {

const Rational kHalf(1, 2);
const std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string num(std::size_t n) { return std::to_string(n); }
std::string frac(std::size_t a, std::size_t b) { return num(a) + "/" + num(b); }

// ---- independent helpers ---------------------------------------------------

long long floor_scaled(const Rational& x, unsigned bits) {
  Rational y = x * Rational::pow2(bits);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), y.raw().get_num_mpz_t(), y.raw().get_den_mpz_t());
  return q.get_si();
}

long long ceil_scaled(const Rational& x, unsigned bits) {
  Rational y = x * Rational::pow2(bits);
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), y.raw().get_num_mpz_t(), y.raw().get_den_mpz_t());
  return q.get_si();
}

// Roughly -log2 of a positive rational.
long width_bits(const Rational& w) {
  return static_cast<long>(mpz_sizeinbase(w.raw().get_den_mpz_t(), 2)) -
         static_cast<long>(mpz_sizeinbase(w.raw().get_num_mpz_t(), 2));
}

Rational tent(const Rational& lambda, const Rational& x) { return lambda * min(x, Rational(1) - x); }

// Exact image of [a, b] under a piecewise linear map, piece by piece.
IntervalSet pl_image(const PiecewiseLinearMap& f, const Rational& a, const Rational& b) {
  std::vector<ClosedInterval> parts;
  const auto& bp = f.breakpoints();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    Rational lo = max(a, bp[i]), hi = min(b, bp[i + 1]);
    if (hi < lo) continue;
    Rational u = f.eval(lo), v = f.eval(hi);
    parts.emplace_back(min(u, v), max(u, v));
  }
  return IntervalSet::normalize(parts);
}

// B_{mu eps}(f(x)) ∩ [0,1] ⊆ f(B_eps(x) ∩ [0,1]) at every x of the sample set.
std::size_t ball_violations(const PiecewiseLinearMap& f, const std::vector<Rational>& xs, const Rational& mu,
                            const std::vector<Rational>& eps_grid) {
  std::size_t bad = 0;
  for (const auto& eps : eps_grid)
    for (const auto& x : xs) {
      IntervalSet img = pl_image(f, max(x - eps, Rational(0)), min(x + eps, Rational(1)));
      Rational fx = f.eval(x);
      IntervalSet want(ClosedInterval(max(fx - mu * eps, Rational(0)), min(fx + mu * eps, Rational(1))));
      if (!img.contains(want)) ++bad;
    }
  return bad;
}

// The witness traces the orbit within eps and lands on its last point.
bool traces_exactly(const PiecewiseLinearMap& f, const Rational& y0, const PseudoOrbit& o, const Rational& eps) {
  Rational y = y0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    const Rational& x = as_rational(o.points[i]);
    if (abs(y - x) > eps) return false;
    if (i + 1 < o.size()) y = f.eval(y);
  }
  return y == as_rational(o.points.back());
}

Rational max_jump(const PiecewiseLinearMap& f, const PseudoOrbit& o) {
  Rational m(0);
  for (std::size_t i = 0; i + 1 < o.size(); ++i)
    m = max(m, abs(f.eval(as_rational(o.points[i])) - as_rational(o.points[i + 1])));
  return m;
}

// Outward-rounded enclosure of 1 - mu x^2 over [a, b].
ClosedInterval quad_step(const Rational& mu, const ClosedInterval& x, unsigned bits) {
  Rational a2 = x.lo * x.lo, b2 = x.hi * x.hi;
  Rational lo_sq = x.lo.sign() >= 0 ? a2 : (x.hi.sign() <= 0 ? b2 : Rational(0));
  Rational hi_sq = max(a2, b2);
  return {floor_dyadic(Rational(1) - mu * hi_sq, bits), ceil_dyadic(Rational(1) - mu * lo_sq, bits)};
}

// Symbol sequence of a finite-or-eventually-periodic word, independent of SymbolWord::at.
char symbol(const SymbolWord& w, std::size_t i) {
  if (i < w.prefix.size()) return w.prefix[i];
  return w.cycle[(i - w.prefix.size()) % w.cycle.size()];
}

Rational word_distance(const SymbolWord& a, const SymbolWord& b) {
  std::size_t bound = std::max(a.prefix.size(), b.prefix.size()) + a.cycle.size() * b.cycle.size() + 1;
  for (std::size_t k = 0; k < bound; ++k)
    if (symbol(a, k) != symbol(b, k)) return Rational::pow2(-static_cast<long>(k));
  return Rational(0);
}

SymbolWord shift_by(const SymbolWord& w, std::size_t n) {
  SymbolWord out = w;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.prefix.empty()) out.prefix.erase(0, 1);
    else out.cycle = out.cycle.substr(1) + out.cycle[0];
  }
  return out;
}

bool golden_admissible(const SymbolWord& w) {
  std::string s = w.prefix + w.cycle + w.cycle + w.cycle.substr(0, 1);
  return s.find("11") == std::string::npos;
}

// ---- criteria --------------------------------------------------------------

Outcome cantor() {
  CantorSystem cs(6);
  System s(cs);
  Outcome out;
  auto e = check_expanding(s, RegionSpec::interval(-1, 1), Rational(1, 9), 3, kSeed);
  bool exp_ok = e.holds == Holds::certified;
  std::string exp_note = "expanding " + holds_name(e.holds);
  if (e.counterexample) {
    Rational x = as_rational(e.counterexample->first), y = as_rational(e.counterexample->second);
    Rational ratio = abs(cs.eval(x) - cs.eval(y)) / abs(x - y);
    exp_note += " at (" + x.str() + ", " + y.str() + ") ratio " + ratio.str();
  }

  std::vector<Rational> grid;
  for (int n = 4; n <= 6; ++n) grid.push_back(Rational(2) * Rational::pow3(-n));
  auto b = check_ball_expanding(s, RegionSpec::interval(0, 0), 3, Rational(1, 9), grid, kSeed);
  bool ball_ok = b.holds == Holds::falsified && b.counterexample && as_rational(b.counterexample->first).is_zero();

  // Points of X: endpoints of the level-12 intervals of C and of C - 1.
  const int level = 12;
  std::vector<Rational> pts;
  for (std::uint32_t m = 0; m < (1u << level); ++m) {
    Rational left(0);
    for (int i = 0; i < level; ++i)
      if (m >> i & 1u) left += Rational(2) * Rational::pow3(-(i + 1));
    for (const Rational& p : {left, left + Rational::pow3(-level)}) {
      pts.push_back(p);
      pts.push_back(p - Rational(1));
    }
  }
  std::string ident;
  bool ident_ok = true;
  for (int n = 4; n <= 6; ++n) {
    Rational w = Rational(2) * Rational::pow3(-n), top = Rational::pow3(-(n - 3));
    std::set<std::string> images;
    Rational sup(0);
    bool inside = true;
    for (const auto& p : pts) {
      if (!(-w < p && p < w)) continue;
      Rational v = cs.eval(p);
      images.insert(v.str());
      sup = max(sup, v);
      inside = inside && v.sign() >= 0 && v <= top;
    }
    // Every point of X ∩ [0, top] at level 8 should be an image.
    std::size_t missing = 0;
    for (const auto& p : pts)
      if (p.sign() >= 0 && p <= top && p.denominator() <= mpz_class(6561) && !images.count(p.str())) ++missing;
    bool ok = inside && missing == 0;
    ident_ok = ident_ok && ok;
    ident += " n=" + std::to_string(n) + (ok ? " ok" : " sup " + sup.str() + " vs " + top.str());
  }
  out.pass = exp_ok && ball_ok && ident_ok;
  out.detail = exp_note + "; ball at 0 " + holds_name(b.holds) + "; window identity" + ident;
  return out;
}

Outcome tent_ball() {
  auto f = tent_map(2);
  System s(f);
  Rational nu(1, 4);
  std::vector<Rational> grid;
  for (int k = 1; k <= 50; ++k) grid.push_back(nu * Rational(k, 51));
  auto b = check_ball_expanding(s, RegionSpec::interval(0, 1), 2, nu, grid, kSeed);
  std::vector<Rational> xs;
  for (int k = 0; k <= 128; ++k) xs.emplace_back(k, 128);
  for (const auto& eps : grid) {
    xs.push_back(kHalf - eps);
    xs.push_back(kHalf + eps);
  }
  std::size_t bad = ball_violations(f, xs, 2, grid);

  auto symmetric = [](const ExpansivityVerdict& v) {
    if (!v.counterexample) return false;
    Rational x = as_rational(v.counterexample->first), y = as_rational(v.counterexample->second);
    return x != y && x + y == Rational(1);
  };
  Rational delta(1, 10);
  auto e = check_expanding(s, RegionSpec::interval(0, 1), delta, 2, kSeed);
  bool e_ok = e.holds == Holds::falsified && symmetric(e);
  if (e_ok) {
    Rational x = as_rational(e.counterexample->first), y = as_rational(e.counterexample->second);
    e_ok = abs(x - y) < delta && abs(f.eval(x) - f.eval(y)) < Rational(2) * abs(x - y);
  }
  auto li = check_locally_injective(s, RegionSpec::interval(0, 1));
  bool li_ok = li.holds == Holds::falsified && symmetric(li) &&
               f.eval(as_rational(li.counterexample->first)) == f.eval(as_rational(li.counterexample->second));
  Outcome out;
  out.pass = b.holds == Holds::certified && bad == 0 && e_ok && li_ok;
  out.detail = "ball " + holds_name(b.holds) + ", oracle violations " + num(bad) + " over " +
               num(grid.size() * xs.size()) + " (eps, x); expanding " + holds_name(e.holds) +
               (e_ok ? " symmetric" : "") + "; locally injective " + holds_name(li.holds) + (li_ok ? " symmetric" : "");
  return out;
}

Outcome hshadow_suite() {
  Rng rng(kSeed);
  Rational eps(1, 10);
  std::vector<PiecewiseLinearMap> maps{tent_map(2)};
  for (int i = 0; i < 10; ++i) maps.push_back(random_full_lap_map(rng, 2 + static_cast<int>(rng.below(3))));
  const int trials = 1000;
  std::size_t hits = 0, total = 0, uncertified = 0;
  for (const auto& f : maps) {
    System s(f);
    IntervalSet unit(ClosedInterval(0, 1));
    auto k = ball_expanding_constants(f, unit);
    if (!k) {
      ++uncertified;
      continue;
    }
    std::vector<Rational> grid;
    for (int j = 1; j <= 8; ++j) grid.push_back(k->nu * Rational(j, 9));
    std::vector<Rational> xs;
    for (int j = 0; j <= 64; ++j) xs.emplace_back(j, 64);
    for (const auto& b : f.breakpoints())
      for (const auto& g : grid) {
        if (b - g >= Rational(0)) xs.push_back(b - g);
        if (b + g <= Rational(1)) xs.push_back(b + g);
      }
    if (check_ball_expanding(s, RegionSpec::of(unit), k->mu, k->nu, grid, kSeed).holds != Holds::certified ||
        ball_violations(f, xs, k->mu, grid) != 0) {
      ++uncertified;
      continue;
    }
    Rational delta = ball_expanding_delta(k->mu, k->nu, eps).delta;
    for (int t = 0; t < trials; ++t) {
      ++total;
      std::size_t len = 2 + rng.below(49);
      PseudoOrbit o = perturbed_orbit(s, rng.uniform(Rational(0), Rational(1)), len, delta, rng.next());
      if (max_jump(f, o) > delta) continue;
      auto cert = h_shadow_solve(s, o, eps);
      if (cert.verdict == Tri::yes && cert.witness && traces_exactly(f, as_rational(*cert.witness), o, eps)) ++hits;
    }
  }
  Outcome out;
  out.pass = uncertified == 0 && total == maps.size() * trials && hits == total;
  out.detail = frac(hits, total) + " exact-hit shadows over " + num(maps.size()) + " maps, " + num(uncertified) +
               " maps not certified";
  return out;
}

Outcome oracle_grid() {
  const unsigned bits = 16;
  const long long n = 1LL << bits;
  System s(tent_map(2));
  Rng rng(kSeed);
  std::size_t outside = 0, band = 0, nonempty = 0;
  for (int t = 0; t < 200; ++t) {
    Rational delta = Rational::pow2(-static_cast<long>(4 + rng.below(7)));
    Rational eps = rng.uniform(delta / Rational(4), delta * Rational(2), 20);
    std::size_t len = 1 + rng.below(12);
    PseudoOrbit o = perturbed_orbit(s, rng.uniform(Rational(0), Rational(1)), len, delta, rng.next());
    auto cert = shadow_oracle(s, o, eps);
    nonempty += !cert.feasible.empty();

    std::vector<std::pair<long long, long long>> tubes;
    for (const auto& p : o.points)
      tubes.emplace_back(ceil_scaled(as_rational(p) - eps, bits), floor_scaled(as_rational(p) + eps, bits));
    std::vector<std::pair<long long, long long>> parts;
    for (const auto& iv : cert.feasible.parts())
      parts.emplace_back(ceil_scaled(iv.lo, bits), floor_scaled(iv.hi, bits));
    std::vector<std::pair<long long, long long>> edges;
    for (const auto& iv : cert.feasible.parts())
      edges.emplace_back(floor_scaled(iv.lo, bits) - 1, ceil_scaled(iv.hi, bits) + 1);

    for (long long k = 0; k <= n; ++k) {
      long long y = k;
      bool grid_in = true;
      for (const auto& [a, b] : tubes) {
        if (y < a || y > b) {
          grid_in = false;
          break;
        }
        y = y <= n / 2 ? 2 * y : 2 * (n - y);
      }
      bool oracle_in = false;
      for (const auto& [a, b] : parts) oracle_in = oracle_in || (a <= k && k <= b);
      if (grid_in == oracle_in) continue;
      // Within one grid step of a feasible-set endpoint counts as the band.
      bool near = false;
      for (const auto& [a, b] : edges) near = near || (k == a || k == a + 1 || k == b || k == b - 1);
      (near ? band : outside) += 1;
    }
  }
  Outcome out;
  out.pass = outside == 0;
  out.detail = num(outside) + " disagreements outside the band, " + num(band) + " inside; " + num(nonempty) +
               "/200 feasible";
  return out;
}

Outcome slimit() {
  SLimitSystem sl(64);
  Outcome out;
  out.pass = true;
  for (const Rational& delta : {Rational(1, 10), Rational(1, 100)}) {
    int n = 1;
    while (!(Rational::pow2(-n) < delta && Rational::pow2(-(1L << n)) < delta)) ++n;
    auto chk = slimit_counterexample_check(sl, n, Rational(1, 4), delta);
    Rational expected = kHalf + Rational::pow2(-n);
    // Jumps recomputed with g(x) = x^2 on [0,1] and the identity elsewhere.
    Rational worst(0);
    for (std::size_t i = 0; i + 1 < chk.gamma.size(); ++i) {
      Rational x = as_rational(chk.gamma.points[i]);
      Rational gx = x.sign() >= 0 ? x * x : x;
      worst = max(worst, abs(gx - as_rational(chk.gamma.points[i + 1])));
    }
    bool ok = slimit_minimal_n(delta) == n && chk.passed() && chk.step0_deviation == expected &&
              Rational(1, 4) < expected && worst < delta;
    out.pass = out.pass && ok;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("delta=") + delta.str() + " N=" + std::to_string(n) +
                  " step-0 deviation " + chk.step0_deviation.str() + (ok ? " ok" : " FAILED");
  }
  return out;
}

Outcome iterate_equivalence() {
  auto f = tent_map(2);
  System s(f);
  Rational eps(1, 10), delta = eps / Rational(16);
  IntervalSet support(ClosedInterval(Rational(1, 10), Rational(9, 10)));
  IntervalSet unit(ClosedInterval(0, 1));
  Rng rng(kSeed);
  std::size_t disagree = 0, yes = 0, unverified = 0;
  for (int t = 0; t < 200; ++t) {
    Rational x0 = rng.uniform(support);
    PseudoOrbit o = region_walk(s, support, x0, 2 + rng.below(11), delta, rng);
    auto direct = h_shadow_solve(s, o, eps);
    auto via = h_shadow_via_iterate(s, 2, unit, o, eps);
    bool a = direct.verdict == Tri::yes, b = via.verdict == Tri::yes;
    disagree += a != b;
    yes += a;
    if (a && !traces_exactly(f, as_rational(*direct.witness), o, eps)) ++unverified;
    if (b && !traces_exactly(f, as_rational(*via.witness), o, eps)) ++unverified;
  }
  Outcome out;
  out.pass = disagree == 0 && unverified == 0;
  out.detail = num(disagree) + " disagreements in 200 (" + num(yes) + " feasible), " + num(unverified) +
               " witnesses failing the trace check";
  return out;
}

Outcome staged() {
  auto f = tent_map(2);
  System s(f);
  Rational eps(1, 10), bound = eps * Rational::pow2(-6);
  Rng rng(kSeed);
  std::size_t ok = 0;
  const int trials = 5;
  Rational worst(0);
  for (int t = 0; t < trials; ++t) {
    DecaySchedule sch{eps};
    PseudoOrbit o = decaying_orbit(s, rng.uniform(Rational(0), Rational(1)), 40, sch, rng.next());
    bool sched_ok = true;
    for (std::size_t i = 0; i + 1 < o.size(); ++i)
      sched_ok = sched_ok && abs(f.eval(as_rational(o.points[i])) - as_rational(o.points[i + 1])) <= sch.bound(i);
    auto log = asymptotic_shadow(s, o, IntervalSet(ClosedInterval(0, 1)), eps, 2, Rational(1, 4), 5);
    if (!log.complete() || log.stage_points.size() != 6 || log.stage_horizons.size() != 7) continue;
    // Terminal deviation recomputed from the last stage point over its window.
    std::size_t k5 = log.stage_horizons[5], k6 = log.stage_horizons[6];
    Rational y = as_rational(log.stage_points.back()), dev(0);
    for (std::size_t j = 0; j <= k6; ++j) {
      if (j > k5) dev = max(dev, abs(y - as_rational(o.points[j])));
      y = f.eval(y);
    }
    worst = max(worst, dev);
    if (sched_ok && dev == log.terminal_deviation && dev <= bound) ++ok;
  }
  Outcome out;
  out.pass = ok == static_cast<std::size_t>(trials);
  out.detail = frac(ok, trials) + " runs with 5 stages and conditions (a)-(d); worst terminal deviation " +
               std::to_string(worst.to_double()) + " <= " + bound.str();
  return out;
}

Outcome region_suite() {
  Rational lambda(9, 5), eps(1, 10);
  auto f = tent_map(lambda);
  System s(f);
  IntervalSet region =
      IntervalSet::normalize({{Rational(1, 20), Rational(9, 20)}, {Rational(11, 20), Rational(19, 20)}});
  auto k = ball_expanding_constants(f, region);
  Outcome out;
  if (!k) {
    out.detail = "no certified constants on the region";
    return out;
  }
  std::vector<Rational> grid, xs;
  for (int j = 1; j <= 8; ++j) grid.push_back(k->nu * Rational(j, 9));
  for (const auto& part : region.parts())
    for (int j = 0; j <= 40; ++j) xs.push_back(part.lo + part.length() * Rational(j, 40));
  std::size_t bad = ball_violations(f, xs, k->mu, grid);
  Rational delta = ball_expanding_delta(k->mu, k->nu, eps).delta;
  Rng rng(kSeed);
  std::size_t hits = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    PseudoOrbit o = region_walk(s, region, rng.uniform(region), 2 + rng.below(49), delta, rng);
    bool in_region = true;
    for (const auto& p : o.points) in_region = in_region && region.contains(as_rational(p));
    if (!in_region || max_jump(f, o) > delta) continue;
    auto cert = h_shadow_solve(s, o, eps);
    if (cert.verdict == Tri::yes && cert.witness && traces_exactly(f, as_rational(*cert.witness), o, eps)) ++hits;
  }
  out.pass = bad == 0 && hits == trials;
  out.detail = "mu=" + k->mu.str() + " nu=" + k->nu.str() + " delta=" + delta.str() + "; ball oracle violations " +
               num(bad) + "; " + frac(hits, trials) + " exact-hit shadows";
  return out;
}

Outcome nonshadow() {
  Rational lambda = sqrt_enclosure(Rational(2), 40).first;
  Rational up = lambda + Rational::pow2(-40);
  bool near_root = lambda * lambda <= Rational(2) && Rational(2) <= up * up;
  const int horizon = 200;
  // Critical-orbit gap recomputed directly.
  Rational x = kHalf, gap(1);
  for (int k = 1; k <= horizon; ++k) {
    x = tent(lambda, x);
    gap = min(gap, abs(x - kHalf));
  }
  std::optional<NonShadowWitness> found;
  for (int k = 3; k <= 16 && !found; ++k)
    for (int j = 1; j <= 6 && !found; ++j) {
      Rational eps = Rational::pow2(-k), delta = eps * Rational::pow2(-j);
      if (gap <= Rational(2) * eps) continue;
      auto w = nonshadow_witness_tent(lambda, eps, delta, horizon, 200);
      if (w.certificate.verdict == Tri::no && w.certificate.feasible.empty()) found = w;
    }
  Outcome out;
  if (!found) {
    out.detail = "no empty feasible set found; lambda near sqrt 2: " + std::string(near_root ? "yes" : "no");
    return out;
  }
  const auto& w = *found;
  Rational jump(0);
  for (std::size_t i = 0; i + 1 < w.orbit.size(); ++i)
    jump = max(jump, abs(tent(lambda, as_rational(w.orbit.points[i])) - as_rational(w.orbit.points[i + 1])));
  // Grid search at step 2^-20 over the epsilon-ball about x_0.
  const unsigned bits = 20;
  Rational h = Rational::pow2(-static_cast<long>(bits));
  const Rational& x0 = as_rational(w.orbit.points[0]);
  std::size_t survivors = 0, probed = 0;
  for (Rational y = ceil_dyadic(x0 - w.epsilon, bits); y <= x0 + w.epsilon; y += h) {
    ++probed;
    Rational z = y;
    bool ok = true;
    for (const auto& p : w.orbit.points) {
      if (abs(z - as_rational(p)) > w.epsilon) {
        ok = false;
        break;
      }
      z = tent(lambda, z);
    }
    survivors += ok;
  }
  out.pass = near_root && gap == w.recurrence_gap && jump <= w.delta && survivors == 0;
  out.detail = "eps=" + w.epsilon.str() + " delta=" + w.delta.str() + " length " + num(w.orbit_length) + " side " +
               w.side + "; grid survivors " + frac(survivors, probed) + "; recurrence gap " +
               std::to_string(gap.to_double());
  return out;
}

Outcome kneading_check() {
  std::string k = "RLL";
  for (int j = 2; k.size() < 500; ++j) k += std::string(static_cast<std::size_t>(j), 'R') + "L";
  k.resize(500);
  bool printed = k_prefix(15) == "RLLRRLRRRLRRRRL" && k_prefix(500) == k;
  bool recurs = k.find("RLL", 1) != std::string::npos;
  bool lib_recurs = is_recurrent_prefix(k_prefix(500), 3);

  auto ps = find_parameter(k_prefix(300), 15, 300);
  bool width_ok = ps.hi - ps.lo <= Rational::pow2(-30);
  // Kneading word and critical-orbit bound from an independent enclosure.
  const unsigned bits = 2048;
  ClosedInterval x(0, 0);
  std::string word;
  Rational eps0(1);
  bool clear = true;
  for (int n = 1; n <= 200; ++n) {
    x = quad_step(ps.mu, x, bits);
    if (n <= 15) word += x.lo.sign() > 0 ? 'R' : (x.hi.sign() < 0 ? 'L' : '?');
    if (n >= 2) {
      if (x.lo.sign() <= 0 && x.hi.sign() >= 0) clear = false;
      else eps0 = min(eps0, min(abs(x.lo), abs(x.hi)));
    }
  }
  bool word_ok = ps.matched && word == k.substr(0, 15);
  Rational lib_gap = critical_orbit_gap(QuadraticMap(QuadraticFamily::quadratic, ps.mu), 2, 200, 1024);
  Outcome out;
  out.pass = printed && !recurs && !lib_recurs && width_ok && word_ok && clear && lib_gap.sign() > 0;
  out.detail = std::string("prefix ") + (printed ? "ok" : "mismatch") + "; window-3 recurrence " +
               (recurs || lib_recurs ? "found" : "none") + "; kneading " + word + "; bracket width " +
               (ps.hi == ps.lo ? "0 (" + ps.note + " after " + std::to_string(ps.steps) + " steps)"
                               : "about 2^-" + std::to_string(width_bits(ps.hi - ps.lo))) +
               "; min |F^n(0)| over 2..200 >= " + (clear ? std::to_string(eps0.to_double()) : std::string("0"));
  return out;
}

Outcome symbolic_suite() {
  const int depth = 12;
  const std::uint64_t size = std::uint64_t{1} << depth;
  OdometerSystem od(depth);
  System s(od);
  Rng rng(kSeed);
  auto own_distance = [](std::uint64_t a, std::uint64_t b) {
    return a == b ? Rational(0) : Rational::pow2(-static_cast<long>(__builtin_ctzll(a ^ b)));
  };
  std::size_t broken = 0;
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t a = rng.below(size), b = rng.below(size);
    Point x = od.from_index(a), y = od.from_index(b);
    Rational before = own_distance(a, b), after = own_distance((a + 1) % size, (b + 1) % size);
    bool ok = before == after && distance(s, x, y) == before && distance(s, eval(s, x), eval(s, y)) == after &&
              od.to_index(as_word(eval(s, x))) == (a + 1) % size;
    broken += !ok;
  }
  std::size_t od_ok = 0;
  for (int t = 0; t < 500; ++t) {
    Rational delta = Rational::pow2(-static_cast<long>(1 + rng.below(depth - 1)));
    std::size_t len = 2 + rng.below(19);
    PseudoOrbit o = perturbed_orbit(s, od.from_index(rng.below(size)), len, delta, rng.next());
    auto cert = h_shadow_solve(s, o, delta);
    if (cert.verdict != Tri::yes || !cert.witness) continue;
    std::uint64_t m = o.last();
    std::uint64_t y = od.to_index(as_word(*cert.witness));
    std::uint64_t want = (od.to_index(as_word(o.points.back())) + size - m % size) % size;
    bool good = y == want;
    for (std::size_t i = 0; i < o.size() && good; ++i)
      good = own_distance((y + i) % size, od.to_index(as_word(o.points[i]))) <= delta;
    od_ok += good;
  }

  ShiftSystem gm("01", {"11"});
  System g(gm);
  std::size_t agree = 0, witnesses_bad = 0, feasible = 0;
  for (int t = 0; t < 500; ++t) {
    Rational eps = Rational::pow2(-static_cast<long>(1 + rng.below(4)));
    Rational delta = Rational::pow2(-static_cast<long>(1 + rng.below(4)));
    auto x0 = gm.random_extension("", rng);
    PseudoOrbit o = perturbed_orbit(g, *x0, 2 + rng.below(14), delta, rng.next());
    auto a = shadow_oracle(g, o, eps);
    auto b = h_shadow_solve(g, o, eps);
    bool fa = a.verdict == Tri::yes, fb = b.verdict == Tri::yes;
    agree += fa == fb;
    feasible += fa;
    for (const auto* c : {&a, &b}) {
      if (c->verdict != Tri::yes) continue;
      if (!c->witness) {
        ++witnesses_bad;
        continue;
      }
      const SymbolWord& w = as_word(*c->witness);
      bool ok = golden_admissible(w);
      for (std::size_t i = 0; i < o.size() && ok; ++i) ok = word_distance(shift_by(w, i), as_word(o.points[i])) <= eps;
      if (c == &b) ok = ok && word_distance(shift_by(w, o.last()), as_word(o.points.back())).is_zero();
      witnesses_bad += !ok;
    }
  }
  Outcome out;
  out.pass = broken == 0 && od_ok == 500 && agree == 500 && witnesses_bad == 0;
  out.detail = "odometer isometry violations " + num(broken) + "/10000, exact hits " + frac(od_ok, 500) +
               "; golden mean agreement " + frac(agree, 500) + " (" + num(feasible) + " shadowable), bad witnesses " +
               num(witnesses_bad);
  return out;
}

Outcome schwarzian_check() {
  Rng rng(kSeed);
  std::size_t ok = 0, total = 0;
  for (const Rational& mu : {Rational(1), Rational(5, 4), Rational(3, 2), Rational(7, 4), Rational(2)}) {
    QuadraticMap q(QuadraticFamily::quadratic, mu);
    for (int i = 0; i < 100; ++i) {
      Rational x;
      do x = rng.uniform(Rational(-1), Rational(1), 24);
      while (x.is_zero());
      // f' = -2 mu x, f'' = -2 mu, f''' = 0.
      Rational d1 = Rational(-2) * mu * x, d2 = Rational(-2) * mu;
      Rational own = Rational(0) / d1 - Rational(3, 2) * (d2 / d1) * (d2 / d1);
      Rational closed = Rational(-3) / (Rational(2) * x * x);
      ++total;
      ok += schwarzian(q, x) == closed && own == closed;
    }
  }
  Outcome out;
  out.pass = ok == total;
  out.detail = frac(ok, total) + " exact matches with -3/(2x^2)";
  return out;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "cantor system: expanding constants, not ball expanding at 0, window identity", 10, cantor},
      {2, "T_2 ball expanding on a 50-value grid, not expanding, not locally injective", 10, tent_ball},
      {3, "h-shadowing suite on T_2 and 10 random maps", 120, hshadow_suite},
      {4, "oracle against an integer grid at step 2^-16", 120, oracle_grid},
      {5, "s-limit counterexample at eps=1/4", 1, slimit},
      {6, "h-shadowing through f^2 against the direct solver", 60, iterate_equivalence},
      {7, "staged construction for decaying pseudo-orbits", 30, staged},
      {8, "h-shadowing suite on a tent-map region", 60, region_suite},
      {9, "non-shadowing witness near sqrt 2", 120, nonshadow},
      {10, "kneading sequence K and parameter search", 120, kneading_check},
      {11, "odometer and golden-mean shift suites", 60, symbolic_suite},
      {12, "Schwarzian derivative of the quadratic family", 1, schwarzian_check},
  };
  return list;
}

bool run(const Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs <= c.budget_s;
  bool pass = o.pass && in_time;
  std::printf("[%s] criterion %d: %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
              o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2) {
    std::fprintf(stderr, "usage: acceptance [criterion]\n");
    return 2;
  }
  int only = argc == 2 ? std::atoi(argv[1]) : 0;
  bool all_pass = true, ran = false;
  for (const auto& c : criteria()) {
    if (only && c.id != only) continue;
    ran = true;
    all_pass = run(c) && all_pass;
  }
  if (!ran) {
    std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
    return 2;
  }
  return all_pass ? 0 : 1;
}
