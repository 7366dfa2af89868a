#include "shadowlab/systems.hpp"

#include <algorithm>

namespace shadowlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void unsupported(const System& s, const std::string& op) {
  throw Error(ErrorCode::unsupported, op + " is not supported for system kind '" + kind_name(s) + "'");
}

void dedupe(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

const Rational& as_rational(const Point& p) {
  if (auto* r = std::get_if<Rational>(&p)) return *r;
  throw Error(ErrorCode::invalid_argument, "expected a rational point, got a symbol word");
}

const SymbolWord& as_word(const Point& p) {
  if (auto* w = std::get_if<SymbolWord>(&p)) return *w;
  throw Error(ErrorCode::invalid_argument, "expected a symbol word, got a rational point");
}

std::string point_str(const Point& p) {
  return std::visit(overloaded{[](const Rational& r) { return r.str(); },
                               [](const SymbolWord& w) { return w.str(); }},
                    p);
}

ClosedInterval AffinePiece::image() const {
  Rational a = apply(domain.lo), b = apply(domain.hi);
  return a <= b ? ClosedInterval(a, b) : ClosedInterval(b, a);
}

// ---------------------------------------------------------------------------
// Piecewise linear maps

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size())
    throw Error(ErrorCode::invalid_argument, "piecewise linear map needs >= 2 breakpoints and one value per breakpoint");
  if (breakpoints_.front() != Rational(0) || breakpoints_.back() != Rational(1))
    throw Error(ErrorCode::invalid_argument, "breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (values_[i] < Rational(0) || Rational(1) < values_[i])
      throw Error(ErrorCode::invalid_argument, "value " + values_[i].str() + " outside [0,1]");
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i]))
      throw Error(ErrorCode::invalid_argument, "breakpoints must be strictly increasing");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    Rational slope = (values_[i + 1] - values_[i]) / (breakpoints_[i + 1] - breakpoints_[i]);
    Rational offset = values_[i] - slope * breakpoints_[i];
    pieces_.push_back({ClosedInterval(breakpoints_[i], breakpoints_[i + 1]), slope, offset});
  }
}

std::size_t PiecewiseLinearMap::piece_index(const Rational& x) const {
  if (x < Rational(0) || Rational(1) < x) throw Error(ErrorCode::domain, "point " + x.str() + " outside [0,1]");
  auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Rational PiecewiseLinearMap::eval(const Rational& x) const { return pieces_[piece_index(x)].apply(x); }

Rational PiecewiseLinearMap::max_abs_slope() const {
  Rational m(0);
  for (const auto& p : pieces_) m = max(m, abs(p.slope));
  return m;
}

Rational PiecewiseLinearMap::min_abs_slope() const {
  Rational m = abs(pieces_.front().slope);
  for (const auto& p : pieces_) m = min(m, abs(p.slope));
  return m;
}

PiecewiseLinearMap tent_map(const Rational& lambda) {
  if (lambda.sign() <= 0 || Rational(2) < lambda)
    throw Error(ErrorCode::invalid_argument, "tent slope must lie in (0, 2]");
  Rational half(1, 2);
  return PiecewiseLinearMap({Rational(0), half, Rational(1)}, {Rational(0), lambda * half, Rational(0)});
}

namespace {

PiecewiseLinearMap compose(const PiecewiseLinearMap& outer, const PiecewiseLinearMap& inner) {
  std::vector<Rational> xs = inner.breakpoints();
  const auto& obp = outer.breakpoints();
  for (const auto& piece : inner.pieces()) {
    if (piece.slope.is_zero()) continue;
    ClosedInterval img = piece.image();
    for (std::size_t k = 1; k + 1 < obp.size(); ++k)
      if (img.lo < obp[k] && obp[k] < img.hi) xs.push_back((obp[k] - piece.offset) / piece.slope);
  }
  dedupe(xs);
  std::vector<Rational> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) ys.push_back(outer.eval(inner.eval(x)));
  // Drop breakpoints where the two adjacent slopes agree.
  std::vector<Rational> bx{xs.front()}, by{ys.front()};
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    Rational s1 = (ys[i] - by.back()) / (xs[i] - bx.back());
    Rational s2 = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    if (s1 != s2) {
      bx.push_back(xs[i]);
      by.push_back(ys[i]);
    }
  }
  bx.push_back(xs.back());
  by.push_back(ys.back());
  return PiecewiseLinearMap(std::move(bx), std::move(by));
}

}  // namespace

PiecewiseLinearMap iterate_map(const PiecewiseLinearMap& f, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "iterate count must be >= 1");
  PiecewiseLinearMap g = f;
  for (int i = 1; i < n; ++i) g = compose(f, g);
  return g;
}

// ---------------------------------------------------------------------------
// Quadratic family

QuadraticMap::QuadraticMap(QuadraticFamily family, Rational parameter)
    : family_(family), parameter_(std::move(parameter)) {
  if (family_ == QuadraticFamily::logistic) {
    if (parameter_.sign() <= 0 || Rational(4) < parameter_)
      throw Error(ErrorCode::invalid_argument, "logistic parameter must lie in (0, 4]");
  } else if (parameter_ < Rational(1) || Rational(2) < parameter_) {
    throw Error(ErrorCode::invalid_argument, "quadratic parameter must lie in [1, 2]");
  }
}

ClosedInterval QuadraticMap::domain() const {
  return family_ == QuadraticFamily::logistic ? ClosedInterval(0, 1) : ClosedInterval(-1, 1);
}

Rational QuadraticMap::critical_point() const {
  return family_ == QuadraticFamily::logistic ? Rational(1, 2) : Rational(0);
}

Rational QuadraticMap::eval(const Rational& x) const {
  if (!domain().contains(x)) throw Error(ErrorCode::domain, "point " + x.str() + " outside the domain");
  if (family_ == QuadraticFamily::logistic) return parameter_ * x * (Rational(1) - x);
  return Rational(1) - parameter_ * x * x;
}

Rational QuadraticMap::derivative(int k, const Rational& x) const {
  const Rational& p = parameter_;
  bool logistic = family_ == QuadraticFamily::logistic;
  switch (k) {
    case 1: return logistic ? p * (Rational(1) - Rational(2) * x) : Rational(-2) * p * x;
    case 2: return Rational(-2) * p;
    case 3: return Rational(0);
    default: throw Error(ErrorCode::invalid_argument, "derivative order must be 1, 2 or 3");
  }
}

ClosedInterval QuadraticMap::image(const ClosedInterval& iv) const {
  Rational a = eval(iv.lo), b = eval(iv.hi);
  Rational c = critical_point();
  if (iv.lo < c && c < iv.hi) return {min(a, b), eval(c)};
  return a <= b ? ClosedInterval(a, b) : ClosedInterval(b, a);
}

// ---------------------------------------------------------------------------
// s-limit example space

SLimitSystem::SLimitSystem(int tail_depth) : tail_depth_(tail_depth) {
  if (tail_depth_ < 1 || tail_depth_ > 4096) throw Error(ErrorCode::invalid_argument, "tail depth must lie in [1, 4096]");
}

bool SLimitSystem::contains(const Rational& x) const {
  if (Rational(0) <= x && x <= Rational(1)) return true;
  if (x.sign() >= 0 || x.numerator() != -1) return false;
  const mpz_class& d = x.denominator();
  if (mpz_popcount(d.get_mpz_t()) != 1) return false;
  auto n = static_cast<int>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 1;
  return n >= 1 && n <= tail_depth_;
}

Rational SLimitSystem::eval(const Rational& x) const {
  if (!contains(x)) throw Error(ErrorCode::domain, "point " + x.str() + " outside the s-limit space");
  return x.sign() <= 0 ? x : x * x;
}

// ---------------------------------------------------------------------------
// Dispatch

std::string kind_name(const System& s) {
  return std::visit(overloaded{[](const PiecewiseLinearMap&) { return std::string("pl"); },
                               [](const QuadraticMap&) { return std::string("quadratic"); },
                               [](const CantorSystem&) { return std::string("cantor"); },
                               [](const ShiftSystem&) { return std::string("sft"); },
                               [](const OdometerSystem&) { return std::string("odometer"); },
                               [](const SLimitSystem&) { return std::string("slimit"); }},
                    s);
}

bool is_interval_system(const System& s) { return !is_symbolic(s); }
bool is_symbolic(const System& s) {
  return std::holds_alternative<ShiftSystem>(s) || std::holds_alternative<OdometerSystem>(s);
}
bool is_piecewise_affine(const System& s) {
  return std::holds_alternative<PiecewiseLinearMap>(s) || std::holds_alternative<CantorSystem>(s);
}

bool in_space(const System& s, const Point& x) {
  return std::visit(
      overloaded{[&](const PiecewiseLinearMap&) {
                   auto* r = std::get_if<Rational>(&x);
                   return r && Rational(0) <= *r && *r <= Rational(1);
                 },
                 [&](const QuadraticMap& q) {
                   auto* r = std::get_if<Rational>(&x);
                   return r && q.domain().contains(*r);
                 },
                 [&](const CantorSystem&) {
                   auto* r = std::get_if<Rational>(&x);
                   return r && CantorSystem::contains(*r);
                 },
                 [&](const ShiftSystem& sh) {
                   auto* w = std::get_if<SymbolWord>(&x);
                   return w && !w->finite() && sh.contains(*w);
                 },
                 [&](const OdometerSystem& od) {
                   auto* w = std::get_if<SymbolWord>(&x);
                   return w && od.contains(*w);
                 },
                 [&](const SLimitSystem& sl) {
                   auto* r = std::get_if<Rational>(&x);
                   return r && sl.contains(*r);
                 }},
      s);
}

Point eval(const System& s, const Point& x) {
  if (!in_space(s, x)) throw Error(ErrorCode::domain, "point " + point_str(x) + " outside the space of '" + kind_name(s) + "'");
  return std::visit(overloaded{[&](const PiecewiseLinearMap& f) -> Point { return f.eval(as_rational(x)); },
                               [&](const QuadraticMap& f) -> Point { return f.eval(as_rational(x)); },
                               [&](const CantorSystem& f) -> Point { return f.eval(as_rational(x)); },
                               [&](const ShiftSystem&) -> Point { return as_word(x).shifted(); },
                               [&](const OdometerSystem& f) -> Point { return f.add(as_word(x), 1); },
                               [&](const SLimitSystem& f) -> Point { return f.eval(as_rational(x)); }},
                    s);
}

Rational eval(const System& s, const Rational& x) { return as_rational(eval(s, Point(x))); }

Point iterate(const System& s, Point x, int n) {
  for (int i = 0; i < n; ++i) x = eval(s, x);
  return x;
}

Rational distance(const System& s, const Point& x, const Point& y) {
  if (x.index() != y.index()) throw Error(ErrorCode::invalid_argument, "distance between mixed point kinds");
  if (auto* ox = std::get_if<OdometerSystem>(&s)) {
    std::uint64_t a = ox->to_index(as_word(x)), b = ox->to_index(as_word(y));
    if (a == b) return Rational(0);
    return Rational::pow2(-static_cast<long>(__builtin_ctzll(a ^ b)));
  }
  if (std::holds_alternative<ShiftSystem>(s)) {
    const auto& a = as_word(x);
    const auto& b = as_word(y);
    if (a == b) return Rational(0);
    std::size_t bound = std::max(a.prefix.size(), b.prefix.size()) + std::max<std::size_t>(1, a.cycle.size()) * std::max<std::size_t>(1, b.cycle.size());
    for (std::size_t k = 0; k < bound; ++k)
      if (a.at(k) != b.at(k)) return Rational::pow2(-static_cast<long>(k));
    return Rational(0);
  }
  return abs(as_rational(x) - as_rational(y));
}

std::vector<AffinePiece> branches(const System& s, const IntervalSet& window) {
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    std::vector<AffinePiece> out;
    for (const auto& p : f->pieces())
      if (!window.intersect(IntervalSet(p.domain)).empty()) out.push_back(p);
    return out;
  }
  if (auto* c = std::get_if<CantorSystem>(&s)) {
    ClosedInterval core = c->core();
    IntervalSet in_core = window.intersect(IntervalSet(core));
    if (!in_core.empty() && !(in_core.size() == 1 && in_core.parts()[0] == ClosedInterval::point(Rational(0))))
      throw Error(ErrorCode::limit, "window reaches below the resolved depth " + std::to_string(c->depth()));
    std::vector<AffinePiece> out;
    for (const auto& p : c->pieces())
      if (!window.intersect(IntervalSet(p.map.domain)).empty()) out.push_back(p.map);
    if (window.contains(Rational(0))) out.push_back({ClosedInterval::point(Rational(0)), Rational(1), Rational(0)});
    std::sort(out.begin(), out.end(), [](const AffinePiece& a, const AffinePiece& b) { return a.domain.lo < b.domain.lo; });
    return out;
  }
  unsupported(s, "branches");
}

IntervalSet preimage_set(const System& s, const IntervalSet& target, unsigned precision) {
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    std::vector<ClosedInterval> raw;
    for (const auto& p : f->pieces()) {
      if (p.slope.is_zero()) {
        if (target.contains(p.offset)) raw.push_back(p.domain);
        continue;
      }
      IntervalSet hit = target.intersect(IntervalSet(p.image()));
      IntervalSet pre = hit.affine_image(Rational(1) / p.slope, -p.offset / p.slope);
      for (const auto& iv : pre.parts()) raw.push_back(iv);
    }
    return IntervalSet::normalize(std::move(raw));
  }
  if (auto* c = std::get_if<CantorSystem>(&s)) {
    IntervalSet core_image(ClosedInterval(Rational(0), Rational::pow3(-(c->depth() - 2))));
    IntervalSet core_hit = target.intersect(core_image);
    if (!core_hit.empty() && !(core_hit.size() == 1 && core_hit.parts()[0] == ClosedInterval::point(Rational(0))))
      throw Error(ErrorCode::limit, "preimage needs pieces below the resolved depth " + std::to_string(c->depth()));
    std::vector<ClosedInterval> raw;
    if (target.contains(Rational(0))) raw.push_back(ClosedInterval::point(Rational(0)));
    for (const auto& p : c->pieces()) {
      IntervalSet hit = target.intersect(IntervalSet(p.map.image()));
      IntervalSet pre = hit.affine_image(Rational(1) / p.map.slope, -p.map.offset / p.map.slope);
      for (const auto& iv : pre.parts()) raw.push_back(iv);
    }
    return IntervalSet::normalize(std::move(raw));
  }
  if (auto* q = std::get_if<QuadraticMap>(&s)) {
    std::vector<ClosedInterval> raw;
    ClosedInterval dom = q->domain();
    const Rational& p = q->parameter();
    IntervalSet clipped = target.intersect(IntervalSet(q->image(dom)));
    for (const auto& iv : clipped.parts()) {
      if (q->family() == QuadraticFamily::quadratic) {
        // |x| in [sqrt((1 - hi)/p), sqrt((1 - lo)/p)]
        Rational r_in = sqrt_enclosure((Rational(1) - iv.hi) / p, precision).first;
        Rational r_out = min(sqrt_enclosure((Rational(1) - iv.lo) / p, precision).second, Rational(1));
        raw.emplace_back(-r_out, -r_in);
        raw.emplace_back(r_in, r_out);
      } else {
        Rational quarter(1, 4), half(1, 2);
        Rational s_far = min(sqrt_enclosure(quarter - iv.lo / p, precision).second, half);
        Rational s_near = sqrt_enclosure(max(quarter - iv.hi / p, Rational(0)), precision).first;
        raw.emplace_back(half - s_far, half - s_near);
        raw.emplace_back(half + s_near, half + s_far);
      }
    }
    return IntervalSet::normalize(std::move(raw)).intersect(IntervalSet(dom));
  }
  if (auto* sl = std::get_if<SLimitSystem>(&s)) {
    std::vector<ClosedInterval> raw;
    for (int n = 1; n <= sl->tail_depth(); ++n) {
      Rational x = -Rational::pow2(-n);
      if (target.contains(x)) raw.push_back(ClosedInterval::point(x));
    }
    IntervalSet unit_part = target.intersect(IntervalSet(ClosedInterval(0, 1)));
    for (const auto& iv : unit_part.parts())
      raw.emplace_back(sqrt_enclosure(iv.lo, precision).first, min(sqrt_enclosure(iv.hi, precision).second, Rational(1)));
    return IntervalSet::normalize(std::move(raw));
  }
  unsupported(s, "preimage_set");
}

std::vector<Rational> point_preimages(const System& s, const Rational& y) {
  std::vector<Rational> out;
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    for (const auto& p : f->pieces()) {
      if (p.slope.is_zero()) {
        if (p.offset == y) throw Error(ErrorCode::domain, "point " + y.str() + " has a plateau of preimages");
        continue;
      }
      Rational x = (y - p.offset) / p.slope;
      if (p.domain.contains(x)) out.push_back(x);
    }
  } else if (auto* c = std::get_if<CantorSystem>(&s)) {
    if (!CantorSystem::contains(y)) return out;
    if (y.sign() > 0 && y <= Rational::pow3(-(c->depth() - 2)))
      throw Error(ErrorCode::limit, "point preimages below the resolved depth");
    if (y.is_zero()) out.push_back(Rational(0));
    for (const auto& p : c->pieces()) {
      Rational x = (y - p.map.offset) / p.map.slope;
      if (p.map.domain.contains(x)) out.push_back(x);
    }
  } else {
    unsupported(s, "point_preimages");
  }
  dedupe(out);
  return out;
}

std::vector<Rational> critical_set(const System& s) {
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    std::vector<Rational> out;
    const auto& ps = f->pieces();
    for (std::size_t i = 1; i < ps.size(); ++i)
      if (ps[i - 1].slope.sign() * ps[i].slope.sign() <= 0) out.push_back(ps[i].domain.lo);
    return out;
  }
  if (auto* q = std::get_if<QuadraticMap>(&s)) return {q->critical_point()};
  if (std::holds_alternative<CantorSystem>(s) || std::holds_alternative<SLimitSystem>(s)) return {};
  unsupported(s, "critical_set");
}

ClosedInterval space_hull(const System& s) {
  return std::visit(overloaded{[](const PiecewiseLinearMap&) { return ClosedInterval(0, 1); },
                               [](const QuadraticMap& q) { return q.domain(); },
                               [](const CantorSystem&) { return ClosedInterval(-1, 1); },
                               [&](const ShiftSystem&) -> ClosedInterval { unsupported(s, "space_hull"); },
                               [&](const OdometerSystem&) -> ClosedInterval { unsupported(s, "space_hull"); },
                               [](const SLimitSystem&) { return ClosedInterval(Rational(-1, 2), Rational(1)); }},
                    s);
}

Rational lipschitz_bound(const System& s) {
  return std::visit(
      overloaded{[](const PiecewiseLinearMap& f) { return f.max_abs_slope(); },
                 [](const QuadraticMap& q) {
                   return q.family() == QuadraticFamily::logistic ? q.parameter() : Rational(2) * q.parameter();
                 },
                 [](const CantorSystem&) { return Rational(9); },
                 [&](const ShiftSystem&) -> Rational { return Rational(2); },
                 [&](const OdometerSystem&) -> Rational { return Rational(1); },
                 [](const SLimitSystem&) { return Rational(2); }},
      s);
}

}  // namespace shadowlab
