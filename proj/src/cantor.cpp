#include <set>

#include "shadowlab/systems.hpp"

namespace shadowlab {

namespace {

// Membership of a in the middle-thirds set C, by running the ternary digit
// map until it leaves [0, 1], hits the middle third, or cycles.
bool in_middle_thirds(Rational a) {
  const Rational third(1, 3), two_thirds(2, 3);
  std::set<Rational> seen;
  for (;;) {
    if (a.is_zero() || a == Rational(1)) return true;
    if (a.sign() < 0 || Rational(1) < a) return false;
    if (a <= third) a = Rational(3) * a;
    else if (two_thirds <= a) a = Rational(3) * a - Rational(2);
    else return false;
    if (!seen.insert(a).second) return true;
  }
}

// Smallest point of C that is >= a, for a in [0, 1].
Rational ceil_in_middle_thirds(const Rational& a0) {
  const Rational third(1, 3), two_thirds(2, 3);
  Rational scale(1), shift(0), a = a0;
  std::set<Rational> seen;
  for (;;) {
    if (a.sign() <= 0) return shift;
    if (a == Rational(1)) return shift + scale;
    if (a <= third) {
      scale *= third;
      a = Rational(3) * a;
    } else if (a < two_thirds) {
      return shift + scale * two_thirds;
    } else {
      shift += scale * two_thirds;
      scale *= third;
      a = Rational(3) * a - Rational(2);
    }
    if (!seen.insert(a).second) return a0;
  }
}

// Ternary digits of a point of C whose denominator is a power of 3.
// Returns nullopt when the expansion is infinite.
std::optional<std::string> finite_ternary(const Rational& a) {
  mpz_class d = a.denominator();
  std::size_t k = 0;
  while (d % 3 == 0) {
    d /= 3;
    ++k;
  }
  if (d != 1) return std::nullopt;
  mpz_class n = a.numerator();
  std::string digits(k, '0');
  for (std::size_t i = k; i-- > 0;) {
    mpz_class r = n % 3;
    digits[i] = static_cast<char>('0' + r.get_si());
    n /= 3;
  }
  return digits;
}

// Right endpoint of a removed gap: finite 0/2 expansion ending in 2.
bool is_right_gap_end(const Rational& a) {
  if (a.sign() <= 0 || Rational(1) <= a) return false;
  auto digits = finite_ternary(a);
  return digits && !digits->empty() && digits->back() == '2';
}

// Left endpoint of a removed gap: 0/2 digits then a final 1.
bool is_left_gap_end(const Rational& a) {
  if (a.sign() <= 0 || Rational(1) <= a) return false;
  auto digits = finite_ternary(a);
  return digits && !digits->empty() && digits->back() == '1';
}

}  // namespace

CantorSystem::CantorSystem(int depth) : depth_(depth) {
  if (depth_ < 4 || depth_ > 400) throw Error(ErrorCode::invalid_argument, "cantor depth must lie in [4, 400]");
  for (int n = -depth_; n <= depth_; ++n)
    if (n != 0) pieces_.push_back({n, piece_map(n)});
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& a, const Piece& b) { return a.map.domain.lo < b.map.domain.lo; });
}

ClosedInterval CantorSystem::piece_hull(int n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "piece index 0");
  if (n > 0) return {Rational(2) * Rational::pow3(-n), Rational::pow3(-(n - 1))};
  int m = -n;
  return {-Rational::pow3(-(m - 1)), Rational(-2) * Rational::pow3(-m)};
}

ClosedInterval CantorSystem::image_hull(int n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "piece index 0");
  if (n == 1) return {Rational(0), Rational(1)};
  if (n == -1) return {Rational(-1), Rational(0)};
  int m = n > 0 ? n : -n;
  if (m <= 3) return {Rational(2, 3), Rational(1)};
  // Right and left thirds of C_{m-2}.
  if (n > 0) return {Rational(8) * Rational::pow3(-(m - 1)), Rational::pow3(-(m - 3))};
  return {Rational(2) * Rational::pow3(-(m - 2)), Rational(7) * Rational::pow3(-(m - 1))};
}

AffinePiece CantorSystem::piece_map(int n) {
  ClosedInterval dom = piece_hull(n), img = image_hull(n);
  Rational slope = img.length() / dom.length();
  return {dom, slope, img.lo - slope * dom.lo};
}

int CantorSystem::piece_of(const Rational& x) {
  if (x.is_zero()) return 0;
  if (x.sign() > 0) {
    if (Rational(1) < x) throw Error(ErrorCode::domain, "point " + x.str() + " outside X");
    int n = 1;
    while (x < Rational(2) * Rational::pow3(-n)) ++n;
    if (Rational::pow3(-(n - 1)) < x) throw Error(ErrorCode::domain, "point " + x.str() + " outside X");
    return n;
  }
  if (x < Rational(-1)) throw Error(ErrorCode::domain, "point " + x.str() + " outside X");
  int m = 1;
  while (Rational(-2) * Rational::pow3(-m) < x) ++m;
  if (x < -Rational::pow3(-(m - 1))) throw Error(ErrorCode::domain, "point " + x.str() + " outside X");
  return -m;
}

bool CantorSystem::contains(const Rational& x) {
  if (x < Rational(-1) || Rational(1) < x) return false;
  return x.sign() < 0 ? in_middle_thirds(x + Rational(1)) : in_middle_thirds(x);
}

Rational CantorSystem::eval(const Rational& x) const {
  if (!contains(x)) throw Error(ErrorCode::domain, "point " + x.str() + " outside X");
  if (x.is_zero()) return x;
  return piece_map(piece_of(x)).apply(x);
}

ClosedInterval CantorSystem::core() const {
  Rational r = Rational::pow3(-depth_);
  return {-r, r};
}

IntervalSet CantorSystem::approximation(int level) {
  if (level < 0 || level > 20) throw Error(ErrorCode::invalid_argument, "approximation level must lie in [0, 20]");
  std::vector<ClosedInterval> cur{{Rational(0), Rational(1)}};
  for (int k = 0; k < level; ++k) {
    std::vector<ClosedInterval> next;
    for (const auto& iv : cur) {
      Rational t = iv.length() / Rational(3);
      next.emplace_back(iv.lo, iv.lo + t);
      next.emplace_back(iv.hi - t, iv.hi);
    }
    cur.swap(next);
  }
  std::vector<ClosedInterval> all = cur;
  for (const auto& iv : cur) all.emplace_back(iv.lo - Rational(1), iv.hi - Rational(1));
  return IntervalSet::normalize(std::move(all));
}

std::optional<Rational> CantorSystem::ceil_point(const Rational& x) {
  if (Rational(1) < x) return std::nullopt;
  if (x <= Rational(-1)) return Rational(-1);
  if (x.sign() <= 0) return ceil_in_middle_thirds(x + Rational(1)) - Rational(1);
  return ceil_in_middle_thirds(x);
}

std::optional<Rational> CantorSystem::point_in_open(const Rational& a, const Rational& b) {
  if (!(a < b)) return std::nullopt;
  auto p = ceil_point(a);
  if (!p) return std::nullopt;
  if (a < *p) {
    if (*p < b) return p;
    return std::nullopt;
  }
  // a itself is in X: look just to its right.
  if (!accumulates_from_right(a)) {
    if (a == Rational(1)) return std::nullopt;
    // a is the left end of a gap of length 1/3^k; the next point closes it.
    Rational base = a.sign() < 0 ? a + Rational(1) : a;
    auto digits = finite_ternary(base);
    Rational next = a + Rational::pow3(-static_cast<long>(digits->size()));
    if (next < b) return next;
    return std::nullopt;
  }
  for (int j = 1; j <= 600; ++j) {
    auto q = ceil_point(a + (b - a) * Rational::pow3(-j));
    if (q && a < *q && *q < b) return q;
  }
  return std::nullopt;
}

std::optional<Rational> CantorSystem::leftmost_point(const IntervalSet& s) {
  for (const auto& iv : s.parts()) {
    auto p = ceil_point(iv.lo);
    if (p && *p <= iv.hi) return p;
  }
  return std::nullopt;
}

bool CantorSystem::accumulates_from_left(const Rational& p) {
  if (!contains(p)) throw Error(ErrorCode::domain, "point " + p.str() + " outside X");
  if (p == Rational(-1)) return false;
  Rational a = p.sign() <= 0 ? p + Rational(1) : p;
  return !is_right_gap_end(a);
}

bool CantorSystem::accumulates_from_right(const Rational& p) {
  if (!contains(p)) throw Error(ErrorCode::domain, "point " + p.str() + " outside X");
  if (p == Rational(1)) return false;
  Rational a = p.sign() < 0 ? p + Rational(1) : p;
  return !is_left_gap_end(a);
}

}  // namespace shadowlab
