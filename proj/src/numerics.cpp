#include "shadowlab/numerics.hpp"

#include <algorithm>
#include <cctype>

namespace shadowlab {

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

namespace {

bool valid_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer_text(num) || !valid_integer_text(den) || den[0] == '-' || den[0] == '+')
    throw Error(ErrorCode::parse, "malformed rational '" + std::string(text) + "'");
  std::string n(num[0] == '+' ? num.substr(1) : num);
  mpz_class zn(n, 10), zd(std::string(den), 10);
  if (zd == 0) throw Error(ErrorCode::parse, "zero denominator in '" + std::string(text) + "'");
  mpq_class q(zn, zd);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational Rational::pow2(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent >= 0 ? Rational(mpq_class(p)) : Rational(mpq_class(mpz_class(1), p));
}

Rational Rational::pow3(long exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 3, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent >= 0 ? Rational(mpq_class(p)) : Rational(mpq_class(mpz_class(1), p));
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::size_t Rational::bit_size() const {
  return mpz_sizeinbase(q_.get_num_mpz_t(), 2) + mpz_sizeinbase(q_.get_den_mpz_t(), 2);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::domain, "division by zero");
  q_ /= o.q_;
  return *this;
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational floor_dyadic(const Rational& x, unsigned bits) {
  mpz_class scaled = x.numerator() << bits;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.denominator().get_mpz_t());
  return Rational(mpq_class(q)) * Rational::pow2(-static_cast<long>(bits));
}

Rational ceil_dyadic(const Rational& x, unsigned bits) {
  mpz_class scaled = x.numerator() << bits;
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.denominator().get_mpz_t());
  return Rational(mpq_class(q)) * Rational::pow2(-static_cast<long>(bits));
}

Rational power(const Rational& base, unsigned exponent) {
  Rational result(1), b = base;
  while (exponent) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent) b *= b;
  }
  return result;
}

std::pair<Rational, Rational> sqrt_enclosure(const Rational& x, unsigned bits) {
  if (x.sign() < 0) throw Error(ErrorCode::domain, "square root of negative number");
  // floor(sqrt(x * 4^bits)) / 2^bits bounds sqrt(x) from below.
  mpz_class scaled_num = x.numerator() << (2 * bits);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), x.denominator().get_mpz_t());
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), q.get_mpz_t());
  Rational scale = Rational::pow2(-static_cast<long>(bits));
  Rational lo = Rational(mpq_class(r)) * scale;
  if (lo * lo == x) return {lo, lo};
  return {lo, lo + scale};
}

ClosedInterval::ClosedInterval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (hi < lo) throw Error(ErrorCode::invalid_argument, "interval with lo > hi: [" + lo.str() + ", " + hi.str() + "]");
}

ClosedInterval ClosedInterval::ball(const Rational& center, const Rational& radius) {
  if (radius.sign() < 0) throw Error(ErrorCode::invalid_argument, "negative radius");
  return {center - radius, center + radius};
}

IntervalSet IntervalSet::normalize(std::vector<ClosedInterval> raw) {
  for (const auto& iv : raw)
    if (iv.hi < iv.lo) throw Error(ErrorCode::invalid_argument, "interval with lo > hi");
  std::sort(raw.begin(), raw.end(), [](const ClosedInterval& a, const ClosedInterval& b) { return a.lo < b.lo; });
  IntervalSet out;
  for (auto& iv : raw) {
    if (!out.parts_.empty() && iv.lo <= out.parts_.back().hi) {
      if (out.parts_.back().hi < iv.hi) out.parts_.back().hi = iv.hi;
    } else {
      out.parts_.push_back(std::move(iv));
    }
  }
  return out;
}

bool IntervalSet::contains(const Rational& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const ClosedInterval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  return x <= std::prev(it)->hi;
}

bool IntervalSet::contains(const IntervalSet& other) const {
  return other.intersect(*this) == other;
}

Rational IntervalSet::measure() const {
  Rational total(0);
  for (const auto& iv : parts_) total += iv.length();
  return total;
}

std::optional<ClosedInterval> IntervalSet::hull() const {
  if (parts_.empty()) return std::nullopt;
  return ClosedInterval(parts_.front().lo, parts_.back().hi);
}

std::optional<Rational> IntervalSet::leftmost() const {
  if (parts_.empty()) return std::nullopt;
  return parts_.front().lo;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  IntervalSet out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const auto& a = parts_[i];
    const auto& b = other.parts_[j];
    Rational lo = max(a.lo, b.lo);
    Rational hi = min(a.hi, b.hi);
    if (lo <= hi) out.parts_.emplace_back(std::move(lo), std::move(hi));
    if (a.hi < b.hi) ++i; else ++j;
  }
  return out;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<ClosedInterval> raw = parts_;
  raw.insert(raw.end(), other.parts_.begin(), other.parts_.end());
  return normalize(std::move(raw));
}

IntervalSet IntervalSet::affine_image(const Rational& slope, const Rational& offset) const {
  if (slope.is_zero()) throw Error(ErrorCode::invalid_argument, "affine_image with zero slope");
  std::vector<ClosedInterval> raw;
  raw.reserve(parts_.size());
  for (const auto& iv : parts_) {
    Rational a = slope * iv.lo + offset, b = slope * iv.hi + offset;
    if (slope.sign() > 0) raw.emplace_back(std::move(a), std::move(b));
    else raw.emplace_back(std::move(b), std::move(a));
  }
  return normalize(std::move(raw));
}

IntervalSet IntervalSet::inflate(const Rational& radius) const {
  if (radius.sign() < 0) throw Error(ErrorCode::invalid_argument, "negative radius");
  std::vector<ClosedInterval> raw;
  for (const auto& iv : parts_) raw.emplace_back(iv.lo - radius, iv.hi + radius);
  return normalize(std::move(raw));
}

Rational IntervalSet::distance_to(const Rational& x) const {
  if (parts_.empty()) throw Error(ErrorCode::domain, "distance to empty set");
  Rational best = abs(x - parts_.front().lo);
  for (const auto& iv : parts_) {
    if (iv.contains(x)) return Rational(0);
    best = min(best, min(abs(x - iv.lo), abs(x - iv.hi)));
  }
  return best;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) { return a.intersect(b); }
IntervalSet affine_image(const IntervalSet& s, const Rational& slope, const Rational& offset) {
  return s.affine_image(slope, offset);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "Rng::below(0)");
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = engine_();
    if (v < limit) return v % n;
  }
}

Rational Rng::uniform(const Rational& lo, const Rational& hi, unsigned bits) {
  std::uint64_t k = bits >= 64 ? next() : below((std::uint64_t{1} << bits) + 1);
  mpq_class frac(mpz_class(std::to_string(k)), mpz_class(1) << bits);
  frac.canonicalize();
  return lo + (hi - lo) * Rational(frac);
}

Rational Rng::uniform(const IntervalSet& set, unsigned bits) {
  if (set.empty()) throw Error(ErrorCode::domain, "sampling from empty set");
  Rational total = set.measure();
  if (total.is_zero()) return set.parts()[below(set.size())].lo;
  Rational u = uniform(Rational(0), total, bits);
  for (const auto& iv : set.parts()) {
    if (u <= iv.length()) return iv.lo + u;
    u -= iv.length();
  }
  return set.parts().back().hi;
}

}  // namespace shadowlab
