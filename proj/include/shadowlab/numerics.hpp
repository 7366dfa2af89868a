#pragma once

// Exact rational scalars and finite unions of closed intervals.

#include <compare>
#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shadowlab {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  unsupported = 3,
  infeasible = 4,
  parse = 5,
  io = 6,
  limit = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Arbitrary-precision rational in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "p/q" or an integer "p". Throws Error(parse) on malformed text.
  static Rational parse(std::string_view text);
  static Rational pow2(long exponent);  // 2^exponent, negative exponents allowed
  static Rational pow3(long exponent);

  /// Canonical "p/q" form (always with a denominator, q > 0).
  std::string str() const;
  double to_double() const { return q_.get_d(); }

  const mpq_class& raw() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  /// Bits in numerator plus denominator; a rough size measure.
  std::size_t bit_size() const;

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

Rational abs(const Rational& x);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
/// Largest dyadic k/2^bits not above x.
Rational floor_dyadic(const Rational& x, unsigned bits);
/// Smallest dyadic k/2^bits not below x.
Rational ceil_dyadic(const Rational& x, unsigned bits);
/// Integer power with non-negative exponent.
Rational power(const Rational& base, unsigned exponent);
/// Dyadic enclosure [lo, hi] of sqrt(x), hi - lo <= 2^-bits. x >= 0.
std::pair<Rational, Rational> sqrt_enclosure(const Rational& x, unsigned bits);

struct ClosedInterval {
  Rational lo;
  Rational hi;

  ClosedInterval() = default;
  ClosedInterval(Rational lo_, Rational hi_);
  static ClosedInterval point(const Rational& x) { return {x, x}; }
  static ClosedInterval ball(const Rational& center, const Rational& radius);

  Rational length() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / Rational(2); }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool is_point() const { return lo == hi; }
  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

/// Canonical finite union of disjoint closed intervals, sorted ascending with
/// positive-length gaps between parts. The empty list is the empty set.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(ClosedInterval single) : parts_{std::move(single)} {}

  /// Merges overlapping and touching intervals.
  static IntervalSet normalize(std::vector<ClosedInterval> raw);

  const std::vector<ClosedInterval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  bool contains(const Rational& x) const;
  bool contains(const IntervalSet& other) const;
  Rational measure() const;
  std::optional<ClosedInterval> hull() const;
  std::optional<Rational> leftmost() const;

  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;
  /// Exact image {slope * x + offset}. Throws on slope == 0.
  IntervalSet affine_image(const Rational& slope, const Rational& offset) const;
  /// Closed neighbourhood of the given radius (Minkowski sum with [-r, r]).
  IntervalSet inflate(const Rational& radius) const;
  /// Distance from x to the set; throws on empty set.
  Rational distance_to(const Rational& x) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<ClosedInterval> parts_;
};

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet affine_image(const IntervalSet& s, const Rational& slope, const Rational& offset);

/// Seeded generator whose outputs depend only on the seed (no
/// implementation-defined distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n) by rejection sampling. n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform point of the 2^bits grid on [lo, hi].
  Rational uniform(const Rational& lo, const Rational& hi, unsigned bits = 32);
  /// Uniform (by measure) grid point in a nonempty set; point parts get
  /// probability zero unless the set has measure zero.
  Rational uniform(const IntervalSet& set, unsigned bits = 32);

 private:
  std::mt19937_64 engine_;
};

}  // namespace shadowlab
