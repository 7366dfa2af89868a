#pragma once

// The concrete dynamical systems behind one contract: points, metric,
// evaluation, monotone affine branches, preimages and critical points.

#include <string>
#include <variant>
#include <vector>

#include "shadowlab/numerics.hpp"

namespace shadowlab {

/// Eventually periodic one-sided symbol sequence prefix·cycle·cycle·...
/// An empty cycle denotes a finite word (odometer points).
struct SymbolWord {
  std::string prefix;
  std::string cycle;

  SymbolWord() = default;
  SymbolWord(std::string p, std::string c = {});
  /// Parses "prefix(cycle)" or a plain finite word.
  static SymbolWord parse(std::string_view text);
  std::string str() const;

  bool finite() const { return cycle.empty(); }
  /// Length of a finite word; throws for infinite sequences.
  std::size_t length() const;
  char at(std::size_t i) const;
  /// First n symbols (n may exceed the prefix for infinite sequences).
  std::string take(std::size_t n) const;
  /// Left shift by one symbol.
  SymbolWord shifted() const;

  friend bool operator==(const SymbolWord&, const SymbolWord&) = default;
};

using Point = std::variant<Rational, SymbolWord>;

const Rational& as_rational(const Point& p);
const SymbolWord& as_word(const Point& p);
std::string point_str(const Point& p);

/// x -> slope * x + offset on a closed domain interval.
struct AffinePiece {
  ClosedInterval domain;
  Rational slope;
  Rational offset;

  Rational apply(const Rational& x) const { return slope * x + offset; }
  ClosedInterval image() const;
};

class PiecewiseLinearMap {
 public:
  /// Breakpoints strictly increasing from 0 to 1, values in [0, 1].
  PiecewiseLinearMap(std::vector<Rational> breakpoints, std::vector<Rational> values);

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& values() const { return values_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  Rational eval(const Rational& x) const;
  /// Index of a piece whose domain contains x (the left one at breakpoints).
  std::size_t piece_index(const Rational& x) const;
  Rational max_abs_slope() const;
  Rational min_abs_slope() const;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Rational> values_;
  std::vector<AffinePiece> pieces_;
};

/// Tent map x -> lambda * min(x, 1 - x), 0 < lambda <= 2.
PiecewiseLinearMap tent_map(const Rational& lambda);
/// Exact n-fold composition as a piecewise linear map.
PiecewiseLinearMap iterate_map(const PiecewiseLinearMap& f, int n);

enum class QuadraticFamily { logistic, quadratic };

/// logistic: x -> lambda x (1 - x) on [0, 1], lambda in (0, 4].
/// quadratic: x -> 1 - mu x^2 on [-1, 1], mu in [1, 2].
class QuadraticMap {
 public:
  QuadraticMap(QuadraticFamily family, Rational parameter);

  QuadraticFamily family() const { return family_; }
  const Rational& parameter() const { return parameter_; }
  ClosedInterval domain() const;
  Rational critical_point() const;
  Rational eval(const Rational& x) const;
  /// k-th derivative, k in 1..3.
  Rational derivative(int k, const Rational& x) const;
  /// Exact image of an interval inside the domain.
  ClosedInterval image(const ClosedInterval& iv) const;

 private:
  QuadraticFamily family_;
  Rational parameter_;
};

/// Cantor set X = C ∪ (C - 1) in [-1, 1] (C the middle-thirds set) with the
/// piecewise map that fixes 0 and sends each C_n affinely onto its tabled
/// image. Points are exact rationals with exact membership in X. `depth`
/// bounds set-level work: pieces with |n| <= depth are resolved explicitly.
class CantorSystem {
 public:
  struct Piece {
    int index;  // n in ±1..±depth
    AffinePiece map;
  };

  explicit CantorSystem(int depth);

  int depth() const { return depth_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Hull of C_n: [2/3^n, 1/3^(n-1)] or [-1/3^(|n|-1), -2/3^|n|].
  static ClosedInterval piece_hull(int n);
  /// Hull of f(C_n) from the image table.
  static ClosedInterval image_hull(int n);
  /// Affine piece on C_n, obtained by matching hull endpoints to image endpoints.
  static AffinePiece piece_map(int n);
  /// Piece index containing x != 0 (any |n|, not bounded by depth); 0 if x is 0.
  static int piece_of(const Rational& x);

  /// Exact membership in X.
  static bool contains(const Rational& x);
  Rational eval(const Rational& x) const;

  /// Points of X in [-1/3^depth, 1/3^depth]: the part not resolved into pieces.
  ClosedInterval core() const;
  /// Level-k outer approximation of X (2^(k+1) intervals).
  static IntervalSet approximation(int level);

  /// Smallest point of X that is >= x, if any.
  static std::optional<Rational> ceil_point(const Rational& x);
  /// Some point of X in the open interval (a, b), if any.
  static std::optional<Rational> point_in_open(const Rational& a, const Rational& b);
  /// Leftmost point of X in a closed interval set.
  static std::optional<Rational> leftmost_point(const IntervalSet& s);
  /// X has points arbitrarily close to p from the left (right).
  static bool accumulates_from_left(const Rational& p);
  static bool accumulates_from_right(const Rational& p);

 private:
  int depth_;
  std::vector<Piece> pieces_;
};

/// One-sided shift of finite type over single-character symbols.
class ShiftSystem {
 public:
  ShiftSystem(std::string alphabet, std::vector<std::string> forbidden);

  const std::string& alphabet() const { return alphabet_; }
  const std::vector<std::string>& forbidden() const { return forbidden_; }
  /// Longest forbidden word length (1 for the full shift).
  std::size_t memory() const { return memory_; }

  bool admissible_word(std::string_view w) const;
  bool contains(const SymbolWord& x) const;
  /// Symbols that may follow the word's last (memory - 1) symbols.
  std::vector<char> followers(std::string_view w) const;
  /// Some admissible eventually periodic point starting with w, if any.
  std::optional<SymbolWord> extend(const std::string& w) const;
  /// Seeded random admissible point starting with w (nullopt if none).
  std::optional<SymbolWord> random_extension(const std::string& w, Rng& rng, std::size_t free_symbols = 12) const;

 private:
  std::string alphabet_;
  std::vector<std::string> forbidden_;
  std::size_t memory_ = 1;
};

/// Binary adding machine on words of fixed length; the first symbol is the
/// least significant digit.
class OdometerSystem {
 public:
  explicit OdometerSystem(int depth);
  int depth() const { return depth_; }
  bool contains(const SymbolWord& w) const;
  SymbolWord add(const SymbolWord& w, long long k) const;
  std::uint64_t to_index(const SymbolWord& w) const;
  SymbolWord from_index(std::uint64_t v) const;

 private:
  int depth_;
};

/// X = [0, 1] ∪ {-1/2^n : 1 <= n <= tail_depth} with g(x) = x^2 on [0, 1]
/// and the identity on the isolated points.
class SLimitSystem {
 public:
  explicit SLimitSystem(int tail_depth);
  int tail_depth() const { return tail_depth_; }
  bool contains(const Rational& x) const;
  Rational eval(const Rational& x) const;

 private:
  int tail_depth_;
};

using System = std::variant<PiecewiseLinearMap, QuadraticMap, CantorSystem, ShiftSystem, OdometerSystem, SLimitSystem>;

std::string kind_name(const System& s);
bool is_interval_system(const System& s);
bool is_piecewise_affine(const System& s);
bool is_symbolic(const System& s);

bool in_space(const System& s, const Point& x);
Point eval(const System& s, const Point& x);
Rational eval(const System& s, const Rational& x);
Point iterate(const System& s, Point x, int n);
Rational distance(const System& s, const Point& x, const Point& y);

/// Maximal affine pieces meeting the window (piecewise-affine systems).
std::vector<AffinePiece> branches(const System& s, const IntervalSet& window);
/// {x : f(x) in target}; quadratic/s-limit endpoints are outer enclosures of
/// width <= 2^-precision.
IntervalSet preimage_set(const System& s, const IntervalSet& target, unsigned precision = 64);
/// Exact point preimages f^-1(y) for piecewise-affine interval systems.
std::vector<Rational> point_preimages(const System& s, const Rational& y);
std::vector<Rational> critical_set(const System& s);
/// Closed interval hull of the space of an interval system.
ClosedInterval space_hull(const System& s);
/// Upper bound on the Lipschitz constant of an interval system.
Rational lipschitz_bound(const System& s);

}  // namespace shadowlab
