#pragma once

// Certifiers and falsifiers for expanding, (★), ball expanding, openness,
// local injectivity and positive expansivity, plus the Schwarzian and
// epsilon-net checks for interval maps.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadowlab/systems.hpp"

namespace shadowlab {

enum class Property { expanding, star, ball_expanding, open_on, locally_injective, positively_expansive };
std::string property_name(Property p);

enum class Holds { certified, falsified, undetermined };
std::string holds_name(Holds h);

struct ExpansivityVerdict {
  Property property = Property::expanding;
  Holds holds = Holds::undetermined;
  /// delta, mu, nu, b as applicable; ball-expanding counterexamples add
  /// counter_epsilon.
  std::map<std::string, Rational> constants;
  /// (x, y) for distance-type properties; (x, z) for ball expanding, where z
  /// lies in B_{mu eps}(f(x)) but not in f(B_eps(x)).
  std::optional<std::pair<Point, Point>> counterexample;
  std::optional<Rational> violating_quantity;
  std::string detail;
};

/// Interval systems use `carrier`; symbolic systems use `points`.
struct RegionSpec {
  IntervalSet carrier;
  std::vector<Point> points;
  Rational margin{0};

  static RegionSpec interval(const Rational& lo, const Rational& hi, const Rational& margin = Rational(0));
  static RegionSpec of(IntervalSet carrier, const Rational& margin = Rational(0));
  /// Rational points also fill the carrier.
  static RegionSpec of_points(std::vector<Point> points);
};

/// d(f(x), f(y)) >= mu d(x, y) for x, y in the region with d(x, y) < delta.
ExpansivityVerdict check_expanding(const System& s, const RegionSpec& region, const Rational& delta, const Rational& mu,
                                   std::uint64_t seed = 0);
/// Same with only x constrained to the region.
ExpansivityVerdict check_star(const System& s, const RegionSpec& region, const Rational& delta, const Rational& mu,
                              std::uint64_t seed = 0);

/// B_{mu eps}(f(x)) ⊆ f(B_eps(x)) with closed balls, tested exactly on the
/// grid and, for piecewise linear maps, certified by breakpoint analysis.
ExpansivityVerdict check_ball_expanding(const System& s, const RegionSpec& region, const Rational& mu,
                                        const Rational& nu, const std::vector<Rational>& eps_grid,
                                        std::uint64_t seed = 0, int samples = 16);

struct BallConstants {
  Rational mu;
  Rational nu;
};
/// Constants certified by the breakpoint analysis, with nu at most nu_cap.
std::optional<BallConstants> ball_expanding_constants(const PiecewiseLinearMap& f, const IntervalSet& region,
                                                      const Rational& nu_cap = Rational(1, 4));

/// Exact image of the open window X ∩ (-2/3^n, 2/3^n) under the Cantor map,
/// compared with X ∩ [0, 3^-(n-3)] and X ∩ [0, 3^-(n-2)].
struct CantorWindowImage {
  int n = 0;
  IntervalSet image;  // X ∩ image is f(X ∩ window)
  bool matches_printed = false;
  bool matches_corrected = false;
  std::optional<Rational> printed_mismatch;  // a point of X in exactly one side
};
CantorWindowImage cantor_window_image(const CantorSystem& s, int n);

ExpansivityVerdict check_open_at(const System& s, const Point& x);
ExpansivityVerdict check_open_on(const System& s, const RegionSpec& region);
ExpansivityVerdict check_locally_injective(const System& s, const RegionSpec& region);

/// Searches for x != y with d(f^n x, f^n y) < b for every n >= 0, shown by
/// the orbits merging or the pair state repeating within the horizon (or by
/// the odometer's isometry). Never certifies.
ExpansivityVerdict positively_expansive_falsify(const System& s, const Rational& b, int horizon, std::uint64_t seed);
/// Distinct points of a one-sided shift reach distance 1 at their first
/// disagreement, so b <= 1 certifies.
ExpansivityVerdict certify_shift_positive_expansivity(const ShiftSystem& s, const Rational& b);

/// f'''/f' - (3/2)(f''/f')^2; throws at the critical point.
Rational schwarzian(const QuadraticMap& q, const Rational& x);

struct EpsNetResult {
  bool is_net = false;
  Rational max_gap;
  std::size_t points = 0;
  /// false when the preimage count hit the cap; the verdict is then partial.
  bool complete = true;
  /// Quadratic maps: max_gap is an upper bound from enclosures.
  bool enclosure = false;
};
EpsNetResult eps_net_check(const System& s, const std::vector<Point>& targets, int m, const Rational& epsilon,
                           std::size_t cap = 1u << 16);

struct Theorem25Report {
  RegionSpec neighbourhood;
  ExpansivityVerdict open_on;
  ExpansivityVerdict expanding;
  ExpansivityVerdict ball_expanding;
  ExpansivityVerdict locally_injective;
  Holds side1 = Holds::undetermined;
  Holds side2 = Holds::undetermined;
  /// false only for a certified-versus-falsified disagreement.
  bool consistent = true;
};
/// margin defaults to half the distance from the region to the critical set.
Theorem25Report theorem25_crosscheck(const System& s, const RegionSpec& region,
                                     std::optional<Rational> margin = std::nullopt);

}  // namespace shadowlab
