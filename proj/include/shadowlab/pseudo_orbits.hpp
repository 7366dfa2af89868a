#pragma once

// Pseudo-orbits: construction, perturbation, splicing, jump and deviation
// measurement.

#include <optional>
#include <vector>

#include "shadowlab/systems.hpp"

namespace shadowlab {

/// bound(n) = scale * 2^-(n+1).
struct DecaySchedule {
  Rational scale;
  Rational bound(std::size_t n) const { return scale * Rational::pow2(-static_cast<long>(n) - 1); }
};

struct PseudoOrbit {
  std::vector<Point> points;
  std::optional<Rational> claimed_delta;
  std::optional<DecaySchedule> schedule;

  std::size_t size() const { return points.size(); }
  /// Index of the last point (m for x_0..x_m).
  std::size_t last() const;
};

struct DeviationReport {
  Rational max_deviation;
  std::vector<Rational> per_step;
  bool exact_hit = false;
};

/// d(f(x_i), x_{i+1}) for each i.
std::vector<Rational> jumps(const System& s, const PseudoOrbit& orbit);
/// Largest jump, 0 for a true orbit or a single point.
Rational verify_jumps(const System& s, const PseudoOrbit& orbit);

PseudoOrbit true_orbit(const System& s, const Point& x0, std::size_t length);

/// x_{i+1} drawn from the closed ball of radius delta (1 - 2^-10) about
/// f(x_i), intersected with the space. length counts points.
PseudoOrbit perturbed_orbit(const System& s, const Point& x0, std::size_t length, const Rational& delta,
                            std::uint64_t seed);
/// Same, with the jump after x_i bounded by schedule.bound(i) (1 - 2^-10).
PseudoOrbit decaying_orbit(const System& s, const Point& x0, std::size_t length, const DecaySchedule& schedule,
                           std::uint64_t seed);

/// Sample a point of the space within distance r of center (closed ball).
Point sample_ball(const System& s, const Point& center, const Rational& r, Rng& rng);

DeviationReport deviation(const System& s, const Point& y, const PseudoOrbit& orbit);

/// prefix followed by suffix.points, claimed delta recomputed.
PseudoOrbit splice(const System& s, const std::vector<Point>& prefix, const PseudoOrbit& suffix);

}  // namespace shadowlab
