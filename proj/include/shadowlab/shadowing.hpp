#pragma once

// Shadowing oracles and solvers: epsilon-shadowing, exact-hit shadowing,
// reduction through an iterate, the staged asymptotic construction, and the
// non-shadowing witnesses.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/pseudo_orbits.hpp"

namespace shadowlab {

enum class Tri { yes, no, unknown };
std::string tri_name(Tri t);

struct ShadowCertificate {
  /// yes: a witness exists; no: certified empty (closed tubes); unknown:
  /// enclosures too coarse at the precision cap.
  Tri verdict = Tri::unknown;
  /// Initial points whose orbit stays in every closed epsilon-tube (interval
  /// systems). Quadratic maps give an outer enclosure.
  IntervalSet feasible;
  /// Symbolic systems: the forced prefix (shift) or residue class (odometer).
  std::string feasible_description;
  std::optional<Point> witness;
  /// Quadratic exact-hit witnesses are irrational; this brackets one.
  std::optional<ClosedInterval> witness_enclosure;
  std::optional<DeviationReport> report;
  std::map<std::string, Rational> constants;
  /// S_0, S_1, ..., S_m when requested.
  std::vector<IntervalSet> transcript;
  std::string note;
  unsigned precision_used = 0;

  bool feasible_nonempty() const { return verdict == Tri::yes; }
};

struct SolveOptions {
  bool transcript = false;
  /// Enclosure bits for quadratic maps; doubled on unknown up to the cap.
  unsigned precision = 64;
  unsigned max_precision = 1024;
};

/// Decides whether some true orbit stays within closed distance epsilon of
/// every orbit point. Exact for piecewise-affine and symbolic systems,
/// three-valued for quadratic maps. s-limit systems are rejected.
ShadowCertificate shadow_oracle(const System& s, const PseudoOrbit& orbit, const Rational& epsilon,
                                const SolveOptions& opt = {});

/// Finds y with d(f^i(y), x_i) <= epsilon for i < m and f^m(y) = x_m.
/// verdict no means no exact-hit point exists inside the tubes.
ShadowCertificate h_shadow_solve(const System& s, const PseudoOrbit& orbit, const Rational& epsilon,
                                 const SolveOptions& opt = {});

struct BallExpandingDelta {
  Rational epsilon_prime;
  Rational delta;
};
/// epsilon' = min(epsilon, nu), delta = (mu - 1) epsilon'.
BallExpandingDelta ball_expanding_delta(const Rational& mu, const Rational& nu, const Rational& epsilon);

/// delta with e_{k+1} <= L e_k + delta, e_0 <= delta  =>  e_k <= epsilon for
/// k <= n. L below 1 is treated as 1.
Rational finite_horizon_delta(const Rational& lipschitz, int n, const Rational& epsilon);

/// Solves through f^n: extends the orbit backwards inside region so its
/// length is a multiple of n, solves the sampled orbit of f^n exactly, and
/// pushes the witness forward. Piecewise linear maps only.
ShadowCertificate h_shadow_via_iterate(const System& s, int n, const IntervalSet& region, const PseudoOrbit& orbit,
                                       const Rational& epsilon);

/// f(region) covers region, tested on sample points and interval ends.
bool covers_region(const System& s, const IntervalSet& region, std::uint64_t seed, int samples = 64);

struct StagedShadowLog {
  std::vector<Point> stage_points;          // z_0, z_1, ...
  std::vector<std::size_t> stage_horizons;  // k_0 = 0, k_1, ...
  std::vector<Rational> stage_bounds;       // epsilon_i = epsilon 2^-(i+1)
  std::vector<Rational> stage_deltas;
  /// Conditions (a)-(d) per stage.
  std::vector<std::array<bool, 4>> condition_checks;
  std::optional<std::size_t> failed_stage;
  Rational terminal_deviation;
  std::size_t truncation_horizon = 0;
  std::string note;

  bool complete() const;
};

/// Staged construction for asymptotic pseudo-orbits: each stage re-solves the
/// spliced orbit z_{i-1}, ..., f^{k_i}(z_{i-1}), x_{k_i+1}, ..., x_{k_{i+1}}
/// with an exact hit at tolerance epsilon_i. (mu, nu) are ball-expanding
/// constants of the system on region.
StagedShadowLog asymptotic_shadow(const System& s, const PseudoOrbit& orbit, const IntervalSet& region,
                                  const Rational& epsilon, const Rational& mu, const Rational& nu, int stages);

struct NonShadowWitness {
  PseudoOrbit orbit;
  ShadowCertificate certificate;
  Rational lambda;
  Rational epsilon;
  Rational delta;
  int recurrence_horizon = 0;
  Rational recurrence_gap;  // min over 0 < n <= horizon of |T^n(c) - c|
  std::string side;         // "below" or "above" T^2(c)
  std::size_t orbit_length = 0;
};

/// Deflected pseudo-orbit through the turning point of the tent map T_lambda
/// (1 < lambda < 2) with the exact oracle verdict. Both deflection sides are
/// tried for orbit lengths up to max_length; an empty feasible set is
/// reported when found, otherwise the last attempt.
NonShadowWitness nonshadow_witness_tent(const Rational& lambda, const Rational& epsilon, const Rational& delta,
                                        int recurrence_horizon = 200, std::size_t max_length = 80);

struct SLimitCheck {
  int n = 0;
  Rational epsilon;
  Rational delta;
  PseudoOrbit gamma;
  Rational max_jump;
  bool is_pseudo_orbit = false;
  bool tail_unique = false;
  Rational step0_deviation;
  Rational max_deviation;
  bool deviation_exceeds = false;
  std::size_t horizon = 0;

  bool passed() const { return is_pseudo_orbit && tail_unique && deviation_exceeds; }
};

/// Smallest N with g^N(1/2) = 2^-(2^N) < delta and 2^-N < delta.
int slimit_minimal_n(const Rational& delta);

SLimitCheck slimit_counterexample_check(const SLimitSystem& s, int n, const Rational& epsilon, const Rational& delta,
                                        std::size_t horizon = 32);

namespace detail {
ShadowCertificate quadratic_oracle(const QuadraticMap& q, const PseudoOrbit& orbit, const Rational& epsilon,
                                   const SolveOptions& opt);
ShadowCertificate quadratic_h_solve(const QuadraticMap& q, const PseudoOrbit& orbit, const Rational& epsilon,
                                    const SolveOptions& opt);
ShadowCertificate shift_oracle(const ShiftSystem& s, const PseudoOrbit& orbit, const Rational& epsilon);
ShadowCertificate shift_h_solve(const ShiftSystem& s, const PseudoOrbit& orbit, const Rational& epsilon);
ShadowCertificate odometer_oracle(const OdometerSystem& s, const PseudoOrbit& orbit, const Rational& epsilon);
ShadowCertificate odometer_h_solve(const OdometerSystem& s, const PseudoOrbit& orbit, const Rational& epsilon);
/// Smallest K with 2^-K <= r.
std::size_t prefix_length_for(const Rational& r);
}  // namespace detail

}  // namespace shadowlab
