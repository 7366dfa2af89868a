#pragma once

// Registry of reproducible scenarios, one per worked example or theorem.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/report.hpp"

namespace shadowlab {

struct ScenarioParams {
  std::uint64_t seed = 7;
  /// Enclosure bit cap for quadratic maps and kneading.
  unsigned precision = 1024;
  /// Cantor or odometer truncation; each scenario has its own default.
  std::optional<int> depth;
  std::optional<int> trials;
  /// Scenario-specific keys such as epsilon or delta, as text.
  std::map<std::string, std::string> extras;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::string> extra_keys;
  std::function<Report(const ScenarioParams&)> run;
};

const std::vector<Scenario>& scenario_registry();
/// Throws invalid_argument for an unknown name or an unrecognised extra key.
Report run_scenario(const std::string& name, const ScenarioParams& params);

/// Random walk x_{i+1} in the closed ball of radius delta (1 - 2^-10) about
/// f(x_i), intersected with region, stopping early when that set is empty.
PseudoOrbit region_walk(const System& s, const IntervalSet& region, const Rational& x0, std::size_t length,
                        const Rational& delta, Rng& rng);

/// Full-lap piecewise linear map with `laps` pieces, values alternating 0, 1.
PiecewiseLinearMap random_full_lap_map(Rng& rng, int laps);

}  // namespace shadowlab
