#pragma once

// Itineraries relative to the turning point, the parity-lexicographic order,
// the sequence K and the parameter search in x -> 1 - mu x^2.

#include <compare>
#include <string>
#include <vector>

#include "shadowlab/systems.hpp"

namespace shadowlab {

/// Symbols over L, C, R. A word stops at C (an exact critical hit) or at '?'
/// when a comparison could not be decided at the precision cap.
struct KneadingWord {
  std::string symbols;
  int horizon = 0;
  bool undetermined = false;

  std::size_t size() const { return symbols.size(); }
};

struct ItineraryOptions {
  unsigned precision = 256;
  unsigned max_precision = 8192;
};

/// Symbols of x, f(x), ..., f^(n-1)(x). Unimodal systems only: a quadratic
/// map or a piecewise linear map with a single turning point.
KneadingWord itinerary(const System& s, const Rational& x, int n, const ItineraryOptions& opt = {});
/// Itinerary of the critical value f(c).
KneadingWord kneading(const System& s, int n, const ItineraryOptions& opt = {});

/// Symbol n of K = R L L (R^2 L) (R^3 L) ...; positions 0..14 are the printed
/// prefix, later ones come from the block rule.
char k_generator(long n);
std::string k_prefix(std::size_t length);

/// The length-window prefix reappears starting at some index >= 1.
bool is_recurrent_prefix(const std::string& word, std::size_t window);

/// Lexicographic with L < C < R, reversed after an odd number of R's.
/// Compares up to the shorter length; a proper prefix compares equal.
std::strong_ordering parity_lex_compare(const std::string& a, const std::string& b);

struct ParameterSearch {
  Rational mu;
  Rational lo;
  Rational hi;
  KneadingWord achieved;  // kneading(f_mu, horizon)
  bool matched = false;   // achieved equals the target prefix
  int steps = 0;
  std::string note;
};

/// Bisection on mu in [1, 2] comparing kneading(f_mu, |target|) with target
/// under parity_lex_compare. The orientation is read off the bracket ends.
ParameterSearch find_parameter(const std::string& target, int horizon, int bisection_steps,
                               const ItineraryOptions& opt = {});

/// Lower bound on |f^n(c) - c| over first <= n <= last from outward dyadic
/// enclosures; 0 when some enclosure meets c.
Rational critical_orbit_gap(const QuadraticMap& q, int first, int last, unsigned precision = 1024);

/// Successive kneading words on the grid are weakly increasing.
bool kneading_monotone_on_grid(const std::vector<Rational>& mus, int length, const ItineraryOptions& opt = {});

}  // namespace shadowlab
