#include <functional>
#include <set>

#include "shadowlab/shadowing.hpp"

namespace shadowlab::detail {

namespace {

// Symbols forced on y by d(f^j(y), x_j) <= eps for j in [0, last]: y[p] must
// equal x_j[p - j] whenever p - j < k. Returns nullopt on a conflict.
std::optional<std::vector<std::optional<char>>> forced_symbols(const PseudoOrbit& orbit, std::size_t last,
                                                               std::size_t k, std::size_t length) {
  std::vector<std::optional<char>> out(length);
  for (std::size_t j = 0; j <= last; ++j) {
    const auto& w = as_word(orbit.points[j]);
    for (std::size_t t = 0; t < k && j + t < length; ++t) {
      char c = w.at(t);
      auto& slot = out[j + t];
      if (slot && *slot != c) return std::nullopt;
      slot = c;
    }
  }
  return out;
}

}  // namespace

ShadowCertificate shift_oracle(const ShiftSystem& s, const PseudoOrbit& orbit, const Rational& epsilon) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  std::size_t m = orbit.last();
  std::size_t k = prefix_length_for(epsilon);
  cert.constants["prefix_length"] = Rational(static_cast<long>(k));
  if (k == 0) {
    cert.verdict = Tri::yes;
    cert.witness = orbit.points[0];
    cert.feasible_description = "[]";
    cert.report = deviation(System(s), orbit.points[0], orbit);
    return cert;
  }
  auto forced = forced_symbols(orbit, m, k, m + k);
  if (!forced) {
    cert.verdict = Tri::no;
    cert.note = "tube constraints disagree on a symbol";
    return cert;
  }
  std::string w;
  for (const auto& c : *forced) w.push_back(*c);
  cert.feasible_description = "[" + w + "]";
  auto y = s.extend(w);
  if (!y) {
    cert.verdict = Tri::no;
    cert.note = "forced prefix " + w + " has no admissible continuation";
    return cert;
  }
  cert.verdict = Tri::yes;
  cert.witness = *y;
  cert.report = deviation(System(s), *y, orbit);
  return cert;
}

ShadowCertificate shift_h_solve(const ShiftSystem& s, const PseudoOrbit& orbit, const Rational& epsilon) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  std::size_t m = orbit.last();
  std::size_t k = prefix_length_for(epsilon);
  cert.constants["prefix_length"] = Rational(static_cast<long>(k));
  const auto& target = as_word(orbit.points[m]);
  if (m == 0) {
    cert.verdict = Tri::yes;
    cert.witness = target;
    cert.report = deviation(System(s), target, orbit);
    return cert;
  }
  // y = u x_m with constraints from x_0 .. x_{m-1}.
  std::size_t span = m + k;
  auto forced = forced_symbols(orbit, m - 1, k, span);
  if (forced) {
    for (std::size_t p = m; p < span && forced; ++p)
      if ((*forced)[p] && *(*forced)[p] != target.at(p - m)) forced.reset();
  }
  if (!forced) {
    cert.verdict = Tri::no;
    cert.note = "tube constraints disagree with the terminal point";
    return cert;
  }
  // Fill free positions of u so that u x_m is admissible (depth-first).
  std::string tail = target.take(std::max<std::size_t>(s.memory(), 1));
  std::set<std::pair<std::size_t, std::string>> dead;
  std::string u;
  std::function<bool()> fill = [&]() -> bool {
    std::size_t p = u.size();
    if (p == m) return s.admissible_word(u + tail);
    std::string state = u.substr(u.size() - std::min(u.size(), s.memory()));
    if (dead.count({p, state})) return false;
    for (char c : s.followers(u)) {
      if ((*forced)[p] && *(*forced)[p] != c) continue;
      u.push_back(c);
      if (fill()) return true;
      u.pop_back();
    }
    dead.insert({p, state});
    return false;
  };
  if (!fill()) {
    cert.verdict = Tri::no;
    cert.note = "no admissible word reaches the terminal point inside the tubes";
    return cert;
  }
  SymbolWord y(u + target.prefix, target.cycle);
  if (!s.contains(y)) {
    cert.verdict = Tri::no;
    cert.note = "exact-hit candidate is not admissible";
    return cert;
  }
  cert.verdict = Tri::yes;
  cert.witness = y;
  cert.feasible_description = "{" + y.str() + "}";
  cert.report = deviation(System(s), y, orbit);
  return cert;
}

ShadowCertificate odometer_oracle(const OdometerSystem& s, const PseudoOrbit& orbit, const Rational& epsilon) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  std::size_t k = std::min<std::size_t>(prefix_length_for(epsilon), static_cast<std::size_t>(s.depth()));
  std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  std::uint64_t residue = s.to_index(as_word(orbit.points[0])) & mask;
  for (std::size_t j = 1; j < orbit.points.size(); ++j) {
    std::uint64_t r = (s.to_index(as_word(orbit.points[j])) - j) & mask;
    if (r != residue) {
      cert.verdict = Tri::no;
      cert.note = "residues mod 2^" + std::to_string(k) + " disagree at step " + std::to_string(j);
      return cert;
    }
  }
  cert.feasible_description = "y = " + std::to_string(residue) + " mod 2^" + std::to_string(k);
  SymbolWord y = s.from_index(residue);
  cert.verdict = Tri::yes;
  cert.witness = y;
  cert.report = deviation(System(s), y, orbit);
  return cert;
}

ShadowCertificate odometer_h_solve(const OdometerSystem& s, const PseudoOrbit& orbit, const Rational& epsilon) {
  ShadowCertificate cert;
  cert.constants["epsilon"] = epsilon;
  std::size_t m = orbit.last();
  // y = f^-m(x_m)
  SymbolWord y = s.add(as_word(orbit.points[m]), -static_cast<long long>(m));
  DeviationReport rep = deviation(System(s), y, orbit);
  bool inside = true;
  for (std::size_t i = 0; i < m; ++i) inside = inside && rep.per_step[i] <= epsilon;
  cert.report = rep;
  cert.verdict = inside ? Tri::yes : Tri::no;
  if (inside) {
    cert.witness = y;
    cert.feasible_description = "{" + y.str() + "}";
  } else {
    cert.note = "f^-m(x_m) = " + y.str() + " leaves the tubes";
  }
  return cert;
}

}  // namespace shadowlab::detail
