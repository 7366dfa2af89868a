#include "shadowlab/kneading.hpp"

namespace shadowlab {

namespace {

ClosedInterval round_out(const ClosedInterval& iv, const ClosedInterval& dom, unsigned bits) {
  return {max(floor_dyadic(iv.lo, bits), dom.lo), min(ceil_dyadic(iv.hi, bits), dom.hi)};
}

// 0 when the enclosure straddles c.
char classify(const ClosedInterval& j, const Rational& c) {
  if (j.hi < c) return 'L';
  if (c < j.lo) return 'R';
  if (j.is_point()) return 'C';
  return 0;
}

Rational unimodal_critical_point(const PiecewiseLinearMap& f) {
  auto crit = critical_set(System(f));
  if (crit.size() != 1) throw Error(ErrorCode::invalid_argument, "piecewise linear map is not unimodal");
  for (const auto& p : f.pieces())
    if (p.slope.is_zero()) throw Error(ErrorCode::invalid_argument, "piecewise linear map has a flat piece");
  return crit.front();
}

int rank(char s) { return s == 'L' ? 0 : (s == 'C' ? 1 : 2); }

std::string decided(const std::string& w) {
  auto k = w.find('?');
  return k == std::string::npos ? w : w.substr(0, k);
}

}  // namespace

KneadingWord itinerary(const System& s, const Rational& x, int n, const ItineraryOptions& opt) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "itinerary length must be >= 1");
  KneadingWord w;
  w.horizon = n;
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) {
    Rational c = unimodal_critical_point(*f);
    if (!in_space(s, x)) throw Error(ErrorCode::domain, "point " + x.str() + " outside [0,1]");
    Rational cur = x;
    for (int i = 0; i < n; ++i) {
      char sym = cur < c ? 'L' : (c < cur ? 'R' : 'C');
      w.symbols.push_back(sym);
      if (sym == 'C') break;
      cur = f->eval(cur);
    }
    return w;
  }
  auto* q = std::get_if<QuadraticMap>(&s);
  if (!q) throw Error(ErrorCode::unsupported, "itineraries need a unimodal interval map");
  ClosedInterval dom = q->domain();
  if (!dom.contains(x)) throw Error(ErrorCode::domain, "point " + x.str() + " outside the domain");
  Rational c = q->critical_point();
  std::string best;
  for (unsigned bits = opt.precision; bits <= opt.max_precision; bits *= 2) {
    ClosedInterval j = ClosedInterval::point(x);
    std::string sym;
    bool stuck = false;
    for (int i = 0; i < n; ++i) {
      char ch = classify(j, c);
      if (ch == 0) {
        stuck = true;
        break;
      }
      sym.push_back(ch);
      if (ch == 'C') break;
      j = round_out(q->image(j), dom, bits);
    }
    if (!stuck) {
      w.symbols = sym;
      return w;
    }
    if (sym.size() >= best.size()) best = sym;
  }
  w.symbols = best + "?";
  w.undetermined = true;
  return w;
}

KneadingWord kneading(const System& s, int n, const ItineraryOptions& opt) {
  if (auto* f = std::get_if<PiecewiseLinearMap>(&s)) return itinerary(s, f->eval(unimodal_critical_point(*f)), n, opt);
  if (auto* q = std::get_if<QuadraticMap>(&s)) return itinerary(s, q->eval(q->critical_point()), n, opt);
  throw Error(ErrorCode::unsupported, "kneading words need a unimodal interval map");
}

char k_generator(long n) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "K index must be >= 0");
  if (n == 0) return 'R';
  if (n <= 2) return 'L';
  // Blocks R^k L for k = 2, 3, ... starting at position 3.
  long pos = 3;
  for (long k = 2;; ++k) {
    if (n < pos + k) return 'R';
    if (n == pos + k) return 'L';
    pos += k + 1;
  }
}

std::string k_prefix(std::size_t length) {
  std::string out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(k_generator(static_cast<long>(i)));
  return out;
}

bool is_recurrent_prefix(const std::string& word, std::size_t window) {
  if (window > word.size()) throw Error(ErrorCode::invalid_argument, "window longer than the word");
  if (window == 0) return true;
  return word.find(word.substr(0, window), 1) != std::string::npos;
}

std::strong_ordering parity_lex_compare(const std::string& a, const std::string& b) {
  bool odd = false;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) {
      auto o = rank(a[i]) <=> rank(b[i]);
      return odd ? 0 <=> o : o;
    }
    if (a[i] == 'R') odd = !odd;
  }
  return std::strong_ordering::equal;
}

ParameterSearch find_parameter(const std::string& target, int horizon, int bisection_steps,
                               const ItineraryOptions& opt) {
  if (target.empty()) throw Error(ErrorCode::invalid_argument, "empty target word");
  if (horizon < 1 || static_cast<std::size_t>(horizon) > target.size())
    throw Error(ErrorCode::invalid_argument, "horizon must lie in [1, target length]");
  if (bisection_steps < 0) throw Error(ErrorCode::invalid_argument, "bisection steps must be >= 0");
  for (char ch : target)
    if (ch != 'L' && ch != 'R' && ch != 'C') throw Error(ErrorCode::parse, "target must be a word over L, C, R");
  int len = static_cast<int>(target.size());
  ItineraryOptions io = opt;
  io.precision = std::max<unsigned>(opt.precision, 2 * static_cast<unsigned>(len) + 64);
  io.max_precision = std::max(io.max_precision, io.precision);
  auto word_at = [&](const Rational& mu) {
    return decided(kneading(QuadraticMap(QuadraticFamily::quadratic, mu), len, io).symbols);
  };
  ParameterSearch out;
  out.lo = Rational(1);
  out.hi = Rational(2);
  auto at_lo = parity_lex_compare(word_at(out.lo), target);
  auto at_hi = parity_lex_compare(word_at(out.hi), target);
  bool increasing = at_lo < 0 || at_hi > 0;
  if (!((at_lo <= 0 && at_hi >= 0) || (at_lo >= 0 && at_hi <= 0))) out.note = "target not bracketed by mu = 1 and mu = 2";
  for (; out.steps < bisection_steps; ++out.steps) {
    Rational mid = (out.lo + out.hi) / Rational(2);
    std::string w = word_at(mid);
    auto o = parity_lex_compare(w, target);
    if (o == 0) {
      if (w.size() < target.size()) {
        out.note = "kneading word undecided beyond " + std::to_string(w.size()) + " symbols";
        break;
      }
      out.lo = out.hi = mid;
      out.note = "target matched exactly";
      ++out.steps;
      break;
    }
    if ((o < 0) == increasing) out.lo = mid;
    else out.hi = mid;
  }
  out.mu = (out.lo + out.hi) / Rational(2);
  out.achieved = kneading(QuadraticMap(QuadraticFamily::quadratic, out.mu), horizon, io);
  out.matched = out.achieved.symbols == target.substr(0, static_cast<std::size_t>(horizon));
  return out;
}

Rational critical_orbit_gap(const QuadraticMap& q, int first, int last, unsigned precision) {
  if (first < 1 || last < first) throw Error(ErrorCode::invalid_argument, "need 1 <= first <= last");
  Rational c = q.critical_point();
  ClosedInterval dom = q.domain();
  ClosedInterval j = ClosedInterval::point(c);
  std::optional<Rational> gap;
  for (int n = 1; n <= last; ++n) {
    j = round_out(q.image(j), dom, precision);
    if (n < first) continue;
    Rational d = j.contains(c) ? Rational(0) : min(abs(j.lo - c), abs(j.hi - c));
    gap = gap ? min(*gap, d) : d;
  }
  return *gap;
}

bool kneading_monotone_on_grid(const std::vector<Rational>& mus, int length, const ItineraryOptions& opt) {
  std::vector<std::string> words;
  for (const auto& mu : mus) words.push_back(decided(kneading(QuadraticMap(QuadraticFamily::quadratic, mu), length, opt).symbols));
  for (std::size_t i = 0; i + 1 < words.size(); ++i)
    if (parity_lex_compare(words[i], words[i + 1]) > 0) return false;
  return true;
}

}  // namespace shadowlab
