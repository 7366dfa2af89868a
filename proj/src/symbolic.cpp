#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "shadowlab/systems.hpp"

namespace shadowlab {

// ---------------------------------------------------------------------------
// Symbol words

namespace {

std::string primitive_root(const std::string& c) {
  for (std::size_t p = 1; p < c.size(); ++p) {
    if (c.size() % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < c.size() && ok; ++i) ok = c[i] == c[i - p];
    if (ok) return c.substr(0, p);
  }
  return c;
}

}  // namespace

SymbolWord::SymbolWord(std::string p, std::string c) : prefix(std::move(p)), cycle(primitive_root(c)) {
  // Canonical form: shortest prefix, primitive cycle.
  while (!cycle.empty() && !prefix.empty() && prefix.back() == cycle.back()) {
    cycle = cycle.back() + cycle.substr(0, cycle.size() - 1);
    prefix.pop_back();
  }
}

SymbolWord SymbolWord::parse(std::string_view text) {
  auto open = text.find('(');
  if (open == std::string_view::npos) {
    if (text.find(')') != std::string_view::npos) throw Error(ErrorCode::parse, "unbalanced ')' in '" + std::string(text) + "'");
    return SymbolWord(std::string(text));
  }
  if (text.back() != ')' || text.find('(', open + 1) != std::string_view::npos || open + 2 > text.size() - 1)
    throw Error(ErrorCode::parse, "malformed symbol word '" + std::string(text) + "'");
  std::string cyc(text.substr(open + 1, text.size() - open - 2));
  if (cyc.empty() || cyc.find(')') != std::string::npos)
    throw Error(ErrorCode::parse, "malformed symbol word '" + std::string(text) + "'");
  return SymbolWord(std::string(text.substr(0, open)), cyc);
}

std::string SymbolWord::str() const { return finite() ? prefix : prefix + "(" + cycle + ")"; }

std::size_t SymbolWord::length() const {
  if (!finite()) throw Error(ErrorCode::invalid_argument, "length of an infinite sequence");
  return prefix.size();
}

char SymbolWord::at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (finite()) throw Error(ErrorCode::invalid_argument, "index past the end of a finite word");
  return cycle[(i - prefix.size()) % cycle.size()];
}

std::string SymbolWord::take(std::size_t n) const {
  if (finite() && n > prefix.size()) throw Error(ErrorCode::invalid_argument, "take past the end of a finite word");
  std::string out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
  return out;
}

SymbolWord SymbolWord::shifted() const {
  if (!prefix.empty()) return SymbolWord(prefix.substr(1), cycle);
  if (finite()) throw Error(ErrorCode::invalid_argument, "shift of the empty word");
  return SymbolWord("", cycle.substr(1) + cycle.front());
}

// ---------------------------------------------------------------------------
// Shifts of finite type

ShiftSystem::ShiftSystem(std::string alphabet, std::vector<std::string> forbidden)
    : alphabet_(std::move(alphabet)), forbidden_(std::move(forbidden)) {
  if (alphabet_.empty()) throw Error(ErrorCode::invalid_argument, "empty alphabet");
  std::set<char> seen(alphabet_.begin(), alphabet_.end());
  if (seen.size() != alphabet_.size()) throw Error(ErrorCode::invalid_argument, "repeated alphabet symbol");
  for (const auto& w : forbidden_) {
    if (w.empty()) throw Error(ErrorCode::invalid_argument, "empty forbidden word");
    for (char c : w)
      if (!seen.count(c)) throw Error(ErrorCode::invalid_argument, std::string("forbidden word uses symbol '") + c + "' outside the alphabet");
    memory_ = std::max(memory_, w.size());
  }
}

bool ShiftSystem::admissible_word(std::string_view w) const {
  for (char c : w)
    if (alphabet_.find(c) == std::string::npos) return false;
  for (const auto& f : forbidden_)
    if (w.find(f) != std::string_view::npos) return false;
  return true;
}

bool ShiftSystem::contains(const SymbolWord& x) const {
  if (x.finite()) return false;
  std::size_t reps = (memory_ + x.cycle.size() - 1) / x.cycle.size() + 1;
  std::string window = x.prefix;
  for (std::size_t i = 0; i < reps; ++i) window += x.cycle;
  return admissible_word(window);
}

std::vector<char> ShiftSystem::followers(std::string_view w) const {
  std::vector<char> out;
  std::size_t keep = std::min(w.size(), memory_ - 1);
  std::string tail(w.substr(w.size() - keep));
  for (char a : alphabet_) {
    std::string t = tail + a;
    bool ok = true;
    for (const auto& f : forbidden_)
      if (f.size() <= t.size() && t.compare(t.size() - f.size(), f.size(), f) == 0) ok = false;
    if (ok) out.push_back(a);
  }
  return out;
}

std::optional<SymbolWord> ShiftSystem::extend(const std::string& w) const {
  if (!admissible_word(w)) return std::nullopt;
  // Depth-first search over states (last memory-1 symbols) for a cycle.
  std::map<std::string, std::size_t> on_path;
  std::set<std::string> dead;
  std::string path = w;
  auto state_of = [&](const std::string& s) { return s.substr(s.size() - std::min(s.size(), memory_ - 1)); };
  std::function<std::optional<SymbolWord>()> dfs = [&]() -> std::optional<SymbolWord> {
    std::string st = state_of(path);
    if (auto it = on_path.find(st); it != on_path.end())
      return SymbolWord(path.substr(0, it->second), path.substr(it->second));
    if (dead.count(st)) return std::nullopt;
    on_path[st] = path.size();
    for (char a : followers(path)) {
      path.push_back(a);
      if (auto r = dfs()) return r;
      path.pop_back();
    }
    on_path.erase(st);
    dead.insert(st);
    return std::nullopt;
  };
  return dfs();
}

std::optional<SymbolWord> ShiftSystem::random_extension(const std::string& w, Rng& rng, std::size_t free_symbols) const {
  if (!extend(w)) return std::nullopt;
  std::string cur = w;
  for (std::size_t i = 0; i < free_symbols; ++i) {
    std::vector<char> ok;
    for (char a : followers(cur))
      if (extend(cur + a)) ok.push_back(a);
    if (ok.empty()) break;
    cur.push_back(ok[rng.below(ok.size())]);
  }
  return extend(cur);
}

// ---------------------------------------------------------------------------
// Odometer

OdometerSystem::OdometerSystem(int depth) : depth_(depth) {
  if (depth_ < 1 || depth_ > 62) throw Error(ErrorCode::invalid_argument, "odometer depth must lie in [1, 62]");
}

bool OdometerSystem::contains(const SymbolWord& w) const {
  if (!w.finite() || w.prefix.size() != static_cast<std::size_t>(depth_)) return false;
  return std::all_of(w.prefix.begin(), w.prefix.end(), [](char c) { return c == '0' || c == '1'; });
}

std::uint64_t OdometerSystem::to_index(const SymbolWord& w) const {
  if (!contains(w)) throw Error(ErrorCode::domain, "word '" + w.str() + "' is not an odometer point of depth " + std::to_string(depth_));
  std::uint64_t v = 0;
  for (int i = 0; i < depth_; ++i)
    if (w.prefix[static_cast<std::size_t>(i)] == '1') v |= std::uint64_t{1} << i;
  return v;
}

SymbolWord OdometerSystem::from_index(std::uint64_t v) const {
  std::string s(static_cast<std::size_t>(depth_), '0');
  for (int i = 0; i < depth_; ++i)
    if ((v >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
  return SymbolWord(s);
}

SymbolWord OdometerSystem::add(const SymbolWord& w, long long k) const {
  std::uint64_t mask = (std::uint64_t{1} << depth_) - 1;
  return from_index((to_index(w) + static_cast<std::uint64_t>(k)) & mask);
}

}  // namespace shadowlab
