// Brute-force helpers shared by the tests. They evaluate formulas world by
// world through evaluate(), so they do not go through the truth-table code
// they are used to check.

#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "qlit/qlit.hpp"

namespace qt {

using namespace qlit;

inline std::set<std::uint64_t> models(const Formula &f) {
  std::set<std::uint64_t> out;
  const Universe &u = f.universe();
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << u.size()); ++i)
    if (evaluate(f, World::from_index(u, i)))
      out.insert(i);
  return out;
}

inline bool equiv(const Formula &a, const Formula &b) { return models(a) == models(b.aligned_to(a.universe())); }

inline Formula parse(const Universe &u, const std::string &text) { return parse_formula(text, u); }

/// Rules as printed strings ("~x,z -> y"), by checking every world and
/// variable against the definition: ω is a model and ω with the variable
/// flipped is not.
inline std::set<std::string> rules_by_definition(const Formula &f) {
  std::set<std::string> out;
  const Universe &u = f.universe();
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << u.size()); ++i) {
    const World w = World::from_index(u, i);
    if (!evaluate(f, w))
      continue;
    for (VarId v = 0; v < u.size(); ++v) {
      const Literal l = w.literal(v);
      if (!evaluate(f, flip(w, ~l)))
        out.insert(to_string(w.term().without(l), u) + " -> " + to_string(l, u));
    }
  }
  return out;
}

inline std::set<std::string> rule_strings(const RuleSet &r) {
  std::set<std::string> out;
  for (const BRule &b : r.rules())
    out.insert(to_string(b, r.universe()));
  return out;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data(const std::string &name) {
  return read_file(std::string(QLIT_DATA_DIR) + "/" + name);
}

inline std::set<std::string> term_strings(const std::vector<Term> &ts, const Universe &u) {
  std::set<std::string> out;
  for (const Term &t : ts)
    out.insert(to_string(t, u));
  return out;
}

} // namespace qt
