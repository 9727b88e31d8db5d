/// @file  io.hpp
/// @brief Text formats: DIMACS CNF/DNF, compiled NNF, SDD, the formula
///        language, and classifier bundles.
///
/// Variable names travel in comment lines `c var <index> <name>` (1-based
/// index) in the DIMACS, NNF and SDD formats; without them variables are
/// named x1..xn.

#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "circuit.hpp"
#include "normal_form.hpp"
#include "xai.hpp"

namespace qlit {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column; // 1-based
};

inline std::vector<Token> split_ws(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      ++i;
    if (i > start)
      out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

/// Lines of `text` with their 1-based numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t n = 1, start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i)
    if (i == text.size() || text[i] == '\n') {
      if (i > start || i < text.size())
        out.emplace_back(n, text.substr(start, i - start));
      start = i + 1;
      ++n;
    }
  return out;
}

inline long long to_int(const Token &t, std::size_t line, const char *what) {
  long long v = 0;
  const char *b = t.text.data(), *e = t.text.data() + t.text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ParseError(std::string("expected ") + what + ", got '" + std::string(t.text) + "'",
                     line, t.column);
  return v;
}

/// Collects `c var <i> <name>` declarations.
class NameTable {
public:
  /// Returns true when the comment line was a name declaration.
  bool absorb(const std::vector<Token> &toks, std::size_t line) {
    if (toks.size() < 2 || toks[0].text != "c" || toks[1].text != "var")
      return false;
    if (toks.size() != 4)
      throw ParseError("expected 'c var <index> <name>'", line, toks[0].column);
    const long long i = to_int(toks[2], line, "variable index");
    if (i < 1)
      throw ParseError("variable index must be positive", line, toks[2].column);
    if (!_names.emplace(static_cast<std::size_t>(i), std::string(toks[3].text)).second)
      throw ParseError("variable " + std::to_string(i) + " is named twice", line, toks[2].column);
    return true;
  }

  std::size_t max_index() const { return _names.empty() ? 0 : _names.rbegin()->first; }

  Universe universe(std::size_t n) const {
    std::vector<std::string> names = Universe::default_names(n);
    for (const auto &[i, name] : _names) {
      if (i > n)
        throw ParseError("named variable " + std::to_string(i) + " exceeds the declared count",
                         1, 1);
      names[i - 1] = name;
    }
    try {
      return Universe(std::move(names));
    } catch (const UniverseError &e) {
      throw ParseError(e.what(), 1, 1);
    }
  }

private:
  std::map<std::size_t, std::string> _names;
};

inline Literal dimacs_literal(long long v, std::size_t n, std::size_t line, std::size_t col) {
  const long long a = v < 0 ? -v : v;
  if (a == 0 || static_cast<std::size_t>(a) > n)
    throw ParseError("literal " + std::to_string(v) + " is out of range 1.." + std::to_string(n),
                     line, col);
  return {Variable{static_cast<VarId>(a - 1)}, v > 0};
}

inline long long dimacs_int(Literal l) {
  const long long v = static_cast<long long>(l.var()) + 1;
  return l.positive() ? v : -v;
}

inline bool default_names(const Universe &u) {
  return u.names() == Universe::default_names(u.size());
}

/// `c var` lines naming every variable. Skipped for default names unless
/// the format has no other way to carry the variable count.
inline void emit_names(std::ostream &os, const Universe &u, bool always = false) {
  if (!always && default_names(u))
    return;
  for (std::size_t i = 0; i < u.size(); ++i)
    os << "c var " << i + 1 << ' ' << u.name(static_cast<VarId>(i)) << '\n';
}

/// Shared reader of `p cnf` / `p dnf` bodies: sets of literals terminated by 0.
inline std::pair<Universe, std::vector<std::vector<Literal>>>
parse_dimacs_sets(std::string_view text, std::string_view kind, bool reject_complementary) {
  NameTable names;
  std::optional<std::size_t> n, m;
  std::size_t header_line = 0;
  std::vector<std::vector<Literal>> sets;
  std::vector<Literal> current;
  std::size_t current_line = 0, current_col = 0;
  for (auto [ln, line] : lines_of(text)) {
    const auto toks = split_ws(line);
    if (toks.empty())
      continue;
    if (toks[0].text == "c" || toks[0].text.starts_with("c")) {
      if (toks[0].text == "c")
        names.absorb(toks, ln);
      continue;
    }
    if (toks[0].text == "%")
      break; // trailer used by some benchmark files
    if (toks[0].text == "p") {
      if (n)
        throw ParseError("duplicate problem line", ln, 1);
      if (toks.size() != 4 || toks[1].text != kind)
        throw ParseError("expected 'p " + std::string(kind) + " <vars> <count>'", ln, 1);
      const long long nv = to_int(toks[2], ln, "variable count");
      const long long nc = to_int(toks[3], ln, "count");
      if (nv < 0 || nc < 0)
        throw ParseError("negative count in problem line", ln, toks[2].column);
      n = static_cast<std::size_t>(nv);
      m = static_cast<std::size_t>(nc);
      header_line = ln;
      continue;
    }
    if (!n)
      throw ParseError("data before the problem line", ln, toks[0].column);
    for (const Token &t : toks) {
      const long long v = to_int(t, ln, "integer literal");
      if (current.empty()) {
        current_line = ln;
        current_col = t.column;
      }
      if (v == 0) {
        std::sort(current.begin(), current.end());
        current.erase(std::unique(current.begin(), current.end()), current.end());
        for (std::size_t i = 1; i < current.size(); ++i)
          if (current[i].var() == current[i - 1].var())
            throw ParseError(reject_complementary
                                 ? "tautological clause (contains x and -x)"
                                 : "inconsistent term (contains x and -x)",
                             current_line, current_col);
        sets.push_back(std::move(current));
        current.clear();
        continue;
      }
      current.push_back(dimacs_literal(v, *n, ln, t.column));
    }
  }
  if (!n)
    throw ParseError("missing problem line 'p " + std::string(kind) + " ...'", 1, 1);
  if (!current.empty())
    throw ParseError("last entry is not terminated by 0", current_line, current_col);
  if (sets.size() != *m)
    throw ParseError("problem line declares " + std::to_string(*m) + " entries, found " +
                         std::to_string(sets.size()),
                     header_line, 1);
  if (names.max_index() > *n)
    throw ParseError("named variable exceeds the declared variable count", header_line, 1);
  return {names.universe(*n), std::move(sets)};
}

} // namespace detail

// -----------------------------------------------------------------------------
// DIMACS
// -----------------------------------------------------------------------------

inline Cnf parse_dimacs(std::string_view text) {
  auto [u, sets] = detail::parse_dimacs_sets(text, "cnf", true);
  std::vector<Clause> clauses;
  clauses.reserve(sets.size());
  for (auto &s : sets)
    clauses.emplace_back(std::move(s));
  return Cnf(u, std::move(clauses));
}

/// `p dnf <vars> <terms>` followed by terms terminated by 0.
inline Dnf parse_dimacs_dnf(std::string_view text) {
  auto [u, sets] = detail::parse_dimacs_sets(text, "dnf", false);
  std::vector<Term> terms;
  terms.reserve(sets.size());
  for (auto &s : sets)
    terms.emplace_back(std::move(s));
  return Dnf(u, std::move(terms));
}

inline std::string emit_dimacs(const Cnf &d) {
  std::ostringstream os;
  detail::emit_names(os, d.universe());
  os << "p cnf " << d.universe().size() << ' ' << d.size() << '\n';
  const Cnf sorted = d.sorted();
  for (const Clause &c : sorted.clauses()) {
    for (Literal l : c)
      os << detail::dimacs_int(l) << ' ';
    os << "0\n";
  }
  return os.str();
}

inline std::string emit_dimacs(const Dnf &d) {
  std::ostringstream os;
  detail::emit_names(os, d.universe());
  os << "p dnf " << d.universe().size() << ' ' << d.size() << '\n';
  const Dnf sorted = d.sorted();
  for (const Term &t : sorted.terms()) {
    for (Literal l : t)
      os << detail::dimacs_int(l) << ' ';
    os << "0\n";
  }
  return os.str();
}

// -----------------------------------------------------------------------------
// Compiled NNF: `nnf V E n`, then `L lit`, `A c ids…`, `O j c ids…`
// -----------------------------------------------------------------------------

/// Parse an NNF file. `A 0` is ⊤ and `O 0 0` is ⊥. When every or-node names
/// a decision variable the file promises a Decision-DNNF, and a circuit that
/// breaks that promise is rejected with a StructureError.
inline Circuit parse_nnf(std::string_view text) {
  detail::NameTable names;
  std::optional<std::size_t> nv, ne, nvars;
  std::size_t header_line = 0;
  struct Raw {
    char kind;
    long long lit = 0;
    VarId decision = kNoDecision;
    std::vector<std::uint32_t> kids;
  };
  std::vector<Raw> raw;
  std::size_t edges = 0;
  for (auto [ln, line] : detail::lines_of(text)) {
    const auto toks = detail::split_ws(line);
    if (toks.empty())
      continue;
    if (toks[0].text == "c") {
      names.absorb(toks, ln);
      continue;
    }
    if (toks[0].text == "nnf") {
      if (nv)
        throw ParseError("duplicate header", ln, 1);
      if (toks.size() != 4)
        throw ParseError("expected 'nnf <nodes> <edges> <vars>'", ln, 1);
      nv = static_cast<std::size_t>(detail::to_int(toks[1], ln, "node count"));
      ne = static_cast<std::size_t>(detail::to_int(toks[2], ln, "edge count"));
      nvars = static_cast<std::size_t>(detail::to_int(toks[3], ln, "variable count"));
      header_line = ln;
      continue;
    }
    if (!nv)
      throw ParseError("node before the 'nnf' header", ln, 1);
    auto child = [&](const detail::Token &t) {
      const long long id = detail::to_int(t, ln, "node id");
      if (id < 0 || static_cast<std::size_t>(id) >= raw.size())
        throw ParseError("node id " + std::to_string(id) + " is not defined on an earlier line",
                         ln, t.column);
      return static_cast<std::uint32_t>(id);
    };
    if (toks[0].text == "L") {
      if (toks.size() != 2)
        throw ParseError("expected 'L <literal>'", ln, 1);
      const long long v = detail::to_int(toks[1], ln, "literal");
      detail::dimacs_literal(v, *nvars, ln, toks[1].column);
      raw.push_back({'L', v, kNoDecision, {}});
    } else if (toks[0].text == "A") {
      if (toks.size() < 2)
        throw ParseError("expected 'A <count> <ids...>'", ln, 1);
      const long long c = detail::to_int(toks[1], ln, "child count");
      if (c < 0 || static_cast<std::size_t>(c) != toks.size() - 2)
        throw ParseError("and-node declares " + std::to_string(c) + " children, lists " +
                             std::to_string(toks.size() - 2),
                         ln, toks[1].column);
      Raw r{'A', 0, kNoDecision, {}};
      for (std::size_t i = 2; i < toks.size(); ++i)
        r.kids.push_back(child(toks[i]));
      edges += r.kids.size();
      raw.push_back(std::move(r));
    } else if (toks[0].text == "O") {
      if (toks.size() < 3)
        throw ParseError("expected 'O <var> <count> <ids...>'", ln, 1);
      const long long j = detail::to_int(toks[1], ln, "decision variable");
      if (j < 0 || static_cast<std::size_t>(j) > *nvars)
        throw ParseError("decision variable out of range", ln, toks[1].column);
      const long long c = detail::to_int(toks[2], ln, "child count");
      if (c < 0 || static_cast<std::size_t>(c) != toks.size() - 3)
        throw ParseError("or-node declares " + std::to_string(c) + " children, lists " +
                             std::to_string(toks.size() - 3),
                         ln, toks[2].column);
      Raw r{'O', 0, j == 0 ? kNoDecision : static_cast<VarId>(j - 1), {}};
      for (std::size_t i = 3; i < toks.size(); ++i)
        r.kids.push_back(child(toks[i]));
      edges += r.kids.size();
      raw.push_back(std::move(r));
    } else {
      throw ParseError("unknown node type '" + std::string(toks[0].text) + "'", ln,
                       toks[0].column);
    }
  }
  if (!nv)
    throw ParseError("missing 'nnf' header", 1, 1);
  if (raw.empty())
    throw ParseError("circuit has no nodes", header_line, 1);
  if (raw.size() != *nv)
    throw ParseError("header declares " + std::to_string(*nv) + " nodes, found " +
                         std::to_string(raw.size()),
                     header_line, 1);
  if (edges != *ne)
    throw ParseError("header declares " + std::to_string(*ne) + " edges, found " +
                         std::to_string(edges),
                     header_line, 1);
  if (names.max_index() > *nvars)
    throw ParseError("named variable exceeds the declared variable count", header_line, 1);

  const Universe u = names.universe(*nvars);
  CircuitBuilder b(u, CircuitBuilder::Mode::Raw);
  bool promises_decisions = false, all_decisions = true;
  for (const Raw &r : raw) {
    switch (r.kind) {
    case 'L':
      b.literal(detail::dimacs_literal(r.lit, *nvars, 0, 0));
      break;
    case 'A':
      if (r.kids.empty())
        b.constant(true);
      else
        b.conjoin(r.kids);
      break;
    default:
      if (r.kids.empty()) {
        b.constant(false);
        break;
      }
      if (r.decision != kNoDecision)
        promises_decisions = true;
      else
        all_decisions = false;
      b.disjoin(r.kids, r.decision);
    }
  }
  Circuit c = std::move(b).finish(static_cast<std::uint32_t>(raw.size() - 1));
  if (promises_decisions && all_decisions) {
    (void)DecisionDnnf::verify(c); // throws StructureError naming the node
    return CircuitBuilder::annotate(std::move(c), Annotation::DecisionDnnf);
  }
  return CircuitBuilder::annotate(std::move(c), infer_annotation(c));
}

inline std::string emit_nnf(const Circuit &c) {
  std::ostringstream os;
  detail::emit_names(os, c.universe());
  os << "nnf " << c.size() << ' ' << c.edge_count() << ' ' << c.universe().size() << '\n';
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    switch (n.kind) {
    case Kind::True:
      os << "A 0\n";
      break;
    case Kind::False:
      os << "O 0 0\n";
      break;
    case Kind::Literal:
      os << "L " << detail::dimacs_int(n.lit) << '\n';
      break;
    case Kind::And:
      os << "A " << n.count;
      for (auto k : c.children(i))
        os << ' ' << k;
      os << '\n';
      break;
    default:
      os << "O " << (n.decision == kNoDecision ? 0 : n.decision + 1) << ' ' << n.count;
      for (auto k : c.children(i))
        os << ' ' << k;
      os << '\n';
    }
  }
  return os.str();
}

// -----------------------------------------------------------------------------
// SDD: optional `sdd <nodes>` header, then `T id`, `F id`, `L id lit`,
// `D id k p1 s1 … pk sk`. The root is the node on the last line.
// -----------------------------------------------------------------------------

inline Sdd parse_sdd(std::string_view text) {
  detail::NameTable names;
  std::optional<std::size_t> declared;
  std::size_t header_line = 0;
  struct Raw {
    char kind;
    long long lit = 0;
    std::vector<std::pair<long long, long long>> elements;
    std::size_t line = 0;
  };
  std::map<long long, std::size_t> index; // file id -> position
  std::vector<Raw> raw;
  std::vector<long long> ids;
  long long max_var = 0;
  for (auto [ln, line] : detail::lines_of(text)) {
    const auto toks = detail::split_ws(line);
    if (toks.empty())
      continue;
    if (toks[0].text == "c") {
      names.absorb(toks, ln);
      continue;
    }
    if (toks[0].text == "sdd") {
      if (declared || !raw.empty())
        throw ParseError("the 'sdd' header must come first and only once", ln, 1);
      if (toks.size() != 2)
        throw ParseError("expected 'sdd <nodes>'", ln, 1);
      declared = static_cast<std::size_t>(detail::to_int(toks[1], ln, "node count"));
      header_line = ln;
      continue;
    }
    if (toks.size() < 2)
      throw ParseError("expected a node id", ln, toks[0].column);
    const long long id = detail::to_int(toks[1], ln, "node id");
    if (index.count(id))
      throw ParseError("node id " + std::to_string(id) + " is defined twice", ln, toks[1].column);
    auto ref = [&](const detail::Token &t) {
      const long long r = detail::to_int(t, ln, "node id");
      if (!index.count(r))
        throw ParseError("node id " + std::to_string(r) + " is not defined on an earlier line",
                         ln, t.column);
      return r;
    };
    Raw r{toks[0].text.size() == 1 ? toks[0].text[0] : '?', 0, {}, 0};
    r.line = ln;
    switch (r.kind) {
    case 'T':
    case 'F':
      if (toks.size() != 2)
        throw ParseError("expected '" + std::string(toks[0].text) + " <id>'", ln, 1);
      break;
    case 'L': {
      if (toks.size() != 3)
        throw ParseError("expected 'L <id> <literal>'", ln, 1);
      r.lit = detail::to_int(toks[2], ln, "literal");
      if (r.lit == 0)
        throw ParseError("literal 0 is not allowed", ln, toks[2].column);
      max_var = std::max(max_var, r.lit < 0 ? -r.lit : r.lit);
      break;
    }
    case 'D': {
      if (toks.size() < 3)
        throw ParseError("expected 'D <id> <k> <prime> <sub> ...'", ln, 1);
      const long long k = detail::to_int(toks[2], ln, "element count");
      if (k < 1 || toks.size() != 3 + 2 * static_cast<std::size_t>(k))
        throw ParseError("element count " + std::to_string(k) + " does not match the " +
                             std::to_string(toks.size() - 3) + " listed ids",
                         ln, toks[2].column);
      for (long long e = 0; e < k; ++e)
        r.elements.emplace_back(ref(toks[3 + 2 * e]), ref(toks[4 + 2 * e]));
      break;
    }
    default:
      throw ParseError("unknown node type '" + std::string(toks[0].text) + "'", ln,
                       toks[0].column);
    }
    index.emplace(id, raw.size());
    ids.push_back(id);
    raw.push_back(std::move(r));
  }
  if (raw.empty())
    throw ParseError("SDD has no nodes", 1, 1);
  if (declared && *declared != raw.size())
    throw ParseError("header declares " + std::to_string(*declared) + " nodes, found " +
                         std::to_string(raw.size()),
                     header_line, 1);
  const std::size_t n = std::max<std::size_t>(static_cast<std::size_t>(max_var), names.max_index());
  const Universe u = names.universe(n);
  CircuitBuilder b(u, CircuitBuilder::Mode::Raw);
  std::vector<std::uint32_t> node_of(raw.size());
  std::vector<long long> origin; // circuit node -> file id
  auto note = [&](std::uint32_t node, long long id) {
    if (origin.size() <= node)
      origin.resize(node + 1, -1);
    origin[node] = id;
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Raw &r = raw[i];
    switch (r.kind) {
    case 'T':
      node_of[i] = b.constant(true);
      break;
    case 'F':
      node_of[i] = b.constant(false);
      break;
    case 'L':
      node_of[i] = b.literal(detail::dimacs_literal(r.lit, n, r.line, 1));
      break;
    default: {
      std::vector<std::uint32_t> elems;
      for (auto [p, s] : r.elements) {
        elems.push_back(b.conjoin({node_of[index.at(p)], node_of[index.at(s)]}));
        note(elems.back(), ids[i]);
      }
      node_of[i] = b.disjoin(std::move(elems));
    }
    }
    note(node_of[i], ids[i]);
  }
  std::vector<std::uint32_t> kept;
  Circuit c = std::move(b).finish(node_of.back(), Annotation::Sdd, &kept);
  try {
    return Sdd::verify(std::move(c));
  } catch (const StructureError &e) {
    // Report the offending node by its id in the file.
    const std::string msg = e.what();
    const std::string what = msg.substr(msg.find(": ") + 2);
    const std::uint32_t built = kept.at(e.node());
    if (built < origin.size() && origin[built] >= 0)
      throw StructureError(what, static_cast<std::size_t>(origin[built]));
    throw;
  }
}

/// SDD text of a verified SDD. Nodes other than partition elements are
/// numbered 0, 1, … in circuit order, so emitting a parsed file is stable.
inline std::string emit_sdd(const Sdd &sdd) {
  const Circuit &c = sdd.circuit();
  std::ostringstream os;
  detail::emit_names(os, c.universe(), true);
  std::vector<std::uint32_t> id(c.size(), 0);
  std::uint32_t count = 0;
  for (std::uint32_t i = 0; i < c.size(); ++i)
    if (c.node(i).kind != Kind::And)
      id[i] = count++;
  os << "sdd " << count << '\n';
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    switch (n.kind) {
    case Kind::True:
      os << "T " << id[i] << '\n';
      break;
    case Kind::False:
      os << "F " << id[i] << '\n';
      break;
    case Kind::Literal:
      os << "L " << id[i] << ' ' << detail::dimacs_int(n.lit) << '\n';
      break;
    case Kind::And:
      break;
    default:
      os << "D " << id[i] << ' ' << n.count;
      for (auto e : c.children(i)) {
        const auto ps = c.children(e);
        os << ' ' << id[ps[0]] << ' ' << id[ps[1]];
      }
      os << '\n';
    }
  }
  return os.str();
}

// -----------------------------------------------------------------------------
// Formula language
//
//   iff   := imp ('<=>' imp)*          left associative
//   imp   := or ('=>' imp)?            right associative
//   or    := and ('|' and)*
//   and   := unary ('&' unary)*
//   unary := '~' unary | '(' iff ')' | 'true' | 'false' | identifier
// -----------------------------------------------------------------------------

namespace detail {

class FormulaParser {
public:
  FormulaParser(std::string_view text, std::optional<Universe> declared)
      : _text(text), _declared(std::move(declared)) {}

  Formula parse() {
    // Identifiers are collected in a first pass so the universe is known
    // before any node is built.
    Universe u = _declared ? *_declared : Universe(collect_names());
    _u = u;
    _pos = 0;
    _line = 1;
    _line_start = 0;
    skip();
    if (at_end())
      fail("empty formula");
    Formula f = parse_iff();
    skip();
    if (!at_end())
      fail("unexpected '" + std::string(1, _text[_pos]) + "'");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string &what) const {
    throw ParseError(what, _line, _pos - _line_start + 1);
  }

  bool at_end() const { return _pos >= _text.size(); }

  void skip() {
    while (!at_end()) {
      const char ch = _text[_pos];
      if (ch == '#') {
        while (!at_end() && _text[_pos] != '\n')
          ++_pos;
      } else if (ch == '\n') {
        ++_pos;
        ++_line;
        _line_start = _pos;
      } else if (ch == ' ' || ch == '\t' || ch == '\r') {
        ++_pos;
      } else {
        break;
      }
    }
  }

  static bool ident_start(char ch) {
    return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_';
  }
  static bool ident_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'' || ch == '.';
  }

  bool accept(std::string_view op) {
    skip();
    if (_text.substr(_pos, op.size()) == op) {
      _pos += op.size();
      return true;
    }
    return false;
  }

  std::vector<std::string> collect_names() {
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < _text.size();) {
      if (_text[i] == '#') {
        while (i < _text.size() && _text[i] != '\n')
          ++i;
        continue;
      }
      if (ident_start(_text[i])) {
        std::size_t j = i;
        while (j < _text.size() && ident_char(_text[j]))
          ++j;
        std::string id(_text.substr(i, j - i));
        if (id != "true" && id != "false" && seen.insert(id).second)
          names.push_back(id);
        i = j;
        continue;
      }
      ++i;
    }
    return names;
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept("<=>"))
      f = iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept("=>"))
      return implies(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (accept("|"))
      parts.push_back(parse_and());
    return parts.size() == 1 ? parts[0] : Formula::disjoin(*_u, parts);
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (accept("&"))
      parts.push_back(parse_unary());
    return parts.size() == 1 ? parts[0] : Formula::conjoin(*_u, parts);
  }

  Formula parse_unary() {
    skip();
    if (at_end())
      fail("unexpected end of formula");
    if (accept("~"))
      return ~parse_unary();
    if (accept("(")) {
      Formula f = parse_iff();
      if (!accept(")"))
        fail("expected ')'");
      return f;
    }
    if (!ident_start(_text[_pos]))
      fail("unexpected '" + std::string(1, _text[_pos]) + "'");
    const std::size_t start = _pos;
    while (!at_end() && ident_char(_text[_pos]))
      ++_pos;
    const std::string id(_text.substr(start, _pos - start));
    if (id == "true")
      return Formula::top(*_u);
    if (id == "false")
      return Formula::bottom(*_u);
    auto v = _u->find(id);
    if (!v) {
      _pos = start;
      fail("unknown identifier '" + id + "'");
    }
    return Formula::literal(*_u, {*v, true});
  }

  std::string_view _text;
  std::optional<Universe> _declared;
  std::optional<Universe> _u;
  std::size_t _pos = 0, _line = 1, _line_start = 0;
};

} // namespace detail

/// Parse a formula. Without a declared universe, the universe is the
/// mentioned identifiers in order of first appearance.
inline Formula parse_formula(std::string_view text, std::optional<Universe> declared = std::nullopt) {
  return detail::FormulaParser(text, std::move(declared)).parse();
}

/// Formula file: an optional `# vars: a b c` line declares the universe;
/// other `#` lines are comments.
inline Formula parse_formula_file(std::string_view text) {
  for (auto [ln, line] : detail::lines_of(text)) {
    const auto toks = detail::split_ws(line);
    if (toks.size() >= 2 && toks[0].text == "#" && toks[1].text == "vars:") {
      std::vector<std::string> names;
      for (std::size_t i = 2; i < toks.size(); ++i)
        names.emplace_back(toks[i].text);
      try {
        return parse_formula(text, Universe(std::move(names)));
      } catch (const UniverseError &e) {
        throw ParseError(e.what(), ln, 1);
      }
    }
  }
  return parse_formula(text);
}

inline std::string emit_formula(const Formula &f) {
  std::ostringstream os;
  os << "# vars:";
  for (const auto &name : f.universe().names())
    os << ' ' << name;
  os << '\n' << to_string(f) << '\n';
  return os.str();
}

// -----------------------------------------------------------------------------
// Classifier bundle
//
//   var <index> <name>        one per feature, 1-based
//   protected <name>...       optional
//   section delta             DIMACS CNF of Δ
//   section negdelta          optional DIMACS CNF of ¬Δ
// -----------------------------------------------------------------------------

inline Classifier parse_bundle(std::string_view text) {
  std::map<std::size_t, std::string> vars;
  std::vector<std::pair<std::string, detail::Token>> prot;
  std::size_t prot_line = 0;
  std::string section;
  std::string delta, negdelta;
  std::size_t delta_first = 0, negdelta_first = 0;
  for (auto [ln, line] : detail::lines_of(text)) {
    const auto toks = detail::split_ws(line);
    if (!section.empty()) {
      if (toks.size() == 2 && toks[0].text == "section") {
        // fall through to the section switch below
      } else {
        std::string &dst = section == "delta" ? delta : negdelta;
        dst.append(line);
        dst.push_back('\n');
        continue;
      }
    }
    if (toks.empty() || toks[0].text == "c" || toks[0].text.starts_with("#"))
      continue;
    if (toks[0].text == "var") {
      if (toks.size() != 3)
        throw ParseError("expected 'var <index> <name>'", ln, 1);
      const long long i = detail::to_int(toks[1], ln, "feature index");
      if (i < 1)
        throw ParseError("feature index must be positive", ln, toks[1].column);
      if (!vars.emplace(static_cast<std::size_t>(i), std::string(toks[2].text)).second)
        throw ParseError("feature " + std::to_string(i) + " declared twice", ln, toks[1].column);
    } else if (toks[0].text == "protected") {
      prot_line = ln;
      for (std::size_t i = 1; i < toks.size(); ++i)
        prot.emplace_back(std::string(toks[i].text), toks[i]);
    } else if (toks[0].text == "section") {
      if (toks.size() != 2 || (toks[1].text != "delta" && toks[1].text != "negdelta"))
        throw ParseError("expected 'section delta' or 'section negdelta'", ln, 1);
      section = std::string(toks[1].text);
      if ((section == "delta" && delta_first) || (section == "negdelta" && negdelta_first))
        throw ParseError("section '" + section + "' appears twice", ln, 1);
      (section == "delta" ? delta_first : negdelta_first) = ln;
    } else {
      throw ParseError("unexpected '" + std::string(toks[0].text) + "' in bundle header", ln,
                       toks[0].column);
    }
  }
  if (!delta_first)
    throw ParseError("bundle has no 'section delta'", 1, 1);
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= vars.size(); ++i) {
    auto it = vars.find(i);
    if (it == vars.end())
      throw ParseError("features must be numbered 1.." + std::to_string(vars.size()), 1, 1);
    names.push_back(it->second);
  }
  Universe u = [&] {
    try {
      return Universe(names);
    } catch (const UniverseError &e) {
      throw ParseError(e.what(), 1, 1);
    }
  }();

  // Parse errors inside a section are reported relative to the bundle.
  auto section_cnf = [&](const std::string &body, std::size_t first) {
    try {
      Cnf d = parse_dimacs(body);
      if (d.universe().size() != u.size())
        throw ParseError("section declares " + std::to_string(d.universe().size()) +
                             " variables, bundle has " + std::to_string(u.size()) + " features",
                         1, 1);
      return Cnf(u, d.clauses());
    } catch (const ParseError &e) {
      throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2),
                       first + e.line(), e.column());
    }
  };
  Cnf pos = section_cnf(delta, delta_first);
  std::optional<Cnf> neg;
  if (negdelta_first)
    neg = section_cnf(negdelta, negdelta_first);
  std::vector<Variable> protected_vars;
  for (const auto &[name, tok] : prot) {
    auto v = u.find(name);
    if (!v)
      throw ParseError("protected feature '" + name + "' is not declared", prot_line, tok.column);
    protected_vars.push_back(*v);
  }
  return Classifier::from_cnf(pos, neg, protected_vars);
}

inline std::string emit_bundle(const Classifier &c) {
  std::ostringstream os;
  const Universe &u = c.features();
  for (std::size_t i = 0; i < u.size(); ++i)
    os << "var " << i + 1 << ' ' << u.name(static_cast<VarId>(i)) << '\n';
  if (!c.protected_features().empty()) {
    os << "protected";
    for (Variable v : c.protected_features())
      os << ' ' << u.name(v.id);
    os << '\n';
  }
  auto body = [&](const Cnf &d) {
    std::ostringstream b;
    b << "p cnf " << u.size() << ' ' << d.size() << '\n';
    const Cnf sorted = d.sorted();
    for (const Clause &cl : sorted.clauses()) {
      for (Literal l : cl)
        b << detail::dimacs_int(l) << ' ';
      b << "0\n";
    }
    return b.str();
  };
  const Cnf pos = c.cnf(Side::Positive) ? *c.cnf(Side::Positive) : prime_implicates(c.positive());
  os << "section delta\n" << body(pos);
  if (const auto &neg = c.cnf(Side::Negative))
    os << "section negdelta\n" << body(*neg);
  return os.str();
}

// -----------------------------------------------------------------------------
// Literal lists
// -----------------------------------------------------------------------------

/// Literals written as `e,~f,g` (the format of to_string(Term)). Commas and
/// whitespace both separate; `true` or an empty string is the empty list.
inline std::vector<Literal> parse_literals(std::string_view text, const Universe &u) {
  std::vector<Literal> out;
  std::size_t col = 1;
  std::string cur;
  std::size_t start = 1;
  auto flush = [&] {
    if (cur.empty() || cur == "true") {
      cur.clear();
      return;
    }
    const bool neg = cur[0] == '~' || cur[0] == '-' || cur[0] == '!';
    const std::string name = neg ? cur.substr(1) : cur;
    const auto v = u.find(name);
    if (!v)
      throw ParseError("unknown variable '" + name + "'", 1, start);
    out.push_back(Literal{*v, !neg});
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      if (cur.empty())
        start = col;
      cur.push_back(ch);
    }
    ++col;
  }
  flush();
  return out;
}

/// A consistent term in the format of parse_literals.
inline Term parse_term(std::string_view text, const Universe &u) {
  auto lits = parse_literals(text, u);
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j)
      if (lits[i] == ~lits[j])
        throw ParseError("term contains both " + to_string(lits[i], u) + " and " +
                             to_string(lits[j], u),
                         1, 1);
  return Term(std::move(lits));
}

} // namespace qlit
