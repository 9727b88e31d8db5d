/// @file  circuit.hpp
/// @brief NNF circuits as flat DAGs, with DNNF / Decision-DNNF / SDD
///        recognition and the dual-construction negation.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "truth_table.hpp"

namespace qlit {

/// Strongest structural property known to hold for a circuit.
enum class Annotation { Nnf, Dnnf, DecisionDnnf, Sdd };

inline const char *to_string(Annotation a) {
  switch (a) {
  case Annotation::Nnf:
    return "nnf";
  case Annotation::Dnnf:
    return "dnnf";
  case Annotation::DecisionDnnf:
    return "decision-dnnf";
  case Annotation::Sdd:
    return "sdd";
  }
  return "nnf";
}

inline constexpr VarId kNoDecision = std::numeric_limits<VarId>::max();

/// Node kinds are False, True, Literal, And and Or; Not never appears.
struct CircuitNode {
  Kind kind = Kind::False;
  Literal lit{};
  std::uint32_t first = 0; ///< offset into the edge array
  std::uint32_t count = 0; ///< number of children
  VarId decision = kNoDecision;
};

/// Topologically ordered NNF DAG; children precede parents and the root is
/// the last node.
class Circuit {
public:
  explicit Circuit(Universe u) : _u(std::move(u)) {}

  const Universe &universe() const noexcept { return _u; }
  std::size_t size() const noexcept { return _nodes.size(); }
  std::size_t edge_count() const noexcept { return _edges.size(); }
  std::uint32_t root() const noexcept { return static_cast<std::uint32_t>(_nodes.size() - 1); }
  const CircuitNode &node(std::uint32_t i) const { return _nodes.at(i); }
  const std::vector<CircuitNode> &nodes() const noexcept { return _nodes; }

  std::span<const std::uint32_t> children(std::uint32_t i) const {
    const CircuitNode &n = _nodes.at(i);
    return {_edges.data() + n.first, n.count};
  }

  Annotation annotation() const noexcept { return _annotation; }

private:
  friend class CircuitBuilder;

  Universe _u;
  std::vector<CircuitNode> _nodes;
  std::vector<std::uint32_t> _edges;
  Annotation _annotation = Annotation::Nnf;
};

/// Incremental circuit construction.
///
/// In folding mode constants are absorbed, single-child gates collapse and
/// identical nodes are shared. Raw mode keeps every node exactly as added,
/// which is what the parsers need to preserve a file's structure.
class CircuitBuilder {
public:
  enum class Mode { Fold, Raw };

  explicit CircuitBuilder(Universe u, Mode mode = Mode::Fold) : _c(std::move(u)), _mode(mode) {}

  std::size_t size() const noexcept { return _c._nodes.size(); }
  const CircuitNode &node(std::uint32_t i) const { return _c._nodes.at(i); }

  /// Capacity hint for about `nodes` nodes and `edges` edges.
  void reserve(std::size_t nodes, std::size_t edges) {
    _c._nodes.reserve(nodes);
    _c._edges.reserve(edges);
    if (_mode == Mode::Fold)
      _unique.reserve(nodes);
  }

  std::uint32_t constant(bool value) {
    if (_mode == Mode::Fold) {
      auto &slot = value ? _true : _false;
      if (!slot)
        slot = push({value ? Kind::True : Kind::False}, {});
      return *slot;
    }
    return push({value ? Kind::True : Kind::False}, {});
  }

  std::uint32_t literal(Literal l) {
    _c._u.check(l);
    if (_mode == Mode::Fold) {
      if (_lits.size() <= l.code())
        _lits.resize(std::size_t{l.code()} + 1, kNone);
      if (_lits[l.code()] == kNone)
        _lits[l.code()] = push({Kind::Literal, l}, {});
      return _lits[l.code()];
    }
    return push({Kind::Literal, l}, {});
  }

  std::uint32_t conjoin(std::vector<std::uint32_t> kids) {
    return gate(Kind::And, std::move(kids), kNoDecision);
  }

  std::uint32_t disjoin(std::vector<std::uint32_t> kids, VarId decision = kNoDecision) {
    return gate(Kind::Or, std::move(kids), decision);
  }

  /// Finish with `root` as the root. Nodes unreachable from it are dropped;
  /// `kept`, when given, receives the builder id of every output node.
  Circuit finish(std::uint32_t root, Annotation annotation = Annotation::Nnf,
                 std::vector<std::uint32_t> *kept = nullptr) && {
    if (root >= _c._nodes.size())
      throw StructureError("root is not a node of the circuit", root);
    std::vector<char> live(root + 1, 0);
    live[root] = 1;
    for (std::uint32_t i = root + 1; i-- > 0;)
      if (live[i])
        for (std::uint32_t c : _c.children(i))
          live[c] = 1;
    Circuit out(_c._u);
    std::vector<std::uint32_t> remap(root + 1, kNone);
    for (std::uint32_t i = 0; i <= root; ++i) {
      if (!live[i])
        continue;
      CircuitNode n = _c._nodes[i];
      const auto kids = _c.children(i);
      n.first = static_cast<std::uint32_t>(out._edges.size());
      for (std::uint32_t c : kids)
        out._edges.push_back(remap[c]);
      remap[i] = static_cast<std::uint32_t>(out._nodes.size());
      out._nodes.push_back(n);
      if (kept)
        kept->push_back(i);
    }
    out._annotation = annotation;
    return out;
  }

  /// Same circuit with a different annotation. Callers vouch for it.
  static Circuit annotate(Circuit c, Annotation a) {
    c._annotation = a;
    return c;
  }

private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct Key {
    Kind kind;
    VarId decision;
    std::vector<std::uint32_t> kids;
    bool operator==(const Key &) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key &k) const noexcept {
      std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ull ^ k.decision;
      for (auto c : k.kids)
        h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h;
    }
  };

  std::uint32_t gate(Kind kind, std::vector<std::uint32_t> kids, VarId decision) {
    for (std::uint32_t c : kids)
      if (c >= _c._nodes.size())
        throw StructureError("child " + std::to_string(c) + " is not defined yet",
                             _c._nodes.size());
    if (_mode == Mode::Raw)
      return push({kind, Literal{}, 0, 0, decision}, kids);

    const Kind absorbing = kind == Kind::And ? Kind::False : Kind::True;
    const Kind neutral = kind == Kind::And ? Kind::True : Kind::False;
    std::size_t out = 0;
    for (std::uint32_t c : kids) {
      const Kind k = _c._nodes[c].kind;
      if (k == absorbing)
        return constant(absorbing == Kind::True);
      if (k != neutral)
        kids[out++] = c;
    }
    kids.resize(out);
    if (kids.empty())
      return constant(neutral == Kind::True);
    if (kids.size() == 1)
      return kids.front();
    Key key{kind, decision, kids};
    if (auto it = _unique.find(key); it != _unique.end())
      return it->second;
    const std::uint32_t id = push({kind, Literal{}, 0, 0, decision}, kids);
    _unique.emplace(std::move(key), id);
    return id;
  }

  std::uint32_t push(CircuitNode n, const std::vector<std::uint32_t> &kids) {
    if (_c._nodes.size() >= kNone - 1)
      throw CapacityError("circuit node count", kNone - 1);
    n.first = static_cast<std::uint32_t>(_c._edges.size());
    n.count = static_cast<std::uint32_t>(kids.size());
    _c._edges.insert(_c._edges.end(), kids.begin(), kids.end());
    _c._nodes.push_back(n);
    return static_cast<std::uint32_t>(_c._nodes.size() - 1);
  }

  Circuit _c;
  Mode _mode;
  std::optional<std::uint32_t> _true, _false;
  std::vector<std::uint32_t> _lits;
  std::unordered_map<Key, std::uint32_t, KeyHash> _unique;
};

// -----------------------------------------------------------------------------
// Semantics
// -----------------------------------------------------------------------------

inline bool evaluate(const Circuit &c, const World &w) {
  if (!(c.universe() == w.universe()))
    throw UniverseError("world and circuit live over different universes");
  std::vector<char> val(c.size());
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    const auto kids = c.children(i);
    switch (n.kind) {
    case Kind::False:
      val[i] = 0;
      break;
    case Kind::True:
      val[i] = 1;
      break;
    case Kind::Literal:
      val[i] = w.contains(n.lit);
      break;
    case Kind::And:
      val[i] = std::all_of(kids.begin(), kids.end(), [&](auto k) { return val[k] != 0; });
      break;
    case Kind::Or:
      val[i] = std::any_of(kids.begin(), kids.end(), [&](auto k) { return val[k] != 0; });
      break;
    default:
      throw StructureError("negation node inside an NNF circuit", i);
    }
  }
  return val.back() != 0;
}

inline TruthTable truth_table(const Circuit &c, std::size_t cap = default_enum_cap()) {
  const std::size_t n = c.universe().size();
  check_cap(n, cap);
  TruthTable out(n);
  std::vector<std::uint64_t> val(c.size());
  for (std::size_t w = 0; w < TruthTable::word_count(n); ++w) {
    for (std::uint32_t i = 0; i < c.size(); ++i) {
      const CircuitNode &node = c.node(i);
      std::uint64_t v = 0;
      switch (node.kind) {
      case Kind::True:
        v = ~std::uint64_t{0};
        break;
      case Kind::Literal: {
        const VarId x = node.lit.var();
        v = x < 6 ? TruthTable::kPattern[x] : (((w >> (x - 6)) & 1u) ? ~std::uint64_t{0} : 0);
        if (!node.lit.positive())
          v = ~v;
        break;
      }
      case Kind::And:
        v = ~std::uint64_t{0};
        for (auto k : c.children(i))
          v &= val[k];
        break;
      case Kind::Or:
        for (auto k : c.children(i))
          v |= val[k];
        break;
      default:
        break;
      }
      val[i] = v;
    }
    out.words()[w] = val.back();
  }
  if (n < 6)
    out.words()[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
  return out;
}

inline Formula to_formula(const Circuit &c) {
  const Universe &u = c.universe();
  std::vector<NodeId> id(c.size());
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    switch (n.kind) {
    case Kind::False:
      id[i] = Formula::bottom(u).id();
      break;
    case Kind::True:
      id[i] = Formula::top(u).id();
      break;
    case Kind::Literal:
      id[i] = Formula::literal(u, n.lit).id();
      break;
    default: {
      std::vector<NodeId> kids;
      for (auto k : c.children(i))
        kids.push_back(id[k]);
      id[i] = Formula::make_id(u, n.kind, std::move(kids));
    }
    }
  }
  return {u, id.back()};
}

/// NNF circuit of a formula (negations pushed to the literals, shared
/// subformulas shared).
inline Circuit to_circuit(const Formula &f) {
  const Formula g = to_nnf(f);
  const Universe &u = g.universe();
  CircuitBuilder b(u);
  std::unordered_map<NodeId, std::uint32_t> map;
  for (NodeId id : detail::topological(u, g.id())) {
    const auto &n = u.store().node(id);
    std::uint32_t out = 0;
    switch (n.kind) {
    case Kind::False:
      out = b.constant(false);
      break;
    case Kind::True:
      out = b.constant(true);
      break;
    case Kind::Literal:
      out = b.literal(n.lit);
      break;
    default: {
      std::vector<std::uint32_t> kids;
      for (NodeId k : n.kids)
        kids.push_back(map.at(k));
      out = n.kind == Kind::And ? b.conjoin(std::move(kids)) : b.disjoin(std::move(kids));
    }
    }
    map.emplace(id, out);
  }
  return std::move(b).finish(map.at(g.id()));
}

/// Dual construction: swap and/or and complement literals and constants.
/// The result has exactly the nodes of the input.
inline Circuit negate(const Circuit &c) {
  CircuitBuilder b(c.universe(), CircuitBuilder::Mode::Raw);
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    const auto kids = c.children(i);
    std::vector<std::uint32_t> k(kids.begin(), kids.end());
    switch (n.kind) {
    case Kind::False:
      b.constant(true);
      break;
    case Kind::True:
      b.constant(false);
      break;
    case Kind::Literal:
      b.literal(~n.lit);
      break;
    case Kind::And:
      b.disjoin(std::move(k));
      break;
    default:
      b.conjoin(std::move(k));
    }
  }
  return std::move(b).finish(c.root());
}

/// Whether no literal appears in both polarities among reachable nodes.
inline bool is_monotone(const Circuit &c) {
  std::vector<std::uint8_t> seen(c.universe().size(), 0);
  for (const CircuitNode &n : c.nodes())
    if (n.kind == Kind::Literal) {
      seen[n.lit.var()] |= n.lit.positive() ? 1 : 2;
      if (seen[n.lit.var()] == 3)
        return false;
    }
  return true;
}

// -----------------------------------------------------------------------------
// Structure
// -----------------------------------------------------------------------------

/// Sorted variable set below every node.
inline std::vector<std::vector<VarId>> node_variables(const Circuit &c) {
  std::vector<std::vector<VarId>> vars(c.size());
  std::vector<VarId> merged;
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    if (n.kind == Kind::Literal) {
      vars[i] = {n.lit.var()};
      continue;
    }
    for (auto k : c.children(i)) {
      merged.clear();
      std::set_union(vars[i].begin(), vars[i].end(), vars[k].begin(), vars[k].end(),
                     std::back_inserter(merged));
      vars[i].swap(merged);
    }
  }
  return vars;
}

/// First and-node whose children share a variable, if any.
inline std::optional<std::uint32_t> find_non_decomposable(const Circuit &c,
                                                          const std::vector<std::vector<VarId>> &vars) {
  std::vector<std::uint32_t> stamp(c.universe().size(), 0);
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    if (c.node(i).kind != Kind::And)
      continue;
    for (auto k : c.children(i))
      for (VarId v : vars[k]) {
        if (stamp[v] == i + 1)
          return i;
        stamp[v] = i + 1;
      }
  }
  return std::nullopt;
}

inline bool is_decomposable(const Circuit &c) {
  return !find_non_decomposable(c, node_variables(c));
}

/// The two branches of a decision node (ℓ∧α)∨(ℓ̄∧β).
struct DecisionSplit {
  Literal lit;                       ///< ℓ, the literal of the first child
  std::vector<std::uint32_t> alpha;  ///< remaining conjuncts of the first child
  std::vector<std::uint32_t> beta;   ///< remaining conjuncts of the second child
};

namespace detail {

inline std::uint32_t unwrap(const Circuit &c, std::uint32_t i) {
  while (c.node(i).kind == Kind::And && c.node(i).count == 1)
    i = c.children(i)[0];
  return i;
}

/// Literal conjuncts of a branch, as (literal, child index) pairs. A bare
/// literal counts as ℓ∧⊤.
inline std::vector<std::pair<Literal, std::uint32_t>> branch_literals(const Circuit &c,
                                                                      std::uint32_t i) {
  i = unwrap(c, i);
  std::vector<std::pair<Literal, std::uint32_t>> out;
  if (c.node(i).kind == Kind::Literal)
    out.emplace_back(c.node(i).lit, i);
  else if (c.node(i).kind == Kind::And)
    for (auto k : c.children(i)) {
      const std::uint32_t u = unwrap(c, k);
      if (c.node(u).kind == Kind::Literal)
        out.emplace_back(c.node(u).lit, k);
    }
  return out;
}

inline std::vector<std::uint32_t> rest_of(const Circuit &c, std::uint32_t branch,
                                          std::uint32_t literal_child) {
  branch = unwrap(c, branch);
  std::vector<std::uint32_t> out;
  if (c.node(branch).kind != Kind::And)
    return out;
  bool skipped = false;
  for (auto k : c.children(branch)) {
    if (!skipped && k == literal_child) {
      skipped = true;
      continue;
    }
    out.push_back(k);
  }
  return out;
}

} // namespace detail

/// Recognize an or-node of the shape (ℓ∧α)∨(ℓ̄∧β). When the node names a
/// decision variable, ℓ must be over that variable.
inline std::optional<DecisionSplit> decision_split(const Circuit &c, std::uint32_t i) {
  const CircuitNode &n = c.node(i);
  if (n.kind != Kind::Or || n.count != 2)
    return std::nullopt;
  const auto kids = c.children(i);
  const auto a = detail::branch_literals(c, kids[0]);
  const auto b = detail::branch_literals(c, kids[1]);
  for (const auto &[la, ca] : a) {
    if (n.decision != kNoDecision && la.var() != n.decision)
      continue;
    for (const auto &[lb, cb] : b)
      if (lb == ~la)
        return DecisionSplit{la, detail::rest_of(c, kids[0], ca), detail::rest_of(c, kids[1], cb)};
  }
  return std::nullopt;
}

/// Checks the partition property of SDD or-nodes: primes pairwise
/// inconsistent, each consistent, and jointly valid. Exact when the primes of
/// a node mention at most `kSemanticPrimeVars` variables; above that only
/// mutual exclusion is checked, syntactically.
inline constexpr std::size_t kSemanticPrimeVars = 10;

namespace detail {

/// Truth table of node `i` over the local variables `vars` (sorted).
inline TruthTable local_table(const Circuit &c, std::uint32_t i, const std::vector<VarId> &vars,
                              std::unordered_map<std::uint32_t, TruthTable> &memo) {
  if (auto it = memo.find(i); it != memo.end())
    return it->second;
  const std::size_t m = vars.size();
  const CircuitNode &n = c.node(i);
  TruthTable t(m);
  switch (n.kind) {
  case Kind::True:
    t = TruthTable(m, true);
    break;
  case Kind::Literal: {
    const auto pos = std::lower_bound(vars.begin(), vars.end(), n.lit.var());
    t = TruthTable::literal(m, {Variable{static_cast<VarId>(pos - vars.begin())}, n.lit.positive()});
    break;
  }
  case Kind::And:
    t = TruthTable(m, true);
    for (auto k : c.children(i))
      t &= local_table(c, k, vars, memo);
    break;
  case Kind::Or:
    for (auto k : c.children(i))
      t |= local_table(c, k, vars, memo);
    break;
  default:
    break;
  }
  memo.emplace(i, t);
  return t;
}

/// Sound but incomplete syntactic test that `a ∧ b` is inconsistent.
inline bool exclusive(const Circuit &c, std::uint32_t a, std::uint32_t b, int depth = 0) {
  if (depth > 8)
    return false;
  const CircuitNode &na = c.node(a), &nb = c.node(b);
  if (na.kind == Kind::False || nb.kind == Kind::False)
    return true;
  if (na.kind == Kind::Literal && nb.kind == Kind::Literal)
    return na.lit == ~nb.lit;
  auto any_child = [&](std::uint32_t x, std::uint32_t y) {
    for (auto k : c.children(x))
      if (exclusive(c, k, y, depth + 1))
        return true;
    return false;
  };
  auto all_children = [&](std::uint32_t x, std::uint32_t y) {
    for (auto k : c.children(x))
      if (!exclusive(c, k, y, depth + 1))
        return false;
    return true;
  };
  if (na.kind == Kind::And && any_child(a, b))
    return true;
  if (nb.kind == Kind::And && any_child(b, a))
    return true;
  if (na.kind == Kind::Or && all_children(a, b))
    return true;
  if (nb.kind == Kind::Or && all_children(b, a))
    return true;
  return false;
}

} // namespace detail

/// A circuit verified to be a Decision-DNNF: decomposable and-nodes, and every
/// or-node a decision (ℓ∧α)∨(ℓ̄∧β). Only obtainable through `verify`, so the
/// Decision-DNNF routines cannot be handed an arbitrary NNF.
class DecisionDnnf {
public:
  static DecisionDnnf verify(Circuit c) {
    const auto vars = node_variables(c);
    if (auto bad = find_non_decomposable(c, vars))
      throw StructureError("and-node children share a variable", *bad);
    for (std::uint32_t i = 0; i < c.size(); ++i)
      if (c.node(i).kind == Kind::Or && !decision_split(c, i))
        throw StructureError("or-node is not a decision (l & a) | (~l & b)", i);
    return DecisionDnnf(std::move(c));
  }

  const Circuit &circuit() const noexcept { return _c; }

private:
  explicit DecisionDnnf(Circuit c) : _c(std::move(c)) {}
  Circuit _c;
};

/// A circuit verified to be an SDD: every or-node is a partition
/// (p₁∧s₁)∨…∨(pₙ∧sₙ) whose elements are two-child and-nodes with variable
/// disjoint prime and sub, and every and-node is such an element.
class Sdd {
public:
  static Sdd verify(Circuit c) {
    const auto vars = node_variables(c);
    std::vector<char> is_element(c.size(), 0);
    for (std::uint32_t i = 0; i < c.size(); ++i) {
      const CircuitNode &n = c.node(i);
      if (n.kind != Kind::Or)
        continue;
      if (n.count == 0)
        throw StructureError("partition node without elements", i);
      std::vector<std::uint32_t> primes;
      std::vector<VarId> prime_vars;
      for (auto e : c.children(i)) {
        const CircuitNode &en = c.node(e);
        if (en.kind != Kind::And || en.count != 2)
          throw StructureError("partition element is not a (prime, sub) pair", i);
        const auto ps = c.children(e);
        std::vector<VarId> shared;
        std::set_intersection(vars[ps[0]].begin(), vars[ps[0]].end(), vars[ps[1]].begin(),
                              vars[ps[1]].end(), std::back_inserter(shared));
        if (!shared.empty())
          throw StructureError("prime and sub share variable " + c.universe().name(shared[0]), e);
        is_element[e] = 1;
        primes.push_back(ps[0]);
        std::vector<VarId> merged;
        std::set_union(prime_vars.begin(), prime_vars.end(), vars[ps[0]].begin(),
                       vars[ps[0]].end(), std::back_inserter(merged));
        prime_vars.swap(merged);
      }
      check_partition(c, i, primes, prime_vars);
    }
    for (std::uint32_t i = 0; i < c.size(); ++i)
      if (c.node(i).kind == Kind::And && !is_element[i])
        throw StructureError("and-node outside a partition", i);
    return Sdd(std::move(c));
  }

  const Circuit &circuit() const noexcept { return _c; }

private:
  explicit Sdd(Circuit c) : _c(std::move(c)) {}

  static void check_partition(const Circuit &c, std::uint32_t node,
                              const std::vector<std::uint32_t> &primes,
                              const std::vector<VarId> &prime_vars) {
    if (prime_vars.size() <= kSemanticPrimeVars) {
      std::unordered_map<std::uint32_t, TruthTable> memo;
      TruthTable cover(prime_vars.size());
      for (auto p : primes) {
        const TruthTable t = detail::local_table(c, p, prime_vars, memo);
        if (t.none())
          throw StructureError("prime is inconsistent", node);
        if (!(t & cover).none())
          throw StructureError("primes are not mutually exclusive", node);
        cover |= t;
      }
      if (!cover.all())
        throw StructureError("primes are not exhaustive", node);
      return;
    }
    for (std::size_t a = 0; a < primes.size(); ++a)
      for (std::size_t b = a + 1; b < primes.size(); ++b)
        if (!detail::exclusive(c, primes[a], primes[b]))
          throw StructureError("cannot establish that primes are mutually exclusive", node);
  }

  Circuit _c;
};

/// Strongest annotation that holds for `c`.
inline Annotation infer_annotation(const Circuit &c) {
  try {
    (void)DecisionDnnf::verify(c);
    return Annotation::DecisionDnnf;
  } catch (const StructureError &) {
  }
  return is_decomposable(c) ? Annotation::Dnnf : Annotation::Nnf;
}

} // namespace qlit
