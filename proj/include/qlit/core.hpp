/// @file  core.hpp
/// @brief Variables, literals, worlds, terms, clauses and hash-consed formulas
///
/// Every formula is attached to a Universe, the ordered set of Boolean
/// variables it is interpreted over. Formula nodes are interned in a node
/// store owned by the universe, so building the same expression twice yields
/// the same node id. Nodes are immutable once published; reads are lock-free
/// and construction is serialized by a mutex, which makes formulas safe to
/// share between threads.

#pragma once

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qlit {

using VarId = std::uint32_t;
using NodeId = std::uint32_t;

/// A Boolean variable, identified by its dense index in a Universe.
struct Variable {
  VarId id = 0;

  friend constexpr auto operator<=>(const Variable &, const Variable &) = default;
};

/// A variable together with a polarity.
///
/// Literals are encoded as `2 * var + positive`, so the natural order sorts by
/// variable first and puts the negative literal before the positive one.
class Literal {
public:
  constexpr Literal() noexcept = default;
  constexpr Literal(Variable v, bool positive) noexcept
      : _code(v.id * 2 + (positive ? 1u : 0u)) {}

  static constexpr Literal pos(VarId v) noexcept { return {Variable{v}, true}; }
  static constexpr Literal neg(VarId v) noexcept { return {Variable{v}, false}; }
  static constexpr Literal from_code(std::uint32_t code) noexcept {
    Literal l;
    l._code = code;
    return l;
  }

  constexpr VarId var() const noexcept { return _code >> 1; }
  constexpr Variable variable() const noexcept { return Variable{var()}; }
  constexpr bool positive() const noexcept { return (_code & 1u) != 0; }
  constexpr std::uint32_t code() const noexcept { return _code; }

  /// The complementary literal.
  constexpr Literal operator~() const noexcept { return from_code(_code ^ 1u); }

  friend constexpr auto operator<=>(const Literal &, const Literal &) = default;

private:
  std::uint32_t _code = 0;
};

enum class Kind : std::uint8_t { False, True, Literal, Not, And, Or };

namespace detail {

struct FormulaNode {
  Kind kind;
  Literal lit;
  std::vector<NodeId> kids;
};

struct NodeKey {
  Kind kind;
  std::uint32_t lit;
  std::vector<NodeId> kids;

  bool operator==(const NodeKey &) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey &k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ull;
    h ^= k.lit + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    for (NodeId c : k.kids)
      h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

/// Append-only unique table of formula nodes.
class NodeStore {
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = std::size_t{1} << 15;

public:
  static constexpr NodeId kFalse = 0;
  static constexpr NodeId kTrue = 1;

  NodeStore() : _chunks(new std::atomic<FormulaNode *>[kMaxChunks]) {
    for (std::size_t i = 0; i < kMaxChunks; ++i)
      _chunks[i].store(nullptr, std::memory_order_relaxed);
    intern(Kind::False, Literal{}, {});
    intern(Kind::True, Literal{}, {});
  }

  NodeStore(const NodeStore &) = delete;
  NodeStore &operator=(const NodeStore &) = delete;

  const FormulaNode &node(NodeId id) const noexcept {
    FormulaNode *chunk = _chunks[id >> kChunkBits].load(std::memory_order_acquire);
    return chunk[id & (kChunkSize - 1)];
  }

  NodeId intern(Kind kind, Literal lit, std::vector<NodeId> kids) {
    NodeKey key{kind, lit.code(), std::move(kids)};
    std::lock_guard<std::mutex> lock(_mutex);
    if (auto it = _table.find(key); it != _table.end())
      return it->second;
    const std::size_t id = _size;
    const std::size_t chunk = id >> kChunkBits;
    if (chunk >= kMaxChunks)
      throw CapacityError("formula node store exhausted", kMaxChunks * kChunkSize);
    if ((id & (kChunkSize - 1)) == 0) {
      _owned.emplace_back(new FormulaNode[kChunkSize]);
      _chunks[chunk].store(_owned.back().get(), std::memory_order_release);
    }
    FormulaNode &slot = _owned[chunk][id & (kChunkSize - 1)];
    slot.kind = kind;
    slot.lit = lit;
    slot.kids = key.kids;
    std::atomic_thread_fence(std::memory_order_release);
    ++_size;
    _table.emplace(std::move(key), static_cast<NodeId>(id));
    return static_cast<NodeId>(id);
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(_mutex);
    return _size;
  }

private:
  std::unique_ptr<std::atomic<FormulaNode *>[]> _chunks;
  std::vector<std::unique_ptr<FormulaNode[]>> _owned;
  std::unordered_map<NodeKey, NodeId, NodeKeyHash> _table;
  std::size_t _size = 0;
  mutable std::mutex _mutex;
};

} // namespace detail

/// An ordered, fixed set of named Boolean variables (the Σ of every formula).
///
/// Copies share the same underlying variables and node store.
class Universe {
  struct Impl {
    std::vector<std::string> names;
    std::unordered_map<std::string, VarId> index;
    detail::NodeStore store;
  };

public:
  /// Universe of `n` variables named `x1 … xn`.
  explicit Universe(std::size_t n = 0) : Universe(default_names(n)) {}

  explicit Universe(std::vector<std::string> names) : _impl(std::make_shared<Impl>()) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty())
        throw UniverseError("empty variable name");
      if (!_impl->index.emplace(names[i], static_cast<VarId>(i)).second)
        throw UniverseError("duplicate variable name '" + names[i] + "'");
    }
    _impl->names = std::move(names);
  }

  Universe(std::initializer_list<std::string_view> names)
      : Universe(std::vector<std::string>(names.begin(), names.end())) {}

  std::size_t size() const noexcept { return _impl->names.size(); }
  const std::vector<std::string> &names() const noexcept { return _impl->names; }
  const std::string &name(VarId v) const { return _impl->names.at(v); }

  std::optional<Variable> find(std::string_view name) const {
    auto it = _impl->index.find(std::string(name));
    if (it == _impl->index.end())
      return std::nullopt;
    return Variable{it->second};
  }

  Variable variable(std::string_view name) const {
    if (auto v = find(name))
      return *v;
    throw UniverseError("unknown variable '" + std::string(name) + "'");
  }

  Literal literal(std::string_view name, bool positive = true) const {
    return {variable(name), positive};
  }

  bool contains(Variable v) const noexcept { return v.id < size(); }
  bool contains(Literal l) const noexcept { return l.var() < size(); }

  void check(Literal l) const {
    if (!contains(l))
      throw UniverseError("variable index " + std::to_string(l.var()) +
                          " is outside a universe of " + std::to_string(size()) +
                          " variables");
  }
  void check(Variable v) const { check(Literal{v, true}); }

  /// Same object (shares the node store).
  bool same(const Universe &o) const noexcept { return _impl == o._impl; }
  /// Same variables in the same order.
  bool operator==(const Universe &o) const noexcept {
    return _impl == o._impl || _impl->names == o._impl->names;
  }

  detail::NodeStore &store() const noexcept { return _impl->store; }

  static std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      names.push_back("x" + std::to_string(i + 1));
    return names;
  }

private:
  std::shared_ptr<Impl> _impl;
};

// -----------------------------------------------------------------------------
// Terms and clauses
// -----------------------------------------------------------------------------

namespace detail {

template <class Derived> class LiteralSet {
public:
  LiteralSet() = default;

  const std::vector<Literal> &literals() const noexcept { return _lits; }
  std::size_t size() const noexcept { return _lits.size(); }
  bool empty() const noexcept { return _lits.empty(); }
  auto begin() const noexcept { return _lits.begin(); }
  auto end() const noexcept { return _lits.end(); }

  bool contains(Literal l) const noexcept {
    return std::binary_search(_lits.begin(), _lits.end(), l);
  }
  bool mentions(VarId v) const noexcept {
    return contains(Literal::pos(v)) || contains(Literal::neg(v));
  }
  /// Every literal of `this` also occurs in `o`.
  bool subset_of(const Derived &o) const noexcept {
    return std::includes(o._lits.begin(), o._lits.end(), _lits.begin(), _lits.end());
  }

  friend auto operator<=>(const LiteralSet &, const LiteralSet &) = default;

protected:
  explicit LiteralSet(std::vector<Literal> lits, const char *what) : _lits(std::move(lits)) {
    std::sort(_lits.begin(), _lits.end());
    _lits.erase(std::unique(_lits.begin(), _lits.end()), _lits.end());
    for (std::size_t i = 1; i < _lits.size(); ++i)
      if (_lits[i].var() == _lits[i - 1].var())
        throw PreconditionError(std::string(what) +
                                " contains a complementary literal pair on variable " +
                                std::to_string(_lits[i].var()));
  }

  std::vector<Literal> _lits;
};

} // namespace detail

/// Conjunction of literals over distinct variables. The empty term is ⊤.
class Term : public detail::LiteralSet<Term> {
public:
  Term() = default;
  explicit Term(std::vector<Literal> lits) : LiteralSet(std::move(lits), "term") {}
  Term(std::initializer_list<Literal> lits)
      : LiteralSet(std::vector<Literal>(lits), "term") {}

  /// Term without the given literal (no-op when absent).
  Term without(Literal l) const {
    Term t = *this;
    t._lits.erase(std::remove(t._lits.begin(), t._lits.end(), l), t._lits.end());
    return t;
  }
  /// Term extended with `l`. Throws if it conflicts with a present literal.
  Term with(Literal l) const {
    std::vector<Literal> lits = _lits;
    lits.push_back(l);
    return Term(std::move(lits));
  }
  /// Literals of `this` that are not in `o`.
  Term minus(const Term &o) const {
    Term t;
    std::set_difference(_lits.begin(), _lits.end(), o._lits.begin(), o._lits.end(),
                        std::back_inserter(t._lits));
    return t;
  }
  /// Whether the two terms share no contradicting literal.
  bool consistent_with(const Term &o) const noexcept {
    for (Literal l : _lits)
      if (o.contains(~l))
        return false;
    return true;
  }

  friend bool operator==(const Term &, const Term &) = default;
};

/// Disjunction of literals over distinct variables. The empty clause is ⊥.
class Clause : public detail::LiteralSet<Clause> {
public:
  Clause() = default;
  explicit Clause(std::vector<Literal> lits) : LiteralSet(std::move(lits), "clause") {}
  Clause(std::initializer_list<Literal> lits)
      : LiteralSet(std::vector<Literal>(lits), "clause") {}

  Clause without(Literal l) const {
    Clause c = *this;
    c._lits.erase(std::remove(c._lits.begin(), c._lits.end(), l), c._lits.end());
    return c;
  }

  friend bool operator==(const Clause &, const Clause &) = default;
};

/// Drop every literal over `vars` from `g`.
inline Term erase(const Term &g, std::span<const Variable> vars) {
  std::vector<Literal> kept;
  for (Literal l : g)
    if (std::none_of(vars.begin(), vars.end(), [&](Variable v) { return v.id == l.var(); }))
      kept.push_back(l);
  return Term(std::move(kept));
}

inline Term erase(const Term &g, std::initializer_list<Variable> vars) {
  return erase(g, std::span<const Variable>(vars.begin(), vars.size()));
}

// -----------------------------------------------------------------------------
// Worlds
// -----------------------------------------------------------------------------

/// A total truth assignment over a universe.
class World {
public:
  World(Universe u, std::vector<bool> values) : _u(std::move(u)), _values(std::move(values)) {
    if (_values.size() != _u.size())
      throw ArityError("world assigns " + std::to_string(_values.size()) +
                       " variables, universe has " + std::to_string(_u.size()));
  }

  /// World encoded by the bits of `index` (bit i is the value of variable i).
  static World from_index(const Universe &u, std::uint64_t index) {
    if (u.size() > 63)
      throw CapacityError("world index encoding", 63);
    std::vector<bool> values(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      values[i] = ((index >> i) & 1u) != 0;
    return World(u, std::move(values));
  }

  /// World made of the literals of a term that mentions every variable.
  static World from_term(const Universe &u, const Term &t) {
    if (t.size() != u.size())
      throw ArityError("term with " + std::to_string(t.size()) +
                       " literals is not total over a universe of " +
                       std::to_string(u.size()) + " variables");
    std::vector<bool> values(u.size());
    for (Literal l : t) {
      u.check(l);
      values[l.var()] = l.positive();
    }
    return World(u, std::move(values));
  }

  const Universe &universe() const noexcept { return _u; }
  std::size_t size() const noexcept { return _values.size(); }
  bool value(VarId v) const { return _values.at(v); }
  Literal literal(VarId v) const { return {Variable{v}, value(v)}; }
  bool contains(Literal l) const { return l.var() < size() && _values[l.var()] == l.positive(); }

  std::uint64_t index() const {
    if (size() > 63)
      throw CapacityError("world index encoding", 63);
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (_values[i])
        idx |= std::uint64_t{1} << i;
    return idx;
  }

  Term term() const {
    std::vector<Literal> lits;
    lits.reserve(size());
    for (std::size_t i = 0; i < size(); ++i)
      lits.push_back(literal(static_cast<VarId>(i)));
    return Term(std::move(lits));
  }

  bool operator==(const World &o) const { return _u == o._u && _values == o._values; }

private:
  Universe _u;
  std::vector<bool> _values;
};

/// World `w` with the literal of `l`'s variable replaced by `l` (ω[ℓ]).
inline World flip(const World &w, Literal l) {
  w.universe().check(l);
  std::vector<bool> values(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    values[i] = w.value(static_cast<VarId>(i));
  values[l.var()] = l.positive();
  return World(w.universe(), std::move(values));
}

// -----------------------------------------------------------------------------
// Formulas
// -----------------------------------------------------------------------------

/// A Boolean expression over a Universe: constants, literals, negation,
/// n-ary conjunction and disjunction.
///
/// Constructors fold constants (⊤/⊥ absorption, single-child collapse, double
/// negation) but perform no other simplification.
class Formula {
public:
  Formula(Universe u, NodeId id) : _u(std::move(u)), _id(id) {}

  static Formula top(const Universe &u) { return {u, detail::NodeStore::kTrue}; }
  static Formula bottom(const Universe &u) { return {u, detail::NodeStore::kFalse}; }
  static Formula literal(const Universe &u, Literal l) {
    u.check(l);
    return {u, u.store().intern(Kind::Literal, l, {})};
  }
  static Formula constant(const Universe &u, bool value) {
    return value ? top(u) : bottom(u);
  }
  static Formula term(const Universe &u, const Term &t) {
    std::vector<NodeId> kids;
    for (Literal l : t)
      kids.push_back(literal(u, l).id());
    return make(u, Kind::And, std::move(kids));
  }
  static Formula clause(const Universe &u, const Clause &c) {
    std::vector<NodeId> kids;
    for (Literal l : c)
      kids.push_back(literal(u, l).id());
    return make(u, Kind::Or, std::move(kids));
  }

  static Formula conjoin(const Universe &u, std::span<const Formula> parts) {
    return make(u, Kind::And, ids_of(u, parts));
  }
  static Formula disjoin(const Universe &u, std::span<const Formula> parts) {
    return make(u, Kind::Or, ids_of(u, parts));
  }

  /// Smart constructor over raw node ids of `u`'s store.
  static Formula make(const Universe &u, Kind kind, std::vector<NodeId> kids) {
    return {u, make_id(u, kind, std::move(kids))};
  }

  static NodeId make_id(const Universe &u, Kind kind, std::vector<NodeId> kids) {
    auto &store = u.store();
    switch (kind) {
    case Kind::False:
      return detail::NodeStore::kFalse;
    case Kind::True:
      return detail::NodeStore::kTrue;
    case Kind::Literal:
      throw Error("literal nodes are built with Formula::literal");
    case Kind::Not: {
      assert(kids.size() == 1);
      const NodeId c = kids.front();
      const auto &n = store.node(c);
      switch (n.kind) {
      case Kind::False:
        return detail::NodeStore::kTrue;
      case Kind::True:
        return detail::NodeStore::kFalse;
      case Kind::Literal:
        return store.intern(Kind::Literal, ~n.lit, {});
      case Kind::Not:
        return n.kids.front();
      default:
        return store.intern(Kind::Not, Literal{}, std::move(kids));
      }
    }
    case Kind::And:
    case Kind::Or: {
      const NodeId absorbing =
          kind == Kind::And ? detail::NodeStore::kFalse : detail::NodeStore::kTrue;
      const NodeId neutral =
          kind == Kind::And ? detail::NodeStore::kTrue : detail::NodeStore::kFalse;
      std::vector<NodeId> out;
      out.reserve(kids.size());
      for (NodeId c : kids) {
        if (c == absorbing)
          return absorbing;
        if (c != neutral)
          out.push_back(c);
      }
      if (out.empty())
        return neutral;
      if (out.size() == 1)
        return out.front();
      return store.intern(kind, Literal{}, std::move(out));
    }
    }
    return detail::NodeStore::kFalse;
  }

  const Universe &universe() const noexcept { return _u; }
  NodeId id() const noexcept { return _id; }
  Kind kind() const noexcept { return node().kind; }
  bool is_true() const noexcept { return _id == detail::NodeStore::kTrue; }
  bool is_false() const noexcept { return _id == detail::NodeStore::kFalse; }
  /// Literal of a Kind::Literal node.
  Literal lit() const noexcept { return node().lit; }
  std::size_t arity() const noexcept { return node().kids.size(); }
  Formula child(std::size_t i) const { return {_u, node().kids.at(i)}; }
  const std::vector<NodeId> &child_ids() const noexcept { return node().kids; }

  /// Node identity within the same universe object.
  bool identical(const Formula &o) const noexcept { return _u.same(o._u) && _id == o._id; }

  /// This formula re-interned into `target`, mapping variables by name.
  Formula rebase(const Universe &target) const;

  friend Formula operator~(const Formula &f) { return make(f._u, Kind::Not, {f._id}); }
  friend Formula operator&(const Formula &a, const Formula &b) {
    const Formula bb = b.aligned_to(a._u);
    return make(a._u, Kind::And, {a._id, bb._id});
  }
  friend Formula operator|(const Formula &a, const Formula &b) {
    const Formula bb = b.aligned_to(a._u);
    return make(a._u, Kind::Or, {a._id, bb._id});
  }

  /// `o` expressed in the store of `u`. Throws UniverseError unless the two
  /// universes declare the same variables in the same order.
  Formula aligned_to(const Universe &u) const {
    if (_u.same(u))
      return *this;
    if (!(_u == u))
      throw UniverseError("formulas live over different universes");
    return rebase(u);
  }

  const detail::FormulaNode &node() const noexcept { return _u.store().node(_id); }

private:
  static std::vector<NodeId> ids_of(const Universe &u, std::span<const Formula> parts) {
    std::vector<NodeId> ids;
    ids.reserve(parts.size());
    for (const Formula &f : parts)
      ids.push_back(f.aligned_to(u)._id);
    return ids;
  }

  Universe _u;
  NodeId _id;
};

inline Formula implies(const Formula &a, const Formula &b) { return ~a | b; }
inline Formula iff(const Formula &a, const Formula &b) {
  return implies(a, b) & implies(b, a);
}

namespace detail {

/// Bottom-up rewrite of the DAG rooted at `root` (iterative, memoized).
/// `fn(node, rewritten_kids)` returns the new id in `target`'s store.
template <class Fn>
NodeId rewrite(const Universe &source, NodeId root, Fn &&fn) {
  std::unordered_map<NodeId, NodeId> memo;
  std::vector<std::pair<NodeId, bool>> stack{{root, false}};
  std::vector<NodeId> kids;
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(id))
      continue;
    const FormulaNode &n = source.store().node(id);
    if (!expanded) {
      stack.emplace_back(id, true);
      for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it)
        if (!memo.count(*it))
          stack.emplace_back(*it, false);
      continue;
    }
    kids.clear();
    for (NodeId c : n.kids)
      kids.push_back(memo.at(c));
    memo.emplace(id, fn(id, n, kids));
  }
  return memo.at(root);
}

/// Node ids reachable from `root` in topological (children first) order.
inline std::vector<NodeId> topological(const Universe &u, NodeId root) {
  std::vector<NodeId> order;
  std::unordered_map<NodeId, bool> seen;
  std::vector<std::pair<NodeId, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(id);
      continue;
    }
    if (!seen.emplace(id, true).second)
      continue;
    stack.emplace_back(id, true);
    const FormulaNode &n = u.store().node(id);
    for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it)
      if (!seen.count(*it))
        stack.emplace_back(*it, false);
  }
  return order;
}

} // namespace detail

inline Formula Formula::rebase(const Universe &target) const {
  if (_u.same(target))
    return *this;
  std::vector<VarId> map(_u.size());
  for (std::size_t i = 0; i < _u.size(); ++i)
    map[i] = target.variable(_u.name(static_cast<VarId>(i))).id;
  const NodeId id = detail::rewrite(
      _u, _id, [&](NodeId, const detail::FormulaNode &n, const std::vector<NodeId> &kids) {
        if (n.kind == Kind::Literal)
          return literal(target, Literal{Variable{map[n.lit.var()]}, n.lit.positive()}).id();
        return make_id(target, n.kind, kids);
      });
  return {target, id};
}

/// Number of distinct nodes reachable from `f`.
inline std::size_t node_count(const Formula &f) {
  return detail::topological(f.universe(), f.id()).size();
}

/// Sorted ids of the variables that occur in `f`.
inline std::vector<VarId> variables(const Formula &f) {
  std::vector<VarId> vars;
  for (NodeId id : detail::topological(f.universe(), f.id())) {
    const auto &n = f.universe().store().node(id);
    if (n.kind == Kind::Literal)
      vars.push_back(n.lit.var());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

/// Whether literal `l` occurs syntactically in `f`.
inline bool mentions(const Formula &f, Literal l) {
  for (NodeId id : detail::topological(f.universe(), f.id())) {
    const auto &n = f.universe().store().node(id);
    if (n.kind == Kind::Literal && n.lit == l)
      return true;
  }
  return false;
}

/// f|ℓ: replace `l`'s variable by the constant that makes `l` true and fold.
inline Formula condition(const Formula &f, Literal l) {
  const Universe &u = f.universe();
  u.check(l);
  const NodeId id = detail::rewrite(
      u, f.id(), [&](NodeId self, const detail::FormulaNode &n, const std::vector<NodeId> &kids) {
        if (n.kind == Kind::Literal) {
          if (n.lit.var() != l.var())
            return self;
          return n.lit == l ? detail::NodeStore::kTrue : detail::NodeStore::kFalse;
        }
        if (n.kind == Kind::False || n.kind == Kind::True)
          return self;
        return Formula::make_id(u, n.kind, kids);
      });
  return {u, id};
}

/// Condition on every literal of a term.
inline Formula condition(const Formula &f, const Term &t) {
  const Universe &u = f.universe();
  for (Literal l : t)
    u.check(l);
  const NodeId id = detail::rewrite(
      u, f.id(), [&](NodeId self, const detail::FormulaNode &n, const std::vector<NodeId> &kids) {
        if (n.kind == Kind::Literal) {
          if (t.contains(n.lit))
            return detail::NodeStore::kTrue;
          if (t.contains(~n.lit))
            return detail::NodeStore::kFalse;
          return self;
        }
        if (n.kind == Kind::False || n.kind == Kind::True)
          return self;
        return Formula::make_id(u, n.kind, kids);
      });
  return {u, id};
}

/// Replace literal occurrences by constants according to `subst` (indexed by
/// literal code; std::nullopt keeps the literal) and fold.
inline Formula substitute(const Formula &f, const std::vector<std::optional<bool>> &subst) {
  const Universe &u = f.universe();
  const NodeId id = detail::rewrite(
      u, f.id(), [&](NodeId self, const detail::FormulaNode &n, const std::vector<NodeId> &kids) {
        if (n.kind == Kind::Literal) {
          const auto code = n.lit.code();
          if (code < subst.size() && subst[code])
            return *subst[code] ? detail::NodeStore::kTrue : detail::NodeStore::kFalse;
          return self;
        }
        if (n.kind == Kind::False || n.kind == Kind::True)
          return self;
        return Formula::make_id(u, n.kind, kids);
      });
  return {u, id};
}

inline bool evaluate(const Formula &f, const World &w) {
  if (!(w.universe() == f.universe()))
    throw UniverseError("world and formula live over different universes");
  const Universe &u = f.universe();
  std::unordered_map<NodeId, bool> value;
  for (NodeId id : detail::topological(u, f.id())) {
    const auto &n = u.store().node(id);
    bool v = false;
    switch (n.kind) {
    case Kind::False:
      v = false;
      break;
    case Kind::True:
      v = true;
      break;
    case Kind::Literal:
      v = w.contains(n.lit);
      break;
    case Kind::Not:
      v = !value.at(n.kids.front());
      break;
    case Kind::And:
      v = std::all_of(n.kids.begin(), n.kids.end(), [&](NodeId c) { return value.at(c); });
      break;
    case Kind::Or:
      v = std::any_of(n.kids.begin(), n.kids.end(), [&](NodeId c) { return value.at(c); });
      break;
    }
    value.emplace(id, v);
  }
  return value.at(f.id());
}

namespace detail {

/// NNF of `f` (polarity true) or of its negation (polarity false).
inline NodeId nnf(const Universe &u, NodeId root, bool polarity,
                  std::unordered_map<std::uint64_t, NodeId> &memo) {
  // Explicit stack over (node, polarity) pairs.
  auto key = [](NodeId id, bool pol) { return (std::uint64_t{id} << 1) | (pol ? 1u : 0u); };
  std::vector<std::pair<std::uint64_t, bool>> stack{{key(root, polarity), false}};
  while (!stack.empty()) {
    auto [k, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(k))
      continue;
    const NodeId id = static_cast<NodeId>(k >> 1);
    const bool pol = (k & 1u) != 0;
    const FormulaNode &n = u.store().node(id);
    auto child_key = [&](NodeId c) { return n.kind == Kind::Not ? key(c, !pol) : key(c, pol); };
    if (!expanded && !n.kids.empty()) {
      stack.emplace_back(k, true);
      for (NodeId c : n.kids)
        if (!memo.count(child_key(c)))
          stack.emplace_back(child_key(c), false);
      continue;
    }
    NodeId out = 0;
    switch (n.kind) {
    case Kind::False:
      out = pol ? NodeStore::kFalse : NodeStore::kTrue;
      break;
    case Kind::True:
      out = pol ? NodeStore::kTrue : NodeStore::kFalse;
      break;
    case Kind::Literal:
      out = u.store().intern(Kind::Literal, pol ? n.lit : ~n.lit, {});
      break;
    case Kind::Not:
      out = memo.at(child_key(n.kids.front()));
      break;
    case Kind::And:
    case Kind::Or: {
      std::vector<NodeId> kids;
      kids.reserve(n.kids.size());
      for (NodeId c : n.kids)
        kids.push_back(memo.at(child_key(c)));
      const bool is_and = (n.kind == Kind::And) == pol;
      out = Formula::make_id(u, is_and ? Kind::And : Kind::Or, std::move(kids));
      break;
    }
    }
    memo.emplace(k, out);
  }
  return memo.at(key(root, polarity));
}

} // namespace detail

/// Negation normal form of `f`.
inline Formula to_nnf(const Formula &f) {
  std::unordered_map<std::uint64_t, NodeId> memo;
  return {f.universe(), detail::nnf(f.universe(), f.id(), true, memo)};
}

/// NNF negation of `f` (De Morgan pushed down to the literals).
inline Formula negate(const Formula &f) {
  std::unordered_map<std::uint64_t, NodeId> memo;
  return {f.universe(), detail::nnf(f.universe(), f.id(), false, memo)};
}

/// Whether `f` contains no Not nodes.
inline bool is_nnf(const Formula &f) {
  for (NodeId id : detail::topological(f.universe(), f.id()))
    if (f.universe().store().node(id).kind == Kind::Not)
      return false;
  return true;
}

// -----------------------------------------------------------------------------
// Printing
// -----------------------------------------------------------------------------

inline std::string to_string(Literal l, const Universe &u) {
  return (l.positive() ? "" : "~") + u.name(l.var());
}

/// Comma-separated literals, e.g. `e,~f,g`. The empty term prints as `true`.
inline std::string to_string(const Term &t, const Universe &u) {
  if (t.empty())
    return "true";
  std::string s;
  for (Literal l : t) {
    if (!s.empty())
      s += ',';
    s += to_string(l, u);
  }
  return s;
}

inline std::string to_string(const Clause &c, const Universe &u) {
  if (c.empty())
    return "false";
  std::string s;
  for (Literal l : c) {
    if (!s.empty())
      s += " | ";
    s += to_string(l, u);
  }
  return s;
}

namespace detail {

inline int precedence(Kind k) {
  switch (k) {
  case Kind::Or:
    return 1;
  case Kind::And:
    return 2;
  case Kind::Not:
    return 3;
  default:
    return 4;
  }
}

inline void print(const Universe &u, NodeId id, std::string &out) {
  const FormulaNode &n = u.store().node(id);
  switch (n.kind) {
  case Kind::False:
    out += "false";
    return;
  case Kind::True:
    out += "true";
    return;
  case Kind::Literal:
    out += to_string(n.lit, u);
    return;
  case Kind::Not: {
    out += '~';
    const FormulaNode &c = u.store().node(n.kids.front());
    const bool paren = precedence(c.kind) < precedence(Kind::Not);
    if (paren)
      out += '(';
    print(u, n.kids.front(), out);
    if (paren)
      out += ')';
    return;
  }
  case Kind::And:
  case Kind::Or: {
    const char *sep = n.kind == Kind::And ? " & " : " | ";
    bool first = true;
    for (NodeId c : n.kids) {
      if (!first)
        out += sep;
      first = false;
      const bool paren = precedence(u.store().node(c).kind) <= precedence(n.kind);
      if (paren)
        out += '(';
      print(u, c, out);
      if (paren)
        out += ')';
    }
    return;
  }
  }
}

} // namespace detail

/// Infix rendering parseable by io::parse_formula.
inline std::string to_string(const Formula &f) {
  std::string out;
  detail::print(f.universe(), f.id(), out);
  return out;
}

} // namespace qlit
