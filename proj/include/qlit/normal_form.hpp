/// @file  normal_form.hpp
/// @brief CNF / DNF containers, resolution and consensus closure, linear-time
///        literal quantification on clausal forms, and prime implicants /
///        implicates.

#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "truth_table.hpp"

namespace qlit {

namespace detail {

struct LitVecHash {
  template <class S> std::size_t operator()(const S &s) const noexcept {
    std::size_t h = s.size();
    for (Literal l : s)
      h ^= l.code() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

/// Order-preserving removal of duplicates; expected linear time. Uses an
/// open-addressing table of indices with cached hashes, so no item is copied
/// and nothing is allocated per item.
template <class S> void dedupe(std::vector<S> &items) {
  const std::size_t n = items.size();
  if (n < 2)
    return;
  std::vector<std::size_t> hash(n);
  for (std::size_t i = 0; i < n; ++i)
    hash[i] = LitVecHash{}(items[i]);
  std::size_t cap = 4;
  while (cap < 2 * n)
    cap <<= 1;
  constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> table(cap, kEmpty);
  std::vector<char> keep(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t slot = (hash[i] * 0x9e3779b97f4a7c15ull) >> 7 & (cap - 1);
    for (;; slot = (slot + 1) & (cap - 1)) {
      const std::uint32_t j = table[slot];
      if (j == kEmpty) {
        table[slot] = static_cast<std::uint32_t>(i);
        keep[i] = 1;
        break;
      }
      if (hash[j] == hash[i] && items[j] == items[i])
        break;
    }
  }
  std::size_t out = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) {
      if (out != i)
        items[out] = std::move(items[i]);
      ++out;
    }
  items.resize(out);
}

} // namespace detail

/// Conjunction of clauses over a universe. No clause is valid (the Clause
/// type rejects complementary pairs); duplicates are removed. The empty CNF
/// is ⊤, and a CNF containing the empty clause is ⊥ and is stored as exactly
/// that one clause.
class Cnf {
public:
  explicit Cnf(Universe u, std::vector<Clause> clauses = {})
      : _u(std::move(u)), _clauses(std::move(clauses)) {
    normalize();
  }

  static Cnf bottom(const Universe &u) { return Cnf(u, {Clause{}}); }

  const Universe &universe() const noexcept { return _u; }
  const std::vector<Clause> &clauses() const noexcept { return _clauses; }
  std::size_t size() const noexcept { return _clauses.size(); }
  bool is_true() const noexcept { return _clauses.empty(); }
  bool is_false() const noexcept { return _clauses.size() == 1 && _clauses[0].empty(); }

  /// Total number of literal occurrences.
  std::size_t literal_count() const noexcept {
    std::size_t n = 0;
    for (const auto &c : _clauses)
      n += c.size();
    return n;
  }

  /// Same clauses in canonical order.
  Cnf sorted() const {
    Cnf c = *this;
    std::sort(c._clauses.begin(), c._clauses.end());
    return c;
  }

  /// `t ⊨ this`: every clause shares a literal with the term.
  bool entailed_by(const Term &t) const {
    for (const auto &c : _clauses)
      if (std::none_of(c.begin(), c.end(), [&](Literal l) { return t.contains(l); }))
        return false;
    return true;
  }

  /// Whether literals `x` and `x̄` never both occur.
  bool monotone() const {
    std::vector<std::uint8_t> seen(_u.size(), 0);
    for (const auto &c : _clauses)
      for (Literal l : c) {
        seen[l.var()] |= l.positive() ? 1 : 2;
        if (seen[l.var()] == 3)
          return false;
      }
    return true;
  }

  Formula to_formula() const {
    std::vector<Formula> parts;
    parts.reserve(_clauses.size());
    for (const auto &c : _clauses)
      parts.push_back(Formula::clause(_u, c));
    return Formula::conjoin(_u, parts);
  }

  bool operator==(const Cnf &o) const {
    return _u == o._u && sorted()._clauses == o.sorted()._clauses;
  }

private:
  void normalize() {
    for (const auto &c : _clauses) {
      for (Literal l : c)
        _u.check(l);
      if (c.empty()) {
        _clauses.assign(1, Clause{});
        return;
      }
    }
    detail::dedupe(_clauses);
  }

  Universe _u;
  std::vector<Clause> _clauses;
};

/// Disjunction of terms. The empty DNF is ⊥; a DNF containing the empty term
/// is ⊤ and is stored as exactly that one term.
class Dnf {
public:
  explicit Dnf(Universe u, std::vector<Term> terms = {})
      : _u(std::move(u)), _terms(std::move(terms)) {
    normalize();
  }

  static Dnf top(const Universe &u) { return Dnf(u, {Term{}}); }

  const Universe &universe() const noexcept { return _u; }
  const std::vector<Term> &terms() const noexcept { return _terms; }
  std::size_t size() const noexcept { return _terms.size(); }
  bool is_false() const noexcept { return _terms.empty(); }
  bool is_true() const noexcept { return _terms.size() == 1 && _terms[0].empty(); }

  std::size_t literal_count() const noexcept {
    std::size_t n = 0;
    for (const auto &t : _terms)
      n += t.size();
    return n;
  }

  Dnf sorted() const {
    Dnf d = *this;
    std::sort(d._terms.begin(), d._terms.end());
    return d;
  }

  Formula to_formula() const {
    std::vector<Formula> parts;
    parts.reserve(_terms.size());
    for (const auto &t : _terms)
      parts.push_back(Formula::term(_u, t));
    return Formula::disjoin(_u, parts);
  }

  bool operator==(const Dnf &o) const {
    return _u == o._u && sorted()._terms == o.sorted()._terms;
  }

private:
  void normalize() {
    for (const auto &t : _terms) {
      for (Literal l : t)
        _u.check(l);
      if (t.empty()) {
        _terms.assign(1, Term{});
        return;
      }
    }
    detail::dedupe(_terms);
  }

  Universe _u;
  std::vector<Term> _terms;
};

inline TruthTable truth_table(const Cnf &d, std::size_t cap = default_enum_cap()) {
  check_cap(d.universe().size(), cap);
  TruthTable t(d.universe().size(), true);
  for (const auto &c : d.clauses())
    t &= truth_table(c, d.universe().size());
  return t;
}

inline TruthTable truth_table(const Dnf &d, std::size_t cap = default_enum_cap()) {
  check_cap(d.universe().size(), cap);
  TruthTable t(d.universe().size(), false);
  for (const auto &g : d.terms())
    t |= truth_table(g, d.universe().size());
  return t;
}

// -----------------------------------------------------------------------------
// Resolution and consensus
// -----------------------------------------------------------------------------

namespace detail {

/// (a ∖ {p}) ∪ (b ∖ {~p}) unless the result has a complementary pair.
inline std::optional<std::vector<Literal>> combine(const std::vector<Literal> &a,
                                                   const std::vector<Literal> &b, Literal p) {
  std::vector<Literal> out;
  out.reserve(a.size() + b.size());
  for (Literal l : a)
    if (l != p)
      out.push_back(l);
  for (Literal l : b)
    if (l != ~p)
      out.push_back(l);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].var() == out[i - 1].var())
      return std::nullopt;
  return out;
}

template <class S> bool subsumed_by_any(const S &s, const std::vector<S> &pool) {
  return std::any_of(pool.begin(), pool.end(), [&](const S &p) { return p.subset_of(s); });
}

} // namespace detail

enum class CloseMode { Resolution, Consensus };

/// All X-resolvents of a CNF (each clause with x against each with x̄).
inline std::vector<Clause> resolvents(const Cnf &d, Variable x) {
  std::vector<const Clause *> pos, neg;
  for (const auto &c : d.clauses()) {
    if (c.contains(Literal{x, true}))
      pos.push_back(&c);
    else if (c.contains(Literal{x, false}))
      neg.push_back(&c);
  }
  std::vector<Clause> out;
  for (const Clause *a : pos)
    for (const Clause *b : neg)
      if (auto r = detail::combine(a->literals(), b->literals(), Literal{x, true}))
        out.emplace_back(std::move(*r));
  return out;
}

/// All X-consensus terms of a DNF.
inline std::vector<Term> consensus_terms(const Dnf &d, Variable x) {
  std::vector<const Term *> pos, neg;
  for (const auto &t : d.terms()) {
    if (t.contains(Literal{x, true}))
      pos.push_back(&t);
    else if (t.contains(Literal{x, false}))
      neg.push_back(&t);
  }
  std::vector<Term> out;
  for (const Term *a : pos)
    for (const Term *b : neg)
      if (auto r = detail::combine(a->literals(), b->literals(), Literal{x, true}))
        out.emplace_back(std::move(*r));
  return out;
}

/// Add every X-resolvent. Resolvents on X do not mention X, so a single round
/// reaches the fixpoint.
inline Cnf close_under(const Cnf &d, Variable x) {
  d.universe().check(x);
  std::vector<Clause> clauses = d.clauses();
  for (auto &r : resolvents(d, x))
    clauses.push_back(std::move(r));
  return Cnf(d.universe(), std::move(clauses));
}

/// Add every X-consensus term.
inline Dnf close_under(const Dnf &d, Variable x) {
  d.universe().check(x);
  std::vector<Term> terms = d.terms();
  for (auto &r : consensus_terms(d, x))
    terms.push_back(std::move(r));
  return Dnf(d.universe(), std::move(terms));
}

/// Every X-resolvent is in the CNF or subsumed by one of its clauses.
inline bool is_closed(const Cnf &d, Variable x) {
  for (const auto &r : resolvents(d, x))
    if (!detail::subsumed_by_any(r, d.clauses()))
      return false;
  return true;
}

/// Every X-consensus term is in the DNF or subsumed by one of its terms.
inline bool is_closed(const Dnf &d, Variable x) {
  for (const auto &r : consensus_terms(d, x))
    if (!detail::subsumed_by_any(r, d.terms()))
      return false;
  return true;
}

/// How the resolution/consensus precondition of the drop-clause rules is met.
enum class ClosurePolicy {
  Verify, ///< check closure and throw PreconditionError when it fails
  Close   ///< compute the closure first
};

// -----------------------------------------------------------------------------
// Linear-time literal quantification
// -----------------------------------------------------------------------------

/// ∀l·Δ for a CNF: drop l̄ from every clause. Linear in the literal count.
inline Cnf cnf_forall_literal(const Cnf &d, Literal l) {
  d.universe().check(l);
  std::vector<Clause> out;
  out.reserve(d.size());
  for (const auto &c : d.clauses()) {
    if (!c.contains(~l)) {
      out.push_back(c);
      continue;
    }
    Clause r = c.without(~l);
    if (r.empty())
      return Cnf::bottom(d.universe());
    out.push_back(std::move(r));
  }
  return Cnf(d.universe(), std::move(out));
}

/// ∃l·Δ for a CNF closed under resolution on l's variable: drop every clause
/// containing l.
inline Cnf cnf_exists_literal(const Cnf &d, Literal l, ClosurePolicy policy = ClosurePolicy::Verify) {
  d.universe().check(l);
  const Cnf *src = &d;
  Cnf closed(d.universe());
  if (policy == ClosurePolicy::Close) {
    closed = close_under(d, l.variable());
    src = &closed;
  } else if (!is_closed(d, l.variable())) {
    throw PreconditionError("CNF is not closed under resolution on variable " +
                            d.universe().name(l.var()));
  }
  std::vector<Clause> out;
  for (const auto &c : src->clauses())
    if (!c.contains(l))
      out.push_back(c);
  return Cnf(d.universe(), std::move(out));
}

/// ∃l·Δ for a DNF: drop l from every term. Linear in the literal count.
inline Dnf dnf_exists_literal(const Dnf &d, Literal l) {
  d.universe().check(l);
  std::vector<Term> out;
  out.reserve(d.size());
  for (const auto &t : d.terms()) {
    if (!t.contains(l)) {
      out.push_back(t);
      continue;
    }
    Term r = t.without(l);
    if (r.empty())
      return Dnf::top(d.universe());
    out.push_back(std::move(r));
  }
  return Dnf(d.universe(), std::move(out));
}

/// ∀l·Δ for a DNF closed under consensus on l's variable: drop every term
/// containing l̄.
inline Dnf dnf_forall_literal(const Dnf &d, Literal l, ClosurePolicy policy = ClosurePolicy::Verify) {
  d.universe().check(l);
  const Dnf *src = &d;
  Dnf closed(d.universe());
  if (policy == ClosurePolicy::Close) {
    closed = close_under(d, l.variable());
    src = &closed;
  } else if (!is_closed(d, l.variable())) {
    throw PreconditionError("DNF is not closed under consensus on variable " +
                            d.universe().name(l.var()));
  }
  std::vector<Term> out;
  for (const auto &t : src->terms())
    if (!t.contains(~l))
      out.push_back(t);
  return Dnf(d.universe(), std::move(out));
}

namespace detail {

/// Keep the literals of each set that are not marked; one pass over `sets`.
/// Returns nullopt as soon as a set becomes empty.
template <class S>
std::optional<std::vector<S>> drop_marked(const std::vector<S> &sets,
                                          const std::vector<std::uint8_t> &marked) {
  std::vector<S> out;
  out.reserve(sets.size());
  std::vector<Literal> kept;
  for (const auto &s : sets) {
    kept.clear();
    for (Literal l : s)
      if (!marked[l.code()])
        kept.push_back(l);
    if (kept.empty())
      return std::nullopt;
    out.emplace_back(kept.size() == s.size() ? s : S(kept));
  }
  return out;
}

inline std::vector<std::uint8_t> literal_marks(const Universe &u, std::span<const Literal> lits,
                                               bool complement) {
  std::vector<std::uint8_t> marked(2 * u.size(), 0);
  for (Literal l : lits) {
    u.check(l);
    marked[(complement ? ~l : l).code()] = 1;
  }
  return marked;
}

} // namespace detail

/// ∀lits·Δ for a CNF in a single pass: drop every complement of a
/// quantified literal from every clause.
inline Cnf cnf_forall(const Cnf &d, std::span<const Literal> lits) {
  auto out = detail::drop_marked(d.clauses(), detail::literal_marks(d.universe(), lits, true));
  return out ? Cnf(d.universe(), std::move(*out)) : Cnf::bottom(d.universe());
}

/// ∃lits·Δ for a DNF in a single pass: drop every quantified literal from
/// every term.
inline Dnf dnf_exists(const Dnf &d, std::span<const Literal> lits) {
  auto out = detail::drop_marked(d.terms(), detail::literal_marks(d.universe(), lits, false));
  return out ? Dnf(d.universe(), std::move(*out)) : Dnf::top(d.universe());
}

// -----------------------------------------------------------------------------
// Prime implicants / implicates
// -----------------------------------------------------------------------------

inline constexpr std::size_t kPrimeCap = 16;

namespace detail {

template <class S> std::vector<S> remove_subsumed(std::vector<S> items) {
  std::sort(items.begin(), items.end(), [](const S &a, const S &b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<S> kept;
  for (auto &s : items)
    if (!subsumed_by_any(s, kept))
      kept.push_back(std::move(s));
  std::sort(kept.begin(), kept.end());
  return kept;
}

/// Iterated resolution (clauses) or consensus (terms) over all variables,
/// with subsumption removal, to a fixpoint.
template <class S> std::vector<S> blake_closure(std::vector<S> items) {
  items = remove_subsumed(std::move(items));
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t n = items.size();
    std::vector<S> fresh;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        // Exactly one clashing variable is required for a non-trivial result.
        std::optional<Literal> pivot;
        int clashes = 0;
        for (Literal l : items[i])
          if (items[j].contains(~l)) {
            pivot = l;
            ++clashes;
          }
        if (clashes != 1)
          continue;
        auto r = combine(items[i].literals(), items[j].literals(), *pivot);
        if (!r)
          continue;
        S s(std::move(*r));
        if (!subsumed_by_any(s, items) && !subsumed_by_any(s, fresh))
          fresh.push_back(std::move(s));
      }
    if (!fresh.empty()) {
      changed = true;
      for (auto &s : fresh)
        items.push_back(std::move(s));
      items = remove_subsumed(std::move(items));
    }
  }
  return items;
}

/// Prime implicants of a truth table by recursive Shannon splitting:
/// PI(f) = PI(f0 ∧ f1) ∪ {x̄·p : p ∈ PI(f0), p ⊭ f1} ∪ {x·p : p ∈ PI(f1), p ⊭ f0}.
/// Tables are kept over all n variables; variables below `k` are already
/// eliminated (the table does not depend on them).
class PrimeSplitter {
public:
  explicit PrimeSplitter(std::size_t n) : _n(n) {}

  std::vector<Term> run(const TruthTable &f, VarId k) {
    if (f.none())
      return {};
    if (f.all())
      return {Term{}};
    // Skip variables the function does not depend on.
    while (k < _n && f.flipped(k) == f)
      ++k;
    const Key key{k, f.words()};
    if (auto it = _memo.find(key); it != _memo.end())
      return it->second;
    const TruthTable pos = TruthTable::literal(_n, Literal::pos(k));
    const TruthTable f1 = (f & pos) | (f & pos).flipped(k);
    const TruthTable f0 = (f - pos) | (f - pos).flipped(k);
    std::vector<Term> out = run(f0 & f1, k + 1);
    for (const Term &p : run(f0, k + 1))
      if (!truth_table(p, _n).subset_of(f1))
        out.push_back(p.with(Literal::neg(k)));
    for (const Term &p : run(f1, k + 1))
      if (!truth_table(p, _n).subset_of(f0))
        out.push_back(p.with(Literal::pos(k)));
    std::sort(out.begin(), out.end());
    _memo.emplace(key, out);
    return out;
  }

private:
  struct Key {
    VarId k;
    std::vector<std::uint64_t> words;
    bool operator==(const Key &) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key &key) const noexcept {
      std::size_t h = key.k;
      for (auto w : key.words)
        h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h;
    }
  };

  std::size_t _n;
  std::unordered_map<Key, std::vector<Term>, KeyHash> _memo;
};

inline void check_prime_cap(const Universe &u, std::size_t cap) {
  if (u.size() > cap)
    throw CapacityError("prime form computation over " + std::to_string(u.size()) + " variables",
                        cap);
}

} // namespace detail

/// Prime implicants of the function given by a truth table over `u`.
inline Dnf prime_implicants(const Universe &u, const TruthTable &t, std::size_t cap = kPrimeCap) {
  detail::check_prime_cap(u, cap);
  detail::PrimeSplitter split(u.size());
  auto terms = split.run(t, 0);
  std::sort(terms.begin(), terms.end());
  return Dnf(u, std::move(terms));
}

inline Dnf prime_implicants(const Formula &f, std::size_t cap = kPrimeCap) {
  detail::check_prime_cap(f.universe(), cap);
  return prime_implicants(f.universe(), truth_table(f), cap);
}

/// Prime implicates of `f`: complements of the prime implicants of ¬f.
inline Cnf prime_implicates(const Universe &u, const TruthTable &t, std::size_t cap = kPrimeCap) {
  const Dnf neg = prime_implicants(u, ~t, cap);
  std::vector<Clause> clauses;
  for (const Term &g : neg.terms()) {
    std::vector<Literal> lits;
    for (Literal l : g)
      lits.push_back(~l);
    clauses.emplace_back(std::move(lits));
  }
  std::sort(clauses.begin(), clauses.end());
  return Cnf(u, std::move(clauses));
}

inline Cnf prime_implicates(const Formula &f, std::size_t cap = kPrimeCap) {
  detail::check_prime_cap(f.universe(), cap);
  return prime_implicates(f.universe(), truth_table(f), cap);
}

/// Prime implicates of a CNF by iterated resolution and subsumption removal.
inline Cnf prime_implicates(const Cnf &d, std::size_t cap = kPrimeCap) {
  detail::check_prime_cap(d.universe(), cap);
  if (d.is_false())
    return d;
  return Cnf(d.universe(), detail::blake_closure(d.clauses()));
}

/// Prime implicants of a DNF by iterated consensus and subsumption removal.
inline Dnf prime_implicants(const Dnf &d, std::size_t cap = kPrimeCap) {
  detail::check_prime_cap(d.universe(), cap);
  if (d.is_true())
    return d;
  return Dnf(d.universe(), detail::blake_closure(d.terms()));
}

inline Dnf prime_implicants(const Cnf &d, std::size_t cap = kPrimeCap) {
  detail::check_prime_cap(d.universe(), cap);
  return prime_implicants(d.universe(), truth_table(d), cap);
}

inline Cnf prime_implicates(const Dnf &d, std::size_t cap = kPrimeCap) {
  detail::check_prime_cap(d.universe(), cap);
  return prime_implicates(d.universe(), truth_table(d), cap);
}

} // namespace qlit
