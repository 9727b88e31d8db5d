/// @file  random.hpp
/// @brief Seeded generators of formulas, clausal forms and
///        compiled circuits for property tests and size ladders.
///
/// All choices go through `pick(rng, n) = rng() % n` on a std::mt19937_64 so
/// a seed yields the same objects on every platform (the standard
/// distributions are implementation defined).

#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "circuit.hpp"
#include "normal_form.hpp"

namespace qlit {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng &rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
inline bool coin(Rng &rng) { return (rng() & 1u) != 0; }

inline Literal random_literal(const Universe &u, Rng &rng) {
  return {Variable{static_cast<VarId>(pick(rng, u.size()))}, coin(rng)};
}

/// Random expression DAG with negations, of depth at most `depth`.
inline Formula random_formula(const Universe &u, Rng &rng, int depth = 4) {
  if (depth <= 0 || pick(rng, 6) == 0) {
    if (pick(rng, 25) == 0)
      return Formula::constant(u, coin(rng));
    return Formula::literal(u, random_literal(u, rng));
  }
  switch (pick(rng, 5)) {
  case 0:
    return ~random_formula(u, rng, depth - 1);
  case 1:
  case 2: {
    std::vector<Formula> kids;
    for (std::size_t i = 0, k = 2 + pick(rng, 2); i < k; ++i)
      kids.push_back(random_formula(u, rng, depth - 1));
    return Formula::conjoin(u, kids);
  }
  default: {
    std::vector<Formula> kids;
    for (std::size_t i = 0, k = 2 + pick(rng, 2); i < k; ++i)
      kids.push_back(random_formula(u, rng, depth - 1));
    return Formula::disjoin(u, kids);
  }
  }
}

/// Random consistent term of length at most `max_len` (at least 1 when the
/// universe is nonempty).
inline Term random_term(const Universe &u, Rng &rng, std::size_t max_len) {
  std::vector<VarId> vars(u.size());
  for (std::size_t i = 0; i < vars.size(); ++i)
    vars[i] = static_cast<VarId>(i);
  for (std::size_t i = vars.size(); i > 1; --i)
    std::swap(vars[i - 1], vars[pick(rng, i)]);
  const std::size_t len = 1 + pick(rng, std::max<std::size_t>(1, std::min(max_len, vars.size())));
  std::vector<Literal> lits;
  for (std::size_t i = 0; i < len && i < vars.size(); ++i)
    lits.push_back({Variable{vars[i]}, coin(rng)});
  return Term(std::move(lits));
}

inline Clause random_clause(const Universe &u, Rng &rng, std::size_t max_len) {
  const Term t = random_term(u, rng, max_len);
  return Clause(t.literals());
}

inline Cnf random_cnf(const Universe &u, Rng &rng, std::size_t clauses, std::size_t width) {
  std::vector<Clause> cs;
  for (std::size_t i = 0; i < clauses; ++i)
    cs.push_back(random_clause(u, rng, width));
  return Cnf(u, std::move(cs));
}

inline Dnf random_dnf(const Universe &u, Rng &rng, std::size_t terms, std::size_t width) {
  std::vector<Term> ts;
  for (std::size_t i = 0; i < terms; ++i)
    ts.push_back(random_term(u, rng, width));
  return Dnf(u, std::move(ts));
}

// -----------------------------------------------------------------------------
// Compiled circuits
// -----------------------------------------------------------------------------

namespace detail {

/// Cofactor of a truth table, kept over all of its variables.
inline TruthTable cofactor(const TruthTable &t, Literal l) {
  const TruthTable half = t & TruthTable::literal(t.num_vars(), l);
  return half | half.flipped(l.var());
}

/// Shannon expansion (x ∧ f|x) ∨ (x̄ ∧ f|x̄) of a table over local variables
/// 0..m-1, emitted over the global variables `globals[i]`. Branches are
/// two-child conjunctions and equal subfunctions are shared.
class ShannonCompiler {
public:
  ShannonCompiler(CircuitBuilder &b, std::vector<VarId> globals)
      : _b(b), _globals(std::move(globals)) {}

  std::uint32_t compile(const TruthTable &t, VarId level = 0) {
    if (t.none())
      return _b.constant(false);
    if (t.all())
      return _b.constant(true);
    while (level < _globals.size() && t.flipped(level) == t)
      ++level;
    auto key = std::make_pair(level, t.words());
    if (auto it = _memo.find(key); it != _memo.end())
      return it->second;
    const Literal local = Literal::pos(level);
    const std::uint32_t hi = compile(cofactor(t, local), level + 1);
    const std::uint32_t lo = compile(cofactor(t, ~local), level + 1);
    const Literal x = Literal::pos(_globals.at(level));
    const std::uint32_t a = _b.conjoin({_b.literal(x), hi});
    const std::uint32_t c = _b.conjoin({_b.literal(~x), lo});
    const std::uint32_t out = _b.disjoin({a, c}, x.var());
    _memo.emplace(std::move(key), out);
    return out;
  }

private:
  CircuitBuilder &_b;
  std::vector<VarId> _globals;
  std::map<std::pair<VarId, std::vector<std::uint64_t>>, std::uint32_t> _memo;
};

/// Compile a table over the whole universe into an SDD by splitting `vars`
/// into a left half (primes) and a right half (subs), recursively.
class SddCompiler {
public:
  SddCompiler(CircuitBuilder &b, std::size_t n) : _b(b), _n(n) {}

  /// `t` must depend only on `vars`.
  std::uint32_t compile(const TruthTable &t, const std::vector<VarId> &vars) {
    if (t.none())
      return _b.constant(false);
    if (t.all())
      return _b.constant(true);
    if (vars.size() == 1) {
      const Literal pos = Literal::pos(vars[0]);
      return _b.literal(t.subset_of(TruthTable::literal(_n, pos)) ? pos : ~pos);
    }
    auto key = std::make_pair(vars, t.words());
    if (auto it = _memo.find(key); it != _memo.end())
      return it->second;
    const auto half = static_cast<std::ptrdiff_t>(vars.size() / 2);
    const std::vector<VarId> left(vars.begin(), vars.begin() + half);
    const std::vector<VarId> right(vars.begin() + half, vars.end());
    // Group the assignments of the left variables by the function they leave
    // over the right ones; each group becomes one (prime, sub) element.
    std::vector<std::pair<TruthTable, TruthTable>> groups; // (sub, prime)
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << left.size()); ++a) {
      TruthTable sub = t;
      TruthTable minterm(_n, true);
      for (std::size_t i = 0; i < left.size(); ++i) {
        const Literal l{Variable{left[i]}, ((a >> i) & 1u) != 0};
        sub = cofactor(sub, l);
        minterm &= TruthTable::literal(_n, l);
      }
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto &g) { return g.first == sub; });
      if (it == groups.end())
        groups.emplace_back(std::move(sub), std::move(minterm));
      else
        it->second |= minterm;
    }
    std::vector<std::uint32_t> elements;
    for (const auto &[sub, prime] : groups) {
      const std::uint32_t p = compile(prime, left);
      const std::uint32_t s = compile(sub, right);
      elements.push_back(_b.conjoin({p, s}));
    }
    const std::uint32_t out = _b.disjoin(std::move(elements));
    _memo.emplace(std::move(key), out);
    return out;
  }

private:
  CircuitBuilder &_b;
  std::size_t _n;
  std::map<std::pair<std::vector<VarId>, std::vector<std::uint64_t>>, std::uint32_t> _memo;
};

inline std::vector<VarId> shuffled_vars(std::size_t n, Rng &rng) {
  std::vector<VarId> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = static_cast<VarId>(i);
  for (std::size_t i = n; i > 1; --i)
    std::swap(v[i - 1], v[pick(rng, i)]);
  return v;
}

inline TruthTable random_table(std::size_t m, Rng &rng) {
  TruthTable t(m);
  for (std::uint64_t w = 0; w < t.num_worlds(); ++w)
    t.set(w, coin(rng));
  return t;
}

} // namespace detail

/// SDD of the function with table `t`, splitting `order` in halves.
inline Sdd compile_sdd(const Universe &u, const TruthTable &t, const std::vector<VarId> &order) {
  CircuitBuilder b(u, CircuitBuilder::Mode::Raw);
  detail::SddCompiler sc(b, u.size());
  std::uint32_t root = sc.compile(t, order);
  // A terminal root is wrapped in the trivial partition {(⊤, root)}.
  if (b.node(root).kind != Kind::Or) {
    const std::uint32_t top = b.constant(true);
    root = b.disjoin({b.conjoin({top, root})});
  }
  return Sdd::verify(std::move(b).finish(root, Annotation::Sdd));
}

/// Decision-DNNF of the function with table `t` (over the universe `u`),
/// deciding variables in `order`.
inline DecisionDnnf compile_ddnnf(const Universe &u, const TruthTable &t,
                                  const std::vector<VarId> &order) {
  // Re-index the table so that local variable i is order[i].
  TruthTable local(order.size());
  t.for_each([&](std::uint64_t w) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      idx |= ((w >> order[i]) & 1u) << i;
    local.set(idx);
  });
  CircuitBuilder b(u);
  detail::ShannonCompiler sc(b, order);
  const std::uint32_t root = sc.compile(local);
  return DecisionDnnf::verify(std::move(b).finish(root, Annotation::DecisionDnnf));
}

/// Decision-DNNF of a random function. The variables are dealt into up to
/// three blocks; each block gets its own random formula, compiled by Shannon
/// expansion, and the blocks are conjoined.
inline DecisionDnnf random_ddnnf(const Universe &u, Rng &rng, int depth = 4) {
  const std::size_t n = u.size();
  const auto vars = detail::shuffled_vars(n, rng);
  const std::size_t blocks = n == 0 ? 1 : 1 + pick(rng, std::min<std::size_t>(3, n));
  CircuitBuilder b(u);
  std::vector<std::uint32_t> parts;
  for (std::size_t k = 0; k < blocks; ++k) {
    std::vector<VarId> mine;
    for (std::size_t i = k; i < n; i += blocks)
      mine.push_back(vars[i]);
    if (mine.empty())
      continue;
    const Universe local(mine.size());
    detail::ShannonCompiler sc(b, mine);
    parts.push_back(sc.compile(truth_table(random_formula(local, rng, depth))));
  }
  const std::uint32_t root = parts.empty() ? b.constant(coin(rng)) : b.conjoin(std::move(parts));
  return DecisionDnnf::verify(std::move(b).finish(root, Annotation::DecisionDnnf));
}

/// SDD of a random formula, compiled along a balanced split of a random
/// variable order.
inline Sdd random_sdd(const Universe &u, Rng &rng, int depth = 4) {
  const Formula f = random_formula(u, rng, depth);
  return compile_sdd(u, truth_table(f), detail::shuffled_vars(u.size(), rng));
}

// -----------------------------------------------------------------------------
// Size ladders
// -----------------------------------------------------------------------------

/// Random 3-CNF with `literals` literal occurrences (rounded down to a
/// multiple of 3) over max(8, literals / 8) variables.
inline Cnf ladder_cnf(std::size_t literals, Rng &rng) {
  const Universe u(std::max<std::size_t>(8, literals / 8));
  std::vector<Clause> cs;
  cs.reserve(literals / 3);
  for (std::size_t used = 0; used + 3 <= literals; used += 3) {
    std::vector<Literal> lits;
    while (lits.size() < 3) {
      const Literal l = random_literal(u, rng);
      if (std::none_of(lits.begin(), lits.end(), [&](Literal m) { return m.var() == l.var(); }))
        lits.push_back(l);
    }
    cs.emplace_back(std::move(lits));
  }
  return Cnf(u, std::move(cs));
}

/// Decision-DNNF with roughly `nodes` nodes: a conjunction of independent
/// blocks, each a random function of 4 fresh variables.
inline DecisionDnnf ladder_ddnnf(std::size_t nodes, Rng &rng) {
  constexpr std::size_t kBlockVars = 4;
  // A block never has fewer than 5 nodes, which bounds the universe needed.
  const std::size_t max_blocks = nodes / 5 + 1;
  const Universe u(max_blocks * kBlockVars);
  CircuitBuilder b(u);
  std::vector<std::uint32_t> parts;
  for (std::size_t k = 0; k < max_blocks && b.size() < nodes; ++k) {
    std::vector<VarId> mine;
    for (std::size_t i = 0; i < kBlockVars; ++i)
      mine.push_back(static_cast<VarId>(k * kBlockVars + i));
    detail::ShannonCompiler sc(b, mine);
    TruthTable t = detail::random_table(kBlockVars, rng);
    // Constant blocks add nothing; redraw them.
    while (t.none() || t.all())
      t = detail::random_table(kBlockVars, rng);
    parts.push_back(sc.compile(t));
  }
  const std::uint32_t root = b.conjoin(std::move(parts));
  return DecisionDnnf::verify(std::move(b).finish(root, Annotation::DecisionDnnf));
}

} // namespace qlit
