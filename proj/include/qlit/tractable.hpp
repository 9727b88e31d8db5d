/// @file  tractable.hpp
/// @brief Linear-time literal quantification on Decision-DNNF and SDD circuits.
///
/// Existential quantification replaces ℓ by ⊤. Universal quantification
/// first shifts each or-node into a conjunction whose disjunctions share no
/// variables, after which replacing ℓ̄ by ⊥ is sound. Outputs are plain
/// Circuits, so an output can never be fed back into a routine that needs a
/// verified Decision-DNNF or SDD.

#pragma once

#include <span>
#include <vector>

#include "circuit.hpp"
#include "normal_form.hpp"

namespace qlit {

namespace detail {

/// Per-literal replacement: -1 keep, 0 ⊥, 1 ⊤.
class LiteralSubst {
public:
  LiteralSubst(const Universe &u, std::span<const Literal> lits, bool value)
      : _map(2 * u.size(), -1) {
    for (Literal l : lits) {
      u.check(l);
      _map[l.code()] = value ? 1 : 0;
    }
  }

  /// Replace the complements of `lits`.
  static LiteralSubst complements(const Universe &u, std::span<const Literal> lits, bool value) {
    std::vector<Literal> neg;
    for (Literal l : lits)
      neg.push_back(~l);
    return LiteralSubst(u, neg, value);
  }

  std::uint32_t apply(CircuitBuilder &b, Literal l) const {
    const int v = _map[l.code()];
    return v < 0 ? b.literal(l) : b.constant(v == 1);
  }

private:
  std::vector<signed char> _map;
};

/// One folding pass with literal replacement; structure otherwise kept.
inline Circuit substitute(const Circuit &c, const LiteralSubst &subst, Annotation out) {
  CircuitBuilder b(c.universe());
  b.reserve(c.size(), c.edge_count());
  std::vector<std::uint32_t> map(c.size());
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    switch (n.kind) {
    case Kind::False:
      map[i] = b.constant(false);
      break;
    case Kind::True:
      map[i] = b.constant(true);
      break;
    case Kind::Literal:
      map[i] = subst.apply(b, n.lit);
      break;
    default: {
      std::vector<std::uint32_t> kids;
      kids.reserve(n.count);
      for (auto k : c.children(i))
        kids.push_back(map[k]);
      map[i] = n.kind == Kind::And ? b.conjoin(std::move(kids)) : b.disjoin(std::move(kids));
    }
    }
  }
  return std::move(b).finish(map.back(), out);
}

inline Circuit ddnnf_shift_impl(const Circuit &c, const LiteralSubst &subst) {
  CircuitBuilder b(c.universe());
  // A decision node becomes up to five nodes.
  b.reserve(2 * c.size(), 2 * c.edge_count());
  std::vector<std::uint32_t> map(c.size());
  auto mapped = [&](const std::vector<std::uint32_t> &ids) {
    std::vector<std::uint32_t> out;
    out.reserve(ids.size());
    for (auto k : ids)
      out.push_back(map[k]);
    return out;
  };
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    switch (n.kind) {
    case Kind::False:
      map[i] = b.constant(false);
      break;
    case Kind::True:
      map[i] = b.constant(true);
      break;
    case Kind::Literal:
      map[i] = subst.apply(b, n.lit);
      break;
    case Kind::And: {
      const auto kids = c.children(i);
      map[i] = b.conjoin(mapped({kids.begin(), kids.end()}));
      break;
    }
    default: {
      // (l ∧ α) ∨ (l̄ ∧ β)  ↦  (l ∨ β) ∧ (l̄ ∨ α)
      const DecisionSplit s = *decision_split(c, i);
      const std::uint32_t alpha = b.conjoin(mapped(s.alpha));
      const std::uint32_t beta = b.conjoin(mapped(s.beta));
      const std::uint32_t left = b.disjoin({subst.apply(b, s.lit), beta});
      const std::uint32_t right = b.disjoin({subst.apply(b, ~s.lit), alpha});
      map[i] = b.conjoin({left, right});
    }
    }
  }
  return std::move(b).finish(map.back(), Annotation::Nnf);
}

inline Circuit sdd_shift_impl(const Circuit &c, const LiteralSubst &subst) {
  CircuitBuilder b(c.universe());
  std::vector<std::uint32_t> map(c.size());
  // Dual copies are made on demand, so only primes pay for negation.
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dual(c.size(), kUnset);
  auto negated = [&](std::uint32_t root) {
    std::vector<std::pair<std::uint32_t, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [i, expanded] = stack.back();
      stack.pop_back();
      if (dual[i] != kUnset)
        continue;
      const CircuitNode &n = c.node(i);
      if (!expanded && n.count > 0) {
        stack.emplace_back(i, true);
        for (auto k : c.children(i))
          if (dual[k] == kUnset)
            stack.emplace_back(k, false);
        continue;
      }
      switch (n.kind) {
      case Kind::False:
        dual[i] = b.constant(true);
        break;
      case Kind::True:
        dual[i] = b.constant(false);
        break;
      case Kind::Literal:
        dual[i] = subst.apply(b, ~n.lit);
        break;
      default: {
        std::vector<std::uint32_t> kids;
        for (auto k : c.children(i))
          kids.push_back(dual[k]);
        dual[i] = n.kind == Kind::And ? b.disjoin(std::move(kids)) : b.conjoin(std::move(kids));
      }
      }
    }
    return dual[root];
  };
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    const CircuitNode &n = c.node(i);
    switch (n.kind) {
    case Kind::False:
      map[i] = b.constant(false);
      break;
    case Kind::True:
      map[i] = b.constant(true);
      break;
    case Kind::Literal:
      map[i] = subst.apply(b, n.lit);
      break;
    case Kind::And: {
      // Elements are rebuilt by their partition node; this copy only matters
      // if the circuit root is itself an element, which verification forbids.
      std::vector<std::uint32_t> kids;
      for (auto k : c.children(i))
        kids.push_back(map[k]);
      map[i] = b.conjoin(std::move(kids));
      break;
    }
    default: {
      // (p₁ ∧ s₁) ∨ … ∨ (pₙ ∧ sₙ)  ↦  (¬p₁ ∨ s₁) ∧ … ∧ (¬pₙ ∨ sₙ)
      std::vector<std::uint32_t> conj;
      for (auto e : c.children(i)) {
        const auto ps = c.children(e);
        conj.push_back(b.disjoin({negated(ps[0]), map[ps[1]]}));
      }
      map[i] = b.conjoin(std::move(conj));
    }
    }
  }
  return std::move(b).finish(map.back(), Annotation::Nnf);
}

} // namespace detail

/// ∃lits·Δ on a Decision-DNNF: replace each literal by ⊤. The result is a
/// DNNF with no more nodes than the input.
inline Circuit ddnnf_exists(const DecisionDnnf &d, std::span<const Literal> lits) {
  const Circuit &c = d.circuit();
  return detail::substitute(c, detail::LiteralSubst(c.universe(), lits, true), Annotation::Dnnf);
}

/// The Decision-DNNF with each (ℓ∧α)∨(ℓ̄∧β) rewritten as (ℓ∨β)∧(ℓ̄∨α).
/// Equivalent to the input, and no disjunction has disjuncts sharing a
/// variable.
inline Circuit ddnnf_shift(const DecisionDnnf &d) {
  const Circuit &c = d.circuit();
  return detail::ddnnf_shift_impl(c, detail::LiteralSubst(c.universe(), {}, false));
}

/// ∀lits·Δ on a Decision-DNNF: shift, then replace each complement ℓ̄ by ⊥.
/// Both steps happen in a single pass.
inline Circuit ddnnf_forall(const DecisionDnnf &d, std::span<const Literal> lits) {
  const Circuit &c = d.circuit();
  return detail::ddnnf_shift_impl(c, detail::LiteralSubst::complements(c.universe(), lits, false));
}

/// ∃lits·Δ on an SDD: replace each literal by ⊤.
inline Circuit sdd_exists(const Sdd &d, std::span<const Literal> lits) {
  const Circuit &c = d.circuit();
  return detail::substitute(c, detail::LiteralSubst(c.universe(), lits, true), Annotation::Dnnf);
}

/// The SDD with each partition rewritten as ⋀(¬pᵢ ∨ sᵢ), negating primes by
/// the dual construction.
inline Circuit sdd_shift(const Sdd &d) {
  const Circuit &c = d.circuit();
  return detail::sdd_shift_impl(c, detail::LiteralSubst(c.universe(), {}, false));
}

/// ∀lits·Δ on an SDD: shift, then replace each complement ℓ̄ by ⊥.
inline Circuit sdd_forall(const Sdd &d, std::span<const Literal> lits) {
  const Circuit &c = d.circuit();
  return detail::sdd_shift_impl(c, detail::LiteralSubst::complements(c.universe(), lits, false));
}

/// Whether every or-node's children mention pairwise disjoint variables.
inline bool has_disjoint_disjuncts(const Circuit &c) {
  const auto vars = node_variables(c);
  std::vector<std::uint32_t> stamp(c.universe().size(), 0);
  for (std::uint32_t i = 0; i < c.size(); ++i) {
    if (c.node(i).kind != Kind::Or)
      continue;
    for (auto k : c.children(i))
      for (VarId v : vars[k]) {
        if (stamp[v] == i + 1)
          return false;
        stamp[v] = i + 1;
      }
  }
  return true;
}

} // namespace qlit
