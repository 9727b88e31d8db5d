/// @file  quantify.hpp
/// @brief Definitional literal and variable quantification on formulas
///
///   ∀ℓ·φ = (ℓ ∨ φ|ℓ̄) ∧ φ|ℓ        ∃ℓ·φ = φ|ℓ ∨ (ℓ̄ ∧ φ|ℓ̄)
///   ∀X·φ = φ|x ∧ φ|x̄              ∃X·φ = φ|x ∨ φ|x̄
///
/// Results are folded expression DAGs, equal to the quantified formula up to
/// logical equivalence.

#pragma once

#include <variant>
#include <vector>

#include "core.hpp"

namespace qlit {

enum class Quantifier { Forall, Exists };

inline Formula forall_literal(const Formula &f, Literal l) {
  const Universe &u = f.universe();
  u.check(l);
  const Formula lit = Formula::literal(u, l);
  return (lit | condition(f, ~l)) & condition(f, l);
}

inline Formula exists_literal(const Formula &f, Literal l) {
  const Universe &u = f.universe();
  u.check(l);
  const Formula nlit = Formula::literal(u, ~l);
  return condition(f, l) | (nlit & condition(f, ~l));
}

inline Formula forall_variable(const Formula &f, Variable x) {
  f.universe().check(x);
  return condition(f, Literal{x, true}) & condition(f, Literal{x, false});
}

inline Formula exists_variable(const Formula &f, Variable x) {
  f.universe().check(x);
  return condition(f, Literal{x, true}) | condition(f, Literal{x, false});
}

/// A quantification target: a single literal or a whole variable.
using Item = std::variant<Literal, Variable>;

inline Formula quantify(const Formula &f, Quantifier q, const Item &item) {
  if (const auto *l = std::get_if<Literal>(&item))
    return q == Quantifier::Forall ? forall_literal(f, *l) : exists_literal(f, *l);
  const Variable x = std::get<Variable>(item);
  return q == Quantifier::Forall ? forall_variable(f, x) : exists_variable(f, x);
}

/// Left fold of the single-item quantifiers in the given order. Items may
/// repeat and may contain complementary literals.
inline Formula quantify_set(const Formula &f, Quantifier q, std::span<const Item> items) {
  Formula out = f;
  for (const Item &it : items)
    out = quantify(out, q, it);
  return out;
}

inline Formula quantify_set(const Formula &f, Quantifier q, std::span<const Literal> lits) {
  Formula out = f;
  for (Literal l : lits)
    out = quantify(out, q, l);
  return out;
}

inline Formula quantify_set(const Formula &f, Quantifier q, std::initializer_list<Item> items) {
  return quantify_set(f, q, std::span<const Item>(items.begin(), items.size()));
}

} // namespace qlit
