/// @file  oracle.hpp
/// @brief Brute-force semantic ground truth
///
/// Models, boundary models, boundary rules (b-rules), α-independent models,
/// reconstruction of models from b-rules, and the b-rule dynamics of
/// universal literal quantification. Everything here enumerates worlds, so
/// it is exact and exponential; the enumeration cap guards against misuse.

#pragma once

#include <compare>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "truth_table.hpp"

namespace qlit {

/// A boundary rule α→ℓ: `antecedent` has one literal per variable except the
/// consequent's, and antecedent ∪ {consequent} is a world.
struct BRule {
  Term antecedent;
  Literal consequent;

  friend auto operator<=>(const BRule &, const BRule &) = default;
  friend bool operator==(const BRule &, const BRule &) = default;
};

/// A set of worlds over a universe, kept as a truth table.
class ModelSet {
public:
  ModelSet(Universe u, TruthTable table) : _u(std::move(u)), _table(std::move(table)) {}

  const Universe &universe() const noexcept { return _u; }
  const TruthTable &table() const noexcept { return _table; }
  std::uint64_t size() const noexcept { return _table.count(); }
  bool empty() const noexcept { return _table.none(); }
  bool contains(const World &w) const { return _table.get(w.index()); }

  /// Members in canonical (world index) order.
  std::vector<World> worlds() const {
    std::vector<World> out;
    _table.for_each([&](std::uint64_t i) { out.push_back(World::from_index(_u, i)); });
    return out;
  }

  bool operator==(const ModelSet &o) const { return _u == o._u && _table == o._table; }

private:
  Universe _u;
  TruthTable _table;
};

/// R(φ): for each variable v, the worlds that are v-boundary models. A world
/// ω in `by_var[v]` stands for the rule (ω ∖ {ω_v}) → ω_v.
class RuleSet {
public:
  RuleSet(Universe u, std::vector<TruthTable> by_var)
      : _u(std::move(u)), _by_var(std::move(by_var)) {}

  const Universe &universe() const noexcept { return _u; }
  const std::vector<TruthTable> &by_var() const noexcept { return _by_var; }

  std::uint64_t size() const noexcept {
    std::uint64_t n = 0;
    for (const auto &t : _by_var)
      n += t.count();
    return n;
  }
  bool empty() const noexcept { return size() == 0; }

  /// Whether the rule with the given world and consequent variable exists.
  bool contains(std::uint64_t world, VarId consequent) const {
    return consequent < _by_var.size() && _by_var[consequent].get(world);
  }
  bool contains(const BRule &r) const {
    const World w = World::from_term(_u, r.antecedent.with(r.consequent));
    return contains(w.index(), r.consequent.var());
  }

  /// Rules sorted canonically (antecedent, then consequent).
  std::vector<BRule> rules() const {
    std::vector<BRule> out;
    for (std::size_t v = 0; v < _by_var.size(); ++v)
      _by_var[v].for_each([&](std::uint64_t w) { out.push_back(make_rule(w, VarId(v))); });
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Rules whose consequent is `l`.
  std::vector<BRule> rules_for(Literal l) const {
    std::vector<BRule> out;
    const TruthTable lit = TruthTable::literal(_u.size(), l);
    (_by_var.at(l.var()) & lit).for_each([&](std::uint64_t w) {
      out.push_back(make_rule(w, l.var()));
    });
    std::sort(out.begin(), out.end());
    return out;
  }

  BRule make_rule(std::uint64_t world, VarId v) const {
    const World w = World::from_index(_u, world);
    return {w.term().without(w.literal(v)), w.literal(v)};
  }

  bool operator==(const RuleSet &o) const { return _u == o._u && _by_var == o._by_var; }

private:
  Universe _u;
  std::vector<TruthTable> _by_var;
};

inline std::string to_string(const BRule &r, const Universe &u) {
  return to_string(r.antecedent, u) + " -> " + to_string(r.consequent, u);
}

namespace detail {

inline Formula over(const Formula &f, const Universe &u) {
  return f.universe().same(u) ? f : f.rebase(u);
}

inline RuleSet rules_of_table(const Universe &u, const TruthTable &models) {
  std::vector<TruthTable> by_var;
  by_var.reserve(u.size());
  for (std::size_t v = 0; v < u.size(); ++v)
    by_var.push_back(models - models.flipped(VarId(v)));
  return RuleSet(u, std::move(by_var));
}

} // namespace detail

/// M(φ): every world of `u` that satisfies `f`.
inline ModelSet enumerate_models(const Formula &f, const Universe &u,
                                 std::size_t cap = default_enum_cap()) {
  check_cap(u.size(), cap);
  return ModelSet(u, truth_table(detail::over(f, u), cap));
}

inline ModelSet enumerate_models(const Formula &f) {
  return enumerate_models(f, f.universe());
}

/// R(φ) computed from a model table.
inline RuleSet b_rules(const ModelSet &models) {
  return detail::rules_of_table(models.universe(), models.table());
}

/// R(φ) relative to universe `u`. Empty for valid and inconsistent formulas
/// and for the empty universe.
inline RuleSet b_rules(const Formula &f, const Universe &u,
                       std::size_t cap = default_enum_cap()) {
  return b_rules(enumerate_models(f, u, cap));
}

inline RuleSet b_rules(const Formula &f) { return b_rules(f, f.universe()); }

/// All pairs (ω, ℓ) such that ω is an ℓ-boundary model of `f`, sorted by
/// world index then literal.
inline std::vector<std::pair<World, Literal>>
boundary_models(const Formula &f, const Universe &u, std::size_t cap = default_enum_cap()) {
  const RuleSet rules = b_rules(f, u, cap);
  std::vector<std::pair<std::uint64_t, VarId>> raw;
  for (std::size_t v = 0; v < u.size(); ++v)
    rules.by_var()[v].for_each([&](std::uint64_t w) { raw.emplace_back(w, VarId(v)); });
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<World, Literal>> out;
  out.reserve(raw.size());
  for (auto [w, v] : raw) {
    World world = World::from_index(u, w);
    const Literal l = world.literal(v);
    out.emplace_back(std::move(world), l);
  }
  return out;
}

/// B(φ) as a set of worlds.
inline ModelSet boundary_worlds(const RuleSet &rules) {
  TruthTable t(rules.universe().size());
  for (const auto &bv : rules.by_var())
    t |= bv;
  return ModelSet(rules.universe(), std::move(t));
}

inline ModelSet boundary_worlds(const Formula &f, const Universe &u) {
  return boundary_worlds(b_rules(f, u));
}

/// Whether `w` is an `a`-independent model of `f`: a ⊆ w and every world that
/// agrees with w outside of a's variables satisfies f.
inline bool is_independent_model(const Formula &f, const World &w, const Term &a) {
  for (Literal l : a)
    if (!w.contains(l))
      return false;
  const std::vector<Literal> free(a.begin(), a.end());
  if (free.size() > 30)
    throw CapacityError("independent-model check over " + std::to_string(free.size()) +
                            " literals",
                        30);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
    World v = w;
    for (std::size_t i = 0; i < free.size(); ++i)
      if ((bits >> i) & 1u)
        v = flip(v, ~free[i]);
    if (!evaluate(f, v))
      return false;
  }
  return true;
}

/// Rebuild M(φ) from R(φ) and B(φ) by iterating
/// L(W) = W ∪ { α,ℓ̄ : α,ℓ ∈ W and α→ℓ ∉ R(φ) } to its least fixed point.
///
/// Throws PreconditionError when both inputs are empty: the source formula is
/// then valid or inconsistent and its models are not determined by b-rules.
inline ModelSet reconstruct_models(const RuleSet &rules, const ModelSet &bmodels,
                                   const Universe &u) {
  if (!(rules.universe() == u) || !(bmodels.universe() == u))
    throw UniverseError("reconstruction inputs live over different universes");
  if (bmodels.empty() || u.size() == 0)
    throw PreconditionError(
        "no boundary models: the source formula is valid or inconsistent");
  TruthTable w = bmodels.table();
  const std::size_t n = u.size();
  for (;;) {
    TruthTable next = w;
    for (std::size_t v = 0; v < n; ++v) {
      // Worlds of W that are not v-boundary can be flipped on v.
      next |= (w - rules.by_var()[v]).flipped(VarId(v));
    }
    if (next == w)
      break;
    w = std::move(next);
  }
  return ModelSet(u, std::move(w));
}

/// True iff `f` has no b-rule with consequent `l` (f is independent of `l`).
inline bool literal_independent(const Formula &f, Literal l,
                                std::size_t cap = default_enum_cap()) {
  f.universe().check(l);
  const TruthTable models = truth_table(f, cap);
  const TruthTable boundary =
      (models - models.flipped(l.var())) & TruthTable::literal(f.universe().size(), l);
  return boundary.none();
}

inline bool variable_independent(const Formula &f, Variable v,
                                 std::size_t cap = default_enum_cap()) {
  return literal_independent(f, {v, true}, cap) && literal_independent(f, {v, false}, cap);
}

// -----------------------------------------------------------------------------
// b-rule dynamics of ∀ℓ
// -----------------------------------------------------------------------------

enum class RuleFate { Kept, Deleted, Introduced };

inline const char *to_string(RuleFate f) {
  switch (f) {
  case RuleFate::Kept:
    return "kept";
  case RuleFate::Deleted:
    return "deleted";
  case RuleFate::Introduced:
    return "introduced";
  }
  return "?";
}

/// Partition of R(φ) ∪ R(∀ℓ·φ) plus one verdict per characterization clause.
struct TransitionReport {
  Universe universe;
  Literal quantified;
  std::vector<std::pair<BRule, RuleFate>> rules; // sorted by rule
  std::size_t kept = 0, deleted = 0, introduced = 0;

  /// Clause name → holds. Names: "keep-consequent" (rules inferring ℓ are
  /// kept), "delete-complement" (no rule inferring ℓ̄ survives),
  /// "keep-antecedent" (rules whose antecedent contains ℓ are kept),
  /// "keep-conditional" (α,ℓ̄→ℓj is kept iff α,ℓj→ℓ̄ is absent),
  /// "introduce-shape" (new rules have the form α,ℓ̄→ℓj),
  /// "introduce-criterion" (the four-condition characterization of new rules).
  std::map<std::string, bool> clauses;

  bool all_pass() const {
    for (const auto &[name, ok] : clauses)
      if (!ok)
        return false;
    return true;
  }

  /// One rule per line: `antecedent -> consequent [kept|deleted|introduced]`.
  std::string text() const {
    std::ostringstream os;
    for (const auto &[r, fate] : rules)
      os << to_string(r, universe) << " [" << to_string(fate) << "]\n";
    return os.str();
  }
};

/// Compare R(φ) with R(∀l·φ), with ∀l·φ evaluated from its Shannon-style
/// definition on truth tables, and check every clause of the
/// deletion / preservation / introduction characterization rule by rule.
inline TransitionReport brule_transition_report(const Formula &f, Literal l, const Universe &u,
                                                std::size_t cap = default_enum_cap()) {
  u.check(l);
  const ModelSet before_models = enumerate_models(f, u, cap);
  const RuleSet before = b_rules(before_models);
  const std::size_t n = u.size();
  const VarId xi = l.var();
  // ∀l·φ = (l ∨ φ|l̄) ∧ φ|l, evaluated on tables.
  const TruthTable &t = before_models.table();
  const TruthTable lit = TruthTable::literal(n, l);
  const TruthTable on_l = (t & lit) | (t & lit).flipped(xi);
  const TruthTable on_lbar = (t - lit) | (t - lit).flipped(xi);
  const TruthTable after_table = (lit | on_lbar) & on_l;
  const RuleSet after = detail::rules_of_table(u, after_table);

  TransitionReport rep{u, l, {}, 0, 0, 0, {}};
  for (std::size_t v = 0; v < n; ++v) {
    const TruthTable &b = before.by_var()[v];
    const TruthTable &a = after.by_var()[v];
    (b & a).for_each([&](std::uint64_t w) {
      rep.rules.emplace_back(before.make_rule(w, VarId(v)), RuleFate::Kept);
    });
    (b - a).for_each([&](std::uint64_t w) {
      rep.rules.emplace_back(before.make_rule(w, VarId(v)), RuleFate::Deleted);
    });
    (a - b).for_each([&](std::uint64_t w) {
      rep.rules.emplace_back(before.make_rule(w, VarId(v)), RuleFate::Introduced);
    });
  }
  std::sort(rep.rules.begin(), rep.rules.end());
  for (const auto &[r, fate] : rep.rules) {
    if (fate == RuleFate::Kept)
      ++rep.kept;
    else if (fate == RuleFate::Deleted)
      ++rep.deleted;
    else
      ++rep.introduced;
  }

  const std::uint64_t worlds = std::uint64_t{1} << n;
  auto lit_of = [](std::uint64_t w, VarId v) { return Literal{Variable{v}, ((w >> v) & 1u) != 0}; };
  auto flip_to = [](std::uint64_t w, Literal x) {
    return x.positive() ? (w | (std::uint64_t{1} << x.var())) : (w & ~(std::uint64_t{1} << x.var()));
  };
  // R contains the rule "antecedent(world minus v) -> literal of v in world".
  auto in = [](const RuleSet &rs, std::uint64_t w, VarId v) { return rs.contains(w, v); };

  bool keep_consequent = true, delete_complement = true, keep_antecedent = true;
  bool keep_conditional = true, introduce_shape = true, introduce_criterion = true;
  for (std::uint64_t w = 0; w < worlds; ++w) {
    const Literal li_w = lit_of(w, xi);
    // (a) α→ℓi ∈ R(φ) ⇒ α→ℓi ∈ R(∀ℓi·φ).
    if (li_w == l && in(before, w, xi) && !in(after, w, xi))
      keep_consequent = false;
    // (b) no α→ℓ̄i in R(∀ℓi·φ).
    if (li_w == ~l && in(after, w, xi))
      delete_complement = false;
    for (VarId xj = 0; xj < n; ++xj) {
      if (xj == xi)
        continue;
      const Literal lj = lit_of(w, xj);
      // (c) α,ℓi→ℓj ∈ R(φ) ⇒ kept.
      if (li_w == l && in(before, w, xj) && !in(after, w, xj))
        keep_antecedent = false;
      if (li_w == ~l) {
        // w = α, ℓ̄i, ℓj.
        const std::uint64_t a_li_lj = flip_to(w, l);             // α, ℓi, ℓj
        const std::uint64_t a_lbi_lbj = flip_to(w, ~lj);         // α, ℓ̄i, ℓ̄j
        // (d) α,ℓ̄i→ℓj ∈ R(φ): kept iff α,ℓj→ℓ̄i ∉ R(φ).
        if (in(before, w, xj)) {
          const bool expected = !in(before, w, xi);
          if (in(after, w, xj) != expected)
            keep_conditional = false;
        }
        // Introduction criterion for r = α,ℓ̄i→ℓj.
        const bool introduced = !in(before, w, xj) && in(after, w, xj);
        const bool criterion = in(before, a_li_lj, xj) &&   // α,ℓi→ℓj
                               in(before, a_lbi_lbj, xi) && // α,ℓ̄j→ℓ̄i
                               !in(before, a_li_lj, xi) &&  // α,ℓj→ℓi absent
                               !in(before, a_lbi_lbj, xj);  // α,ℓ̄i→ℓ̄j absent
        if (introduced != criterion)
          introduce_criterion = false;
      }
    }
  }
  // New rules must have the form α,ℓ̄i→ℓj with j ≠ i.
  for (const auto &[r, fate] : rep.rules)
    if (fate == RuleFate::Introduced &&
        (r.consequent.var() == xi || !r.antecedent.contains(~l)))
      introduce_shape = false;

  rep.clauses = {{"keep-consequent", keep_consequent},
                 {"delete-complement", delete_complement},
                 {"keep-antecedent", keep_antecedent},
                 {"keep-conditional", keep_conditional},
                 {"introduce-shape", introduce_shape},
                 {"introduce-criterion", introduce_criterion}};
  return rep;
}

} // namespace qlit
