/// @file  checks.hpp
/// @brief Seeded randomized property suites, shared by the test binaries and
///        the `check` subcommand.
///
/// Each suite draws `trials` random instances over at most `vars` variables
/// and compares an implementation against an independent enumeration. A
/// suite stops recording details after its first failure but keeps counting.

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hitting_set.hpp"
#include "normal_form.hpp"
#include "oracle.hpp"
#include "quantify.hpp"
#include "random.hpp"
#include "tractable.hpp"
#include "xai.hpp"

namespace qlit {

struct SuiteConfig {
  std::size_t vars = 6;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

struct SuiteResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::string first_failure;

  bool ok() const noexcept { return trials > 0 && passed == trials; }
  std::string summary() const {
    return std::to_string(passed) + "/" + std::to_string(trials) + " pass";
  }
};

namespace detail {

/// A trial returns an empty string on success, else a description.
using Trial = std::function<std::string(Rng &, const Universe &)>;

inline SuiteResult run_suite(std::string name, const SuiteConfig &cfg, std::size_t min_vars,
                             const Trial &trial) {
  SuiteResult r{std::move(name), 0, 0, {}};
  if (cfg.vars < min_vars)
    throw ConfigError("suite " + r.name + " needs at least " + std::to_string(min_vars) +
                      " variables");
  Rng rng(cfg.seed);
  // One universe per size, so formulas of the same size share a node store.
  std::map<std::size_t, Universe> universes;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const std::size_t n = min_vars + pick(rng, cfg.vars - min_vars + 1);
    auto it = universes.try_emplace(n, Universe(n)).first;
    std::string failure;
    try {
      failure = trial(rng, it->second);
    } catch (const std::exception &e) {
      failure = std::string("exception: ") + e.what();
    }
    ++r.trials;
    if (failure.empty())
      ++r.passed;
    else if (r.first_failure.empty())
      r.first_failure = "trial " + std::to_string(t) + " (n=" + std::to_string(n) + "): " + failure;
  }
  return r;
}

inline bool same(const Formula &a, const Formula &b) { return truth_table(a) == truth_table(b); }
inline bool below(const Formula &a, const Formula &b) {
  return truth_table(a).subset_of(truth_table(b));
}

inline Item random_item(const Universe &u, Rng &rng) {
  if (pick(rng, 3) == 0)
    return Variable{static_cast<VarId>(pick(rng, u.size()))};
  return random_literal(u, rng);
}

/// Every term over `u` (3^n of them), including the empty term.
inline std::vector<Term> all_terms(const Universe &u) {
  std::vector<Term> out{Term{}};
  for (std::size_t v = 0; v < u.size(); ++v) {
    const std::size_t k = out.size();
    for (std::size_t i = 0; i < k; ++i) {
      out.push_back(out[i].with(Literal::pos(static_cast<VarId>(v))));
      out.push_back(out[i].with(Literal::neg(static_cast<VarId>(v))));
    }
  }
  return out;
}

/// Random formula that is consistent and not valid.
inline Formula random_contingent(const Universe &u, Rng &rng) {
  for (;;) {
    Formula f = random_formula(u, rng, 4);
    const TruthTable t = truth_table(f);
    if (!t.none() && !t.all())
      return f;
  }
}

/// Subsets of `g` that decide like `g` and have no proper subset that does,
/// by exhaustive search.
inline std::vector<Term> brute_force_reasons(const TruthTable &side, const Term &g) {
  const std::vector<Literal> lits(g.begin(), g.end());
  const std::size_t k = lits.size();
  const std::size_t n = side.num_vars();
  std::vector<char> implies(std::size_t{1} << k);
  for (std::uint64_t mask = 0; mask < implies.size(); ++mask) {
    TruthTable t(n, true);
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1u)
        t &= TruthTable::literal(n, lits[i]);
    implies[mask] = t.subset_of(side);
  }
  std::vector<Term> out;
  for (std::uint64_t mask = 0; mask < implies.size(); ++mask) {
    if (!implies[mask])
      continue;
    bool minimal = true;
    for (std::size_t i = 0; i < k && minimal; ++i)
      if (((mask >> i) & 1u) && implies[mask & ~(std::uint64_t{1} << i)])
        minimal = false;
    if (!minimal)
      continue;
    std::vector<Literal> sub;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1u)
        sub.push_back(lits[i]);
    out.emplace_back(std::move(sub));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Decision by table entailment, independent of the classifier code.
inline Decision table_decision(const TruthTable &pos, const Term &g) {
  const TruthTable t = truth_table(g, pos.num_vars());
  if (t.subset_of(pos))
    return Decision::Positive;
  if ((t & pos).none())
    return Decision::Negative;
  return Decision::Undefined;
}

inline std::vector<Literal> random_literals(const Universe &u, Rng &rng, std::size_t max) {
  std::vector<Literal> out;
  for (std::size_t i = 0, k = pick(rng, max + 1); i < k; ++i)
    out.push_back(random_literal(u, rng));
  return out;
}

inline Classifier random_classifier(const Universe &u, Rng &rng, bool clausal) {
  Formula f = random_contingent(u, rng);
  std::vector<Variable> prot;
  for (std::size_t v = 0; v < u.size(); ++v)
    if (pick(rng, 3) == 0)
      prot.push_back(Variable{static_cast<VarId>(v)});
  if (prot.empty())
    prot.push_back(Variable{static_cast<VarId>(pick(rng, u.size()))});
  return Classifier::from_formula(f, std::move(prot), clausal);
}

} // namespace detail

// -----------------------------------------------------------------------------
// Quantification laws
// -----------------------------------------------------------------------------

/// ∃ℓ·φ ≡ ¬∀ℓ·¬φ and ∀ℓ·φ ≡ ¬∃ℓ·¬φ, for literals and for variables.
inline SuiteResult check_duality(const SuiteConfig &cfg) {
  return detail::run_suite("duality", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = random_formula(u, rng);
    const Literal l = random_literal(u, rng);
    const Variable x = l.variable();
    if (!detail::same(exists_literal(f, l), negate(forall_literal(negate(f), l))))
      return "exists literal vs negated forall";
    if (!detail::same(forall_literal(f, l), negate(exists_literal(negate(f), l))))
      return "forall literal vs negated exists";
    if (!detail::same(exists_variable(f, x), negate(forall_variable(negate(f), x))))
      return "exists variable vs negated forall";
    if (!detail::same(forall_variable(f, x), negate(exists_variable(negate(f), x))))
      return "forall variable vs negated exists";
    return {};
  });
}

/// quantify_set gives equivalent results under any reordering of its items.
inline SuiteResult check_order(const SuiteConfig &cfg) {
  return detail::run_suite("order", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = random_formula(u, rng);
    std::vector<Item> items;
    for (std::size_t i = 0, k = 1 + pick(rng, 4); i < k; ++i)
      items.push_back(detail::random_item(u, rng));
    std::vector<Item> shuffled = items;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[pick(rng, i)]);
    for (Quantifier q : {Quantifier::Forall, Quantifier::Exists})
      if (!detail::same(quantify_set(f, q, std::span<const Item>(items)),
                        quantify_set(f, q, std::span<const Item>(shuffled))))
        return q == Quantifier::Forall ? "forall order" : "exists order";
    return {};
  });
}

/// ∀ℓ·φ ⊨ φ ⊨ ∃ℓ·φ, and the exact model differences are the ℓ̄-boundary
/// models of φ (for ∀) and of ¬φ (for ∃).
inline SuiteResult check_sandwich(const SuiteConfig &cfg) {
  return detail::run_suite("sandwich", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = random_formula(u, rng);
    const Literal l = random_literal(u, rng);
    const TruthTable m = truth_table(f);
    const TruthTable all = truth_table(forall_literal(f, l));
    const TruthTable ex = truth_table(exists_literal(f, l));
    if (!all.subset_of(m) || !m.subset_of(ex))
      return "sandwich";
    const Literal lbar = ~l;
    TruthTable lost_t(u.size()), gained_t(u.size());
    for (const auto &[w, c] : boundary_models(f, u))
      if (c == lbar)
        lost_t.set(w.index());
    for (const auto &[w, c] : boundary_models(negate(f), u))
      if (c == lbar)
        gained_t.set(w.index());
    if ((m - all) != lost_t)
      return "forall removes exactly the lbar-boundary models";
    if ((ex - m) != gained_t)
      return "exists adds exactly the lbar-boundary models of the negation";
    return {};
  });
}

/// Smaller laws: terms, the ∀X characterization, implicant and implicate
/// preservation, monotonicity, and the base and compound rules.
inline SuiteResult check_laws(const SuiteConfig &cfg) {
  return detail::run_suite("laws", cfg, 2, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = random_formula(u, rng);
    const Formula g = random_formula(u, rng);
    const Literal l = random_literal(u, rng);
    const Variable x = l.variable();

    // ∀ℓ·γ ≡ γ when ℓ̄ ∉ γ; otherwise ⊥.
    const Term gamma = random_term(u, rng, u.size());
    const Formula gf = Formula::term(u, gamma);
    const Formula q = forall_literal(gf, l);
    if (!detail::same(q, gamma.contains(~l) ? Formula::bottom(u) : gf))
      return "forall of a term";
    // ∃ℓ·γ drops ℓ from γ.
    if (!detail::same(exists_literal(gf, l), Formula::term(u, gamma.contains(l) ? gamma.without(l) : gamma)))
      return "exists of a term";

    // ∀x·φ ≡ (∀X·φ) ∨ (x ∧ φ).
    const Formula lx = Formula::literal(u, l);
    if (!detail::same(forall_literal(f, l), forall_variable(f, x) | (lx & f)))
      return "forall literal via forall variable";
    // Variable quantification is literal quantification twice, either order.
    if (!detail::same(forall_variable(f, x), forall_literal(forall_literal(f, l), ~l)) ||
        !detail::same(forall_variable(f, x), forall_literal(forall_literal(f, ~l), l)))
      return "forall variable vs two literals";
    if (!detail::same(exists_variable(f, x), exists_literal(exists_literal(f, l), ~l)))
      return "exists variable vs two literals";

    // Implicants containing ℓ survive ∀ℓ; implicates containing ℓ̄ survive ∃ℓ.
    const TruthTable ft = truth_table(f);
    const TruthTable fa = truth_table(forall_literal(f, l));
    const TruthTable fe = truth_table(exists_literal(f, l));
    const Term t = gamma.contains(~l) ? gamma.without(~l).with(l) : gamma.with(l);
    const TruthTable tt = truth_table(t, u.size());
    if (tt.subset_of(ft) && !tt.subset_of(fa))
      return "implicant with l lost by forall";
    const Clause c(t.without(l).with(~l).literals());
    const TruthTable ct = truth_table(c, u.size());
    if (ft.subset_of(ct) && !fe.subset_of(ct))
      return "implicate with lbar lost by exists";

    // Monotonicity, with f ∧ g ⊨ f.
    const Formula fg = f & g;
    if (!detail::below(forall_literal(fg, l), forall_literal(f, l)) ||
        !detail::below(exists_literal(fg, l), exists_literal(f, l)))
      return "monotonicity";

    // Base cases.
    const Formula top = Formula::top(u), bot = Formula::bottom(u);
    for (Quantifier qq : {Quantifier::Forall, Quantifier::Exists}) {
      if (!detail::same(quantify(top, qq, l), top) || !detail::same(quantify(bot, qq, l), bot))
        return "constants";
    }
    const Literal m = random_literal(u, rng);
    const Formula mf = Formula::literal(u, m);
    if (!detail::same(exists_literal(mf, l), l == m ? top : mf))
      return "exists of a literal";
    if (!detail::same(forall_literal(mf, l), l == ~m ? bot : mf))
      return "forall of a literal";

    // Compound rules; (c) and (d) need the variable unshared.
    if (!detail::same(exists_literal(f | g, l), exists_literal(f, l) | exists_literal(g, l)))
      return "exists distributes over or";
    if (!detail::same(forall_literal(f & g, l), forall_literal(f, l) & forall_literal(g, l)))
      return "forall distributes over and";
    const Formula h = forall_variable(exists_variable(g, x), x); // independent of X
    if (!detail::same(exists_literal(f & h, l), exists_literal(f, l) & exists_literal(h, l)))
      return "exists distributes over and with unshared variable";
    if (!detail::same(forall_literal(f | h, l), forall_literal(f, l) | forall_literal(h, l)))
      return "forall distributes over or with unshared variable";
    return {};
  });
}

/// ∀ℓ·φ ≡ φ ∧ ⋀{¬α : α→ℓ̄ ∈ R(φ)} and ∃ℓ·φ ≡ φ ∨ ⋁{α : α→ℓ ∈ R(φ)}.
inline SuiteResult check_syntax(const SuiteConfig &cfg) {
  return detail::run_suite("syntax", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = random_formula(u, rng);
    const Literal l = random_literal(u, rng);
    const RuleSet r = b_rules(f, u);
    std::vector<Formula> parts{f};
    for (const BRule &rule : r.rules_for(~l))
      parts.push_back(~Formula::term(u, rule.antecedent));
    if (!detail::same(forall_literal(f, l), Formula::conjoin(u, parts)))
      return "forall via b-rules";
    parts.assign(1, f);
    for (const BRule &rule : r.rules_for(l))
      parts.push_back(Formula::term(u, rule.antecedent));
    if (!detail::same(exists_literal(f, l), Formula::disjoin(u, parts)))
      return "exists via b-rules";
    return {};
  });
}

/// Worlds of ∀ℓ₁…ℓₙ·φ are the models of φ that stay models under any flip
/// of their literals among ℓ̄₁…ℓ̄ₙ. For n ≤ 6 variables the same is checked
/// for every term against α-independent implicants.
inline SuiteResult check_selection(const SuiteConfig &cfg) {
  return detail::run_suite("selection", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = random_formula(u, rng);
    std::vector<Literal> lits = detail::random_literals(u, rng, 4);
    if (lits.empty())
      lits.push_back(random_literal(u, rng));
    const Formula q = quantify_set(f, Quantifier::Forall, std::span<const Literal>(lits));
    const TruthTable qt = truth_table(q);
    const TruthTable ft = truth_table(f);
    auto alpha_of = [&](auto contains) {
      std::vector<Literal> a;
      for (Literal l : lits)
        if (contains(~l) && std::find(a.begin(), a.end(), ~l) == a.end())
          a.push_back(~l);
      return Term(std::move(a));
    };
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << u.size()); ++i) {
      const World w = World::from_index(u, i);
      const Term a = alpha_of([&](Literal l) { return w.contains(l); });
      if (qt.get(i) != is_independent_model(f, w, a))
        return "world " + to_string(w.term(), u);
    }
    if (u.size() > 6)
      return {};
    for (const Term &g : detail::all_terms(u)) {
      const Term a = alpha_of([&](Literal l) { return g.contains(l); });
      const bool implicant = truth_table(g, u.size()).subset_of(ft) &&
                             truth_table(g.minus(a), u.size()).subset_of(ft);
      if (truth_table(g, u.size()).subset_of(qt) != implicant)
        return "term " + to_string(g, u);
    }
    return {};
  });
}

// -----------------------------------------------------------------------------
// b-rules
// -----------------------------------------------------------------------------

/// Models are recovered from b-rules and boundary models; two formulas have
/// the same models iff they have the same b-rules; plus the b-rule
/// propositions on negation, conjunction, counting, and independent models.
inline SuiteResult check_know(const SuiteConfig &cfg) {
  return detail::run_suite("know", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = detail::random_contingent(u, rng);
    const Formula g = pick(rng, 2) ? detail::random_contingent(u, rng)
                                   : prime_implicants(f).to_formula(); // same models
    const ModelSet mf = enumerate_models(f, u);
    const ModelSet mg = enumerate_models(g, u);
    const RuleSet rf = b_rules(mf);
    const RuleSet rg = b_rules(mg);
    const std::size_t n = u.size();

    if (!(reconstruct_models(rf, boundary_worlds(rf), u) == mf))
      return "reconstruction";
    if ((mf == mg) != (rf == rg))
      return "equal models iff equal b-rules";

    // α→ℓ ∈ R(φ) iff φ∧α is consistent and φ ⊨ α⇒ℓ, checked by evaluation.
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
      const World w = World::from_index(u, i);
      for (std::size_t v = 0; v < n; ++v) {
        const World other = flip(w, ~w.literal(static_cast<VarId>(v)));
        const bool consistent = evaluate(f, w) || evaluate(f, other);
        const bool entailed = !evaluate(f, other);
        if (rf.contains(i, static_cast<VarId>(v)) != (consistent && entailed))
          return "b-rule characterization";
      }
    }

    // R(¬φ) has the same antecedents with complemented consequents.
    const RuleSet rn = b_rules(negate(f), u);
    for (std::size_t v = 0; v < n; ++v)
      if (rn.by_var()[v] != rf.by_var()[v].flipped(static_cast<VarId>(v)))
        return "b-rules of the negation";

    // R(φ)∩R(ψ) ⊆ R(φ∘ψ) ⊆ R(φ)∪R(ψ) for ∘ ∈ {∧, ∨}.
    for (const Formula &h : {f & g, f | g}) {
      const RuleSet rh = b_rules(h, u);
      for (std::size_t v = 0; v < n; ++v) {
        const TruthTable &a = rf.by_var()[v], &b = rg.by_var()[v], &c = rh.by_var()[v];
        if (!(a & b).subset_of(c) || !c.subset_of(a | b))
          return "b-rules of a compound";
      }
    }

    // |R| ≤ n·|B| and |R| ≤ n·min(|M(φ)|, |M(¬φ)|). |B| itself may exceed
    // |M(¬φ)|: ¬(x₁∧…∧xₙ) has n boundary models and one counter model.
    const std::uint64_t nb = boundary_worlds(rf).size();
    const std::uint64_t nm = mf.size(), nnot = (std::uint64_t{1} << n) - nm;
    if (rf.size() > n * nb || nb > nm || rf.size() > n * std::min(nm, nnot))
      return "rule count bound";

    // A model α,β is α-independent iff no rule has an antecedent ⊇ β.
    const auto models = mf.worlds();
    const World &w = models[pick(rng, models.size())];
    std::vector<Literal> a, b;
    for (std::size_t v = 0; v < n; ++v)
      (coin(rng) ? a : b).push_back(w.literal(static_cast<VarId>(v)));
    const Term beta(b);
    bool blocked = false;
    for (const BRule &rule : rf.rules())
      if (beta.subset_of(rule.antecedent))
        blocked = true;
    if (is_independent_model(f, w, Term(a)) == blocked)
      return "independent model vs b-rules";
    return {};
  });
}

/// Every clause of the b-rule transition theorems holds, and the report's
/// partition agrees with b-rules recomputed from ∀ℓ·φ.
inline SuiteResult check_appendix_a(const SuiteConfig &cfg) {
  return detail::run_suite("appendixA", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Formula f = random_formula(u, rng);
    const Literal l = random_literal(u, rng);
    const TransitionReport rep = brule_transition_report(f, l, u);
    for (const auto &[name, ok] : rep.clauses)
      if (!ok)
        return "clause " + name;
    const RuleSet before = b_rules(f, u);
    const RuleSet after = b_rules(forall_literal(f, l), u);
    if (rep.kept + rep.deleted != before.size() || rep.kept + rep.introduced != after.size())
      return "partition sizes";
    for (const auto &[rule, fate] : rep.rules) {
      const bool in_before = before.contains(rule), in_after = after.contains(rule);
      const bool ok = fate == RuleFate::Kept         ? in_before && in_after
                      : fate == RuleFate::Deleted    ? in_before && !in_after
                                                     : !in_before && in_after;
      if (!ok)
        return "rule " + to_string(rule, u) + " misfiled";
    }
    return {};
  });
}

// -----------------------------------------------------------------------------
// Tractable routines
// -----------------------------------------------------------------------------

/// The eight tractable routines against the definitional quantifiers, plus the
/// two shift transforms, size bounds and monotonicity of full ∀.
inline SuiteResult check_tractable(const SuiteConfig &cfg) {
  return detail::run_suite("tractable", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Literal l = random_literal(u, rng);
    const std::size_t n = u.size();
    // The reference applies the definitional quantifiers to the input's own
    // formula.
    auto ref = [](const Formula &f, Quantifier q, std::span<const Literal> lits) {
      return truth_table(quantify_set(f, q, lits));
    };
    const std::array<Literal, 1> one{l};

    // Clausal forms.
    const Cnf cnf = random_cnf(u, rng, 1 + pick(rng, 2 * n), 1 + pick(rng, 3));
    const Dnf dnf = random_dnf(u, rng, 1 + pick(rng, 2 * n), 1 + pick(rng, 3));
    const Cnf cf = cnf_forall_literal(cnf, l);
    if (truth_table(cf) != ref(cnf.to_formula(), Quantifier::Forall, one))
      return "cnf_forall_literal";
    if (cf.literal_count() > cnf.literal_count())
      return "cnf_forall_literal grew";
    if (truth_table(cnf_exists_literal(cnf, l, ClosurePolicy::Close)) !=
        ref(cnf.to_formula(), Quantifier::Exists, one))
      return "cnf_exists_literal";
    const Dnf de = dnf_exists_literal(dnf, l);
    if (truth_table(de) != ref(dnf.to_formula(), Quantifier::Exists, one))
      return "dnf_exists_literal";
    if (de.literal_count() > dnf.literal_count())
      return "dnf_exists_literal grew";
    if (truth_table(dnf_forall_literal(dnf, l, ClosurePolicy::Close)) !=
        ref(dnf.to_formula(), Quantifier::Forall, one))
      return "dnf_forall_literal";

    // Circuits, with a random literal set and one literal per variable.
    std::vector<Literal> lits = detail::random_literals(u, rng, 3);
    std::vector<Literal> per_var;
    for (std::size_t v = 0; v < n; ++v)
      per_var.push_back({Variable{static_cast<VarId>(v)}, coin(rng)});

    const DecisionDnnf dd = random_ddnnf(u, rng);
    const TruthTable dt = truth_table(dd.circuit());
    const Formula df = to_formula(dd.circuit());
    const Circuit de_c = ddnnf_exists(dd, lits);
    if (truth_table(de_c) != ref(df, Quantifier::Exists, lits))
      return "ddnnf_exists";
    if (de_c.size() > dd.circuit().size())
      return "ddnnf_exists grew";
    const Circuit ds = ddnnf_shift(dd);
    if (truth_table(ds) != dt || !has_disjoint_disjuncts(ds))
      return "ddnnf_shift";
    if (truth_table(ddnnf_forall(dd, lits)) != ref(df, Quantifier::Forall, lits))
      return "ddnnf_forall";
    const Circuit dmono = ddnnf_forall(dd, per_var);
    if (!is_monotone(dmono) || truth_table(dmono) != ref(df, Quantifier::Forall, per_var))
      return "ddnnf_forall one literal per variable";

    const Sdd sd = random_sdd(u, rng);
    const TruthTable st = truth_table(sd.circuit());
    const Formula sf = to_formula(sd.circuit());
    const Circuit se_c = sdd_exists(sd, lits);
    if (truth_table(se_c) != ref(sf, Quantifier::Exists, lits))
      return "sdd_exists";
    if (se_c.size() > sd.circuit().size())
      return "sdd_exists grew";
    const Circuit ss = sdd_shift(sd);
    if (truth_table(ss) != st || !has_disjoint_disjuncts(ss))
      return "sdd_shift";
    if (truth_table(sdd_forall(sd, lits)) != ref(sf, Quantifier::Forall, lits))
      return "sdd_forall";
    const Circuit smono = sdd_forall(sd, per_var);
    if (!is_monotone(smono) || truth_table(smono) != ref(sf, Quantifier::Forall, per_var))
      return "sdd_forall one literal per variable";
    return {};
  });
}

// -----------------------------------------------------------------------------
// Explanations
// -----------------------------------------------------------------------------

/// Sufficient reasons equal the minimal deciding subsets of the term, and
/// γ ⊨ complete reason ⊨ Δ_γ. Trials alternate between the CNF path and the
/// formula path; undecided terms must be refused.
inline SuiteResult check_reasons(const SuiteConfig &cfg) {
  return detail::run_suite("reasons", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const bool clausal = coin(rng);
    const Classifier c = detail::random_classifier(u, rng, clausal);
    const TruthTable pos = truth_table(c.positive());
    // Half instances, half populations.
    const Term g = coin(rng) ? World::from_index(u, rng() % (std::uint64_t{1} << u.size())).term()
                             : random_term(u, rng, u.size());
    const Decision expected = detail::table_decision(pos, g);
    if (expected == Decision::Undefined) {
      try {
        (void)sufficient_reasons(c, g);
      } catch (const NoDecisionError &) {
        return {};
      }
      return "undefined decision not refused";
    }
    const TruthTable side = expected == Decision::Positive ? pos : ~pos;
    const ReasonSet rs = sufficient_reasons(c, g);
    if (rs.decision != expected)
      return "decision";
    if (rs.sufficient != detail::brute_force_reasons(side, g))
      return std::string(clausal ? "cnf" : "formula") + " path reasons for " + to_string(g, u);
    const TruthTable ct = truth_table(rs.complete);
    if (!truth_table(g, u.size()).subset_of(ct) || !ct.subset_of(side))
      return "complete reason sandwich";
    if (clausal) {
      const Cnf cr = complete_reason_cnf(c, g);
      if (!cr.monotone() || truth_table(cr) != ct)
        return "cnf complete reason";
      for (const Clause &cl : cr.clauses())
        for (Literal l : cl)
          if (!g.contains(l))
            return "cnf complete reason mentions a literal outside the term";
    }
    return {};
  });
}

/// A decision is biased iff flipping some protected features changes it.
inline SuiteResult check_bias(const SuiteConfig &cfg) {
  return detail::run_suite("bias", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Classifier c = detail::random_classifier(u, rng, coin(rng));
    const TruthTable pos = truth_table(c.positive());
    std::uint64_t mask = 0;
    for (Variable v : c.protected_features())
      mask |= std::uint64_t{1} << v.id;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << u.size()); ++i) {
      bool flips = false;
      for (std::uint64_t s = mask; s && !flips; s = (s - 1) & mask)
        flips = pos.get(i) != pos.get(i ^ s);
      if (is_decision_biased(c, World::from_index(u, i)) != flips)
        return "instance " + to_string(World::from_index(u, i).term(), u);
    }
    return {};
  });
}

/// Membership in the independence formulas agrees with erase-and-decide and
/// drop-and-decide on every instance.
inline SuiteResult check_independence(const SuiteConfig &cfg) {
  return detail::run_suite("independence", cfg, 1, [](Rng &rng, const Universe &u) -> std::string {
    const Classifier c = detail::random_classifier(u, rng, coin(rng));
    const TruthTable pos = truth_table(c.positive());
    std::vector<Variable> vars;
    for (std::size_t v = 0; v < u.size(); ++v)
      if (coin(rng))
        vars.push_back(Variable{static_cast<VarId>(v)});
    const std::vector<Literal> alpha = detail::random_literals(u, rng, 3);
    const TruthTable feat[2] = {
        truth_table(instances_independent_of_features(c, Side::Positive, vars)),
        truth_table(instances_independent_of_features(c, Side::Negative, vars))};
    const TruthTable chr[2] = {
        truth_table(instances_independent_of_characteristics(c, Side::Positive, alpha)),
        truth_table(instances_independent_of_characteristics(c, Side::Negative, alpha))};
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << u.size()); ++i) {
      const Term d = World::from_index(u, i).term();
      const Decision dec = detail::table_decision(pos, d);
      const int s = dec == Decision::Positive ? 0 : 1;
      const bool by_erase = detail::table_decision(pos, erase(d, vars)) == dec;
      std::vector<Literal> kept;
      for (Literal l : d)
        if (std::find(alpha.begin(), alpha.end(), l) == alpha.end())
          kept.push_back(l);
      const bool by_drop = detail::table_decision(pos, Term(kept)) == dec;
      if (feat[s].get(i) != by_erase)
        return "features, instance " + to_string(d, u);
      if (chr[s].get(i) != by_drop)
        return "characteristics, instance " + to_string(d, u);
    }
    return {};
  });
}

// -----------------------------------------------------------------------------
// Registry
// -----------------------------------------------------------------------------

struct Suite {
  const char *name;
  SuiteResult (*run)(const SuiteConfig &);
};

inline const std::vector<Suite> &suites() {
  static const std::vector<Suite> all = {
      {"duality", check_duality},     {"order", check_order},
      {"sandwich", check_sandwich},   {"laws", check_laws},
      {"syntax", check_syntax},       {"selection", check_selection},
      {"know", check_know},           {"appendixA", check_appendix_a},
      {"tractable", check_tractable}, {"reasons", check_reasons},
      {"bias", check_bias},           {"independence", check_independence},
  };
  return all;
}

inline const Suite *find_suite(std::string_view name) {
  for (const Suite &s : suites())
    if (name == s.name)
      return &s;
  return nullptr;
}

} // namespace qlit
