/// @file  xai.hpp
/// @brief Classifier queries: decisions, irrelevant features and
///        characteristics, complete and sufficient reasons, decision bias.

#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hitting_set.hpp"
#include "normal_form.hpp"
#include "quantify.hpp"
#include "truth_table.hpp"

namespace qlit {

enum class Decision { Positive, Negative, Undefined };
enum class Side { Positive, Negative };

inline const char *to_string(Decision d) {
  switch (d) {
  case Decision::Positive:
    return "positive";
  case Decision::Negative:
    return "negative";
  case Decision::Undefined:
    return "undefined";
  }
  return "undefined";
}

inline const char *to_string(Side s) { return s == Side::Positive ? "positive" : "negative"; }

/// Largest feature count for which ¬Δ is checked exhaustively at load.
inline constexpr std::size_t kExactNegationCheck = 12;
inline constexpr std::size_t kSampledNegationWorlds = 10000;

/// A Boolean classifier Δ with its negation materialized.
///
/// When Δ (and optionally ¬Δ) are given as CNFs the CNFs are kept, and the
/// queries take the linear clause-dropping path.
class Classifier {
public:
  /// Classifier from a formula; ¬Δ is its NNF negation. With `clausal`, and
  /// at most 16 features, the prime implicates of both sides are kept so the
  /// queries can take the CNF path.
  static Classifier from_formula(const Formula &delta, std::vector<Variable> protected_vars = {},
                                 bool clausal = true) {
    Classifier c(delta.universe(), delta, negate(delta), std::move(protected_vars));
    if (clausal && delta.universe().size() <= kPrimeCap) {
      c._pos_cnf = prime_implicates(delta);
      c._neg_cnf = prime_implicates(c._negative);
    }
    return c;
  }

  /// Classifier from CNFs of Δ and, optionally, ¬Δ. A supplied ¬Δ is checked
  /// against Δ: exhaustively up to 12 features, on sampled worlds above.
  static Classifier from_cnf(const Cnf &delta, std::optional<Cnf> neg = std::nullopt,
                             std::vector<Variable> protected_vars = {}) {
    const Universe &u = delta.universe();
    Formula pos = delta.to_formula();
    Classifier c(u, pos, neg ? neg->to_formula().aligned_to(u) : negate(pos),
                 std::move(protected_vars));
    c._pos_cnf = delta;
    if (neg) {
      if (!(neg->universe() == u))
        throw UniverseError("the two classifier CNFs use different features");
      c._neg_cnf = Cnf(u, neg->clauses());
      c.check_negation(delta, *c._neg_cnf);
    } else if (u.size() <= kPrimeCap) {
      c._neg_cnf = prime_implicates(c._negative);
    }
    return c;
  }

  const Universe &features() const noexcept { return _u; }
  const Formula &positive() const noexcept { return _positive; }
  const Formula &negative() const noexcept { return _negative; }
  const Formula &side(Side s) const noexcept { return s == Side::Positive ? _positive : _negative; }
  const std::optional<Cnf> &cnf(Side s) const noexcept {
    return s == Side::Positive ? _pos_cnf : _neg_cnf;
  }
  const std::vector<Variable> &protected_features() const noexcept { return _protected; }
  const std::vector<std::string> &warnings() const noexcept { return _warnings; }

  Classifier with_protected(std::vector<Variable> vars) const {
    Classifier c = *this;
    for (Variable v : vars)
      _u.check(v);
    c._protected = std::move(vars);
    return c;
  }

private:
  Classifier(Universe u, Formula pos, Formula neg, std::vector<Variable> prot)
      : _u(std::move(u)), _positive(std::move(pos)), _negative(std::move(neg)),
        _protected(std::move(prot)) {
    for (Variable v : _protected)
      _u.check(v);
  }

  void check_negation(const Cnf &pos, const Cnf &neg) {
    const std::size_t n = _u.size();
    if (n <= kExactNegationCheck) {
      if (truth_table(pos) != ~truth_table(neg))
        throw PreconditionError("the negative CNF is not the negation of the positive CNF");
      return;
    }
    std::mt19937_64 rng(0x5eed);
    std::vector<Literal> lits(n);
    for (std::size_t s = 0; s < kSampledNegationWorlds; ++s) {
      for (std::size_t v = 0; v < n; ++v)
        lits[v] = Literal{Variable{static_cast<VarId>(v)}, (rng() & 1u) != 0};
      const Term w(lits);
      if (pos.entailed_by(w) == neg.entailed_by(w))
        throw PreconditionError("the negative CNF is not the negation of the positive CNF "
                                "(counterexample " + to_string(w, _u) + ")");
    }
    _warnings.push_back("negation checked on " + std::to_string(kSampledNegationWorlds) +
                        " sampled worlds only (" + std::to_string(n) + " features)");
  }

  Universe _u;
  Formula _positive, _negative;
  std::optional<Cnf> _pos_cnf, _neg_cnf;
  std::vector<Variable> _protected;
  std::vector<std::string> _warnings;
};

namespace detail {

inline void check_term(const Classifier &c, const Term &g) {
  for (Literal l : g)
    c.features().check(l);
}

inline bool implies_side(const Classifier &c, const Term &g, Side s) {
  if (const auto &cnf = c.cnf(s))
    return cnf->entailed_by(g);
  return entails(g, c.side(s));
}

inline Side side_of(Decision d) {
  if (d == Decision::Undefined)
    throw NoDecisionError("the classifier does not decide this population");
  return d == Decision::Positive ? Side::Positive : Side::Negative;
}

/// Quantify variables and literals out of one side, through the CNF when one
/// is available.
inline Formula forall_side(const Classifier &c, Side s, const std::vector<Literal> &lits) {
  if (const auto &cnf = c.cnf(s))
    return cnf_forall(*cnf, lits).to_formula();
  return quantify_set(c.side(s), Quantifier::Forall, std::span<const Literal>(lits));
}

inline std::vector<Literal> both_literals(std::span<const Variable> vars) {
  std::vector<Literal> out;
  for (Variable v : vars) {
    out.push_back({v, true});
    out.push_back({v, false});
  }
  return out;
}

} // namespace detail

/// Δ(γ): positive if γ ⊨ Δ, negative if γ ⊨ ¬Δ, otherwise undefined.
inline Decision decide(const Classifier &c, const Term &g) {
  detail::check_term(c, g);
  if (detail::implies_side(c, g, Side::Positive))
    return Decision::Positive;
  if (detail::implies_side(c, g, Side::Negative))
    return Decision::Negative;
  return Decision::Undefined;
}

/// ∀vars·Δ_side: the instances decided on `side` independently of `vars`.
inline Formula instances_independent_of_features(const Classifier &c, Side s,
                                                 std::span<const Variable> vars) {
  for (Variable v : vars)
    c.features().check(v);
  return detail::forall_side(c, s, detail::both_literals(vars));
}

/// The instances decided on `side` independently of the characteristics
/// `lits`: ∀{ℓ̄ : ℓ ∈ lits}·Δ_side.
inline Formula instances_independent_of_characteristics(const Classifier &c, Side s,
                                                        std::span<const Literal> lits) {
  std::vector<Literal> neg;
  for (Literal l : lits) {
    c.features().check(l);
    neg.push_back(~l);
  }
  return detail::forall_side(c, s, neg);
}

/// Literals quantified by the complete reason of `g`: its own literals plus
/// both literals of every feature it leaves unmentioned.
inline std::vector<Literal> complete_reason_literals(const Classifier &c, const Term &g) {
  std::vector<Literal> lits(g.begin(), g.end());
  for (VarId v = 0; v < c.features().size(); ++v)
    if (!g.mentions(v)) {
      lits.push_back(Literal::pos(v));
      lits.push_back(Literal::neg(v));
    }
  return lits;
}

/// Complete reason of a CNF classifier as a monotone CNF over g's literals:
/// every literal outside g is dropped from every clause of Δ_g.
inline Cnf complete_reason_cnf(const Classifier &c, const Term &g) {
  detail::check_term(c, g);
  const Side s = detail::side_of(decide(c, g));
  const auto &cnf = c.cnf(s);
  if (!cnf)
    throw PreconditionError("classifier has no CNF for the " + std::string(to_string(s)) +
                            " side");
  std::vector<Clause> clauses;
  clauses.reserve(cnf->size());
  for (const Clause &cl : cnf->clauses()) {
    std::vector<Literal> kept;
    for (Literal l : cl)
      if (g.contains(l))
        kept.push_back(l);
    clauses.emplace_back(std::move(kept));
  }
  return Cnf(c.features(), detail::remove_subsumed(std::move(clauses)));
}

/// ∀(g's literals, unmentioned features)·Δ_g.
inline Formula complete_reason(const Classifier &c, const Term &g) {
  detail::check_term(c, g);
  const Side s = detail::side_of(decide(c, g));
  if (c.cnf(s))
    return complete_reason_cnf(c, g).to_formula();
  const auto lits = complete_reason_literals(c, g);
  return quantify_set(c.side(s), Quantifier::Forall, std::span<const Literal>(lits));
}

struct ReasonSet {
  Formula complete;
  std::vector<Term> sufficient; ///< sorted by canonical literal order
  Decision decision;
};

/// Prime implicants of the monotone CNF: its minimal hitting sets.
inline std::vector<Term> monotone_prime_implicants(const Cnf &d, std::size_t cap = kDefaultReasonCap) {
  std::vector<Literal> index;
  for (const auto &cl : d.clauses())
    index.insert(index.end(), cl.begin(), cl.end());
  std::sort(index.begin(), index.end());
  index.erase(std::unique(index.begin(), index.end()), index.end());
  std::vector<std::vector<std::uint32_t>> sets;
  for (const auto &cl : d.clauses()) {
    std::vector<std::uint32_t> s;
    for (Literal l : cl)
      s.push_back(static_cast<std::uint32_t>(
          std::lower_bound(index.begin(), index.end(), l) - index.begin()));
    sets.push_back(std::move(s));
  }
  std::vector<Term> out;
  for (const auto &hs : minimal_hitting_sets(index.size(), sets, cap)) {
    std::vector<Literal> lits;
    for (auto e : hs)
      lits.push_back(index[e]);
    out.emplace_back(std::move(lits));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Sufficient reasons: the prime implicants of the complete reason.
inline ReasonSet sufficient_reasons(const Classifier &c, const Term &g,
                                    std::size_t cap = kDefaultReasonCap) {
  detail::check_term(c, g);
  const Decision d = decide(c, g);
  const Side s = detail::side_of(d);
  if (c.cnf(s)) {
    const Cnf reason = complete_reason_cnf(c, g);
    return {reason.to_formula(), monotone_prime_implicants(reason, cap), d};
  }
  const Formula reason = complete_reason(c, g);
  auto terms = prime_implicants(reason).terms();
  if (terms.size() > cap)
    throw CapacityError("sufficient reason enumeration", cap);
  std::sort(terms.begin(), terms.end());
  return {reason, std::move(terms), d};
}

/// Δ ∧ ¬(∀P·Δ) (positive side) or ¬Δ ∧ ¬(∀P·¬Δ) (negative side), P the
/// protected features.
inline Formula biased_instances(const Classifier &c, Side s) {
  if (c.protected_features().empty())
    throw ConfigError("no protected features are declared");
  const auto &prot = c.protected_features();
  const Formula fixed = instances_independent_of_features(c, s, prot);
  return c.side(s) & negate(fixed);
}

/// Whether changing protected features alone can change Δ(δ).
inline bool is_decision_biased(const Classifier &c, const World &w) {
  if (!(w.universe() == c.features()))
    throw UniverseError("instance and classifier use different features");
  const Decision d = decide(c, w.term());
  const Formula biased = biased_instances(c, detail::side_of(d));
  return evaluate(biased, w);
}

// -----------------------------------------------------------------------------
// Relevance
// -----------------------------------------------------------------------------

enum class Relevance { FeatureIrrelevant, CharacteristicIrrelevant, Essential };

inline const char *to_string(Relevance r) {
  switch (r) {
  case Relevance::FeatureIrrelevant:
    return "feature-irrelevant";
  case Relevance::CharacteristicIrrelevant:
    return "characteristic-irrelevant";
  case Relevance::Essential:
    return "essential";
  }
  return "essential";
}

struct RelevanceReport {
  Decision decision;
  /// One flag per literal of the population, in canonical order.
  std::vector<std::pair<Literal, Relevance>> items;
  /// Features that can be erased together without changing the decision.
  std::optional<bool> joint_features_irrelevant;
  /// Characteristics that can be dropped together without changing it.
  std::optional<bool> joint_characteristics_irrelevant;
};

/// Drop the characteristics `alpha` from `g` (they need not occur in g).
inline Term drop(const Term &g, std::span<const Literal> alpha) {
  std::vector<Literal> kept;
  for (Literal l : g)
    if (std::find(alpha.begin(), alpha.end(), l) == alpha.end())
      kept.push_back(l);
  return Term(std::move(kept));
}

/// Per-item relevance of a decided population, plus optional joint checks.
///
/// Feature X is irrelevant when erasing X keeps the decision; characteristic
/// ℓ is irrelevant when dropping ℓ keeps it. For a single literal of g the
/// two coincide, since erasing its feature removes exactly that literal; the
/// joint sets are where they part ways.
inline RelevanceReport relevance_report(const Classifier &c, const Term &g,
                                        std::span<const Variable> joint_features = {},
                                        std::span<const Literal> joint_characteristics = {}) {
  detail::check_term(c, g);
  const Decision d = decide(c, g);
  (void)detail::side_of(d);
  RelevanceReport r{d, {}, std::nullopt, std::nullopt};
  for (Literal l : g) {
    const Variable x = l.variable();
    const bool feature = decide(c, erase(g, {x})) == d;
    const Literal one[] = {l};
    const bool characteristic = decide(c, drop(g, one)) == d;
    Relevance rel = Relevance::Essential;
    if (feature)
      rel = Relevance::FeatureIrrelevant;
    else if (characteristic)
      rel = Relevance::CharacteristicIrrelevant;
    r.items.emplace_back(l, rel);
  }
  if (!joint_features.empty()) {
    for (Variable v : joint_features)
      c.features().check(v);
    r.joint_features_irrelevant = decide(c, erase(g, joint_features)) == d;
  }
  if (!joint_characteristics.empty()) {
    for (Literal l : joint_characteristics)
      c.features().check(l);
    r.joint_characteristics_irrelevant = decide(c, drop(g, joint_characteristics)) == d;
  }
  return r;
}

} // namespace qlit
