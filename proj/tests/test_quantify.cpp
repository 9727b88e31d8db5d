#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace qlit;

namespace {

// ∀L·φ by the selection semantics: the models of φ that stay models under
// every flip of α = ω ∩ {l̄ : l ∈ L}.
TruthTable select_by_brute_force(const Formula &f, const std::vector<Literal> &lits) {
  const Universe &u = f.universe();
  const TruthTable m = truth_table(f);
  TruthTable out(u.size(), false);
  m.for_each([&](std::uint64_t w) {
    std::vector<VarId> alpha;
    for (Literal l : lits) {
      const bool bit = (w >> l.var()) & 1;
      if (bit != l.positive())
        alpha.push_back(l.var());
    }
    bool keep = true;
    for (std::uint64_t mask = 0; keep && mask < (std::uint64_t{1} << alpha.size()); ++mask) {
      std::uint64_t v = w;
      for (std::size_t i = 0; i < alpha.size(); ++i)
        if ((mask >> i) & 1)
          v ^= std::uint64_t{1} << alpha[i];
      keep = m.get(v);
    }
    if (keep)
      out.set(w, true);
  });
  return out;
}

} // namespace

TEST_CASE("quantifying x and ~x out of x <=> y") {
  const Universe u{"x", "y"};
  const Formula f = qt::parse(u, "x <=> y");
  const Literal x = u.literal("x");
  const Variable X = u.variable("x");
  CHECK(qt::equiv(exists_variable(f, X), Formula::top(u)));
  CHECK(qt::equiv(forall_variable(f, X), Formula::bottom(u)));
  CHECK(qt::equiv(exists_literal(f, x), qt::parse(u, "~x | y")));
  CHECK(qt::equiv(forall_literal(f, ~x), qt::parse(u, "~x & ~y")));
  CHECK(qt::equiv(forall_literal(f, x), qt::parse(u, "x & y")));
  CHECK(qt::equiv(exists_literal(f, ~x), qt::parse(u, "x | ~y")));

  // Each literal quantification keeps two of the four b-rules.
  CHECK(qt::rule_strings(b_rules(f)) ==
        std::set<std::string>{"y -> x", "x -> y", "~y -> ~x", "~x -> ~y"});
  CHECK(qt::rule_strings(b_rules(exists_literal(f, x))) ==
        std::set<std::string>{"x -> y", "~y -> ~x"});
  CHECK(qt::rule_strings(b_rules(forall_literal(f, ~x))) ==
        std::set<std::string>{"~y -> ~x", "~x -> ~y"});
  CHECK(qt::rule_strings(b_rules(exists_literal(f, ~x))) ==
        std::set<std::string>{"y -> x", "~x -> ~y"});
  CHECK(qt::rule_strings(b_rules(forall_literal(f, x))) ==
        std::set<std::string>{"y -> x", "x -> y"});

  CHECK(entails(forall_literal(f, ~x), f));
  CHECK(entails(f, exists_literal(f, x)));
}

TEST_CASE("selection example on (x | y | z) & (~x | y | t)") {
  const Universe u{"x", "y", "z", "t"};
  const Formula f = qt::parse(u, "(x | y | z) & (~x | y | t)");
  const Literal x = u.literal("x"), y = u.literal("y"), z = u.literal("z"),
                t = u.literal("t");
  const World w = World::from_term(u, Term{~x, ~y, z, t});

  const Formula a = quantify_set(f, Quantifier::Forall, {x, y, z});
  CHECK(qt::equiv(a, qt::parse(u, "(x | y | z) & (y | t)")));
  CHECK(evaluate(a, w));
  CHECK(is_independent_model(f, w, Term{~x, ~y}));

  const Formula b = quantify_set(f, Quantifier::Forall, {x, ~y, ~z});
  CHECK(qt::equiv(b, qt::parse(u, "x & t")));
  CHECK_FALSE(evaluate(b, w));
  CHECK_FALSE(is_independent_model(f, w, Term{~x, z}));
}

TEST_CASE("mixed sets of literals and variables in any order") {
  const Universe u{"x", "y", "z"};
  Rng rng(11);
  const Literal x = u.literal("x");
  const Variable X = u.variable("x"), Y = u.variable("y");
  for (int i = 0; i < 100; ++i) {
    const Formula f = random_formula(u, rng);
    const Formula a = quantify_set(f, Quantifier::Forall, {x, ~x, Y});
    const Formula b = quantify_set(f, Quantifier::Forall, {x, Y, ~x});
    const Formula c = quantify_set(f, Quantifier::Forall, {Y, X});
    CHECK(qt::equiv(a, b));
    CHECK(qt::equiv(b, c));
  }
}

TEST_CASE("universal literal quantification selects independent models") {
  Rng rng(5);
  for (std::size_t n = 1; n <= 6; ++n) {
    const Universe u(n);
    for (int i = 0; i < 60; ++i) {
      const Formula f = random_formula(u, rng);
      std::vector<Literal> lits;
      const std::size_t k = pick(rng, n + 1);
      for (std::size_t j = 0; j < k; ++j)
        lits.push_back(random_literal(u, rng));
      const Formula q = quantify_set(f, Quantifier::Forall, std::span<const Literal>(lits));
      CHECK(truth_table(q) == select_by_brute_force(f, lits));
    }
  }
}

TEST_CASE("quantifying terms and clauses") {
  const Universe u{"x", "y", "z"};
  const Literal x = u.literal("x");
  const Variable X = u.variable("x");
  const Formula term = qt::parse(u, "x & ~y");
  const Formula clause = qt::parse(u, "x | ~y");

  CHECK(qt::equiv(forall_variable(term, X), Formula::bottom(u)));
  CHECK(qt::equiv(forall_literal(term, x), term));
  CHECK(qt::equiv(forall_literal(term, ~x), Formula::bottom(u)));

  CHECK(qt::equiv(forall_variable(clause, X), qt::parse(u, "~y")));
  CHECK(qt::equiv(forall_literal(clause, x), clause));
  CHECK(qt::equiv(forall_literal(clause, ~x), qt::parse(u, "~y")));

  CHECK(qt::equiv(exists_variable(term, X), qt::parse(u, "~y")));
  CHECK(qt::equiv(exists_literal(term, x), qt::parse(u, "~y")));
  CHECK(qt::equiv(exists_literal(term, ~x), term));

  CHECK(qt::equiv(exists_variable(clause, X), Formula::top(u)));
  CHECK(qt::equiv(exists_literal(clause, x), Formula::top(u)));
  CHECK(qt::equiv(exists_literal(clause, ~x), clause));
}

TEST_CASE("duality and sandwich on random formulas") {
  Rng rng(17);
  for (std::size_t n = 1; n <= 6; ++n) {
    const Universe u(n);
    for (int i = 0; i < 60; ++i) {
      const Formula f = random_formula(u, rng);
      const Literal l = random_literal(u, rng);
      CHECK(qt::equiv(forall_literal(f, l), negate(exists_literal(negate(f), l))));
      CHECK(entails(forall_literal(f, ~l), f));
      CHECK(entails(f, exists_literal(f, l)));
      // Universal quantification only removes models, existential only adds.
      CHECK(entails(forall_literal(f, l), f));
      CHECK(entails(f, exists_literal(f, ~l)));
    }
  }
}

TEST_CASE("quantify_set accepts repeats and conflicting literals") {
  const Universe u{"x", "y"};
  const Formula f = qt::parse(u, "x | y");
  const Literal x = u.literal("x");
  CHECK(qt::equiv(quantify_set(f, Quantifier::Forall, {x, x}), forall_literal(f, x)));
  CHECK(qt::equiv(quantify_set(f, Quantifier::Forall, {x, ~x}),
                  forall_variable(f, u.variable("x"))));
  CHECK(qt::equiv(quantify_set(f, Quantifier::Exists, {~x, x}),
                  exists_variable(f, u.variable("x"))));
  CHECK(quantify_set(f, Quantifier::Exists, std::span<const Item>{}).identical(f));
}
