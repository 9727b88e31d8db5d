#include <catch_amalgamated.hpp>

#include <type_traits>

#include "support.hpp"

using namespace qlit;

namespace {

bool equiv(const Circuit &c, const Formula &f) { return truth_table(c) == truth_table(f); }

// Every term over u, each variable absent, positive or negative.
std::vector<Term> every_term(const Universe &u) {
  std::vector<Term> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < u.size(); ++i)
    total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<Literal> lits;
    std::size_t c = code;
    for (VarId v = 0; v < u.size(); ++v, c /= 3)
      if (c % 3)
        lits.push_back(Literal{Variable{v}, c % 3 == 1});
    out.emplace_back(std::move(lits));
  }
  return out;
}

bool implies(const Universe &u, const Term &t, const TruthTable &f) {
  TruthTable tt(u.size(), true);
  for (Literal l : t)
    tt = tt & TruthTable::literal(u.size(), l);
  return (tt - f).none();
}

std::set<Term> primes_by_brute_force(const Universe &u, const TruthTable &f) {
  std::set<Term> out;
  for (const Term &t : every_term(u)) {
    if (!implies(u, t, f))
      continue;
    bool prime = true;
    for (Literal l : t)
      if (implies(u, t.without(l), f))
        prime = false;
    if (prime)
      out.insert(t);
  }
  return out;
}

} // namespace

TEST_CASE("CNF quantification on the loan classifier") {
  const Cnf d = parse_dimacs(qt::data("loan.cnf"));
  const Universe &u = d.universe();
  const Literal dd = u.literal("d"), h = u.literal("h");

  // ∀ drops complements from clauses.
  const Literal both[] = {dd, ~dd, h, ~h};
  Cnf q = d;
  for (Literal l : both)
    q = cnf_forall_literal(q, l);
  CHECK(qt::equiv(q.to_formula(), qt::parse(u, "g & i")));
  CHECK(q.literal_count() <= d.literal_count());

  const Cnf fd = cnf_forall_literal(d, dd);
  CHECK(qt::equiv(fd.to_formula(), forall_literal(d.to_formula(), dd)));
  CHECK(qt::equiv(fd.to_formula(), qt::parse(u, "(h | i) & g & i")));
}

TEST_CASE("CNF existential quantification needs closure") {
  const Universe u{"x", "y", "z"};
  const Literal x = u.literal("x");
  // Not closed on X: the resolvent y | z is missing.
  const Cnf d(u, {Clause{x, u.literal("y")}, Clause{~x, u.literal("z")}});
  CHECK_FALSE(is_closed(d, u.variable("x")));
  CHECK_THROWS_AS(cnf_exists_literal(d, x), PreconditionError);
  const Cnf e = cnf_exists_literal(d, x, ClosurePolicy::Close);
  CHECK(qt::equiv(e.to_formula(), exists_literal(d.to_formula(), x)));

  const Cnf closed = close_under(d, u.variable("x"));
  CHECK(is_closed(closed, u.variable("x")));
  CHECK(qt::equiv(cnf_exists_literal(closed, x).to_formula(), exists_literal(d.to_formula(), x)));
}

TEST_CASE("DNF quantification") {
  const Universe u{"x", "y", "z"};
  const Literal x = u.literal("x"), y = u.literal("y"), z = u.literal("z");
  const Dnf d(u, {Term{x, y}, Term{~x, z}});
  // ∃ drops the literal from terms.
  CHECK(qt::equiv(dnf_exists_literal(d, x).to_formula(), exists_literal(d.to_formula(), x)));
  CHECK(dnf_exists_literal(d, x).literal_count() <= d.literal_count());
  CHECK_THROWS_AS(dnf_forall_literal(d, x), PreconditionError);
  const Dnf f = dnf_forall_literal(d, x, ClosurePolicy::Close);
  CHECK(qt::equiv(f.to_formula(), forall_literal(d.to_formula(), x)));

  const Dnf closed(u, {Term{x, y}, Term{~x, z}, Term{y, z}});
  CHECK(is_closed(closed, u.variable("x")));
  CHECK(qt::equiv(dnf_forall_literal(closed, x).to_formula(), forall_literal(d.to_formula(), x)));
}

TEST_CASE("normal form routines agree with the definitions on random inputs") {
  Rng rng(23);
  for (std::size_t n = 1; n <= 6; ++n) {
    const Universe u(n);
    for (int i = 0; i < 40; ++i) {
      const Cnf c = random_cnf(u, rng, 1 + pick(rng, 6), 3);
      const Dnf d = random_dnf(u, rng, 1 + pick(rng, 6), 3);
      const Literal l = random_literal(u, rng);
      CHECK(qt::equiv(cnf_forall_literal(c, l).to_formula(), forall_literal(c.to_formula(), l)));
      CHECK(qt::equiv(cnf_exists_literal(c, l, ClosurePolicy::Close).to_formula(),
                      exists_literal(c.to_formula(), l)));
      CHECK(qt::equiv(dnf_exists_literal(d, l).to_formula(), exists_literal(d.to_formula(), l)));
      CHECK(qt::equiv(dnf_forall_literal(d, l, ClosurePolicy::Close).to_formula(),
                      forall_literal(d.to_formula(), l)));
      std::vector<Literal> lits;
      for (std::size_t k = pick(rng, n + 1); k > 0; --k)
        lits.push_back(random_literal(u, rng));
      CHECK(qt::equiv(cnf_forall(c, lits).to_formula(),
                      quantify_set(c.to_formula(), Quantifier::Forall, lits)));
      CHECK(qt::equiv(dnf_exists(d, lits).to_formula(),
                      quantify_set(d.to_formula(), Quantifier::Exists, lits)));
    }
  }
}

TEST_CASE("prime implicants and implicates") {
  const Universe u{"x", "y"};
  const Formula xnor = qt::parse(u, "x <=> y");
  CHECK(qt::term_strings(prime_implicants(xnor).terms(), u) ==
        std::set<std::string>{"x,y", "~x,~y"});
  CHECK(prime_implicates(xnor).size() == 2);
  CHECK(prime_implicants(Formula::top(u)).is_true());
  CHECK(prime_implicates(Formula::top(u)).is_true());
  CHECK(prime_implicants(Formula::bottom(u)).is_false());

  // The complete reason for (e,~f,g,r,w) in the admission example.
  const Universe a{"e", "f", "g", "r", "w"};
  const Formula reason = qt::parse(a, "(e | g) & (e | w) & r & (~f | g | w)");
  const Dnf pi = prime_implicants(reason);
  CHECK(qt::term_strings(pi.terms(), a) ==
        std::set<std::string>{"e,~f,r", "e,g,r", "e,r,w", "g,r,w"});
  const std::set<Term> expected = primes_by_brute_force(a, truth_table(reason));
  CHECK(std::set<Term>(pi.terms().begin(), pi.terms().end()) == expected);

  CHECK_THROWS_AS(prime_implicants(Formula::top(Universe(17))), CapacityError);
}

TEST_CASE("prime forms match brute force on random formulas") {
  Rng rng(29);
  for (std::size_t n = 1; n <= 5; ++n) {
    const Universe u(n);
    for (int i = 0; i < 30; ++i) {
      const Formula f = random_formula(u, rng);
      const Dnf pi = prime_implicants(f);
      CHECK(std::set<Term>(pi.terms().begin(), pi.terms().end()) ==
            primes_by_brute_force(u, truth_table(f)));
      // Prime implicates of f are the complemented prime implicants of ¬f.
      const Cnf pc = prime_implicates(f);
      CHECK(qt::equiv(pc.to_formula(), f));
      const Cnf from_cnf = prime_implicates(pc);
      CHECK(from_cnf == pc);
    }
  }
}

TEST_CASE("loan Decision-DNNF: exists and forall on d") {
  const Circuit c = parse_nnf(qt::data("loan.nnf"));
  const Universe &u = c.universe();
  const DecisionDnnf d = DecisionDnnf::verify(c);
  CHECK(equiv(c, qt::parse(u, "(h | i) & (~d | g) & (~d | i)")));
  const Literal lits[] = {u.literal("d")};

  const Circuit e = ddnnf_exists(d, lits);
  CHECK(equiv(e, exists_literal(to_formula(c), lits[0])));
  CHECK(e.size() <= c.size());
  CHECK(is_decomposable(e));

  const Circuit f = ddnnf_forall(d, lits);
  CHECK(equiv(f, qt::parse(u, "i & g")));
  CHECK(equiv(f, forall_literal(to_formula(c), lits[0])));
}

TEST_CASE("shifting a single decision node") {
  const Universe u{"x", "y", "z"};
  CircuitBuilder b(u, CircuitBuilder::Mode::Raw);
  const auto x = b.literal(u.literal("x")), nx = b.literal(~u.literal("x"));
  const auto y = b.literal(u.literal("y")), z = b.literal(u.literal("z"));
  const auto root = b.disjoin({b.conjoin({x, y}), b.conjoin({nx, z})}, 0);
  const DecisionDnnf d = DecisionDnnf::verify(std::move(b).finish(root, Annotation::DecisionDnnf));

  const Circuit s = ddnnf_shift(d);
  CHECK(equiv(s, qt::parse(u, "(x & y) | (~x & z)")));
  CHECK(has_disjoint_disjuncts(s));
  CHECK(s.node(s.root()).kind == Kind::And);

  const Literal lit[] = {u.literal("x")};
  CHECK(equiv(ddnnf_forall(d, lit), qt::parse(u, "(x | z) & y")));
  const Literal nlit[] = {~u.literal("x")};
  CHECK(equiv(ddnnf_forall(d, nlit), qt::parse(u, "(~x | y) & z")));
}

TEST_CASE("SDD for x <=> y") {
  const Sdd s = parse_sdd(qt::data("xnor.sdd"));
  const Universe &u = s.circuit().universe();
  const Literal x = u.literal("x");
  const Literal lx[] = {x}, lnx[] = {~x};
  CHECK(equiv(s.circuit(), qt::parse(u, "x <=> y")));
  CHECK(equiv(sdd_exists(s, lx), qt::parse(u, "~x | y")));
  CHECK(equiv(sdd_exists(s, lnx), qt::parse(u, "x | ~y")));
  CHECK(equiv(sdd_forall(s, lx), qt::parse(u, "x & y")));
  CHECK(equiv(sdd_forall(s, lnx), qt::parse(u, "~x & ~y")));
  const Circuit sh = sdd_shift(s);
  CHECK(equiv(sh, qt::parse(u, "x <=> y")));
  CHECK(has_disjoint_disjuncts(sh));
}

TEST_CASE("circuit routines agree with the definitions on random circuits") {
  Rng rng(31);
  for (std::size_t n = 2; n <= 7; ++n) {
    const Universe u(n);
    for (int i = 0; i < 25; ++i) {
      const DecisionDnnf d = random_ddnnf(u, rng);
      const Sdd s = random_sdd(u, rng);
      std::vector<Literal> lits;
      for (std::size_t k = pick(rng, n + 1); k > 0; --k)
        lits.push_back(random_literal(u, rng));
      const Formula fd = to_formula(d.circuit()), fs = to_formula(s.circuit());
      CHECK(equiv(ddnnf_exists(d, lits), quantify_set(fd, Quantifier::Exists, lits)));
      CHECK(equiv(ddnnf_forall(d, lits), quantify_set(fd, Quantifier::Forall, lits)));
      CHECK(equiv(sdd_exists(s, lits), quantify_set(fs, Quantifier::Exists, lits)));
      CHECK(equiv(sdd_forall(s, lits), quantify_set(fs, Quantifier::Forall, lits)));
      CHECK(equiv(ddnnf_shift(d), fd));
      CHECK(equiv(sdd_shift(s), fs));
    }
  }
}

TEST_CASE("quantifying one literal per variable leaves a monotone circuit") {
  Rng rng(37);
  for (int i = 0; i < 50; ++i) {
    const Universe u(2 + pick(rng, 6));
    const DecisionDnnf d = random_ddnnf(u, rng);
    std::vector<Literal> lits;
    for (VarId v = 0; v < u.size(); ++v)
      lits.push_back(Literal{Variable{v}, coin(rng)});
    CHECK(is_monotone(ddnnf_forall(d, lits)));
    const Sdd s = random_sdd(u, rng);
    CHECK(is_monotone(sdd_forall(s, lits)));
  }
}

TEST_CASE("Decision-DNNF and SDD routines only take verified circuits") {
  static_assert(!std::is_convertible_v<Circuit, DecisionDnnf>);
  static_assert(!std::is_constructible_v<DecisionDnnf, Circuit>);
  static_assert(!std::is_constructible_v<Sdd, Circuit>);
  static_assert(!std::is_invocable_v<decltype(&ddnnf_forall), const Circuit &,
                                     std::span<const Literal>>);
  static_assert(!std::is_invocable_v<decltype(&sdd_forall), const DecisionDnnf &,
                                     std::span<const Literal>>);
  SUCCEED();
}

TEST_CASE("structure errors name the offending node") {
  // An or-node that is not a decision.
  const Circuit plain = parse_nnf("nnf 3 2 2\nL 1\nL 2\nO 0 2 0 1\n");
  try {
    (void)DecisionDnnf::verify(plain);
    FAIL("expected a StructureError");
  } catch (const StructureError &e) {
    CHECK(e.node() == 2);
  }
  // An and-node whose children share x.
  const Circuit shared = parse_nnf("nnf 5 4 2\nL 1\nL 2\nO 0 2 0 1\nL -1\nA 2 2 3\n");
  CHECK_THROWS_AS(DecisionDnnf::verify(shared), StructureError);
  CHECK_FALSE(is_decomposable(shared));

  // Primes x and x are not exclusive, and ~x is not covered.
  CHECK_THROWS_AS(parse_sdd("L 1 1\nL 2 2\nL 3 -2\nD 4 2 1 2 1 3\n"), StructureError);
}
