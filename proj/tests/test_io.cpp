#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace qlit;

namespace {

template <class F> ParseError parse_error(F &&fn) {
  try {
    fn();
  } catch (const ParseError &e) {
    return e;
  }
  FAIL("expected a ParseError");
  throw std::logic_error("unreachable");
}

bool equiv(const Circuit &c, const Formula &f) { return truth_table(c) == truth_table(f); }

} // namespace

TEST_CASE("DIMACS: the loan CNF") {
  const Cnf d = parse_dimacs(qt::data("loan.cnf"));
  const Universe &u = d.universe();
  CHECK(u.names() == std::vector<std::string>{"d", "g", "h", "i"});
  CHECK(d.size() == 3);
  CHECK(qt::equiv(d.to_formula(), qt::parse(u, "(h | i) & (~d | g) & (~d | i)")));
  const Cnf again = parse_dimacs(emit_dimacs(d));
  CHECK(again == d);
  CHECK(again.universe().names() == u.names());
}

TEST_CASE("DIMACS: edge cases and errors") {
  const Cnf top = parse_dimacs("p cnf 1 0\n");
  CHECK(top.is_true());
  CHECK(top.universe().size() == 1);

  CHECK(parse_error([] { parse_dimacs("p cnf 2 1\n1 -1 0\n"); }).line() == 2);
  CHECK(parse_error([] { parse_dimacs("c hi\np cnf 2 1\n1 3 0\n"); }).line() == 3);
  CHECK(parse_error([] { parse_dimacs("p cnf 2 2\n1 2 0\n"); }).line() == 1);
  CHECK(parse_error([] { parse_dimacs("p cnf x 2\n"); }).line() == 1);
  CHECK(parse_error([] { parse_dimacs("1 2 0\n"); }).line() == 1);
  const ParseError e = parse_error([] { parse_dimacs("p cnf 2 1\n1 2\n"); });
  CHECK(e.line() >= 1);
  CHECK(e.column() >= 1);

  // Distinct messages for the distinct failures.
  const std::string taut = parse_error([] { parse_dimacs("p cnf 2 1\n1 -1 0\n"); }).what();
  const std::string range = parse_error([] { parse_dimacs("p cnf 2 1\n1 3 0\n"); }).what();
  const std::string count = parse_error([] { parse_dimacs("p cnf 2 2\n1 2 0\n"); }).what();
  CHECK(taut != range);
  CHECK(range != count);
}

TEST_CASE("DIMACS: DNF variant round trip") {
  const Universe u{"a", "b", "c"};
  const Dnf d(u, {Term{u.literal("a"), ~u.literal("b")}, Term{u.literal("c")}});
  CHECK(parse_dimacs_dnf(emit_dimacs(d)) == d);
}

TEST_CASE("NNF: the loan Decision-DNNF") {
  const Circuit c = parse_nnf(qt::data("loan.nnf"));
  CHECK(c.annotation() == Annotation::DecisionDnnf);
  CHECK(equiv(c, parse_dimacs(qt::data("loan.cnf")).to_formula()));
}

TEST_CASE("NNF: small files and errors") {
  const Circuit one = parse_nnf("nnf 1 0 1\nL 1\n");
  CHECK(one.size() == 1);
  CHECK(one.node(0).kind == Kind::Literal);
  CHECK(equiv(one, Formula::literal(one.universe(), Literal::pos(0))));

  CHECK(equiv(parse_nnf("nnf 1 0 1\nA 0\n"), Formula::top(Universe(1))));
  CHECK(equiv(parse_nnf("nnf 1 0 1\nO 0 0\n"), Formula::bottom(Universe(1))));

  // Forward reference.
  CHECK(parse_error([] { parse_nnf("nnf 2 1 1\nA 1 1\nL 1\n"); }).line() == 2);
  // Arity mismatch.
  CHECK(parse_error([] { parse_nnf("nnf 2 1 1\nL 1\nA 2 0\n"); }).line() == 3);
  // Header counts are checked.
  CHECK_THROWS_AS(parse_nnf("nnf 3 0 1\nL 1\n"), ParseError);
  // A decision-shaped header whose and-node is not decomposable.
  CHECK_THROWS_AS(parse_nnf("nnf 5 5 1\nL 1\nL -1\nA 2 0 1\nA 2 0 1\nO 1 2 2 3\n"), Error);
}

TEST_CASE("NNF: round trip on random circuits is the identity") {
  Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    const Universe u(1 + pick(rng, 6));
    const Circuit c = random_ddnnf(u, rng).circuit();
    const std::string text = emit_nnf(c);
    const Circuit back = parse_nnf(text);
    CHECK(emit_nnf(back) == text);
    CHECK(truth_table(back) == truth_table(c));
    CHECK(back.annotation() == Annotation::DecisionDnnf);
  }
}

TEST_CASE("SDD: parsing and errors") {
  const Sdd s = parse_sdd(qt::data("xnor.sdd"));
  CHECK(equiv(s.circuit(), qt::parse(s.circuit().universe(), "x <=> y")));

  const Sdd t = parse_sdd("T 0\n");
  CHECK(truth_table(t.circuit()).all());
  CHECK(truth_table(parse_sdd("F 3\n").circuit()).none());

  // Element count does not match the listed ids.
  CHECK(parse_error([] { parse_sdd("L 1 1\nL 2 2\nD 3 2 1 2\n"); }).line() == 3);
  CHECK(parse_error([] { parse_sdd("sdd 4\nL 1 1\n"); }).line() == 1);
  CHECK(parse_error([] { parse_sdd("L 1 1\nL 1 2\n"); }).line() == 2);
  CHECK(parse_error([] { parse_sdd("L 1 0\n"); }).line() == 1);

  // Primes x and ~y are not exclusive; the error names node 7.
  try {
    (void)parse_sdd("L 1 1\nL 2 2\nL 3 -2\nL 4 -1\nL 5 3\nL 6 -3\nD 7 2 1 5 3 6\n");
    FAIL("expected a StructureError");
  } catch (const StructureError &e) {
    CHECK(e.node() == 7);
  }
}

TEST_CASE("SDD: round trip on random circuits") {
  Rng rng(43);
  for (int i = 0; i < 60; ++i) {
    const Universe u(1 + pick(rng, 6));
    const Sdd s = random_sdd(u, rng);
    const std::string text = emit_sdd(s);
    const Sdd back = parse_sdd(text);
    CHECK(emit_sdd(back) == text);
    CHECK(truth_table(back.circuit()) == truth_table(s.circuit()));
  }
}

TEST_CASE("formulas: precedence and examples") {
  const Formula f = parse_formula("(x => y) & (y => x)");
  const Universe &u = f.universe();
  CHECK(u.names() == std::vector<std::string>{"x", "y"});
  CHECK(qt::equiv(f, qt::parse(u, "x <=> y")));
  CHECK(qt::equiv(parse_formula("true"), Formula::top(Universe(0))));

  const Universe v{"a", "b", "c"};
  CHECK(qt::equiv(qt::parse(v, "a | b & c"), qt::parse(v, "a | (b & c)")));
  CHECK(qt::equiv(qt::parse(v, "~a & b"), qt::parse(v, "(~a) & b")));
  CHECK(qt::equiv(qt::parse(v, "a | b => c"), qt::parse(v, "(a | b) => c")));
  CHECK(qt::equiv(qt::parse(v, "a <=> b => c"), qt::parse(v, "a <=> (b => c)")));
  CHECK(qt::equiv(qt::parse(v, "a & false"), Formula::bottom(v)));

  CHECK_THROWS_AS(parse_formula("a & (b | c"), ParseError);
  CHECK_THROWS_AS(parse_formula("a & & b"), ParseError);
  CHECK_THROWS_AS(parse_formula("a & z", v), ParseError);
  const ParseError e = parse_error([] { parse_formula("a &\n  | b"); });
  CHECK(e.line() == 2);
  CHECK(e.column() == 3);
}

TEST_CASE("formulas: files with declared variables") {
  const Formula f = parse_formula_file(qt::data("fig1.formula"));
  CHECK(f.universe().names() == std::vector<std::string>{"x", "y", "z"});
  const Formula g = parse_formula_file("# vars: p q r\n# a comment\nq | ~r\n");
  CHECK(g.universe().names() == std::vector<std::string>{"p", "q", "r"});
}

TEST_CASE("formulas: print and parse round trip") {
  Rng rng(47);
  for (int i = 0; i < 200; ++i) {
    const Universe u(1 + pick(rng, 6));
    const Formula f = random_formula(u, rng);
    const Formula back = parse_formula_file(emit_formula(f));
    CHECK(back.universe().names() == u.names());
    CHECK(truth_table(back) == truth_table(f));
  }
}

TEST_CASE("bundles") {
  const Classifier c = parse_bundle(qt::data("admission.bundle"));
  CHECK(c.features().names() == std::vector<std::string>{"e", "f", "g", "r", "w"});
  REQUIRE(c.protected_features().size() == 1);
  CHECK(c.features().name(c.protected_features()[0].id) == "r");
  CHECK(c.cnf(Side::Positive)->size() == 5);
  CHECK(c.cnf(Side::Negative)->size() == 4);

  const Classifier back = parse_bundle(emit_bundle(c));
  CHECK(truth_table(back.positive()) == truth_table(c.positive()));
  CHECK(back.protected_features() == c.protected_features());

  // Only Δ given: ¬Δ is derived.
  const Classifier one = parse_bundle("var 1 a\nvar 2 b\nsection delta\np cnf 2 1\n1 2 0\n");
  CHECK(qt::equiv(one.negative(), qt::parse(one.features(), "~a & ~b")));

  CHECK_THROWS_AS(parse_bundle("var 1 a\nprotected zz\nsection delta\np cnf 1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_bundle("var 1 a\n"), ParseError);
  CHECK_THROWS_AS(parse_bundle("var 1 a\nsection delta\np cnf 1 1\n1 0\nsection negdelta\n"
                               "p cnf 1 1\n1 0\n"),
                  PreconditionError);
}

TEST_CASE("command-line literal lists") {
  const Universe u{"e", "f", "g"};
  CHECK(parse_literals("e, ~f", u) == std::vector<Literal>{u.literal("e"), ~u.literal("f")});
  CHECK(parse_literals("-e !f g", u).size() == 3);
  CHECK(parse_literals("true", u).empty());
  CHECK(parse_literals("", u).empty());
  CHECK_THROWS_AS(parse_literals("e,q", u), ParseError);
  CHECK_THROWS_AS(parse_term("e,~e", u), ParseError);
  CHECK(parse_term("g,e", u) == Term{u.literal("e"), u.literal("g")});
}
