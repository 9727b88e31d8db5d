// Acceptance run: one line per criterion, then a summary. Exits non-zero only
// when a criterion fails for a reason that is not a known, documented
// deviation.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "qlit/checks.hpp"
#include "qlit/qlit.hpp"

using namespace qlit;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { Pass, Fail, Deviation };

struct Line {
  int id;
  std::string title;
  Status status;
  std::string detail;
};

std::string read(const std::string &name) {
  std::ifstream in(std::string(QLIT_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

bool same(const Formula &a, const Formula &b) { return truth_table(a) == truth_table(b); }
bool same(const Circuit &a, const Formula &b) { return truth_table(a) == truth_table(b); }

std::set<std::string> strings(const std::vector<Term> &ts, const Universe &u) {
  std::set<std::string> out;
  for (const Term &t : ts)
    out.insert(to_string(t, u));
  return out;
}

// Collects named checks and remembers the first one that failed.
struct Tally {
  int passed = 0, total = 0;
  std::string failed;
  void operator()(bool ok, const std::string &what) {
    ++total;
    if (ok)
      ++passed;
    else if (failed.empty())
      failed = what;
  }
  bool ok() const { return passed == total; }
  std::string text() const {
    std::string s = std::to_string(passed) + "/" + std::to_string(total) + " checks";
    if (!failed.empty())
      s += ", first failure: " + failed;
    return s;
  }
};

Line loan_golden() {
  const auto start = Clock::now();
  const Classifier c = parse_bundle(read("loan.bundle"));
  const Universe &u = c.features();
  auto f = [&](const char *text) { return parse_formula(text, u); };
  auto vars = [&](std::initializer_list<const char *> names) {
    std::vector<Variable> out;
    for (const char *n : names)
      out.push_back(u.variable(n));
    return out;
  };
  const Literal nd_nh[] = {~u.literal("d"), ~u.literal("h")};
  Tally t;
  t(same(instances_independent_of_features(c, Side::Positive, vars({"d", "h"})), f("g & i")),
    "forall D,H . delta");
  t(same(instances_independent_of_features(c, Side::Positive, vars({"d", "g"})), Formula::bottom(u)),
    "forall D,G . delta");
  t(same(instances_independent_of_features(c, Side::Negative, vars({"d", "g"})), f("~h & ~i")),
    "forall D,G . ~delta");
  t(same(quantify_set(c.negative(), Quantifier::Forall, std::span<const Literal>(nd_nh)),
         f("~h & ~i")),
    "forall ~d,~h . ~delta");
  t(same(instances_independent_of_features(c, Side::Negative, vars({"d", "h"})), Formula::bottom(u)),
    "forall D,H . ~delta");
  const double secs = seconds_since(start);
  t(secs < 1.0, "runtime under 1 s");
  std::ostringstream d;
  d << t.text() << ", " << secs << " s";
  return {1, "loan classifier golden suite", t.ok() ? Status::Pass : Status::Fail, d.str()};
}

Line admission_reasons() {
  const Classifier c = parse_bundle(read("admission.bundle"));
  const Universe &u = c.features();
  auto reasons = [&](const char *g) {
    return strings(sufficient_reasons(c, parse_term(g, u)).sufficient, u);
  };
  Tally t;
  t(reasons("e,f,g,w,~r") == std::set<std::string>{"e,f,g", "e,f,w"}, "reasons of e,f,g,w,~r");
  t(reasons("e,f,g,w,r") ==
        std::set<std::string>{"e,f,g", "e,f,w", "e,g,r", "e,r,w", "g,r,w"},
    "reasons of e,f,g,w,r");
  const Term g = parse_term("e,~f,g,r,w", u);
  t(same(complete_reason(c, g), parse_formula("(e | g) & (e | w) & r & (~f | g | w)", u)),
    "complete reason of e,~f,g,r,w");
  t(reasons("e,~f,g,r,w") == std::set<std::string>{"e,g,r", "e,r,w", "e,~f,r", "g,r,w"},
    "prime implicants of that complete reason");
  t(reasons("~e,~f,~r") == std::set<std::string>{"~e,~r", "~f,~r"}, "reasons of ~e,~f,~r");
  return {2, "admission classifier reasons", t.ok() ? Status::Pass : Status::Fail, t.text()};
}

Line admission_bias() {
  const Classifier c = parse_bundle(read("admission.bundle"));
  const Universe &u = c.features();
  const Formula b = biased_instances(c, Side::Positive);
  Tally t;
  t(same(b, parse_formula("(e | g) & (e | w) & r & (~f | g) & (~f | w) & (~e | ~f)", u)),
    "six-clause formula");
  t(same(b & parse_formula("~e", u), parse_formula("~e & g & r & w", u)), "conjoined with ~e");
  return {3, "decision bias", t.ok() ? Status::Pass : Status::Fail, t.text()};
}

Line figure_one() {
  const Formula f = parse_formula_file(read("fig1.formula"));
  const Universe &u = f.universe();
  std::set<std::string> rules, models;
  for (const BRule &r : b_rules(f).rules())
    rules.insert(to_string(r, u));
  for (const World &w : enumerate_models(f).worlds())
    models.insert(to_string(w.term(), u));
  Tally t;
  t(rules == std::set<std::string>{"~x,z -> y", "~y,z -> x", "~x,y -> z", "x,~y -> z",
                                   "y,~z -> x", "x,~z -> y"},
    "six b-rules");
  t(models == std::set<std::string>{"~x,y,z", "x,~y,z", "x,y,~z", "x,y,z"}, "four models");
  return {4, "figure 1 b-rules and models", t.ok() ? Status::Pass : Status::Fail, t.text()};
}

Line circuit_path() {
  const Circuit c = parse_nnf(read("loan.nnf"));
  const Universe &u = c.universe();
  Tally t;
  t(c.annotation() == Annotation::DecisionDnnf, "annotated Decision-DNNF");
  const DecisionDnnf d = DecisionDnnf::verify(c);
  const Literal lits[] = {u.literal("d")};
  const Formula delta = to_formula(c);
  t(same(ddnnf_exists(d, lits), exists_literal(delta, lits[0])), "exists d");
  t(same(ddnnf_forall(d, lits), parse_formula("i & g", u)), "forall d is i & g");
  return {5, "Decision-DNNF exists/forall on d", t.ok() ? Status::Pass : Status::Fail, t.text()};
}

Line counting_families() {
  Tally chains;
  bool xor_as_stated = true, xor_as_defined = true;
  for (std::size_t n = 2; n <= 10; ++n) {
    const Universe u(n);
    std::vector<Formula> lits;
    for (VarId v = 0; v < n; ++v)
      lits.push_back(Formula::literal(u, Literal::pos(v)));
    const RuleSet a = b_rules(Formula::conjoin(u, lits));
    const RuleSet o = b_rules(Formula::disjoin(u, lits));
    const std::string at = " at n=" + std::to_string(n);
    chains(boundary_worlds(a).size() == 1 && a.size() == n, "conjunction" + at);
    chains(boundary_worlds(o).size() == n && o.size() == n, "disjunction" + at);

    Formula x = lits[0];
    for (std::size_t i = 1; i < n; ++i)
      x = (x & ~lits[i]) | (~x & lits[i]);
    const std::size_t got = b_rules(x).size();
    const std::size_t half = std::size_t{1} << (n - 1);
    // Each of the 2^(n-1) parity models flips out on every one of its n
    // variables, so the definition gives n * 2^(n-1).
    xor_as_defined = xor_as_defined && got == n * half;
    xor_as_stated = xor_as_stated && got == (n - 1) * half;
  }
  std::string detail = "conjunction/disjunction " + chains.text() +
                       "; XOR b-rules " + (xor_as_defined ? "= n*2^(n-1)" : "!= n*2^(n-1)") +
                       ", stated count (n-1)*2^(n-1) " + (xor_as_stated ? "matches" : "not met");
  if (!chains.ok() || !xor_as_defined)
    return {6, "counting families", Status::Fail, detail};
  if (!xor_as_stated)
    return {6, "counting families", Status::Deviation,
            detail + " (documented: the stated XOR count contradicts the b-rule definition)"};
  return {6, "counting families", Status::Pass, detail};
}

Line property_suites() {
  const auto start = Clock::now();
  std::ostringstream d;
  bool ok = true;
  for (const Suite &s : suites()) {
    const SuiteResult r = s.run({8, 1000, 0});
    ok = ok && r.ok();
    d << s.name << ' ' << r.passed << '/' << r.trials;
    if (!r.first_failure.empty())
      d << " (" << r.first_failure << ')';
    d << "; ";
  }
  const double secs = seconds_since(start);
  ok = ok && secs <= 300;
  d << secs << " s";
  return {7, "property suites, 1000 trials each, up to 8 variables", ok ? Status::Pass : Status::Fail,
          d.str()};
}

struct Fit {
  double slope = 0, r2 = 0;
};

Fit linear_fit(const std::vector<double> &x, const std::vector<double> &y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double cov = sxy - sx * sy / n, vx = sxx - sx * sx / n, vy = syy - sy * sy / n;
  return {cov / vx, vy > 0 ? cov * cov / (vx * vy) : 1.0};
}

// Best of five runs, to keep scheduler noise out of the fit.
double best_time(const std::function<void()> &fn) {
  double best = 1e300;
  for (int i = 0; i < 5; ++i) {
    const auto t = Clock::now();
    fn();
    best = std::min(best, seconds_since(t));
  }
  return best;
}

Line linearity() {
  const std::vector<std::size_t> sizes = {1000,   2000,   5000,   10000,  20000,
                                          50000,  100000, 200000, 500000, 1000000};
  Rng rng(8);
  std::vector<double> xs, cnf_lit, cnf_set, dd;
  bool bounded = true;
  for (std::size_t size : sizes) {
    const Cnf c = ladder_cnf(size, rng);
    const Universe &u = c.universe();
    // A handful of single-literal passes, and one pass over every hundredth
    // variable. Sparse enough that no clause loses all its literals, which
    // would end the pass early with ⊥.
    std::vector<Literal> few, sparse;
    for (VarId v = 0; v < 4; ++v)
      few.push_back(Literal{Variable{v}, coin(rng)});
    for (VarId v = 0; v < u.size(); v += 100)
      sparse.push_back(Literal{Variable{v}, coin(rng)});
    Cnf out(u);
    cnf_lit.push_back(best_time([&] {
      out = c;
      for (Literal l : few)
        out = cnf_forall_literal(out, l);
    }));
    bounded = bounded && out.literal_count() <= c.literal_count();
    cnf_set.push_back(best_time([&] { out = cnf_forall(c, sparse); }));
    bounded = bounded && !out.is_false() && out.literal_count() <= c.literal_count();

    const DecisionDnnf d = ladder_ddnnf(size, rng);
    std::vector<Literal> lits;
    for (VarId v = 0; v < d.circuit().universe().size(); v += 2)
      lits.push_back(Literal{Variable{v}, coin(rng)});
    Circuit q(d.circuit().universe());
    dd.push_back(best_time([&] { q = ddnnf_forall(d, lits); }));
    bounded = bounded && q.size() <= d.circuit().size() &&
              q.edge_count() <= d.circuit().edge_count();
    xs.push_back(static_cast<double>(size));
    if (std::getenv("QLIT_ACCEPTANCE_TIMES"))
      std::cerr << size << ' ' << cnf_lit.back() << ' ' << cnf_set.back() << ' ' << dd.back()
                << '\n';
  }
  const Fit a = linear_fit(xs, cnf_lit), b = linear_fit(xs, cnf_set), c = linear_fit(xs, dd);
  const bool ok = a.r2 >= 0.98 && b.r2 >= 0.98 && c.r2 >= 0.98 && bounded;
  std::ostringstream d;
  d << "R^2 cnf_forall_literal " << a.r2 << ", cnf_forall " << b.r2 << ", ddnnf_forall " << c.r2
    << "; at 10^6: " << cnf_lit.back() << " s, " << cnf_set.back() << " s, " << dd.back()
    << " s; output never larger: " << (bounded ? "yes" : "no");
  return {8, "linear-time quantification, 10^3 to 10^6", ok ? Status::Pass : Status::Fail, d.str()};
}

Line monotone_outputs() {
  Rng rng(9);
  int dd_ok = 0, sdd_ok = 0;
  constexpr int kCircuits = 200;
  for (int i = 0; i < kCircuits; ++i) {
    const Universe u(2 + pick(rng, 7));
    std::vector<Literal> lits;
    for (VarId v = 0; v < u.size(); ++v)
      lits.push_back(Literal{Variable{v}, coin(rng)});
    dd_ok += is_monotone(ddnnf_forall(random_ddnnf(u, rng), lits));
    sdd_ok += is_monotone(sdd_forall(random_sdd(u, rng), lits));
  }
  std::ostringstream d;
  d << "Decision-DNNF " << dd_ok << '/' << kCircuits << ", SDD " << sdd_ok << '/' << kCircuits;
  return {9, "monotone output after one literal per variable",
          dd_ok == kCircuits && sdd_ok == kCircuits ? Status::Pass : Status::Fail, d.str()};
}

const char *label(Status s) {
  switch (s) {
  case Status::Pass:
    return "PASS";
  case Status::Fail:
    return "FAIL";
  case Status::Deviation:
    return "FAIL (documented deviation)";
  }
  return "FAIL";
}

} // namespace

int main() {
  std::cout.setf(std::ios::fixed);
  std::cout.precision(4);
  const std::function<Line()> criteria[] = {loan_golden,  admission_reasons, admission_bias,
                                            figure_one,   circuit_path,      counting_families,
                                            property_suites, linearity,      monotone_outputs};
  int pass = 0, documented = 0, failed = 0;
  for (const auto &run : criteria) {
    Line l;
    try {
      l = run();
    } catch (const std::exception &e) {
      l = {0, "criterion threw", Status::Fail, e.what()};
    }
    std::cout << "criterion " << l.id << ": " << label(l.status) << "  " << l.title << "  ["
              << l.detail << "]\n"
              << std::flush;
    pass += l.status == Status::Pass;
    documented += l.status == Status::Deviation;
    failed += l.status == Status::Fail;
  }
  std::cout << pass << " passed, " << documented << " documented deviation(s), " << failed
            << " failed\n";
  return failed == 0 ? 0 : 1;
}
