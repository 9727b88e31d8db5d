#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qlit/cli.hpp"
#include "support.hpp"

using namespace qlit;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args, const std::string &input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = qlit::cli::run(std::move(args), in, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const char *name) { return std::string(QLIT_DATA_DIR) + "/" + name; }

bool has_line(const std::string &text, const std::string &line) {
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);)
    if (l == line)
      return true;
  return false;
}

} // namespace

TEST_CASE("cli: quantify the loan CNF") {
  const Outcome r = invoke({"quantify", "--op", "forall", "--items", "D,H", "--in", path("loan.cnf")});
  REQUIRE(r.code == 0);
  const Cnf out = parse_dimacs(r.out);
  CHECK(qt::equiv(out.to_formula(), qt::parse(out.universe(), "g & i")));

  const auto tmp = std::filesystem::temp_directory_path() / "qlit_test_out.cnf";
  const Outcome w = invoke({"quantify", "--op", "forall", "--items", "D,H", "--in",
                         path("loan.cnf"), "--out", tmp.string()});
  REQUIRE(w.code == 0);
  CHECK(w.out.starts_with("cnf: "));
  CHECK(parse_dimacs(qt::read_file(tmp.string())) == out);
  std::filesystem::remove(tmp);
}

TEST_CASE("cli: auto and formula representations agree") {
  for (const char *file : {"loan.cnf", "loan.nnf", "xnor.sdd", "fig1.formula", "xnor.formula"}) {
    for (const char *op : {"forall", "exists"}) {
      CAPTURE(file, op);
      const Outcome a = invoke({"--json", "quantify", "--op", op, "--items", "~x,y,d,~h", "--in", path(file)});
      const Outcome f = invoke({"--json", "quantify", "--op", op, "--items", "~x,y,d,~h", "--in",
                             path(file), "--repr", "formula"});
      // Not every file has these names; both fail the same way then.
      CHECK(a.code == f.code);
      if (a.code != 0)
        continue;
      const auto ja = nlohmann::json::parse(a.out), jf = nlohmann::json::parse(f.out);
      CHECK(jf["repr"] == "formula");
      const Formula fa = parse_formula(ja["result"].get<std::string>());
      const Formula ff = parse_formula(jf["result"].get<std::string>(), fa.universe());
      CHECK(truth_table(fa) == truth_table(ff));
    }
  }
}

TEST_CASE("cli: quantify with explicit representations") {
  const Outcome e = invoke({"quantify", "--op", "exists", "--items", "x", "--in", path("xnor.sdd"),
                         "--repr", "sdd"});
  REQUIRE(e.code == 0);
  const Circuit c = parse_nnf(e.out);
  CHECK(truth_table(c) == truth_table(qt::parse(c.universe(), "~x | y")));

  const Outcome d = invoke({"quantify", "--op", "forall", "--items", "d", "--in", path("loan.nnf")});
  REQUIRE(d.code == 0);
  const Circuit dc = parse_nnf(d.out);
  CHECK(truth_table(dc) == truth_table(qt::parse(dc.universe(), "i & g")));

  // A formula file cannot take the CNF path: a usage error.
  CHECK(invoke({"quantify", "--op", "forall", "--items", "x", "--in", path("fig1.formula"),
                "--repr", "cnf"})
            .code == 2);

  // Not closed under resolution on x1: refused on the CNF path, while auto
  // falls back to the definition.
  const auto tmp = std::filesystem::temp_directory_path() / "qlit_test_open.cnf";
  std::ofstream(tmp) << "p cnf 3 2\n1 2 0\n-1 3 0\n";
  const std::vector<std::string> base = {"quantify", "--op", "exists", "--items", "x1", "--in",
                                         tmp.string()};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return invoke(a);
  };
  CHECK(with({"--repr", "cnf"}).code == 1);
  CHECK(with({"--repr", "cnf", "--close"}).code == 0);
  const Outcome fallback = with({"--json"});
  CHECK(fallback.code == 0);
  CHECK(nlohmann::json::parse(fallback.out)["repr"] == "formula");
  std::filesystem::remove(tmp);
}

TEST_CASE("cli: b-rules") {
  const Outcome r = invoke({"brules", "--in", path("fig1.formula")});
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "models 4, boundary models 3, b-rules 6"));
  CHECK(has_line(r.out, "  ~x,z -> y"));
  CHECK(has_line(r.out, "  x,~z -> y"));

  const Outcome t = invoke({"brules", "--in", path("xnor.formula"), "--report-transition", "x"});
  REQUIRE(t.code == 0);
  CHECK(t.out.find("kept 2, deleted 2, introduced 0") != std::string::npos);

  const Outcome j = invoke({"--json", "brules", "--in", path("fig1.formula")});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["kind"] == "brules");
  CHECK(doc["items"].size() == 6);
  CHECK(doc["result"]["models"] == 4);
}

TEST_CASE("cli: classifier queries") {
  const std::string adm = path("admission.bundle"), loan = path("loan.bundle");

  const Outcome r = invoke({"reasons", "--classifier", adm, "--term", "e,f,g,w,~r"});
  REQUIRE(r.code == 0);
  CHECK(has_line(r.out, "decision: positive"));
  CHECK(has_line(r.out, "sufficient reasons (2):"));
  CHECK(has_line(r.out, "  (e,f,g)"));
  CHECK(has_line(r.out, "  (e,f,w)"));

  const Outcome j = invoke({"--json", "reasons", "--classifier", adm, "--term", "~e,~f,~r"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["kind"] == "reasons");
  CHECK(doc["result"] == "negative");
  CHECK(doc["items"] == nlohmann::json::array({"~e,~r", "~f,~r"}));

  CHECK(invoke({"decide", "--classifier", loan, "--term", "~d,h,i"}).out == "positive\n");

  const Outcome b = invoke({"bias", "--classifier", adm, "--term", "e,~f,g,r,w"});
  REQUIRE(b.code == 0);
  CHECK(has_line(b.out, "biased: yes"));
  CHECK(invoke({"bias", "--classifier", adm}).code == 0);

  const Outcome rel = invoke({"relevance", "--classifier", loan, "--term", "d,h,g,~i", "--features",
                           "D,H", "--characteristics", "~d,h"});
  REQUIRE(rel.code == 0);
  CHECK(has_line(rel.out, "features D,H: relevant"));
  CHECK(has_line(rel.out, "characteristics ~d,h: irrelevant"));
}

TEST_CASE("cli: exit codes") {
  const std::string loan = path("loan.bundle");
  // Logical refusals.
  const Outcome undecided = invoke({"reasons", "--classifier", loan, "--term", "d,~h"});
  CHECK(undecided.code == 1);
  CHECK(undecided.err.starts_with("refused: "));
  CHECK(invoke({"bias", "--classifier", loan}).code == 1);
  // Usage, parse and IO errors.
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"quantify", "--op", "sideways", "--items", "x", "--in", loan}).code == 2);
  CHECK(invoke({"decide", "--classifier", path("missing.bundle"), "--term", "d"}).code == 2);
  CHECK(invoke({"decide", "--classifier", loan, "--term", "d,zz"}).code == 2);
  CHECK(invoke({"check", "--property", "duality", "--vars", "40"}).code == 2);
  // Help is not an error.
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("cli: property checks are deterministic") {
  const std::vector<std::string> args = {"check", "--property", "duality", "--vars", "6",
                                         "--trials", "1000", "--seed", "0"};
  const Outcome a = invoke(args), b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == "1000/1000 pass\n");
  CHECK(a.out == b.out);

  const Outcome j = invoke({"--json", "check", "--property", "all", "--vars", "5", "--trials", "20"});
  CHECK(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["result"] == "pass");
  CHECK(doc["items"].size() == suites().size());
}

TEST_CASE("cli: identical queries give identical output") {
  const std::vector<std::string> args = {"--json", "bias", "--classifier", path("admission.bundle")};
  CHECK(invoke(args).out == invoke(args).out);
}

TEST_CASE("cli: REPL") {
  const std::string script = "load " + path("admission.bundle") +
                             "\n"
                             "reasons --term e,f,g,w,~r\n"
                             "decide --term e\n"
                             "nonsense\n"
                             "quit\n"
                             "decide --term e,f,g,w,r\n";
  const Outcome r = invoke({"repl"}, script);
  CHECK(r.code == 0);
  CHECK(r.out.find("loaded ") != std::string::npos);
  CHECK(r.out.find("  (e,f,w)") != std::string::npos);
  CHECK(r.out.find("undefined") != std::string::npos);
  CHECK(r.err.find("error") != std::string::npos);
  // Nothing after quit runs.
  CHECK(r.out.find("qlit> positive") == std::string::npos);
}
