/// @file  cli.hpp
/// @brief The `qlit` command line: quantification, b-rules, classifier
///        queries, the property harness and a REPL.
///
/// `run` is the whole program minus main(), so tests drive it with string
/// streams. Exit codes: 0 success, 1 logical refusal (undecided population,
/// unmet precondition, failed property), 2 usage, parse or I/O error.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "io.hpp"

namespace qlit::cli {

class IoError : public Error {
public:
  using Error::Error;
};

namespace detail {

using json = nlohmann::json;

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw IoError("cannot write " + path);
}

enum class Format { Cnf, Dnf, Nnf, Sdd, Formula, Bundle };

inline bool ends_with(const std::string &s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Format from the file extension, else from the first meaningful line.
inline Format sniff(const std::string &path, const std::string &text) {
  if (ends_with(path, ".bundle"))
    return Format::Bundle;
  if (ends_with(path, ".nnf"))
    return Format::Nnf;
  if (ends_with(path, ".sdd"))
    return Format::Sdd;
  for (auto [ln, line] : qlit::detail::lines_of(text)) {
    const auto toks = qlit::detail::split_ws(line);
    if (toks.empty() || toks[0].text == "c" || toks[0].text.starts_with("#"))
      continue;
    const auto &t0 = toks[0].text;
    if (t0 == "p" && toks.size() > 1)
      return toks[1].text == "dnf" ? Format::Dnf : Format::Cnf;
    if (t0 == "nnf")
      return Format::Nnf;
    if (t0 == "sdd")
      return Format::Sdd;
    if (t0 == "var" || t0 == "section" || t0 == "protected")
      return Format::Bundle;
    if ((t0 == "T" || t0 == "F" || t0 == "L" || t0 == "D") && toks.size() > 1 &&
        std::isdigit(static_cast<unsigned char>(toks[1].text[0])))
      return Format::Sdd;
    break;
  }
  return Format::Formula;
}

/// Whatever was read from an input file.
struct Input {
  Format format;
  std::optional<Cnf> cnf;
  std::optional<Dnf> dnf;
  std::optional<Circuit> circuit;
  std::optional<Sdd> sdd;
  std::optional<Formula> formula;
  std::optional<Classifier> classifier;

  Formula as_formula() const {
    if (formula)
      return *formula;
    if (cnf)
      return cnf->to_formula();
    if (dnf)
      return dnf->to_formula();
    if (sdd)
      return to_formula(sdd->circuit());
    if (circuit)
      return to_formula(*circuit);
    return classifier->positive();
  }
  const Universe &universe() const {
    if (formula)
      return formula->universe();
    if (cnf)
      return cnf->universe();
    if (dnf)
      return dnf->universe();
    if (sdd)
      return sdd->circuit().universe();
    if (circuit)
      return circuit->universe();
    return classifier->features();
  }
};

inline Input load(const std::string &path) {
  const std::string text = read_file(path);
  Input in{sniff(path, text), {}, {}, {}, {}, {}, {}};
  switch (in.format) {
  case Format::Cnf:
    in.cnf = parse_dimacs(text);
    break;
  case Format::Dnf:
    in.dnf = parse_dimacs_dnf(text);
    break;
  case Format::Nnf:
    in.circuit = parse_nnf(text);
    break;
  case Format::Sdd:
    in.sdd = parse_sdd(text);
    break;
  case Format::Formula:
    in.formula = parse_formula_file(text);
    break;
  case Format::Bundle:
    in.classifier = parse_bundle(text);
    break;
  }
  return in;
}

inline Classifier load_classifier(const std::string &path) {
  Input in = load(path);
  if (in.classifier)
    return *in.classifier;
  if (in.cnf)
    return Classifier::from_cnf(*in.cnf);
  return Classifier::from_formula(in.as_formula());
}

/// `--items` entries: `~x` and `x` are literals; a name that is not declared
/// but whose lower-case form is (`D` for `d`) denotes the whole variable.
inline std::vector<Item> parse_items(const std::string &text, const Universe &u) {
  std::vector<Item> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty())
      return;
    const bool neg = cur[0] == '~';
    const std::string name = neg ? cur.substr(1) : cur;
    if (auto v = u.find(name)) {
      out.emplace_back(Literal{*v, !neg});
    } else {
      std::string lower = name;
      for (char &ch : lower)
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      const auto lv = u.find(lower);
      if (neg || !lv || lower == name)
        throw ParseError("unknown item '" + cur + "'", 1, 1);
      out.emplace_back(*lv);
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch)))
      flush();
    else
      cur.push_back(ch);
  }
  flush();
  return out;
}

/// Variables named either as declared or capitalized.
inline std::vector<Variable> parse_variables(const std::string &text, const Universe &u) {
  std::vector<Variable> out;
  for (const Item &it : parse_items(text, u)) {
    if (const auto *l = std::get_if<Literal>(&it)) {
      if (!l->positive())
        throw ParseError("expected a variable, got a negative literal", 1, 1);
      out.push_back(l->variable());
    } else {
      out.push_back(std::get<Variable>(it));
    }
  }
  return out;
}

inline std::vector<Literal> expand(const std::vector<Item> &items) {
  std::vector<Literal> out;
  for (const Item &it : items) {
    if (const auto *l = std::get_if<Literal>(&it)) {
      out.push_back(*l);
    } else {
      const Variable x = std::get<Variable>(it);
      out.push_back({x, true});
      out.push_back({x, false});
    }
  }
  return out;
}

inline std::string item_text(const Item &it, const Universe &u) {
  if (const auto *l = std::get_if<Literal>(&it))
    return to_string(*l, u);
  std::string name = u.name(std::get<Variable>(it).id);
  for (char &ch : name)
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return name;
}

/// Readable form of a formula: its prime-implicate CNF when small enough.
inline std::string pretty(const Formula &f) {
  if (f.universe().size() <= kPrimeCap)
    return to_string(prime_implicates(f).to_formula());
  return to_string(f);
}

inline std::string pretty(const Cnf &d) { return to_string(d.sorted().to_formula()); }

inline std::string term_text(const Term &t, const Universe &u) {
  return "(" + to_string(t, u) + ")";
}

struct Options {
  bool json = false;
  // quantify
  std::string op, items, in, repr = "auto", out;
  bool close = false;
  // brules
  std::string transition;
  // classifier queries
  std::string classifier, term, protected_vars, features, characteristics;
  // check
  std::string property;
  std::size_t vars = 6, trials = 1000;
  std::uint64_t seed = 0;
};

class Runner {
public:
  Runner(std::ostream &out, std::ostream &err) : _out(out), _err(err) {}

  int quantify(const Options &o) {
    const Input in = load(o.in);
    const Universe &u = in.universe();
    const auto items = parse_items(o.items, u);
    const auto lits = expand(items);
    const Quantifier q = o.op == "forall" ? Quantifier::Forall : Quantifier::Exists;
    const ClosurePolicy policy = o.close ? ClosurePolicy::Close : ClosurePolicy::Verify;

    std::string repr = o.repr;
    std::string native;
    Formula result = Formula::top(u);

    auto need = [&](bool ok, const char *what) {
      if (!ok)
        throw ParseError(std::string("--repr ") + o.repr + " needs a " + what + " input", 1, 1);
    };
    auto via_cnf = [&] {
      Cnf d = *in.cnf;
      if (q == Quantifier::Forall)
        d = cnf_forall(d, lits);
      else
        for (Literal l : lits)
          d = cnf_exists_literal(d, l, policy);
      native = emit_dimacs(d);
      result = d.to_formula();
    };
    auto via_dnf = [&] {
      Dnf d = *in.dnf;
      if (q == Quantifier::Exists)
        d = dnf_exists(d, lits);
      else
        for (Literal l : lits)
          d = dnf_forall_literal(d, l, policy);
      native = emit_dimacs(d);
      result = d.to_formula();
    };
    auto via_ddnnf = [&] {
      const DecisionDnnf d = DecisionDnnf::verify(*in.circuit);
      const Circuit c = q == Quantifier::Forall ? ddnnf_forall(d, lits) : ddnnf_exists(d, lits);
      native = emit_nnf(c);
      result = to_formula(c);
    };
    auto via_sdd = [&] {
      const Circuit c = q == Quantifier::Forall ? sdd_forall(*in.sdd, lits) : sdd_exists(*in.sdd, lits);
      native = emit_nnf(c);
      result = to_formula(c);
    };
    auto via_formula = [&] {
      result = quantify_set(in.as_formula(), q, std::span<const Item>(items));
      native = emit_formula(result);
    };

    if (repr == "cnf") {
      need(in.cnf.has_value(), "CNF");
      via_cnf();
    } else if (repr == "dnf") {
      need(in.dnf.has_value(), "DNF");
      via_dnf();
    } else if (repr == "ddnnf") {
      need(in.circuit.has_value(), "Decision-DNNF");
      via_ddnnf();
    } else if (repr == "sdd") {
      need(in.sdd.has_value(), "SDD");
      via_sdd();
    } else if (repr == "formula") {
      via_formula();
    } else {
      // auto: the tractable routine when the input allows it.
      try {
        if (in.cnf) {
          repr = "cnf";
          via_cnf();
        } else if (in.dnf) {
          repr = "dnf";
          via_dnf();
        } else if (in.circuit && in.circuit->annotation() == Annotation::DecisionDnnf) {
          repr = "ddnnf";
          via_ddnnf();
        } else if (in.sdd) {
          repr = "sdd";
          via_sdd();
        } else {
          repr = "formula";
          via_formula();
        }
      } catch (const PreconditionError &) {
        // Not closed under resolution/consensus: fall back to the definition.
        repr = "formula";
        via_formula();
      }
    }

    if (!o.out.empty())
      write_file(o.out, native);
    if (o.json) {
      json j{{"kind", "quantify"}, {"repr", repr}, {"result", to_string(result)}, {"items", json::array()}};
      for (const Item &it : items)
        j["items"].push_back(item_text(it, u));
      if (o.out.empty())
        j["output"] = native;
      _out << j.dump(2) << '\n';
    } else if (o.out.empty()) {
      _out << native;
    } else {
      _out << repr << ": " << pretty(result) << '\n';
    }
    return 0;
  }

  int brules(const Options &o) {
    const Input in = load(o.in);
    const Formula f = in.as_formula();
    const Universe &u = f.universe();
    const ModelSet models = enumerate_models(f, u);
    const RuleSet rules = b_rules(models);
    const ModelSet boundary = boundary_worlds(rules);
    std::optional<TransitionReport> rep;
    if (!o.transition.empty()) {
      const auto l = parse_literals(o.transition, u);
      if (l.size() != 1)
        throw ParseError("--report-transition takes one literal", 1, 1);
      rep = brule_transition_report(f, l[0], u);
    }
    if (o.json) {
      json j{{"kind", "brules"},
             {"result", {{"models", models.size()}, {"boundary_models", boundary.size()},
                         {"rules", rules.size()}}},
             {"items", json::array()}};
      for (const BRule &r : rules.rules())
        j["items"].push_back(to_string(r, u));
      j["boundary_models"] = json::array();
      for (const World &w : boundary.worlds())
        j["boundary_models"].push_back(to_string(w.term(), u));
      if (rep) {
        json t = json::array();
        for (const auto &[r, fate] : rep->rules)
          t.push_back({{"rule", to_string(r, u)}, {"fate", to_string(fate)}});
        j["transition"] = {{"rules", t}, {"clauses", rep->clauses}, {"pass", rep->all_pass()}};
      }
      _out << j.dump(2) << '\n';
    } else {
      _out << "models " << models.size() << ", boundary models " << boundary.size()
           << ", b-rules " << rules.size() << '\n';
      _out << "b-rules:\n";
      for (const BRule &r : rules.rules())
        _out << "  " << to_string(r, u) << '\n';
      _out << "boundary models:\n";
      for (const World &w : boundary.worlds())
        _out << "  " << to_string(w.term(), u) << '\n';
      if (rep) {
        _out << "transition under forall " << to_string(rep->quantified, u) << ": kept "
             << rep->kept << ", deleted " << rep->deleted << ", introduced " << rep->introduced
             << '\n'
             << rep->text();
        for (const auto &[name, ok] : rep->clauses)
          _out << "  " << name << ": " << (ok ? "pass" : "FAIL") << '\n';
      }
    }
    return rep && !rep->all_pass() ? 1 : 0;
  }

  int decide(const Options &o) {
    const Classifier c = classifier(o);
    const Term g = parse_term(o.term, c.features());
    const Decision d = qlit::decide(c, g);
    if (o.json)
      _out << json{{"kind", "decide"}, {"result", to_string(d)}, {"items", json::array()}}.dump(2)
           << '\n';
    else
      _out << to_string(d) << '\n';
    return 0;
  }

  int reasons(const Options &o) {
    const Classifier c = classifier(o);
    const Universe &u = c.features();
    const Term g = parse_term(o.term, u);
    const ReasonSet rs = sufficient_reasons(c, g);
    const std::string complete = c.cnf(rs.decision == Decision::Positive ? Side::Positive
                                                                          : Side::Negative)
                                     ? pretty(complete_reason_cnf(c, g))
                                     : pretty(rs.complete);
    if (o.json) {
      json j{{"kind", "reasons"},
             {"result", to_string(rs.decision)},
             {"complete", complete},
             {"items", json::array()}};
      for (const Term &t : rs.sufficient)
        j["items"].push_back(to_string(t, u));
      _out << j.dump(2) << '\n';
    } else {
      _out << "decision: " << to_string(rs.decision) << '\n'
           << "complete reason: " << complete << '\n'
           << "sufficient reasons (" << rs.sufficient.size() << "):\n";
      for (const Term &t : rs.sufficient)
        _out << "  " << term_text(t, u) << '\n';
    }
    return 0;
  }

  int bias(const Options &o) {
    const Classifier c = classifier(o);
    const Universe &u = c.features();
    if (!o.term.empty()) {
      const World w = World::from_term(u, parse_term(o.term, u));
      const bool biased = is_decision_biased(c, w);
      const Decision d = qlit::decide(c, w.term());
      if (o.json)
        _out << json{{"kind", "bias"}, {"result", biased}, {"decision", to_string(d)},
                     {"items", json::array()}}
                    .dump(2)
             << '\n';
      else
        _out << "decision: " << to_string(d) << "\nbiased: " << (biased ? "yes" : "no") << '\n';
      return 0;
    }
    const std::string pos = pretty(biased_instances(c, Side::Positive));
    const std::string neg = pretty(biased_instances(c, Side::Negative));
    if (o.json)
      _out << json{{"kind", "bias"}, {"result", {{"positive", pos}, {"negative", neg}}},
                   {"items", json::array()}}
                  .dump(2)
           << '\n';
    else
      _out << "biased positive: " << pos << "\nbiased negative: " << neg << '\n';
    return 0;
  }

  int relevance(const Options &o) {
    const Classifier c = classifier(o);
    const Universe &u = c.features();
    const Term g = parse_term(o.term, u);
    const auto feats = o.features.empty() ? std::vector<Variable>{} : parse_variables(o.features, u);
    const auto chars = parse_literals(o.characteristics, u);
    const RelevanceReport r = relevance_report(c, g, feats, chars);
    if (o.json) {
      json j{{"kind", "relevance"}, {"result", to_string(r.decision)}, {"items", json::array()}};
      for (const auto &[l, rel] : r.items)
        j["items"].push_back({{"literal", to_string(l, u)}, {"relevance", to_string(rel)}});
      if (r.joint_features_irrelevant)
        j["features_irrelevant"] = *r.joint_features_irrelevant;
      if (r.joint_characteristics_irrelevant)
        j["characteristics_irrelevant"] = *r.joint_characteristics_irrelevant;
      _out << j.dump(2) << '\n';
    } else {
      _out << "decision: " << to_string(r.decision) << '\n';
      for (const auto &[l, rel] : r.items)
        _out << "  " << to_string(l, u) << ": " << to_string(rel) << '\n';
      if (r.joint_features_irrelevant)
        _out << "features " << o.features << ": "
             << (*r.joint_features_irrelevant ? "irrelevant" : "relevant") << '\n';
      if (r.joint_characteristics_irrelevant)
        _out << "characteristics " << o.characteristics << ": "
             << (*r.joint_characteristics_irrelevant ? "irrelevant" : "relevant") << '\n';
    }
    return 0;
  }

  int check(const Options &o) {
    std::vector<const Suite *> chosen;
    if (o.property == "all") {
      for (const Suite &s : suites())
        chosen.push_back(&s);
    } else if (const Suite *s = find_suite(o.property)) {
      chosen.push_back(s);
    } else {
      throw ParseError("unknown property '" + o.property + "'", 1, 1);
    }
    if (o.vars == 0 || o.vars > 12)
      throw ParseError("--vars must be between 1 and 12", 1, 1);
    bool ok = true;
    json items = json::array();
    for (const Suite *s : chosen) {
      const SuiteResult r = s->run({o.vars, o.trials, o.seed});
      ok = ok && r.ok();
      if (o.json) {
        items.push_back({{"property", r.name}, {"passed", r.passed}, {"trials", r.trials},
                         {"first_failure", r.first_failure}});
      } else {
        if (chosen.size() > 1)
          _out << r.name << ": ";
        _out << r.summary() << '\n';
        if (!r.first_failure.empty())
          _out << "  first failure: " << r.first_failure << '\n';
      }
    }
    if (o.json)
      _out << json{{"kind", "check"}, {"result", ok ? "pass" : "fail"}, {"items", items}}.dump(2)
           << '\n';
    return ok ? 0 : 1;
  }

private:
  Classifier classifier(const Options &o) {
    Classifier c = load_classifier(o.classifier);
    for (const auto &w : c.warnings())
      _err << "warning: " << w << '\n';
    if (!o.protected_vars.empty())
      c = c.with_protected(parse_variables(o.protected_vars, c.features()));
    return c;
  }

  std::ostream &_out;
  std::ostream &_err;
};

inline int dispatch(std::vector<std::string> args, std::istream &in, std::ostream &out,
                    std::ostream &err, const std::string *session);

inline int repl(std::istream &in, std::ostream &out, std::ostream &err) {
  std::string session;
  std::string line;
  out << "qlit> " << std::flush;
  while (std::getline(in, line)) {
    std::vector<std::string> args;
    try {
      args = CLI::detail::split_up(line);
    } catch (const std::exception &e) {
      err << "error: " << e.what() << '\n';
    }
    if (!args.empty()) {
      if (args[0] == "quit" || args[0] == "exit")
        break;
      if (args[0] == "load") {
        if (args.size() != 2) {
          err << "usage: load FILE\n";
        } else {
          try {
            (void)load(args[1]);
            session = args[1];
            out << "loaded " << session << '\n';
          } catch (const std::exception &e) {
            err << "error: " << e.what() << '\n';
          }
        }
      } else if (args[0] == "help") {
        out << "commands: load FILE, quantify, brules, decide, reasons, bias, relevance, "
               "check, quit\n";
      } else if (args[0] == "repl") {
        err << "error: already in the REPL\n";
      } else {
        (void)dispatch(std::move(args), in, out, err, session.empty() ? nullptr : &session);
      }
    }
    out << "qlit> " << std::flush;
  }
  out << '\n';
  return 0;
}

inline int dispatch(std::vector<std::string> args, std::istream &in, std::ostream &out,
                    std::ostream &err, const std::string *session) {
  Options o;
  CLI::App app{"Literal and variable quantification, b-rules and classifier explanations", "qlit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "Print JSON objects with kind, result and items");

  auto *quantify = app.add_subcommand("quantify", "Quantify literals and variables out of an input");
  quantify->add_option("--op", o.op, "forall or exists")->required()->check(CLI::IsMember({"forall", "exists"}));
  quantify->add_option("--items", o.items, "Comma-separated items: x, ~x, or X for the whole variable")->required();
  auto *qin = quantify->add_option("--in", o.in, "Input file (.cnf, DIMACS dnf, .nnf, .sdd, formula)");
  quantify->add_option("--repr", o.repr, "Representation to quantify in")
      ->check(CLI::IsMember({"auto", "cnf", "dnf", "ddnnf", "sdd", "formula"}));
  quantify->add_option("--out", o.out, "Write the result here instead of stdout");
  quantify->add_flag("--close", o.close, "Close under resolution/consensus instead of verifying closure");

  auto *brules = app.add_subcommand("brules", "Print b-rules and boundary models");
  auto *bin = brules->add_option("--in", o.in, "Input file");
  brules->add_option("--report-transition", o.transition, "Literal whose universal quantification is analysed");

  auto add_classifier = [&](CLI::App *sub, bool term_required) {
    auto *opt = sub->add_option("--classifier", o.classifier, "Classifier bundle, CNF or formula file");
    auto *t = sub->add_option("--term", o.term, "Instance or population, e.g. \"e,~f,g\"");
    if (term_required)
      t->required();
    sub->add_option("--protected", o.protected_vars, "Protected features (overrides the bundle)");
    return opt;
  };
  auto *decide = app.add_subcommand("decide", "Decision of the classifier on a term");
  auto *dcl = add_classifier(decide, true);
  auto *reasons = app.add_subcommand("reasons", "Complete and sufficient reasons of a decision");
  auto *rcl = add_classifier(reasons, true);
  auto *bias = app.add_subcommand("bias", "Biased instances, or whether one decision is biased");
  auto *bcl = add_classifier(bias, false);
  auto *relevance = app.add_subcommand("relevance", "Which features and characteristics matter");
  auto *lcl = add_classifier(relevance, true);
  relevance->add_option("--features", o.features, "Features to erase jointly, e.g. \"D,H\"");
  relevance->add_option("--characteristics", o.characteristics, "Characteristics to drop jointly");

  auto *check = app.add_subcommand("check", "Run a randomized property suite");
  std::vector<std::string> names{"all"};
  for (const Suite &s : suites())
    names.emplace_back(s.name);
  check->add_option("--property", o.property, "Suite name or all")->required()->check(CLI::IsMember(names));
  check->add_option("--vars", o.vars, "Maximum number of variables");
  check->add_option("--trials", o.trials, "Number of random trials");
  check->add_option("--seed", o.seed, "Random seed");

  auto *repl_cmd = app.add_subcommand("repl", "Read subcommands line by line");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  // Fill in the REPL session file for whatever input the command lacks.
  auto input = [&](CLI::Option *opt, std::string &slot, const char *flag) {
    if (opt->count() == 0) {
      if (!session)
        throw CLI::RequiredError(flag);
      slot = *session;
    }
  };

  try {
    if (*quantify) {
      input(qin, o.in, "--in");
      return Runner(out, err).quantify(o);
    }
    if (*brules) {
      input(bin, o.in, "--in");
      return Runner(out, err).brules(o);
    }
    if (*decide) {
      input(dcl, o.classifier, "--classifier");
      return Runner(out, err).decide(o);
    }
    if (*reasons) {
      input(rcl, o.classifier, "--classifier");
      return Runner(out, err).reasons(o);
    }
    if (*bias) {
      input(bcl, o.classifier, "--classifier");
      return Runner(out, err).bias(o);
    }
    if (*relevance) {
      input(lcl, o.classifier, "--classifier");
      return Runner(out, err).relevance(o);
    }
    if (*check)
      return Runner(out, err).check(o);
    if (*repl_cmd)
      return repl(in, out, err);
  } catch (const CLI::Error &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NoDecisionError &e) {
    err << "refused: " << e.what() << '\n';
    return 1;
  } catch (const PreconditionError &e) {
    err << "refused: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError &e) {
    err << "refused: " << e.what() << '\n';
    return 1;
  } catch (const CapacityError &e) {
    err << "refused: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

} // namespace detail

/// Run the command line with `args` (program name excluded).
inline int run(std::vector<std::string> args, std::istream &in, std::ostream &out,
               std::ostream &err) {
  return detail::dispatch(std::move(args), in, out, err, nullptr);
}

} // namespace qlit::cli
