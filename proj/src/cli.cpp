#include "qmon/cli.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qmon/boolprop.hpp"
#include "qmon/builders.hpp"
#include "qmon/machine.hpp"
#include "qmon/precision.hpp"
#include "qmon/qprop.hpp"
#include "qmon/suite.hpp"

namespace qmon {

namespace {

/// Bad selector or argument combination; reported as a usage error.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::string domain;
  std::size_t budgetIters = 1024;
  std::size_t confirmWindow = 3;
  std::uint64_t seed = 42;
  std::string suite;
  std::string side = "below";
  std::string alphabet;

  LimitBudget budget() const {
    LimitBudget b;
    b.maxLoopIterations = budgetIters;
    b.confirmWindow = confirmWindow;
    return b;
  }
  Side side_value() const { return side == "above" ? Side::Above : Side::Below; }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--domain", c.domain, "Value domain for constant verdicts (e.g. natinf, Bt, prod:natinf:2)");
  sub->add_option("--budget-iters", c.budgetIters, "Loop iterations examined by limit detection")
      ->check(CLI::PositiveNumber);
  sub->add_option("--confirm-window", c.confirmWindow, "Iterations a pattern must persist before it is accepted")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  sub->add_option("--seed", c.seed, "Seed for sampled suites");
  sub->add_option("--side", c.side, "Monitoring side")->check(CLI::IsMember({"below", "above"}));
}

std::size_t parse_index(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw UsageError("bad " + std::string(what) + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool strip_prefix(std::string_view& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.remove_prefix(prefix.size());
  return true;
}

// ---------------------------------------------------------------------------
// Selectors

RegisterMachine builtin_machine(std::string_view name) {
  const auto parts = split(name, ':');
  const std::string& head = parts[0];
  auto arg = [&](std::size_t i) {
    if (parts.size() <= i) throw UsageError("builtin '" + std::string(name) + "' needs more arguments");
    return parse_index(parts[i], "builtin argument");
  };
  if (head == "mmax" && parts.size() == 1) return build_Mmax();
  if (head == "mavg" && parts.size() == 1) return build_Mavg();
  if (head == "mrt-states" && parts.size() == 2) return build_finite_state_mrt(arg(1));
  if (head == "kpair" && parts.size() == 2) return build_kpair_monitor(arg(1));
  if (head == "kpair" && parts.size() == 3) {
    const std::size_t k = arg(1);
    for (KPairScheme s : {KPairScheme::Exact, KPairScheme::Priority, KPairScheme::PairedMax, KPairScheme::SharedWitness}) {
      if (parts[2] == to_string(s)) return build_kpair_approx(k, s);
    }
    return build_kpair_approx(k, kpair_scheme_for(k, arg(2)));
  }
  if (head == "pk" && parts.size() == 2) return build_pk_monitor(arg(1));
  if (head == "pk" && parts.size() == 3) return build_pk_approx(arg(1), arg(2));
  if (head == "binary" && parts.size() == 2) return build_binary_pk(arg(1));
  if (head == "doubling-adder" && parts.size() == 1) return build_doubling_adder();
  if (head == "doubling-counter" && parts.size() == 1) return build_doubling_counter();
  throw UsageError("unknown builtin machine '" + std::string(name) + "'");
}

struct Selected {
  VerdictFunction verdict;
  AlphabetPtr alphabet;
};

bool needs_alphabet(std::string_view sel) { return sel.starts_with("const:") || sel.starts_with("contains:"); }

AlphabetPtr alphabet_option(const Common& c) {
  auto tokens = split(c.alphabet, ' ');
  tokens.erase(std::remove(tokens.begin(), tokens.end(), ""), tokens.end());
  if (tokens.empty()) return nullptr;
  return make_alphabet(tokens);
}

Selected select_verdict(std::string_view sel, const Common& c, AlphabetPtr hint) {
  std::string_view rest = sel;
  if (sel == "mrt") return {mrt_verdict(), server_alphabet()};
  if (sel == "art") return {art_verdict(), server_alphabet()};
  if (strip_prefix(rest, "kmrt:")) {
    const std::size_t k = parse_index(rest, "pair count");
    if (k == 0) throw UsageError("kmrt needs k >= 1");
    return {kpair_mrt_verdict(k), kpair_alphabet(k)};
  }
  if (needs_alphabet(sel)) {
    AlphabetPtr sigma = alphabet_option(c);
    if (!sigma) sigma = hint;
    if (!sigma) throw UsageError("verdict '" + std::string(sel) + "' needs --alphabet or a second verdict with one");
    if (strip_prefix(rest, "const:")) {
      const ValueDomain d = ValueDomain::parse(c.domain.empty() ? "natinf" : c.domain);
      return {constant_verdict(d, parse_value(rest)), sigma};
    }
    strip_prefix(rest, "contains:");
    std::vector<Symbol> wanted;
    for (const auto& tok : split(rest, '+')) wanted.push_back(sigma->symbol(tok));
    std::string name = "contains:" + std::string(rest);
    return {stateful_verdict(
                name, ValueDomain::boolean_true(), Monotonicity::Increasing, false,
                [wanted](bool& seen, Symbol s) {
                  seen = seen || std::find(wanted.begin(), wanted.end(), s) != wanted.end();
                },
                [](const bool& seen) { return ExtendedValue::boolean(seen); }),
            sigma};
  }
  RegisterMachine m = strip_prefix(rest, "builtin:")
                          ? builtin_machine(rest)
                          : load_machine(read_file(std::string(strip_prefix(rest, "machine:") ? rest : sel)));
  return {generated_verdict(m), m.alphabet()};
}

QuantitativeProperty select_property(std::string_view sel) {
  std::string_view rest = sel;
  if (sel == "mrt") return mrt_property();
  if (sel == "art") return art_property();
  if (sel == "binary") return binary_property();
  if (sel == "doubling") return doubling_property();
  if (strip_prefix(rest, "kmrt:")) {
    const std::size_t k = parse_index(rest, "pair count");
    if (k == 0) throw UsageError("kmrt needs k >= 1");
    return kpair_mrt_property(k);
  }
  if (strip_prefix(rest, "pk:")) {
    const std::size_t k = parse_index(rest, "k");
    if (k == 0) throw UsageError("pk needs k >= 1");
    return pk_property(k);
  }
  if (strip_prefix(rest, "disc-safe:")) return discounted_safety_property(Automaton::parse(read_file(std::string(rest))));
  if (strip_prefix(rest, "disc-cosafe:")) {
    return discounted_cosafety_property(Automaton::parse(read_file(std::string(rest))));
  }
  if (strip_prefix(rest, "energy:")) return energy_property(WeightedAutomaton::parse(read_file(std::string(rest))));
  throw UsageError("unknown property '" + std::string(sel) + "'");
}

std::vector<LassoTrace> select_suite(const Common& c, const AlphabetPtr& sigma, std::string& name) {
  SuiteSpec spec;
  if (!c.suite.empty()) {
    spec = parse_suite_spec(c.suite);
  } else if (sigma->size() <= 3) {
    spec = parse_suite_spec("exhaustive:2:3");
  } else {
    spec = parse_suite_spec("sample:500");
  }
  name = to_string(spec);
  if (spec.kind == SuiteSpec::Kind::Sample) name += " seed " + std::to_string(c.seed);
  auto suite = make_suite(spec, sigma, c.seed);
  if (suite.empty()) throw UsageError("suite " + name + " is empty");
  return suite;
}

// ---------------------------------------------------------------------------
// Commands

void write_row(std::ostream& out, std::size_t i, const ExtendedValue& v) {
  out << i << ',' << i << ',' << to_string(v) << '\n';
}

int cmd_run(const std::string& verdictSel, const std::string& tracePath, bool forceLasso, bool forceFinite,
            const Common& c, std::istream& in, std::ostream& out, std::ostream& err) {
  Selected sel = select_verdict(verdictSel, c, alphabet_option(c));
  if (tracePath == "-") {
    // Streaming: one token per line, one verdict per event.
    auto run = sel.verdict.start();
    out << "index,prefix_len,value\n";
    write_row(out, 0, run->value());
    out.flush();
    std::string line;
    std::size_t n = 0;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto tokens = split(line, ' ');
      tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                  [](std::string& t) {
                                    t.erase(std::remove(t.begin(), t.end(), '\r'), t.end());
                                    t.erase(std::remove(t.begin(), t.end(), '\t'), t.end());
                                    return t.empty();
                                  }),
                   tokens.end());
      if (tokens.empty()) continue;
      if (tokens.size() > 1) {
        err << "error: stdin:" << lineNo << ": expected one token per line\n";
        return kExitUsage;
      }
      auto sym = sel.alphabet->find(tokens[0]);
      if (!sym) {
        err << "error: stdin:" << lineNo << ": unknown token '" << tokens[0] << "'\n";
        return kExitUsage;
      }
      run->step(*sym);
      write_row(out, ++n, run->value());
      out.flush();
    }
    return kExitOk;
  }

  const std::string text = read_file(tracePath);
  const bool lasso = forceLasso || (!forceFinite && text.find(';') != std::string::npos);
  std::ostringstream buf;
  buf << "index,prefix_len,value\n";
  try {
    if (lasso) {
      LassoTrace t = parse_lasso(text, sel.alphabet);
      FiniteTrace unrolled = t.prefix(t.stem().size() + t.loop().size());
      auto values = sel.verdict.sequence(unrolled);
      for (std::size_t i = 0; i < values.size(); ++i) write_row(buf, i, values[i]);
      LimitResult r = eval_limit(sel.verdict, t, c.side_value(), c.budget());
      buf << "limit," << to_string(r.kind) << ',' << render_limit(r) << '\n';
    } else {
      auto values = sel.verdict.sequence(parse_finite(text, sel.alphabet));
      for (std::size_t i = 0; i < values.size(); ++i) write_row(buf, i, values[i]);
    }
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(' ') + 1) + " (in " + tracePath + ")",
                     e.line(), e.column());
  }
  out << buf.str();
  return kExitOk;
}

int cmd_eval(const std::string& propSel, const std::string& tracePath, std::ostream& out) {
  QuantitativeProperty p = select_property(propSel);
  LassoTrace t = parse_lasso(read_file(tracePath), p.alphabet);
  out << to_string(p.evalLasso(t)) << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& s1, const std::string& s2, const Common& c, std::ostream& out) {
  std::optional<Selected> a;
  std::optional<Selected> b;
  if (needs_alphabet(s1) && !needs_alphabet(s2)) {
    b = select_verdict(s2, c, nullptr);
    a = select_verdict(s1, c, b->alphabet);
  } else {
    a = select_verdict(s1, c, nullptr);
    b = select_verdict(s2, c, a->alphabet);
  }
  if (!(*a->alphabet == *b->alphabet)) throw UsageError("the two verdicts read different alphabets");
  std::string suiteName;
  auto suite = select_suite(c, a->alphabet, suiteName);
  PrecisionReport r = compare(a->verdict, b->verdict, suite, c.side_value(), c.budget(), suiteName);
  out << to_json_lines(r);
  return r.relation == Relation::Undetermined ? kExitFailure : kExitOk;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

void describe_automaton(const std::string& path, const Automaton& a, std::ostream& out) {
  out << "automaton: " << path << '\n';
  out << "accept-kind: " << to_string(a.kind()) << '\n';
  for (std::size_t q = 0; q < a.state_count(); ++q) {
    out << "state " << a.state_name(q) << ": positive=" << yes_no(a.determines_state(q, Polarity::Positive))
        << " negative=" << yes_no(a.determines_state(q, Polarity::Negative)) << '\n';
  }
  out << "classically-monitorable: " << yes_no(a.classically_monitorable()) << '\n';
}

void describe_check(const char* name, const ModalityCheck& m, std::ostream& out) {
  out << name << ": " << (m.pass ? "pass" : "fail");
  if (m.witness) {
    out << " (witness " << render_lasso(*m.witness) << ", limit "
        << (m.limit ? to_string(*m.limit) : std::string("undetermined")) << ", value " << to_string(*m.value) << ")";
  }
  if (m.prefixWitness) out << " (no matching continuation after '" << render_finite(*m.prefixWitness) << "')";
  out << '\n';
}

int cmd_classify(const std::vector<std::string>& paths, std::string modality, const Common& c, std::ostream& out) {
  std::vector<Automaton> automata;
  for (const auto& p : paths) automata.push_back(Automaton::parse(read_file(p)));
  if (automata.empty()) throw UsageError("classify needs at least one automaton file");
  if (modality == "auto") {
    if (automata.size() > 1) {
      modality = "obligation";
    } else {
      switch (automata[0].kind()) {
        case AcceptKind::Safety:
          modality = "safety";
          break;
        case AcceptKind::CoSafety:
          modality = "cosafety";
          break;
        case AcceptKind::Buchi:
          modality = "response";
          break;
        case AcceptKind::CoBuchi:
          modality = "persistence";
          break;
      }
    }
  }
  if (modality != "obligation" && automata.size() != 1) {
    throw UsageError("modality " + modality + " takes exactly one automaton");
  }
  for (std::size_t i = 0; i < automata.size(); ++i) describe_automaton(paths[i], automata[i], out);

  const AlphabetPtr& sigma = automata[0].alphabet();
  for (const auto& a : automata)
    if (!(*a.alphabet() == *sigma)) throw UsageError("automata read different alphabets");
  std::string suiteName;
  auto suite = select_suite(c, sigma, suiteName);

  std::optional<VerdictFunction> v;
  std::optional<QuantitativeProperty> p;
  const char* expected = "universal";
  if (modality == "obligation") {
    if (automata.size() % 2 != 0) throw UsageError("obligation needs safety/co-safety automaton pairs");
    ObligationList o;
    for (std::size_t i = 0; i < automata.size(); i += 2) o.pairs.emplace_back(automata[i], automata[i + 1]);
    v = monitor_obligation(o);
    p = obligation_property(o, ValueDomain::boolean());
    std::size_t most = 0;
    for (const auto& t : suite) {
      most = std::max(most, count_switches(*v, t.prefix(t.stem().size() + 4 * t.loop().size())));
    }
    out << "obligation-pairs: " << o.pairs.size() << '\n';
    out << "max-switches: " << most << " (bound " << 2 * o.pairs.size() << ")\n";
  } else {
    const Automaton& a = automata[0];
    if (modality == "safety") {
      v = monitor_safety(a);
    } else if (modality == "cosafety") {
      v = monitor_cosafety(a);
    } else if (modality == "response") {
      v = monitor_response(a);
    } else if (modality == "persistence") {
      v = monitor_persistence(a);
    } else if (modality == "existential") {
      v = monitor_any_existential(a);
      expected = "existential";
    } else if (modality == "classical") {
      v = monitor_classical(a);
      expected = "approximate";
    } else {
      throw UsageError("unknown modality '" + modality + "'");
    }
    p = membership_property(a, v->codomain());
  }
  const Side side = c.side_value();
  ModalityReport r = classify_modality(*v, *p, side, suite, {}, c.budget());
  out << "modality: " << modality << '\n';
  out << "monitor: " << v->name() << " (domain " << v->codomain().name() << ", side " << to_string(side) << ")\n";
  out << "suite: " << suiteName << " (" << r.lassos << " lassos, " << r.undetermined << " undetermined)\n";
  describe_check("universal", r.universal, out);
  describe_check("existential", r.existential, out);
  describe_check("approximate", r.approximate, out);
  const ModalityCheck& want = std::string(expected) == "universal"     ? r.universal
                              : std::string(expected) == "existential" ? r.existential
                                                                        : r.approximate;
  out << "expected: " << expected << ' ' << (want.pass ? "pass" : "fail") << '\n';
  return want.pass ? kExitOk : kExitFailure;
}

int cmd_demo(const std::string& id, std::ostream& out) {
  const char* trace = "req ack req other ack req ack other";
  RegisterMachine m = id == "fig1"   ? build_Mmax()
                      : id == "fig2" ? build_Mavg()
                                     : throw UsageError("unknown demo '" + id + "' (expected fig1 or fig2)");
  auto values = generated_verdict(m).sequence(parse_finite(trace, m.alphabet()));
  out << "index,prefix_len,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) write_row(out, i, values[i]);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantitative runtime monitors: verdict functions, limits and precision"};
  app.name("qmon");
  app.require_subcommand(1);

  Common common;

  std::string runVerdict, runTrace;
  bool runLasso = false, runFinite = false;
  auto* run = app.add_subcommand("run", "Print the verdict of every prefix of a trace (trace '-' streams stdin)");
  run->add_option("verdict", runVerdict, "Machine file, builtin:<name>, or verdict name")->required();
  run->add_option("trace", runTrace, "Trace file, or - for one token per line on stdin")->required();
  auto* lassoFlag = run->add_flag("--lasso", runLasso, "Read the trace as a lasso and append its limit");
  run->add_flag("--finite", runFinite, "Read the trace as a finite word")->excludes(lassoFlag);
  run->add_option("--alphabet", common.alphabet, "Space-separated tokens for contains:/const: verdicts");
  add_common(run, common);

  std::string evalProp, evalTrace;
  auto* eval = app.add_subcommand("eval", "Print a property's value on a lasso");
  eval->add_option("property", evalProp, "mrt, art, kmrt:<k>, pk:<k>, binary, doubling, disc-safe:<file>, "
                                         "disc-cosafe:<file>, energy:<file>")
      ->required();
  eval->add_option("trace", evalTrace, "Lasso file")->required();
  add_common(eval, common);

  std::string cmp1, cmp2;
  auto* cmp = app.add_subcommand("compare", "Precision of two verdicts over a lasso suite (JSON lines)");
  cmp->add_option("v1", cmp1, "First verdict")->required();
  cmp->add_option("v2", cmp2, "Second verdict")->required();
  cmp->add_option("--suite", common.suite, "exhaustive:<u>:<v>, sample:<n> or file:<path>");
  cmp->add_option("--alphabet", common.alphabet, "Space-separated tokens for contains:/const: verdicts");
  add_common(cmp, common);

  std::vector<std::string> clsFiles;
  std::string modality = "auto";
  auto* cls = app.add_subcommand("classify", "Determination structure and monitoring modality of automata");
  cls->add_option("automata", clsFiles, "Automaton file (or safety/co-safety pairs for obligation)")->required();
  cls->add_option("--modality", modality, "auto, safety, cosafety, obligation, response, persistence, existential, "
                                          "classical");
  cls->add_option("--suite", common.suite, "exhaustive:<u>:<v>, sample:<n> or file:<path>");
  add_common(cls, common);

  std::string figure;
  auto* demo = app.add_subcommand("demo", "Example data series as CSV");
  demo->add_option("figure", figure, "fig1 or fig2")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(runVerdict, runTrace, runLasso, runFinite, common, in, out, err);
    if (eval->parsed()) return cmd_eval(evalProp, evalTrace, out);
    if (cmp->parsed()) return cmd_compare(cmp1, cmp2, common, out);
    if (cls->parsed()) return cmd_classify(clsFiles, modality, common, out);
    if (demo->parsed()) return cmd_demo(figure, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qmon
