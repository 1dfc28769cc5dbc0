#include "qmon/boolprop.hpp"

#include "qmon/suite.hpp"

namespace qmon {

namespace {

void require_kind(const Automaton& p, AcceptKind k, const char* what) {
  if (p.kind() != k) {
    throw Error(std::string(what) + " needs a " + to_string(k) + " automaton, got " + to_string(p.kind()));
  }
}

ExtendedValue T() { return ExtendedValue::boolean(true); }
ExtendedValue F() { return ExtendedValue::boolean(false); }

/// Verdict whose value is a function of the automaton state alone.
template <typename Out>
VerdictFunction state_verdict(std::string name, const Automaton& p, ValueDomain d, Monotonicity m, Out out) {
  return stateful_verdict(
      std::move(name), std::move(d), m, p.initial(), [p](std::size_t& q, Symbol s) { q = p.next(q, s); },
      [p, out](const std::size_t& q) { return out(p, q); });
}

}  // namespace

VerdictFunction monitor_safety(const Automaton& p) {
  require_kind(p, AcceptKind::Safety, "safety monitor");
  return state_verdict("safety", p, ValueDomain::boolean_false(), Monotonicity::Increasing,
                       [](const Automaton& a, std::size_t q) { return a.determines_state(q, Polarity::Negative) ? F() : T(); });
}

VerdictFunction monitor_cosafety(const Automaton& p) {
  require_kind(p, AcceptKind::CoSafety, "co-safety monitor");
  return state_verdict("cosafety", p, ValueDomain::boolean_true(), Monotonicity::Increasing,
                       [](const Automaton& a, std::size_t q) { return a.determines_state(q, Polarity::Positive) ? T() : F(); });
}

VerdictFunction monitor_obligation(const ObligationList& o) {
  if (o.pairs.empty()) throw Error("obligation list needs at least one pair");
  for (const auto& [s, c] : o.pairs) {
    require_kind(s, AcceptKind::Safety, "obligation safety side");
    require_kind(c, AcceptKind::CoSafety, "obligation co-safety side");
  }
  std::vector<std::size_t> initial;
  for (const auto& [s, c] : o.pairs) {
    initial.push_back(s.initial());
    initial.push_back(c.initial());
  }
  return stateful_verdict(
      "obligation", ValueDomain::boolean(), Monotonicity::Unrestricted, initial,
      [o](std::vector<std::size_t>& qs, Symbol x) {
        for (std::size_t i = 0; i < o.pairs.size(); ++i) {
          qs[2 * i] = o.pairs[i].first.next(qs[2 * i], x);
          qs[2 * i + 1] = o.pairs[i].second.next(qs[2 * i + 1], x);
        }
      },
      [o](const std::vector<std::size_t>& qs) {
        for (std::size_t i = 0; i < o.pairs.size(); ++i) {
          const bool lost = o.pairs[i].first.determines_state(qs[2 * i], Polarity::Negative);
          const bool won = o.pairs[i].second.determines_state(qs[2 * i + 1], Polarity::Positive);
          if (lost && !won) return F();
        }
        return T();
      });
}

VerdictFunction monitor_response(const Automaton& buchi) {
  require_kind(buchi, AcceptKind::Buchi, "response monitor");
  return state_verdict("response", buchi, ValueDomain::boolean_true(), Monotonicity::Unrestricted,
                       [](const Automaton& a, std::size_t q) { return a.accepting(q) ? T() : F(); });
}

VerdictFunction monitor_persistence(const Automaton& cobuchi) {
  require_kind(cobuchi, AcceptKind::CoBuchi, "persistence monitor");
  return state_verdict("persistence", cobuchi, ValueDomain::boolean_false(), Monotonicity::Unrestricted,
                       [](const Automaton& a, std::size_t q) { return a.accepting(q) ? T() : F(); });
}

namespace {

struct ReactivityState {
  enum class Phase { Response, Persistence, Done };
  std::vector<std::size_t> qr;
  std::vector<std::size_t> qp;
  std::vector<Phase> phase;
  std::vector<bool> fired;
  ExtendedValue out = ExtendedValue::boolean(true);
};

}  // namespace

VerdictFunction monitor_reactivity(const ReactivityList& r) {
  if (r.pairs.empty()) throw Error("reactivity list needs at least one pair");
  ReactivityState init;
  for (const auto& [resp, pers] : r.pairs) {
    require_kind(resp, AcceptKind::Buchi, "reactivity response side");
    require_kind(pers, AcceptKind::CoBuchi, "reactivity persistence side");
    init.qr.push_back(resp.initial());
    init.qp.push_back(pers.initial());
    init.phase.push_back(ReactivityState::Phase::Response);
    init.fired.push_back(false);
  }
  using Phase = ReactivityState::Phase;
  return stateful_verdict(
      "reactivity", ValueDomain::boolean_bot(), Monotonicity::Unrestricted, init,
      [r](ReactivityState& st, Symbol x) {
        bool lost = false;
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
          const Automaton& resp = r.pairs[i].first;
          const Automaton& pers = r.pairs[i].second;
          st.qr[i] = resp.next(st.qr[i], x);
          st.qp[i] = pers.next(st.qp[i], x);
          if (st.phase[i] == Phase::Response) {
            if (resp.determines_state(st.qr[i], Polarity::Negative)) {
              // The response side can no longer hold: watch the persistence side.
              st.phase[i] = Phase::Persistence;
              st.fired[i] = false;
            } else if (resp.accepting(st.qr[i]) || resp.determines_state(st.qr[i], Polarity::Positive)) {
              st.fired[i] = true;
            }
          }
          if (st.phase[i] == Phase::Persistence) {
            if (pers.determines_state(st.qp[i], Polarity::Positive)) {
              st.phase[i] = Phase::Done;
            } else if (!pers.accepting(st.qp[i]) || pers.determines_state(st.qp[i], Polarity::Negative)) {
              lost = true;
            } else {
              st.fired[i] = true;
            }
          }
        }
        if (lost) {
          st.out = F();
          return;
        }
        bool all = true;
        for (std::size_t i = 0; i < r.pairs.size(); ++i) all = all && (st.phase[i] == Phase::Done || st.fired[i]);
        if (all) {
          st.out = T();
          st.fired.assign(st.fired.size(), false);
        } else {
          st.out = ExtendedValue::bot();
        }
      },
      [](const ReactivityState& st) { return st.out; });
}

VerdictFunction monitor_any_existential(const Automaton& p) {
  return state_verdict("determined-true", p, ValueDomain::boolean_true(), Monotonicity::Increasing,
                       [](const Automaton& a, std::size_t q) { return a.determines_state(q, Polarity::Positive) ? T() : F(); });
}

VerdictFunction monitor_any_existential_false(const Automaton& p) {
  return state_verdict("determined-false", p, ValueDomain::boolean_false(), Monotonicity::Increasing,
                       [](const Automaton& a, std::size_t q) { return a.determines_state(q, Polarity::Negative) ? F() : T(); });
}

VerdictFunction monitor_classical(const Automaton& p) {
  return state_verdict("classical", p, ValueDomain::boolean_bot(), Monotonicity::Unrestricted,
                       [](const Automaton& a, std::size_t q) {
                         if (a.determines_state(q, Polarity::Positive)) return T();
                         if (a.determines_state(q, Polarity::Negative)) return F();
                         return ExtendedValue::bot();
                       });
}

namespace {

class SmoothRun final : public VerdictRun {
 public:
  SmoothRun(std::unique_ptr<VerdictRun> inner, bool initial) : inner_(std::move(inner)), last_(initial) { update(); }
  void step(Symbol s) override {
    inner_->step(s);
    update();
  }
  ExtendedValue value() const override { return ExtendedValue::boolean(last_); }

 private:
  void update() {
    ExtendedValue v = inner_->value();
    if (v.is_boolean()) last_ = v.as_boolean();
  }
  std::unique_ptr<VerdictRun> inner_;
  bool last_;
};

}  // namespace

VerdictFunction smooth_bottom(const VerdictFunction& v, bool initial) {
  if (v.codomain().kind() != DomainKind::BBot) throw DomainError("smoothing needs a Bbot verdict, got " + v.codomain().name());
  return VerdictFunction("smooth(" + v.name() + ")", ValueDomain::boolean(), Monotonicity::Unrestricted,
                         [v, initial]() { return std::make_unique<SmoothRun>(v.start(), initial); });
}

QuantitativeProperty obligation_property(const ObligationList& o, const ValueDomain& domain) {
  if (!domain.is_boolean()) throw DomainError("membership values need a boolean domain, got " + domain.name());
  return {"obligation", domain, o.pairs.front().first.alphabet(),
          [o](const LassoTrace& t) {
            for (const auto& [s, c] : o.pairs)
              if (!s.member(t) && !c.member(t)) return ExtendedValue::boolean(false);
            return ExtendedValue::boolean(true);
          },
          nullptr, nullptr};
}

QuantitativeProperty reactivity_property(const ReactivityList& r, const ValueDomain& domain) {
  if (!domain.is_boolean()) throw DomainError("membership values need a boolean domain, got " + domain.name());
  return {"reactivity", domain, r.pairs.front().first.alphabet(),
          [r](const LassoTrace& t) {
            for (const auto& [resp, pers] : r.pairs)
              if (!resp.member(t) && !pers.member(t)) return ExtendedValue::boolean(false);
            return ExtendedValue::boolean(true);
          },
          nullptr, nullptr};
}

std::size_t count_switches(const VerdictFunction& v, const FiniteTrace& s) {
  auto run = v.start();
  ExtendedValue prev = run->value();
  std::size_t n = 0;
  for (Symbol x : s.symbols) {
    run->step(x);
    ExtendedValue cur = run->value();
    if (!(cur == prev)) ++n;
    prev = std::move(cur);
  }
  return n;
}

// ---------------------------------------------------------------------------

ModalityReport classify_modality(const VerdictFunction& v, const QuantitativeProperty& p, Side side,
                                 const std::vector<LassoTrace>& suite, const ContinuationBudget& continuation,
                                 const LimitBudget& budget) {
  const ValueDomain d = common_domain(v.codomain(), p.codomain);
  auto approximates = [&](const ExtendedValue& lim, const ExtendedValue& val) {
    return side == Side::Below ? less_eq(d, lim, val) : less_eq(d, val, lim);
  };
  auto fail = [](ModalityCheck& c, const LassoTrace& t, const std::optional<ExtendedValue>& lim,
                 const ExtendedValue& val) {
    if (!c.pass) return;
    c.pass = false;
    c.witness = t;
    c.limit = lim;
    c.value = val;
  };

  ModalityReport report;
  report.universal.pass = true;
  report.approximate.pass = true;
  for (const auto& t : suite) {
    ++report.lassos;
    const LimitResult r = eval_limit(v, t, side, budget);
    const ExtendedValue val = p.evalLasso(t);
    if (!r.resolved()) {
      ++report.undetermined;
      fail(report.universal, t, std::nullopt, val);
      fail(report.approximate, t, std::nullopt, val);
      continue;
    }
    if (!(*r.value == val)) fail(report.universal, t, r.value, val);
    if (!approximates(*r.value, val)) fail(report.approximate, t, r.value, val);
  }

  report.existential = report.approximate;
  if (!report.approximate.pass) return report;
  const AlphabetPtr& sigma = p.alphabet;
  const auto stems = words_up_to(sigma->size(), continuation.maxStem);
  std::vector<std::vector<Symbol>> loops;
  for (std::size_t l = 1; l <= continuation.maxLoop; ++l) {
    auto ws = words_of_length(sigma->size(), l);
    loops.insert(loops.end(), ws.begin(), ws.end());
  }
  for (const auto& s : words_up_to(sigma->size(), continuation.maxPrefix)) {
    bool found = false;
    for (const auto& stem : stems) {
      std::vector<Symbol> full = s;
      full.insert(full.end(), stem.begin(), stem.end());
      for (const auto& loop : loops) {
        const LassoTrace t(sigma, full, loop);
        const LimitResult r = eval_limit(v, t, side, budget);
        if (r.resolved() && *r.value == p.evalLasso(t)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) {
      report.existential.pass = false;
      report.existential.prefixWitness = FiniteTrace{sigma, s};
      break;
    }
  }
  return report;
}

}  // namespace qmon
