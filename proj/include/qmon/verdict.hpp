#pragma once

// Verdict functions, their limits along lasso traces, monotonicity checks and
// closure combinators.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmon/domain.hpp"
#include "qmon/trace.hpp"

namespace qmon {

enum class Monotonicity { Increasing, Decreasing, Unrestricted };

/// Incremental evaluation of a verdict function along one trace.
class VerdictRun {
 public:
  virtual ~VerdictRun() = default;
  virtual void step(Symbol s) = 0;
  /// Verdict on the prefix read so far.
  virtual ExtendedValue value() const = 0;
};

class VerdictFunction {
 public:
  using Factory = std::function<std::unique_ptr<VerdictRun>()>;

  VerdictFunction(std::string name, ValueDomain codomain, Monotonicity declared, Factory factory);

  const std::string& name() const { return name_; }
  const ValueDomain& codomain() const { return codomain_; }
  Monotonicity monotonicity() const { return declared_; }

  /// A fresh run positioned at the empty prefix.
  std::unique_ptr<VerdictRun> start() const { return factory_(); }

  /// v(s).
  ExtendedValue evaluate(const FiniteTrace& s) const;
  /// v(s_0), v(s_1), ..., v(s_n): one value per prefix, empty prefix first.
  std::vector<ExtendedValue> sequence(const FiniteTrace& s) const;

  VerdictFunction renamed(std::string name) const;
  VerdictFunction with_monotonicity(Monotonicity m) const;

 private:
  std::string name_;
  ValueDomain codomain_;
  Monotonicity declared_;
  Factory factory_;
};

/// Verdict recomputed from the whole prefix at every step.
VerdictFunction from_function(std::string name, ValueDomain codomain, Monotonicity declared,
                              std::function<ExtendedValue(const std::vector<Symbol>&)> f);

VerdictFunction constant_verdict(ValueDomain codomain, ExtendedValue value);

/// Verdict with an explicit state type: `step` updates the state, `out` reads it.
template <typename State, typename Step, typename Out>
VerdictFunction stateful_verdict(std::string name, ValueDomain codomain, Monotonicity declared, State initial,
                                 Step step, Out out) {
  struct Run final : VerdictRun {
    State state;
    Step step_fn;
    Out out_fn;
    Run(State s, Step st, Out o) : state(std::move(s)), step_fn(std::move(st)), out_fn(std::move(o)) {}
    void step(Symbol s) override { step_fn(state, s); }
    ExtendedValue value() const override { return out_fn(state); }
  };
  return VerdictFunction(std::move(name), std::move(codomain), declared,
                         [initial = std::move(initial), step = std::move(step), out = std::move(out)]() {
                           return std::make_unique<Run>(initial, step, out);
                         });
}

// ---------------------------------------------------------------------------
// Limits

struct LimitBudget {
  std::size_t maxLoopIterations = 1024;
  std::size_t confirmWindow = 3;
  /// Zero disables tolerance-based stopping.
  Rational epsilon = 0;
};

enum class LimitKind {
  Exact,
  NumericTolerance,
  /// Limit of a sequence that provably follows a rational function of the
  /// iteration index over the window (extrapolated, not reproduced).
  Converged,
  DivergedToTop,
  DivergedToBottom,
  Undetermined,
};

struct LimitResult {
  std::optional<ExtendedValue> value;
  LimitKind kind = LimitKind::Undetermined;
  std::size_t iterationsUsed = 0;

  bool resolved() const { return kind != LimitKind::Undetermined; }
};

std::string to_string(LimitKind k);
/// The value, or `undetermined`.
std::string render_limit(const LimitResult& r);

enum class Side { Below, Above };
std::string to_string(Side s);

LimitResult eval_limsup(const VerdictFunction& v, const LassoTrace& t, const LimitBudget& budget = {});
LimitResult eval_liminf(const VerdictFunction& v, const LassoTrace& t, const LimitBudget& budget = {});
/// limsup for Below, liminf for Above.
LimitResult eval_limit(const VerdictFunction& v, const LassoTrace& t, Side side, const LimitBudget& budget = {});

/// Limit of an arbitrary per-iteration summary sequence m_1, m_2, ... over a
/// domain; `upper` selects limsup (true) or liminf semantics for periodic
/// sequences. Returns nullopt-valued Undetermined when nothing is detected.
LimitResult detect_limit(const ValueDomain& d, const std::vector<std::optional<ExtendedValue>>& summaries,
                         bool upper, const LimitBudget& budget);

// ---------------------------------------------------------------------------
// Monotonicity

enum class MonotonicityClass { Increasing, Decreasing, Neither };
std::string to_string(MonotonicityClass m);

MonotonicityClass check_monotone(const VerdictFunction& v, const std::vector<LassoTrace>& suite, std::size_t depth);

// ---------------------------------------------------------------------------
// Combinators

class InvalidFunctionError : public Error {
 public:
  using Error::Error;
};

VerdictFunction combine_max(const VerdictFunction& v1, const VerdictFunction& v2);
VerdictFunction combine_min(const VerdictFunction& v1, const VerdictFunction& v2);
VerdictFunction combine_sum(const VerdictFunction& v1, const VerdictFunction& v2);
VerdictFunction combine_product(const VerdictFunction& v1, const VerdictFunction& v2);

/// pi applied pointwise; pi must be monotone on the codomain (checked on a
/// sample of values, InvalidFunctionError otherwise).
VerdictFunction map_continuous(const VerdictFunction& v, std::string name,
                               std::function<ExtendedValue(const ExtendedValue&)> pi);

/// Same evaluator over the inverse domain.
VerdictFunction complement(const VerdictFunction& v);

// ---------------------------------------------------------------------------
// Properties

/// A quantitative property evaluated on lassos, optionally with analytic
/// sup/inf over all continuations of a finite prefix.
struct QuantitativeProperty {
  std::string name;
  ValueDomain codomain;
  AlphabetPtr alphabet;
  std::function<ExtendedValue(const LassoTrace&)> evalLasso;
  std::function<ExtendedValue(const FiniteTrace&)> nuAt;
  std::function<ExtendedValue(const FiniteTrace&)> muAt;
};

}  // namespace qmon
