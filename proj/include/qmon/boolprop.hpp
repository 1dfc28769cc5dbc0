#pragma once

// Verdict functions for boolean properties given as deterministic automata,
// and empirical classification of how a verdict monitors a property.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmon/automaton.hpp"
#include "qmon/qprop.hpp"
#include "qmon/verdict.hpp"

namespace qmon {

/// Conjunction of (safety ∪ co-safety) pairs.
struct ObligationList {
  std::vector<std::pair<Automaton, Automaton>> pairs;
};

/// Conjunction of (response ∪ persistence) pairs: Büchi and co-Büchi automata.
struct ReactivityList {
  std::vector<std::pair<Automaton, Automaton>> pairs;
};

/// F once s negatively determines P, T before (domain Bf).
VerdictFunction monitor_safety(const Automaton& p);
/// T once s positively determines P, F before (domain Bt).
VerdictFunction monitor_cosafety(const Automaton& p);
/// T iff every pair has S_i not negatively determined or C_i positively
/// determined (domain B).
VerdictFunction monitor_obligation(const ObligationList& o);
/// T iff the run of s ends in an accepting state (domain Bt).
VerdictFunction monitor_response(const Automaton& buchi);
/// F iff the run of s ends in a non-accepting state (domain Bf).
VerdictFunction monitor_persistence(const Automaton& cobuchi);
/// Outputs T at ε and whenever every active component has fired since the
/// last T; F while a component whose response side is lost is outside its
/// persistence set; ⊥ otherwise (domain BBot).
VerdictFunction monitor_reactivity(const ReactivityList& r);
/// T iff s positively determines P (domain Bt).
VerdictFunction monitor_any_existential(const Automaton& p);
/// F iff s negatively determines P (domain Bf).
VerdictFunction monitor_any_existential_false(const Automaton& p);
/// T / F when s positively / negatively determines P, ⊥ otherwise (domain BBot).
VerdictFunction monitor_classical(const Automaton& p);
/// Replaces ⊥ by the last non-⊥ verdict (`initial` before any), giving a
/// verdict on B.
VerdictFunction smooth_bottom(const VerdictFunction& v, bool initial = true);

/// Membership in ⋂(S_i ∪ C_i), valued in `domain`.
QuantitativeProperty obligation_property(const ObligationList& o, const ValueDomain& domain);
/// Membership in ⋂(R_i ∪ P_i), valued in `domain`.
QuantitativeProperty reactivity_property(const ReactivityList& r, const ValueDomain& domain);

/// Number of value changes along the prefixes of s.
std::size_t count_switches(const VerdictFunction& v, const FiniteTrace& s);

// ---------------------------------------------------------------------------
// Classification

struct ContinuationBudget {
  /// Prefixes s checked for the existential condition: all words up to this length.
  std::size_t maxPrefix = 2;
  /// Lasso continuations tried after each prefix.
  std::size_t maxStem = 2;
  std::size_t maxLoop = 3;
};

struct ModalityCheck {
  bool pass = false;
  /// First failing lasso (universal, approximate) and its limit and value.
  std::optional<LassoTrace> witness;
  std::optional<ExtendedValue> limit;
  std::optional<ExtendedValue> value;
  /// First prefix without a matching continuation (existential).
  std::optional<FiniteTrace> prefixWitness;
};

struct ModalityReport {
  ModalityCheck universal;
  ModalityCheck existential;
  ModalityCheck approximate;
  std::size_t lassos = 0;
  std::size_t undetermined = 0;
};

/// Checks whether v monitors p from the given side (limsup ≤ p from below,
/// liminf ≥ p from above): universal = equality on every suite lasso,
/// approximate = the inequality on every suite lasso, existential =
/// approximate and, for every short prefix s, equality on some continuation.
/// Lassos whose limit cannot be determined count as failures.
ModalityReport classify_modality(const VerdictFunction& v, const QuantitativeProperty& p, Side side,
                                 const std::vector<LassoTrace>& suite, const ContinuationBudget& continuation = {},
                                 const LimitBudget& budget = {});

}  // namespace qmon
