#pragma once

// Ground-truth evaluators for quantitative properties on lasso traces, their
// finite-trace verdicts, sup/inf over continuations, and continuity checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmon/automaton.hpp"
#include "qmon/verdict.hpp"

namespace qmon {

// ---------------------------------------------------------------------------
// Alphabets

/// {req, ack, other}.
AlphabetPtr server_alphabet();
/// {req1, ack1, ..., reqk, ackk, other}.
AlphabetPtr kpair_alphabet(std::size_t k);
/// {1, ..., k}.
AlphabetPtr pk_alphabet(std::size_t k);
/// {0, 1, sep}: binary digits and the block separator.
AlphabetPtr binary_alphabet();
/// {a, b}.
AlphabetPtr ab_alphabet();

// ---------------------------------------------------------------------------
// Response times

/// Per-pair bookkeeping of requests and acknowledgements. The response time
/// of a request counts the observations after it up to and including the
/// matching ack; a second request before the ack is absorbing.
struct ResponseTracker {
  enum class Event { Request, Ack, Other };

  bool dead = false;
  bool pending = false;
  BigInt current = 0;    // observations since the pending request
  BigInt maximum = 0;    // largest completed response time
  BigInt total = 0;      // sum of completed response times
  BigInt completed = 0;  // number of completed requests

  void step(Event e);
  /// max(completed maxima, current pending time), or inf.
  ExtendedValue max_value() const;
  /// Average response time counting the pending request with its current
  /// time, 0 before the first request, or inf.
  ExtendedValue average_value() const;
};

ResponseTracker::Event server_event(Symbol s);
/// Event of symbol s of the k-pair alphabet as seen by pair `pair` (0-based).
ResponseTracker::Event kpair_event(Symbol s, std::size_t pair);

/// Finite-trace maximal response time.
ExtendedValue mrt_value(const FiniteTrace& s);
/// Finite-trace average response time.
ExtendedValue art_value(const FiniteTrace& s);
VerdictFunction mrt_verdict();
VerdictFunction art_verdict();
/// Componentwise maximal response times over the k-pair alphabet.
VerdictFunction kpair_mrt_verdict(std::size_t k);

ExtendedValue eval_mrt(const LassoTrace& t);
ExtendedValue eval_art(const LassoTrace& t);
ExtendedValue eval_kpair_mrt(const LassoTrace& t, std::size_t k);

// ---------------------------------------------------------------------------
// Discounted safety / co-safety and energy

/// 1 - 2^-n for the shortest violating prefix length n, 1 if none.
ExtendedValue eval_discounted_safety(const Automaton& p, const LassoTrace& t);
/// 2^-n for the shortest satisfying prefix length n, 0 if none.
ExtendedValue eval_discounted_cosafety(const Automaton& p, const LassoTrace& t);
/// Least k >= 0 with weight(prefix) + k >= 0 on every prefix; inf when the
/// run ends in a negative cycle.
ExtendedValue eval_energy(const WeightedAutomaton& a, const LassoTrace& t);

// ---------------------------------------------------------------------------
// Register-hierarchy properties

/// inf if |s|_i >= |s|_{i+1} holds on every prefix for all i < k, otherwise
/// the length of the shortest prefix where it fails.
ExtendedValue eval_pk(const LassoTrace& t, std::size_t k);
/// Same on a finite trace (inf when no prefix fails yet).
ExtendedValue pk_value(const FiniteTrace& s, std::size_t k);
/// Binary-block generalisation: inf if n_i >= n_{i+1} always holds for all
/// i >= 1, otherwise the number of separators in the shortest failing prefix.
ExtendedValue eval_binary_p(const LassoTrace& t);
ExtendedValue binary_p_value(const FiniteTrace& s);
/// 2^n for the longest block of a's (inf if unbounded).
ExtendedValue eval_doubling(const LassoTrace& t);
/// Length of the longest block of a's in a finite trace.
std::size_t longest_a_block(const FiniteTrace& s);

// ---------------------------------------------------------------------------
// Properties, sup/inf over continuations and continuity

QuantitativeProperty mrt_property();
QuantitativeProperty art_property();
QuantitativeProperty kpair_mrt_property(std::size_t k);
QuantitativeProperty discounted_safety_property(const Automaton& p);
QuantitativeProperty discounted_cosafety_property(const Automaton& p);
QuantitativeProperty energy_property(const WeightedAutomaton& a);
QuantitativeProperty pk_property(std::size_t k);
QuantitativeProperty binary_property();
QuantitativeProperty doubling_property();
/// Characteristic function of a boolean property, valued in `domain`
/// (one of the boolean domains).
QuantitativeProperty membership_property(const Automaton& p, const ValueDomain& domain);

struct LassoSearch {
  std::size_t maxStem = 3;
  std::size_t maxLoop = 3;
  /// Exhaustive enumeration up to this alphabet size, seeded sampling above.
  std::size_t exhaustiveAlphabet = 3;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
};

struct BoundValue {
  ExtendedValue value;
  /// False when the value comes from a bounded search (a lower bound of the
  /// sup, an upper bound of the inf).
  bool exact = true;
};

BoundValue nu(const QuantitativeProperty& p, const FiniteTrace& s, const LassoSearch& search = {});
BoundValue mu(const QuantitativeProperty& p, const FiniteTrace& s, const LassoSearch& search = {});

enum class ContinuityVerdict { Consistent, Refuted, Inconclusive };
std::string to_string(ContinuityVerdict v);

struct ContinuityCheck {
  ContinuityVerdict verdict = ContinuityVerdict::Inconclusive;
  std::optional<LassoTrace> witness;
  /// Limit of ν (resp. μ) along the witness and the property value there.
  std::optional<ExtendedValue> limit;
  std::optional<ExtendedValue> value;
  std::size_t checked = 0;
  std::size_t inconclusive = 0;
};

struct ContinuityReport {
  ContinuityCheck continuity;
  ContinuityCheck cocontinuity;
};

/// For each suite lasso, compares the limit of ν_p (continuity) and μ_p
/// (co-continuity) along its prefixes with the property value.
ContinuityReport check_continuity(const QuantitativeProperty& p, const std::vector<LassoTrace>& suite,
                                  const LimitBudget& budget = {}, const LassoSearch& search = {});

}  // namespace qmon
