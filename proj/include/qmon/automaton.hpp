#pragma once

// Deterministic automata over a finite alphabet: boolean property automata
// with safety / co-safety / Büchi / co-Büchi acceptance, and integer-weighted
// automata for energy properties.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmon/trace.hpp"

namespace qmon {

enum class AcceptKind { Safety, CoSafety, Buchi, CoBuchi };
enum class Polarity { Positive, Negative };

std::string to_string(AcceptKind k);

/// Load error for automaton and machine files; the message names the line.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Deterministic, total automaton. `accepting` always lists the states of
/// the ω-acceptance condition: for safety the complement is the bad trap,
/// for co-safety the accepting set itself is the good trap.
class Automaton {
 public:
  Automaton(AlphabetPtr alphabet, std::vector<std::string> states, std::size_t initial, AcceptKind kind,
            std::vector<bool> accepting, std::vector<std::vector<std::size_t>> delta);

  /// Line-based format: `alphabet:`, `states:`, `initial:`, `accept-kind:`,
  /// `accept:` and transition lines `q a -> q'`; `#` comments.
  static Automaton parse(std::string_view text);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t state_count() const { return states_.size(); }
  const std::string& state_name(std::size_t q) const { return states_.at(q); }
  std::size_t initial() const { return initial_; }
  AcceptKind kind() const { return kind_; }
  bool accepting(std::size_t q) const { return accepting_.at(q); }
  std::size_t next(std::size_t q, Symbol s) const { return delta_[q][s]; }

  std::size_t run(const FiniteTrace& s) const;
  std::size_t run_from(std::size_t q, const std::vector<Symbol>& s) const;

  /// States visited infinitely often along the lasso.
  std::vector<std::size_t> cycle_states(const LassoTrace& t) const;
  bool member(const LassoTrace& t) const;

  /// Whether every (Positive) or no (Negative) infinite continuation from q
  /// is accepted.
  bool determines_state(std::size_t q, Polarity p) const;
  bool determines(const FiniteTrace& s, Polarity p) const { return determines_state(run(s), p); }
  /// Some determining state is reachable from every reachable state.
  bool classically_monitorable() const;

  std::vector<std::size_t> reachable_from(std::size_t q) const;

 private:
  void analyse();

  AlphabetPtr alphabet_;
  std::vector<std::string> states_;
  std::size_t initial_;
  AcceptKind kind_;
  std::vector<bool> accepting_;
  std::vector<std::vector<std::size_t>> delta_;
  std::vector<bool> positive_;
  std::vector<bool> negative_;
};

std::string render_automaton(const Automaton& a);

/// Deterministic total automaton with an integer weight on every transition.
class WeightedAutomaton {
 public:
  struct Edge {
    std::size_t target;
    long long weight;
  };

  WeightedAutomaton(AlphabetPtr alphabet, std::vector<std::string> states, std::size_t initial,
                    std::vector<std::vector<Edge>> delta);

  /// `alphabet:`, `states:`, `initial:` and lines `q a -> q' : w`.
  static WeightedAutomaton parse(std::string_view text);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t state_count() const { return states_.size(); }
  const std::string& state_name(std::size_t q) const { return states_.at(q); }
  std::size_t initial() const { return initial_; }
  const Edge& edge(std::size_t q, Symbol s) const { return delta_[q][s]; }

 private:
  AlphabetPtr alphabet_;
  std::vector<std::string> states_;
  std::size_t initial_;
  std::vector<std::vector<Edge>> delta_;
};

std::string render_weighted(const WeightedAutomaton& a);

/// Reads a whole file; throws LoadError when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace qmon
