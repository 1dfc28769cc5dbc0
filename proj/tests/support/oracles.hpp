#pragma once

// Reference computations used by the tests. They work on raw token lists and
// transition tables and deliberately avoid the library's own evaluators, so a
// test comparing the two is a genuine cross-check.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qmon/automaton.hpp"
#include "qmon/domain.hpp"
#include "qmon/trace.hpp"

namespace oracle {

using qmon::BigInt;
using qmon::ExtendedValue;
using qmon::Rational;

/// Response time of every request in a finite token sequence: the number of
/// observations after the request up to and including the next ack, or up to
/// the end when none follows. nullopt marks a request followed by another
/// request before any ack.
inline std::vector<std::optional<long long>> response_times(const std::vector<std::string>& w) {
  std::vector<std::optional<long long>> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != "req") continue;
    std::optional<long long> rt = static_cast<long long>(w.size() - 1 - i);
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (w[j] == "ack") {
        rt = static_cast<long long>(j - i);
        break;
      }
      if (w[j] == "req") {
        rt = std::nullopt;
        break;
      }
    }
    out.push_back(rt);
  }
  return out;
}

inline ExtendedValue mrt(const std::vector<std::string>& w) {
  long long best = 0;
  for (const auto& rt : response_times(w)) {
    if (!rt) return ExtendedValue::pos_inf();
    best = std::max(best, *rt);
  }
  return ExtendedValue::integer(best);
}

inline ExtendedValue art(const std::vector<std::string>& w) {
  const auto rts = response_times(w);
  if (rts.empty()) return ExtendedValue::integer(0);
  long long sum = 0;
  for (const auto& rt : rts) {
    if (!rt) return ExtendedValue::pos_inf();
    sum += *rt;
  }
  Rational q(BigInt(sum), BigInt(static_cast<long long>(rts.size())));
  if (denominator(q) == 1) return ExtendedValue::integer(numerator(q));
  return ExtendedValue::rational(q);
}

inline std::vector<std::string> tokens(const qmon::FiniteTrace& s) {
  std::vector<std::string> out;
  for (auto x : s.symbols) out.push_back(s.alphabet->token(x));
  return out;
}

/// Unrolls a lasso to stem + n loop copies.
inline std::vector<std::string> unroll(const qmon::LassoTrace& t, std::size_t n) {
  std::vector<std::string> out;
  for (auto x : t.stem()) out.push_back(t.alphabet()->token(x));
  for (std::size_t i = 0; i < n; ++i)
    for (auto x : t.loop()) out.push_back(t.alphabet()->token(x));
  return out;
}

/// Maximal response time of a lasso: the unrolled value stabilises within a
/// few iterations unless a pending request waits forever, in which case it
/// keeps growing.
inline ExtendedValue mrt_lasso(const qmon::LassoTrace& t) {
  const ExtendedValue a = mrt(unroll(t, 20));
  const ExtendedValue b = mrt(unroll(t, 40));
  return a == b ? a : ExtendedValue::pos_inf();
}

/// Minimum credit keeping every one of the first n prefix weights of the run
/// of `a` on `t` non-negative.
inline long long energy_credit(const qmon::WeightedAutomaton& a, const qmon::LassoTrace& t, std::size_t n) {
  long long weight = 0;
  long long lowest = 0;
  std::size_t q = a.initial();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = a.edge(q, t.at(i));
    weight += e.weight;
    q = e.target;
    lowest = std::min(lowest, weight);
  }
  return -lowest;
}

/// ω-acceptance of u·v^ω from state q, by simulation: after |Q| loop
/// iterations the loop-boundary state has entered its cycle, and the next
/// |Q| iterations visit every state of the run's cycle.
inline bool accepts_from(const qmon::Automaton& a, std::size_t q, const std::vector<qmon::Symbol>& u,
                         const std::vector<qmon::Symbol>& v) {
  const std::size_t n = a.state_count();
  std::vector<bool> prefixStates(n, false);
  prefixStates[q] = true;
  for (auto s : u) prefixStates[q = a.next(q, s)] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (auto s : v) prefixStates[q = a.next(q, s)] = true;
  std::vector<bool> cycle(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (auto s : v) cycle[q = a.next(q, s)] = true;
  auto acc = [&](std::size_t x) { return a.accepting(x); };
  switch (a.kind()) {
    case qmon::AcceptKind::Safety:
      for (std::size_t x = 0; x < n; ++x)
        if ((prefixStates[x] || cycle[x]) && !acc(x)) return false;
      return true;
    case qmon::AcceptKind::CoSafety:
      for (std::size_t x = 0; x < n; ++x)
        if ((prefixStates[x] || cycle[x]) && acc(x)) return true;
      return false;
    case qmon::AcceptKind::Buchi:
      for (std::size_t x = 0; x < n; ++x)
        if (cycle[x] && acc(x)) return true;
      return false;
    case qmon::AcceptKind::CoBuchi:
      for (std::size_t x = 0; x < n; ++x)
        if (cycle[x] && !acc(x)) return false;
      return true;
  }
  return false;
}

inline std::vector<std::vector<qmon::Symbol>> all_words(std::size_t m, std::size_t minLen, std::size_t maxLen) {
  std::vector<std::vector<qmon::Symbol>> out;
  std::vector<std::vector<qmon::Symbol>> layer{{}};
  for (std::size_t len = 0; len <= maxLen; ++len) {
    if (len >= minLen) out.insert(out.end(), layer.begin(), layer.end());
    std::vector<std::vector<qmon::Symbol>> next;
    for (const auto& w : layer)
      for (qmon::Symbol s = 0; s < m; ++s) {
        next.push_back(w);
        next.back().push_back(s);
      }
    layer = std::move(next);
  }
  return out;
}

/// Brute-force determination: every (resp. no) lasso continuation from q with
/// |u|, |v| ≤ |Q| is accepted. Lassos of that size realise every reachable
/// cycle, so the sweep is complete for these automata.
inline bool determines(const qmon::Automaton& a, std::size_t q, bool positive) {
  const std::size_t n = a.state_count();
  const std::size_t m = a.alphabet()->size();
  const auto stems = all_words(m, 0, n);
  const auto loops = all_words(m, 1, n);
  for (const auto& u : stems)
    for (const auto& v : loops)
      if (accepts_from(a, q, u, v) != positive) return false;
  return true;
}

/// From every reachable state some determining state stays reachable.
inline bool classically_monitorable(const qmon::Automaton& a) {
  const std::size_t n = a.state_count();
  auto reach = [&](std::size_t from) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      std::size_t q = stack.back();
      stack.pop_back();
      for (qmon::Symbol s = 0; s < a.alphabet()->size(); ++s) {
        std::size_t r = a.next(q, s);
        if (!seen[r]) {
          seen[r] = true;
          stack.push_back(r);
        }
      }
    }
    return seen;
  };
  std::vector<bool> determining(n);
  for (std::size_t q = 0; q < n; ++q) determining[q] = determines(a, q, true) || determines(a, q, false);
  const auto fromInit = reach(a.initial());
  for (std::size_t q = 0; q < n; ++q) {
    if (!fromInit[q]) continue;
    const auto r = reach(q);
    bool ok = false;
    for (std::size_t x = 0; x < n; ++x) ok = ok || (r[x] && determining[x]);
    if (!ok) return false;
  }
  return true;
}

/// Random total automaton over `alphabet` with `states` states.
inline qmon::Automaton random_automaton(const qmon::AlphabetPtr& alphabet, std::size_t states, qmon::AcceptKind kind,
                                        std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, states - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::string> names;
  for (std::size_t q = 0; q < states; ++q) names.push_back("q" + std::to_string(q));
  std::vector<std::vector<std::size_t>> delta(states, std::vector<std::size_t>(alphabet->size()));
  std::vector<bool> acc(states);
  for (std::size_t q = 0; q < states; ++q) {
    acc[q] = coin(rng);
    for (auto& t : delta[q]) t = pick(rng);
  }
  if (kind == qmon::AcceptKind::Safety || kind == qmon::AcceptKind::CoSafety) {
    // One trap state carries the decided outcome.
    const std::size_t trap = states - 1;
    for (std::size_t q = 0; q < states; ++q) acc[q] = kind == qmon::AcceptKind::Safety;
    acc[trap] = kind != qmon::AcceptKind::Safety;
    for (auto& t : delta[trap]) t = trap;
  }
  return qmon::Automaton(alphabet, names, 0, kind, acc, delta);
}

inline qmon::WeightedAutomaton random_weighted(const qmon::AlphabetPtr& alphabet, std::size_t states, int lo, int hi,
                                               std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, states - 1);
  std::uniform_int_distribution<int> weight(lo, hi);
  std::vector<std::string> names;
  for (std::size_t q = 0; q < states; ++q) names.push_back("q" + std::to_string(q));
  std::vector<std::vector<qmon::WeightedAutomaton::Edge>> delta(states);
  for (auto& row : delta)
    for (std::size_t s = 0; s < alphabet->size(); ++s) row.push_back({pick(rng), weight(rng)});
  return qmon::WeightedAutomaton(alphabet, names, 0, delta);
}

/// Limit superior of a verdict sequence that is eventually periodic with the
/// loop: the largest value over one late loop iteration of a total order.
template <typename Less>
ExtendedValue late_max(const std::vector<ExtendedValue>& seq, std::size_t from, Less less) {
  ExtendedValue best = seq.at(from);
  for (std::size_t i = from; i < seq.size(); ++i)
    if (less(best, seq[i])) best = seq[i];
  return best;
}

}  // namespace oracle
