#include "qmon/qprop.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "qmon/suite.hpp"

namespace qmon {

// ---------------------------------------------------------------------------
// Alphabets

AlphabetPtr server_alphabet() {
  static const AlphabetPtr a = make_alphabet({"req", "ack", "other"});
  return a;
}

AlphabetPtr kpair_alphabet(std::size_t k) {
  std::vector<std::string> tokens;
  for (std::size_t i = 1; i <= k; ++i) {
    tokens.push_back("req" + std::to_string(i));
    tokens.push_back("ack" + std::to_string(i));
  }
  tokens.push_back("other");
  return make_alphabet(std::move(tokens));
}

AlphabetPtr pk_alphabet(std::size_t k) {
  std::vector<std::string> tokens;
  for (std::size_t i = 1; i <= k; ++i) tokens.push_back(std::to_string(i));
  return make_alphabet(std::move(tokens));
}

AlphabetPtr binary_alphabet() {
  static const AlphabetPtr a = make_alphabet({"0", "1", "sep"});
  return a;
}

AlphabetPtr ab_alphabet() {
  static const AlphabetPtr a = make_alphabet({"a", "b"});
  return a;
}

// ---------------------------------------------------------------------------
// Response times

using Event = ResponseTracker::Event;

void ResponseTracker::step(Event e) {
  if (dead) return;
  switch (e) {
    case Event::Request:
      if (pending) {
        dead = true;
      } else {
        pending = true;
        current = 0;
      }
      break;
    case Event::Ack:
      if (pending) {
        ++current;
        maximum = std::max(maximum, current);
        total += current;
        ++completed;
        pending = false;
        current = 0;
      }
      break;
    case Event::Other:
      if (pending) ++current;
      break;
  }
}

ExtendedValue ResponseTracker::max_value() const {
  if (dead) return ExtendedValue::pos_inf();
  return ExtendedValue::integer(pending ? std::max(maximum, current) : maximum);
}

ExtendedValue ResponseTracker::average_value() const {
  if (dead) return ExtendedValue::pos_inf();
  const BigInt n = completed + (pending ? 1 : 0);
  if (n == 0) return ExtendedValue::integer(0);
  return ExtendedValue::rational(Rational(BigInt(total + (pending ? current : BigInt(0))), n));
}

Event server_event(Symbol s) {
  switch (s) {
    case 0:
      return Event::Request;
    case 1:
      return Event::Ack;
    default:
      return Event::Other;
  }
}

Event kpair_event(Symbol s, std::size_t pair) {
  if (s == 2 * pair) return Event::Request;
  if (s == 2 * pair + 1) return Event::Ack;
  return Event::Other;
}

namespace {

ResponseTracker track(const std::vector<Symbol>& s) {
  ResponseTracker r;
  for (Symbol x : s) r.step(server_event(x));
  return r;
}

bool loop_has(const std::vector<Symbol>& loop, const std::function<Event(Symbol)>& ev, Event e) {
  return std::any_of(loop.begin(), loop.end(), [&](Symbol s) { return ev(s) == e; });
}

/// mrt of one pair along a lasso, with `ev` mapping symbols to its events.
ExtendedValue lasso_mrt(const LassoTrace& t, const std::function<Event(Symbol)>& ev) {
  ResponseTracker r;
  for (Symbol s : t.stem()) r.step(ev(s));
  for (Symbol s : t.loop()) r.step(ev(s));
  const bool quiet = !loop_has(t.loop(), ev, Event::Request) && !loop_has(t.loop(), ev, Event::Ack);
  if (!r.dead && r.pending && quiet) return ExtendedValue::pos_inf();
  // From the second iteration on, the loop acts identically every time.
  for (int i = 0; i < 2; ++i)
    for (Symbol s : t.loop()) r.step(ev(s));
  return r.max_value();
}

}  // namespace

ExtendedValue mrt_value(const FiniteTrace& s) { return track(s.symbols).max_value(); }
ExtendedValue art_value(const FiniteTrace& s) { return track(s.symbols).average_value(); }

VerdictFunction mrt_verdict() {
  return stateful_verdict(
      "mrt", ValueDomain::nat_inf(), Monotonicity::Increasing, ResponseTracker{},
      [](ResponseTracker& r, Symbol s) { r.step(server_event(s)); }, [](const ResponseTracker& r) { return r.max_value(); });
}

VerdictFunction art_verdict() {
  return stateful_verdict(
      "art", ValueDomain::rat_inf(), Monotonicity::Unrestricted, ResponseTracker{},
      [](ResponseTracker& r, Symbol s) { r.step(server_event(s)); },
      [](const ResponseTracker& r) { return r.average_value(); });
}

VerdictFunction kpair_mrt_verdict(std::size_t k) {
  return stateful_verdict(
      "kmrt:" + std::to_string(k), ValueDomain::product(ValueDomain::nat_inf(), k), Monotonicity::Increasing,
      std::vector<ResponseTracker>(k),
      [k](std::vector<ResponseTracker>& rs, Symbol s) {
        for (std::size_t i = 0; i < k; ++i) rs[i].step(kpair_event(s, i));
      },
      [](const std::vector<ResponseTracker>& rs) {
        ExtendedValue::Tuple out;
        for (const auto& r : rs) out.push_back(r.max_value());
        return ExtendedValue::tuple(std::move(out));
      });
}

ExtendedValue eval_mrt(const LassoTrace& t) { return lasso_mrt(t, server_event); }

ExtendedValue eval_kpair_mrt(const LassoTrace& t, std::size_t k) {
  ExtendedValue::Tuple out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(lasso_mrt(t, [i](Symbol s) { return kpair_event(s, i); }));
  return ExtendedValue::tuple(std::move(out));
}

ExtendedValue eval_art(const LassoTrace& t) {
  ResponseTracker r;
  for (Symbol s : t.stem()) r.step(server_event(s));
  for (int i = 0; i < 2; ++i)
    for (Symbol s : t.loop()) r.step(server_event(s));
  auto weight = [](const ResponseTracker& x) -> BigInt { return x.total + (x.pending ? x.current : BigInt(0)); };
  auto count = [](const ResponseTracker& x) -> BigInt { return x.completed + (x.pending ? 1 : 0); };
  const BigInt t0 = weight(r);
  const BigInt c0 = count(r);
  for (Symbol s : t.loop()) r.step(server_event(s));
  if (r.dead) return ExtendedValue::pos_inf();
  const BigInt dt = weight(r) - t0;
  const BigInt dc = count(r) - c0;
  if (dc > 0) return ExtendedValue::rational(Rational(dt, dc));
  if (dt > 0) return ExtendedValue::pos_inf();
  return r.average_value();
}

// ---------------------------------------------------------------------------
// Discounted safety / co-safety

namespace {

Rational pow2_inv(std::size_t n) { return Rational(BigInt(1), BigInt(1) << n); }

/// Index of the first position (0 = empty prefix) along `states` whose state
/// satisfies `hit`.
template <typename Pred>
std::optional<std::size_t> first_hit(const Automaton& a, const std::vector<Symbol>& s, Pred hit) {
  std::size_t q = a.initial();
  if (hit(q)) return 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    q = a.next(q, s[i]);
    if (hit(q)) return i + 1;
  }
  return std::nullopt;
}

/// First hitting time along a lasso; the state at loop boundaries repeats
/// after at most |Q| iterations.
template <typename Pred>
std::optional<std::size_t> first_hit_lasso(const Automaton& a, const LassoTrace& t, Pred hit) {
  std::vector<Symbol> word = t.stem();
  for (std::size_t i = 0; i <= a.state_count(); ++i) word.insert(word.end(), t.loop().begin(), t.loop().end());
  return first_hit(a, word, hit);
}

/// Fewest steps from q to a `target` state.
template <typename Pred>
std::optional<std::size_t> shortest_to(const Automaton& a, std::size_t q, Pred target) {
  std::vector<std::size_t> dist(a.state_count(), SIZE_MAX);
  std::vector<std::size_t> frontier{q};
  dist[q] = 0;
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (Symbol s = 0; s < a.alphabet()->size(); ++s) {
        std::size_t v = a.next(u, s);
        if (target(v)) return dist[u] + 1;
        if (dist[v] == SIZE_MAX) {
          dist[v] = dist[u] + 1;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

/// Most steps from q (not a target) until a target state is forced; nullopt
/// when a cycle avoiding targets is reachable.
template <typename Pred>
std::optional<std::size_t> longest_to(const Automaton& a, std::size_t q, Pred target) {
  enum Mark { White, Grey, Black };
  std::vector<Mark> mark(a.state_count(), White);
  std::vector<std::size_t> longest(a.state_count(), 0);
  bool cyclic = false;
  std::function<void(std::size_t)> visit = [&](std::size_t u) {
    mark[u] = Grey;
    std::size_t best = 0;
    for (Symbol s = 0; s < a.alphabet()->size() && !cyclic; ++s) {
      std::size_t v = a.next(u, s);
      if (target(v)) {
        best = std::max<std::size_t>(best, 1);
        continue;
      }
      if (mark[v] == Grey) {
        cyclic = true;
        return;
      }
      if (mark[v] == White) visit(v);
      best = std::max(best, longest[v] + 1);
    }
    longest[u] = best;
    mark[u] = Black;
  };
  visit(q);
  if (cyclic) return std::nullopt;
  return longest[q];
}

void require_kind(const Automaton& p, AcceptKind k) {
  if (p.kind() != k) throw Error("expected a " + to_string(k) + " automaton, got " + to_string(p.kind()));
}

ExtendedValue disc_safe_value(std::size_t n) { return ExtendedValue::rational(Rational(1) - pow2_inv(n)); }
ExtendedValue disc_cosafe_value(std::size_t n) { return ExtendedValue::rational(pow2_inv(n)); }

}  // namespace

ExtendedValue eval_discounted_safety(const Automaton& p, const LassoTrace& t) {
  require_kind(p, AcceptKind::Safety);
  auto n = first_hit_lasso(p, t, [&](std::size_t q) { return !p.accepting(q); });
  return n ? disc_safe_value(*n) : ExtendedValue::integer(1);
}

ExtendedValue eval_discounted_cosafety(const Automaton& p, const LassoTrace& t) {
  require_kind(p, AcceptKind::CoSafety);
  auto n = first_hit_lasso(p, t, [&](std::size_t q) { return p.accepting(q); });
  return n ? disc_cosafe_value(*n) : ExtendedValue::integer(0);
}

// ---------------------------------------------------------------------------
// Energy

namespace {

struct EnergyScan {
  std::size_t state;
  long long weight = 0;
  long long lowest = 0;

  void step(const WeightedAutomaton& a, Symbol s) {
    const auto& e = a.edge(state, s);
    weight += e.weight;
    lowest = std::min(lowest, weight);
    state = e.target;
  }
};

EnergyScan energy_scan(const WeightedAutomaton& a, const std::vector<Symbol>& s) {
  EnergyScan e{a.initial()};
  for (Symbol x : s) e.step(a, x);
  return e;
}

/// Least initial credit from q that keeps some infinite path non-negative;
/// nullopt when every path eventually runs out.
std::optional<long long> least_credit(const WeightedAutomaton& a, std::size_t q) {
  long long max_neg = 0;
  for (std::size_t u = 0; u < a.state_count(); ++u)
    for (Symbol s = 0; s < a.alphabet()->size(); ++s) max_neg = std::max(max_neg, -a.edge(u, s).weight);
  const long long bound = static_cast<long long>(a.state_count()) * max_neg;
  std::vector<long long> credit(a.state_count(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < a.state_count(); ++u) {
      long long best = LLONG_MAX;
      for (Symbol s = 0; s < a.alphabet()->size(); ++s) {
        const auto& e = a.edge(u, s);
        if (credit[e.target] == LLONG_MAX) continue;
        best = std::min(best, std::max(0LL, credit[e.target] - e.weight));
      }
      if (best > bound) best = LLONG_MAX;
      if (best != credit[u]) {
        credit[u] = best;
        changed = true;
      }
    }
  }
  if (credit[q] == LLONG_MAX) return std::nullopt;
  return credit[q];
}

/// Lowest weight of any finite path from q (0 for the empty path); nullopt
/// when a negative cycle is reachable.
std::optional<long long> lowest_path(const WeightedAutomaton& a, std::size_t q) {
  const std::size_t n = a.state_count();
  std::vector<std::optional<long long>> dist(n);
  dist[q] = 0;
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (!dist[u]) continue;
      for (Symbol s = 0; s < a.alphabet()->size(); ++s) {
        const auto& e = a.edge(u, s);
        long long d = *dist[u] + e.weight;
        if (!dist[e.target] || d < *dist[e.target]) {
          dist[e.target] = d;
          changed = true;
        }
      }
    }
    if (!changed) {
      long long low = 0;
      for (const auto& d : dist)
        if (d) low = std::min(low, *d);
      return low;
    }
  }
  return std::nullopt;
}

}  // namespace

ExtendedValue eval_energy(const WeightedAutomaton& a, const LassoTrace& t) {
  EnergyScan e = energy_scan(a, t.stem());
  std::map<std::size_t, long long> seen;  // loop-start state -> weight there
  while (true) {
    auto [it, fresh] = seen.emplace(e.state, e.weight);
    if (!fresh) {
      // One full period has been replayed; later prefixes only repeat it
      // shifted by the period weight.
      if (e.weight - it->second < 0) return ExtendedValue::pos_inf();
      return ExtendedValue::integer(-e.lowest);
    }
    for (Symbol s : t.loop()) e.step(a, s);
  }
}

// ---------------------------------------------------------------------------
// Register-hierarchy properties

namespace {

struct PkScan {
  std::vector<long long> counts;  // counts[j] = |s|_j, 1-based
  std::size_t length = 0;
  std::optional<std::size_t> violation;

  explicit PkScan(std::size_t k) : counts(k + 2, 0) {}

  void step(Symbol s) {
    ++length;
    if (violation) return;
    const std::size_t j = s + 1;
    ++counts[j];
    if (j >= 2 && counts[j - 1] < counts[j]) violation = length;
  }
  std::vector<long long> differences(std::size_t k) const {
    std::vector<long long> d;
    for (std::size_t i = 1; i < k; ++i) d.push_back(counts[i] - counts[i + 1]);
    return d;
  }
};

ExtendedValue finite_or_inf(const std::optional<std::size_t>& n) {
  return n ? ExtendedValue::integer(static_cast<long long>(*n)) : ExtendedValue::pos_inf();
}

struct BinaryScan {
  BigInt block = 0;
  std::map<BigInt, long long> counts;
  long long separators = 0;
  std::optional<long long> violation;

  void step(Symbol s) {
    if (violation) return;
    if (s == 2) {
      ++separators;
      const BigInt v = block;
      block = 0;
      if (v == 0) return;
      long long nv = ++counts[v];
      if (v >= 2) {
        auto it = counts.find(v - 1);
        long long prev = it == counts.end() ? 0 : it->second;
        if (prev < nv) violation = separators;
      }
    } else {
      block = block * 2 + (s == 1 ? 1 : 0);
    }
  }
};

std::size_t longest_block(const std::vector<Symbol>& s, std::size_t& run) {
  std::size_t best = 0;
  for (Symbol x : s) {
    run = x == 0 ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

}  // namespace

ExtendedValue pk_value(const FiniteTrace& s, std::size_t k) {
  PkScan p(k);
  for (Symbol x : s.symbols) p.step(x);
  return finite_or_inf(p.violation);
}

ExtendedValue eval_pk(const LassoTrace& t, std::size_t k) {
  PkScan p(k);
  for (Symbol x : t.stem()) p.step(x);
  while (true) {
    const auto before = p.differences(k);
    for (Symbol x : t.loop()) p.step(x);
    if (p.violation) return finite_or_inf(p.violation);
    const auto after = p.differences(k);
    bool safe = true;
    for (std::size_t i = 0; i < before.size(); ++i) safe = safe && after[i] >= before[i];
    if (safe) return ExtendedValue::pos_inf();
  }
}

ExtendedValue binary_p_value(const FiniteTrace& s) {
  BinaryScan b;
  for (Symbol x : s.symbols) b.step(x);
  return b.violation ? ExtendedValue::integer(*b.violation) : ExtendedValue::pos_inf();
}

ExtendedValue eval_binary_p(const LassoTrace& t) {
  BinaryScan b;
  for (Symbol x : t.stem()) b.step(x);
  for (Symbol x : t.loop()) b.step(x);
  // From the second iteration on every iteration completes the same blocks.
  constexpr std::size_t kMaxIterations = 1000000;
  for (std::size_t i = 0; i < kMaxIterations; ++i) {
    const auto before = b.counts;
    for (Symbol x : t.loop()) b.step(x);
    if (b.violation) return ExtendedValue::integer(*b.violation);
    auto delta = [&](const BigInt& v) {
      auto a = b.counts.find(v);
      auto c = before.find(v);
      return (a == b.counts.end() ? 0 : a->second) - (c == before.end() ? 0 : c->second);
    };
    bool safe = true;
    for (const auto& [v, n] : b.counts) {
      (void)n;
      if (v >= 2 && delta(v) > delta(v - 1)) safe = false;
    }
    if (safe) return ExtendedValue::pos_inf();
  }
  throw Error("binary property did not stabilise on " + render_lasso(t));
}

std::size_t longest_a_block(const FiniteTrace& s) {
  std::size_t run = 0;
  return longest_block(s.symbols, run);
}

ExtendedValue eval_doubling(const LassoTrace& t) {
  if (std::all_of(t.loop().begin(), t.loop().end(), [](Symbol s) { return s == 0; })) return ExtendedValue::pos_inf();
  std::vector<Symbol> word = t.stem();
  for (int i = 0; i < 2; ++i) word.insert(word.end(), t.loop().begin(), t.loop().end());
  std::size_t run = 0;
  return ExtendedValue::integer(BigInt(1) << longest_block(word, run));
}

// ---------------------------------------------------------------------------
// Properties

QuantitativeProperty mrt_property() {
  QuantitativeProperty p{"mrt", ValueDomain::nat_inf(), server_alphabet(), eval_mrt, nullptr, nullptr};
  p.nuAt = [](const FiniteTrace&) { return ExtendedValue::pos_inf(); };
  p.muAt = [](const FiniteTrace& s) {
    ResponseTracker r = track(s.symbols);
    if (r.dead) return ExtendedValue::pos_inf();
    return ExtendedValue::integer(r.pending ? std::max(r.maximum, BigInt(r.current + 1)) : r.maximum);
  };
  return p;
}

QuantitativeProperty art_property() {
  QuantitativeProperty p{"art", ValueDomain::rat_inf(), server_alphabet(), eval_art, nullptr, nullptr};
  p.nuAt = [](const FiniteTrace&) { return ExtendedValue::pos_inf(); };
  p.muAt = [](const FiniteTrace& s) {
    ResponseTracker r = track(s.symbols);
    if (r.dead) return ExtendedValue::pos_inf();
    if (r.pending) r.step(Event::Ack);
    if (r.completed == 0) return ExtendedValue::integer(0);
    Rational avg(r.total, r.completed);
    return ExtendedValue::rational(std::min(avg, Rational(1)));
  };
  return p;
}

QuantitativeProperty kpair_mrt_property(std::size_t k) {
  QuantitativeProperty p{"kmrt:" + std::to_string(k), ValueDomain::product(ValueDomain::nat_inf(), k),
                         kpair_alphabet(k), [k](const LassoTrace& t) { return eval_kpair_mrt(t, k); }, nullptr,
                         nullptr};
  p.nuAt = [k](const FiniteTrace&) {
    return ExtendedValue::tuple(ExtendedValue::Tuple(k, ExtendedValue::pos_inf()));
  };
  p.muAt = [k](const FiniteTrace& s) {
    ExtendedValue::Tuple out;
    for (std::size_t i = 0; i < k; ++i) {
      ResponseTracker r;
      for (Symbol x : s.symbols) r.step(kpair_event(x, i));
      if (r.dead) {
        out.push_back(ExtendedValue::pos_inf());
      } else {
        out.push_back(ExtendedValue::integer(r.pending ? std::max(r.maximum, BigInt(r.current + 1)) : r.maximum));
      }
    }
    return ExtendedValue::tuple(std::move(out));
  };
  return p;
}

QuantitativeProperty discounted_safety_property(const Automaton& a) {
  require_kind(a, AcceptKind::Safety);
  QuantitativeProperty p{"disc-safe", ValueDomain::rat_inf(), a.alphabet(),
                         [a](const LassoTrace& t) { return eval_discounted_safety(a, t); }, nullptr, nullptr};
  auto bad = [a](std::size_t q) { return !a.accepting(q); };
  p.nuAt = [a, bad](const FiniteTrace& s) {
    if (auto n = first_hit(a, s.symbols, bad)) return disc_safe_value(*n);
    auto l = longest_to(a, a.run(s), bad);
    return l ? disc_safe_value(s.size() + *l) : ExtendedValue::integer(1);
  };
  p.muAt = [a, bad](const FiniteTrace& s) {
    if (auto n = first_hit(a, s.symbols, bad)) return disc_safe_value(*n);
    auto d = shortest_to(a, a.run(s), bad);
    return d ? disc_safe_value(s.size() + *d) : ExtendedValue::integer(1);
  };
  return p;
}

QuantitativeProperty discounted_cosafety_property(const Automaton& a) {
  require_kind(a, AcceptKind::CoSafety);
  QuantitativeProperty p{"disc-cosafe", ValueDomain::rat_inf(), a.alphabet(),
                         [a](const LassoTrace& t) { return eval_discounted_cosafety(a, t); }, nullptr, nullptr};
  auto good = [a](std::size_t q) { return a.accepting(q); };
  p.nuAt = [a, good](const FiniteTrace& s) {
    if (auto n = first_hit(a, s.symbols, good)) return disc_cosafe_value(*n);
    auto d = shortest_to(a, a.run(s), good);
    return d ? disc_cosafe_value(s.size() + *d) : ExtendedValue::integer(0);
  };
  p.muAt = [a, good](const FiniteTrace& s) {
    if (auto n = first_hit(a, s.symbols, good)) return disc_cosafe_value(*n);
    auto l = longest_to(a, a.run(s), good);
    return l ? disc_cosafe_value(s.size() + *l) : ExtendedValue::integer(0);
  };
  return p;
}

QuantitativeProperty energy_property(const WeightedAutomaton& a) {
  QuantitativeProperty p{"energy", ValueDomain::nat_inf(), a.alphabet(),
                         [a](const LassoTrace& t) { return eval_energy(a, t); }, nullptr, nullptr};
  p.nuAt = [a](const FiniteTrace& s) {
    EnergyScan e = energy_scan(a, s.symbols);
    auto low = lowest_path(a, e.state);
    if (!low) return ExtendedValue::pos_inf();
    return ExtendedValue::integer(std::max(-e.lowest, -(e.weight + *low)));
  };
  p.muAt = [a](const FiniteTrace& s) {
    EnergyScan e = energy_scan(a, s.symbols);
    auto credit = least_credit(a, e.state);
    if (!credit) return ExtendedValue::pos_inf();
    return ExtendedValue::integer(std::max(-e.lowest, *credit - e.weight));
  };
  return p;
}

QuantitativeProperty pk_property(std::size_t k) {
  QuantitativeProperty p{"p" + std::to_string(k), ValueDomain::nat_inf(), pk_alphabet(k),
                         [k](const LassoTrace& t) { return eval_pk(t, k); }, nullptr, nullptr};
  p.nuAt = [k](const FiniteTrace& s) { return pk_value(s, k); };
  p.muAt = [k](const FiniteTrace& s) {
    PkScan scan(k);
    for (Symbol x : s.symbols) scan.step(x);
    if (scan.violation || k < 2) return finite_or_inf(scan.violation);
    // Repeating symbol i+1 exactly d_i + 1 times breaks the i-th constraint
    // first; no continuation can do it faster.
    const auto d = scan.differences(k);
    const long long fewest = *std::min_element(d.begin(), d.end()) + 1;
    return ExtendedValue::integer(static_cast<long long>(s.size()) + fewest);
  };
  return p;
}

QuantitativeProperty binary_property() {
  QuantitativeProperty p{"binary", ValueDomain::nat_inf(), binary_alphabet(), eval_binary_p, nullptr, nullptr};
  p.nuAt = [](const FiniteTrace& s) { return binary_p_value(s); };
  p.muAt = [](const FiniteTrace& s) {
    BinaryScan b;
    for (Symbol x : s.symbols) b.step(x);
    if (b.violation) return ExtendedValue::integer(*b.violation);
    // The current block can always be completed to a value v >= 2 with
    // n_{v-1} = 0, which fails at the next separator.
    return ExtendedValue::integer(b.separators + 1);
  };
  return p;
}

QuantitativeProperty doubling_property() {
  QuantitativeProperty p{"doubling", ValueDomain::nat_inf(), ab_alphabet(), eval_doubling, nullptr, nullptr};
  p.nuAt = [](const FiniteTrace&) { return ExtendedValue::pos_inf(); };
  p.muAt = [](const FiniteTrace& s) { return ExtendedValue::integer(BigInt(1) << longest_a_block(s)); };
  return p;
}

QuantitativeProperty membership_property(const Automaton& a, const ValueDomain& domain) {
  if (!domain.is_boolean()) throw DomainError("membership values need a boolean domain, got " + domain.name());
  QuantitativeProperty p{"member", domain, a.alphabet(),
                         [a](const LassoTrace& t) { return ExtendedValue::boolean(a.member(t)); }, nullptr, nullptr};
  auto possible = [a](const FiniteTrace& s) {
    std::vector<ExtendedValue> vs;
    if (!a.determines(s, Polarity::Negative)) vs.push_back(ExtendedValue::boolean(true));
    if (!a.determines(s, Polarity::Positive)) vs.push_back(ExtendedValue::boolean(false));
    return vs;
  };
  p.nuAt = [domain, possible](const FiniteTrace& s) { return sup(domain, possible(s)); };
  p.muAt = [domain, possible](const FiniteTrace& s) { return inf(domain, possible(s)); };
  return p;
}

// ---------------------------------------------------------------------------
// sup / inf over continuations

namespace {

BoundValue search_bound(const QuantitativeProperty& p, const FiniteTrace& s, const LassoSearch& search, bool upper) {
  const std::vector<LassoTrace> candidates =
      p.alphabet->size() <= search.exhaustiveAlphabet
          ? exhaustive_lassos(p.alphabet, search.maxStem, search.maxLoop)
          : sampled_lassos(p.alphabet, search.samples, search.maxStem, search.maxLoop, search.seed);
  std::vector<ExtendedValue> values;
  values.reserve(candidates.size());
  for (const auto& c : candidates) values.push_back(p.evalLasso(c.prepend(s)));
  return {upper ? sup(p.codomain, values) : inf(p.codomain, values), false};
}

}  // namespace

BoundValue nu(const QuantitativeProperty& p, const FiniteTrace& s, const LassoSearch& search) {
  if (p.nuAt) return {p.nuAt(s), true};
  return search_bound(p, s, search, true);
}

BoundValue mu(const QuantitativeProperty& p, const FiniteTrace& s, const LassoSearch& search) {
  if (p.muAt) return {p.muAt(s), true};
  return search_bound(p, s, search, false);
}

std::string to_string(ContinuityVerdict v) {
  switch (v) {
    case ContinuityVerdict::Consistent:
      return "consistent";
    case ContinuityVerdict::Refuted:
      return "refuted";
    case ContinuityVerdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

ContinuityCheck check_side(const QuantitativeProperty& p, const std::vector<LassoTrace>& suite,
                           const LimitBudget& budget, const LassoSearch& search, bool continuity) {
  if (budget.confirmWindow < 2 || budget.maxLoopIterations < budget.confirmWindow) {
    throw Error("limit budget needs maxLoopIterations >= confirmWindow >= 2");
  }
  ContinuityCheck out;
  for (const auto& t : suite) {
    ++out.checked;
    const ExtendedValue value = p.evalLasso(t);
    FiniteTrace prefix = t.prefix(t.stem().size());
    std::vector<std::optional<ExtendedValue>> summaries;
    bool exact = true;
    LimitResult r;
    for (std::size_t k = 1; k <= budget.maxLoopIterations; ++k) {
      prefix.symbols.insert(prefix.symbols.end(), t.loop().begin(), t.loop().end());
      // ν decreases and μ increases along prefixes, so the value at the end
      // of each iteration is that iteration's extremum.
      BoundValue b = continuity ? nu(p, prefix, search) : mu(p, prefix, search);
      exact = exact && b.exact;
      summaries.emplace_back(b.value);
      r = detect_limit(p.codomain, summaries, !continuity, budget);
      if (r.resolved()) break;
    }
    if (!r.resolved()) {
      ++out.inconclusive;
      continue;
    }
    if (*r.value == value) continue;
    if (!exact) {
      ++out.inconclusive;
      continue;
    }
    if (!out.witness) {
      out.witness = t;
      out.limit = *r.value;
      out.value = value;
    }
  }
  if (out.witness) {
    out.verdict = ContinuityVerdict::Refuted;
  } else if (out.checked > out.inconclusive) {
    out.verdict = ContinuityVerdict::Consistent;
  }
  return out;
}

}  // namespace

ContinuityReport check_continuity(const QuantitativeProperty& p, const std::vector<LassoTrace>& suite,
                                  const LimitBudget& budget, const LassoSearch& search) {
  return {check_side(p, suite, budget, search, true), check_side(p, suite, budget, search, false)};
}

}  // namespace qmon
