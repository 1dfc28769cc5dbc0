#include "qmon/automaton.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "text_util.hpp"

namespace qmon {

std::string to_string(AcceptKind k) {
  switch (k) {
    case AcceptKind::Safety:
      return "safety";
    case AcceptKind::CoSafety:
      return "cosafety";
    case AcceptKind::Buchi:
      return "buchi";
    case AcceptKind::CoBuchi:
      return "cobuchi";
  }
  return "?";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

using Graph = std::vector<std::vector<std::size_t>>;

/// Marks the states lying on a cycle of the subgraph induced by `keep`.
std::vector<bool> on_cycle(const Graph& succ, const std::vector<bool>& keep) {
  const std::size_t n = succ.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false), result(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  // Iterative Tarjan.
  for (std::size_t root = 0; root < n; ++root) {
    if (!keep[root] || index[root] != -1) continue;
    std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!work.empty()) {
      auto& [v, i] = work.back();
      if (i < succ[v].size()) {
        std::size_t w = succ[v][i++];
        if (!keep[w]) continue;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        std::size_t done = v;
        work.pop_back();
        if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
        if (low[done] == index[done]) {
          std::vector<std::size_t> comp;
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
          } while (w != done);
          bool cyclic = comp.size() > 1;
          if (!cyclic) {
            for (std::size_t t : succ[done])
              if (t == done) cyclic = true;
          }
          if (cyclic)
            for (std::size_t c : comp) result[c] = true;
        }
      }
    }
  }
  return result;
}

std::vector<std::size_t> reach(const Graph& succ, std::size_t q) {
  std::vector<bool> seen(succ.size(), false);
  std::vector<std::size_t> out{q}, todo{q};
  seen[q] = true;
  while (!todo.empty()) {
    std::size_t v = todo.back();
    todo.pop_back();
    for (std::size_t w : succ[v]) {
      if (!seen[w]) {
        seen[w] = true;
        out.push_back(w);
        todo.push_back(w);
      }
    }
  }
  return out;
}

}  // namespace

Automaton::Automaton(AlphabetPtr alphabet, std::vector<std::string> states, std::size_t initial, AcceptKind kind,
                     std::vector<bool> accepting, std::vector<std::vector<std::size_t>> delta)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      initial_(initial),
      kind_(kind),
      accepting_(std::move(accepting)),
      delta_(std::move(delta)) {
  if (!alphabet_) throw LoadError("automaton needs an alphabet");
  if (states_.empty()) throw LoadError("automaton needs at least one state");
  if (initial_ >= states_.size()) throw LoadError("initial state out of range");
  if (accepting_.size() != states_.size() || delta_.size() != states_.size()) {
    throw LoadError("automaton tables do not match the state count");
  }
  for (std::size_t q = 0; q < states_.size(); ++q) {
    if (delta_[q].size() != alphabet_->size()) throw LoadError("transition row of state " + states_[q] + " is partial");
    for (std::size_t t : delta_[q])
      if (t >= states_.size()) throw LoadError("transition target out of range");
  }
  // Trap conditions of the finitary acceptance kinds.
  if (kind_ == AcceptKind::Safety || kind_ == AcceptKind::CoSafety) {
    const bool trap_value = kind_ == AcceptKind::CoSafety;  // the accepting set is the good trap
    for (std::size_t q = 0; q < states_.size(); ++q) {
      if (accepting_[q] != trap_value) continue;
      for (std::size_t t : delta_[q]) {
        if (accepting_[t] != trap_value) {
          throw LoadError(std::string(kind_ == AcceptKind::Safety ? "bad" : "good") + " states must form a trap: " +
                          states_[q] + " leaves the set");
        }
      }
    }
  }
  analyse();
}

void Automaton::analyse() {
  const std::size_t n = states_.size();
  Graph succ(n);
  for (std::size_t q = 0; q < n; ++q) {
    succ[q] = delta_[q];
    std::sort(succ[q].begin(), succ[q].end());
    succ[q].erase(std::unique(succ[q].begin(), succ[q].end()), succ[q].end());
  }
  std::vector<bool> all(n, true), acc = accepting_, rej(n);
  for (std::size_t q = 0; q < n; ++q) rej[q] = !accepting_[q];
  auto cyc_all = on_cycle(succ, all);
  auto cyc_acc = on_cycle(succ, acc);
  auto cyc_rej = on_cycle(succ, rej);
  positive_.assign(n, false);
  negative_.assign(n, false);
  for (std::size_t q = 0; q < n; ++q) {
    bool pos = true;
    bool neg = true;
    for (std::size_t r : reach(succ, q)) {
      if (kind_ == AcceptKind::Buchi) {
        // Accepted iff the infinitely visited cycle meets the accepting set.
        if (cyc_rej[r]) pos = false;
        if (accepting_[r] && cyc_all[r]) neg = false;
      } else {
        // Accepted iff the infinitely visited cycle stays in the accepting set.
        if (!accepting_[r] && cyc_all[r]) pos = false;
        if (cyc_acc[r]) neg = false;
      }
    }
    positive_[q] = pos;
    negative_[q] = neg;
  }
}

std::vector<std::size_t> Automaton::reachable_from(std::size_t q) const { return reach(delta_, q); }

std::size_t Automaton::run(const FiniteTrace& s) const { return run_from(initial_, s.symbols); }

std::size_t Automaton::run_from(std::size_t q, const std::vector<Symbol>& s) const {
  for (Symbol sym : s) q = delta_[q][sym];
  return q;
}

std::vector<std::size_t> Automaton::cycle_states(const LassoTrace& t) const {
  std::size_t q = run_from(initial_, t.stem());
  std::map<std::size_t, std::size_t> seen_at;  // boundary state -> iteration
  std::vector<std::size_t> boundaries;
  while (!seen_at.count(q)) {
    seen_at[q] = boundaries.size();
    boundaries.push_back(q);
    q = run_from(q, t.loop());
  }
  std::vector<bool> mark(states_.size(), false);
  std::size_t cur = q;
  for (std::size_t it = seen_at[q]; it < boundaries.size(); ++it) {
    for (Symbol s : t.loop()) {
      cur = delta_[cur][s];
      mark[cur] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(i);
  return out;
}

bool Automaton::member(const LassoTrace& t) const {
  auto cyc = cycle_states(t);
  if (kind_ == AcceptKind::Buchi) {
    return std::any_of(cyc.begin(), cyc.end(), [&](std::size_t q) { return accepting_[q]; });
  }
  return std::all_of(cyc.begin(), cyc.end(), [&](std::size_t q) { return accepting_[q]; });
}

bool Automaton::determines_state(std::size_t q, Polarity p) const {
  return p == Polarity::Positive ? positive_.at(q) : negative_.at(q);
}

bool Automaton::classically_monitorable() const {
  for (std::size_t r : reachable_from(initial_)) {
    auto rs = reachable_from(r);
    bool ok = std::any_of(rs.begin(), rs.end(), [&](std::size_t x) { return positive_[x] || negative_[x]; });
    if (!ok) return false;
  }
  return true;
}

namespace {

struct Header {
  AlphabetPtr alphabet;
  std::vector<std::string> states;
  std::map<std::string, std::size_t> index;
  std::optional<std::size_t> initial;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw LoadError("line " + std::to_string(line) + ": " + msg);
}

std::size_t state_index(const Header& h, const std::string& name, std::size_t line) {
  auto it = h.index.find(name);
  if (it == h.index.end()) fail(line, "unknown state '" + name + "'");
  return it->second;
}

/// Handles the header keys shared by both automaton formats; returns false
/// for any other line.
bool parse_header_line(Header& h, const text::Line& line, std::string_view key, std::string_view value) {
  if (key == "alphabet") {
    if (h.alphabet) fail(line.number, "duplicate alphabet");
    try {
      h.alphabet = make_alphabet(text::split_ws(value));
    } catch (const Error& e) {
      fail(line.number, e.what());
    }
    return true;
  }
  if (key == "states") {
    if (!h.states.empty()) fail(line.number, "duplicate states");
    h.states = text::split_ws(value);
    if (h.states.empty()) fail(line.number, "no states listed");
    for (std::size_t i = 0; i < h.states.size(); ++i) {
      if (!h.index.emplace(h.states[i], i).second) fail(line.number, "duplicate state '" + h.states[i] + "'");
    }
    return true;
  }
  if (key == "initial") {
    if (h.states.empty()) fail(line.number, "'initial' before 'states'");
    h.initial = state_index(h, std::string(value), line.number);
    return true;
  }
  return false;
}

/// Parses `q a -> q'` and returns (source, symbol, target).
std::tuple<std::size_t, Symbol, std::size_t> parse_transition(const Header& h, const text::Line& line,
                                                              std::string_view body) {
  auto arrow = body.find("->");
  if (arrow == std::string_view::npos) fail(line.number, "expected 'q a -> q2'");
  auto lhs = text::split_ws(body.substr(0, arrow));
  auto rhs = text::split_ws(body.substr(arrow + 2));
  if (lhs.size() != 2 || rhs.size() != 1) fail(line.number, "expected 'q a -> q2'");
  if (!h.alphabet || h.states.empty()) fail(line.number, "transition before alphabet/states");
  auto sym = h.alphabet->find(lhs[1]);
  if (!sym) fail(line.number, "unknown symbol '" + lhs[1] + "'");
  return {state_index(h, lhs[0], line.number), *sym, state_index(h, rhs[0], line.number)};
}

void check_header(const Header& h) {
  if (!h.alphabet) throw LoadError("missing 'alphabet:' line");
  if (h.states.empty()) throw LoadError("missing 'states:' line");
  if (!h.initial) throw LoadError("missing 'initial:' line");
}

}  // namespace

Automaton Automaton::parse(std::string_view text) {
  Header h;
  std::optional<AcceptKind> kind;
  std::vector<std::string> accept_names;
  std::size_t accept_line = 0;
  bool have_accept = false;
  std::vector<std::vector<std::optional<std::size_t>>> table;
  for (const auto& line : text::content_lines(text)) {
    std::string_view key, value;
    if (text::key_value(line.text, key, value)) {
      if (parse_header_line(h, line, key, value)) continue;
      if (key == "accept-kind") {
        if (value == "safety") {
          kind = AcceptKind::Safety;
        } else if (value == "cosafety") {
          kind = AcceptKind::CoSafety;
        } else if (value == "buchi") {
          kind = AcceptKind::Buchi;
        } else if (value == "cobuchi") {
          kind = AcceptKind::CoBuchi;
        } else {
          fail(line.number, "unknown accept-kind '" + std::string(value) + "'");
        }
        continue;
      }
      if (key == "accept") {
        accept_names = text::split_ws(value);
        accept_line = line.number;
        have_accept = true;
        continue;
      }
      fail(line.number, "unknown key '" + std::string(key) + "'");
    }
    auto [q, a, t] = parse_transition(h, line, line.text);
    if (table.empty()) table.assign(h.states.size(), std::vector<std::optional<std::size_t>>(h.alphabet->size()));
    if (table[q][a]) {
      fail(line.number, "nondeterministic: second transition for (" + h.states[q] + ", " + h.alphabet->token(a) + ")");
    }
    table[q][a] = t;
  }
  check_header(h);
  if (!kind) throw LoadError("missing 'accept-kind:' line");
  if (!have_accept) throw LoadError("missing 'accept:' line");
  std::vector<bool> accepting(h.states.size(), false);
  for (const auto& name : accept_names) accepting[state_index(h, name, accept_line)] = true;
  if (table.empty()) table.assign(h.states.size(), std::vector<std::optional<std::size_t>>(h.alphabet->size()));
  std::vector<std::vector<std::size_t>> delta(h.states.size());
  for (std::size_t q = 0; q < h.states.size(); ++q) {
    for (Symbol a = 0; a < h.alphabet->size(); ++a) {
      if (!table[q][a]) {
        throw LoadError("missing transition for (" + h.states[q] + ", " + h.alphabet->token(a) + ")");
      }
      delta[q].push_back(*table[q][a]);
    }
  }
  return Automaton(h.alphabet, h.states, *h.initial, *kind, std::move(accepting), std::move(delta));
}

std::string render_automaton(const Automaton& a) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& t : a.alphabet()->tokens()) out << ' ' << t;
  out << "\nstates:";
  for (std::size_t q = 0; q < a.state_count(); ++q) out << ' ' << a.state_name(q);
  out << "\ninitial: " << a.state_name(a.initial()) << "\naccept-kind: " << to_string(a.kind()) << "\naccept:";
  for (std::size_t q = 0; q < a.state_count(); ++q)
    if (a.accepting(q)) out << ' ' << a.state_name(q);
  out << '\n';
  for (std::size_t q = 0; q < a.state_count(); ++q) {
    for (Symbol s = 0; s < a.alphabet()->size(); ++s) {
      out << a.state_name(q) << ' ' << a.alphabet()->token(s) << " -> " << a.state_name(a.next(q, s)) << '\n';
    }
  }
  return out.str();
}

WeightedAutomaton::WeightedAutomaton(AlphabetPtr alphabet, std::vector<std::string> states, std::size_t initial,
                                     std::vector<std::vector<Edge>> delta)
    : alphabet_(std::move(alphabet)), states_(std::move(states)), initial_(initial), delta_(std::move(delta)) {
  if (!alphabet_) throw LoadError("weighted automaton needs an alphabet");
  if (states_.empty() || initial_ >= states_.size()) throw LoadError("weighted automaton needs a valid initial state");
  if (delta_.size() != states_.size()) throw LoadError("transition table does not match the state count");
  for (const auto& row : delta_) {
    if (row.size() != alphabet_->size()) throw LoadError("weighted transition table is partial");
    for (const auto& e : row)
      if (e.target >= states_.size()) throw LoadError("transition target out of range");
  }
}

WeightedAutomaton WeightedAutomaton::parse(std::string_view text) {
  Header h;
  std::vector<std::vector<std::optional<Edge>>> table;
  for (const auto& line : text::content_lines(text)) {
    std::string_view key, value;
    if (text::key_value(line.text, key, value)) {
      if (parse_header_line(h, line, key, value)) continue;
      fail(line.number, "unknown key '" + std::string(key) + "'");
    }
    auto colon = line.text.rfind(':');
    if (colon == std::string_view::npos) fail(line.number, "expected 'q a -> q2 : weight'");
    auto [q, a, t] = parse_transition(h, line, line.text.substr(0, colon));
    auto wtext = text::trim(line.text.substr(colon + 1));
    long long w = 0;
    auto [ptr, ec] = std::from_chars(wtext.data(), wtext.data() + wtext.size(), w);
    if (ec != std::errc() || ptr != wtext.data() + wtext.size()) {
      fail(line.number, "bad weight '" + std::string(wtext) + "'");
    }
    if (table.empty()) table.assign(h.states.size(), std::vector<std::optional<Edge>>(h.alphabet->size()));
    if (table[q][a]) {
      fail(line.number, "nondeterministic: second transition for (" + h.states[q] + ", " + h.alphabet->token(a) + ")");
    }
    table[q][a] = Edge{t, w};
  }
  check_header(h);
  if (table.empty()) table.assign(h.states.size(), std::vector<std::optional<Edge>>(h.alphabet->size()));
  std::vector<std::vector<Edge>> delta(h.states.size());
  for (std::size_t q = 0; q < h.states.size(); ++q) {
    for (Symbol a = 0; a < h.alphabet->size(); ++a) {
      if (!table[q][a]) {
        throw LoadError("missing transition for (" + h.states[q] + ", " + h.alphabet->token(a) + ")");
      }
      delta[q].push_back(*table[q][a]);
    }
  }
  return WeightedAutomaton(h.alphabet, h.states, *h.initial, std::move(delta));
}

std::string render_weighted(const WeightedAutomaton& a) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& t : a.alphabet()->tokens()) out << ' ' << t;
  out << "\nstates:";
  for (std::size_t q = 0; q < a.state_count(); ++q) out << ' ' << a.state_name(q);
  out << "\ninitial: " << a.state_name(a.initial()) << '\n';
  for (std::size_t q = 0; q < a.state_count(); ++q) {
    for (Symbol s = 0; s < a.alphabet()->size(); ++s) {
      const auto& e = a.edge(q, s);
      out << a.state_name(q) << ' ' << a.alphabet()->token(s) << " -> " << a.state_name(e.target) << " : " << e.weight
          << '\n';
    }
  }
  return out.str();
}

}  // namespace qmon
