#include "qmon/builders.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "qmon/qprop.hpp"

namespace qmon {

namespace {

// ---------------------------------------------------------------------------
// Generic construction by exploring abstract states. Each abstract state is a
// vector of small integers; `expand` lists the guarded branches leaving it.

struct Branch {
  Guard guard;
  std::vector<Update> updates;
  std::vector<int> next;
};

using Abstract = std::vector<int>;

struct Exploration {
  std::string name;
  AlphabetPtr alphabet;
  InstructionSet iset;
  std::vector<std::string> registers;
  Abstract initial;
  std::function<std::vector<Branch>(const Abstract&, Symbol)> expand;
  std::function<OutputExpr(const Abstract&)> output;
  std::function<std::string(const Abstract&)> state_name;
  std::optional<ValueDomain> domain;
};

RegisterMachine explore(const Exploration& ex) {
  MachineBuilder b(ex.name, ex.alphabet, ex.iset);
  for (const auto& r : ex.registers) b.add_register(r);
  std::map<Abstract, std::size_t> index;
  std::deque<Abstract> work;
  auto intern = [&](const Abstract& a) {
    auto it = index.find(a);
    if (it != index.end()) return it->second;
    std::size_t q = b.add_state(ex.state_name(a));
    b.set_output(q, ex.output(a));
    index.emplace(a, q);
    work.push_back(a);
    return q;
  };
  b.set_initial(intern(ex.initial));
  while (!work.empty()) {
    Abstract a = work.front();
    work.pop_front();
    const std::size_t from = index.at(a);
    for (Symbol s = 0; s < ex.alphabet->size(); ++s) {
      for (auto& br : ex.expand(a, s)) {
        const std::size_t to = intern(br.next);
        b.add_edge(from, s, br.guard, br.updates, to);
      }
    }
  }
  if (ex.domain) b.set_domain(*ex.domain);
  return b.build();
}

std::string join_name(const std::string& prefix, const Abstract& a) {
  std::string out = prefix;
  for (int v : a) out += "_" + std::to_string(v);
  return out;
}

/// Replaces any update to the same target, then appends.
void put_update(std::vector<Update>& ups, Update u) {
  ups.erase(std::remove_if(ups.begin(), ups.end(), [&](const Update& o) { return o.target == u.target; }), ups.end());
  ups.push_back(u);
}

using Event = ResponseTracker::Event;

// Pair status shared by the approximation schemes.
constexpr int kIdle = 0;
constexpr int kPending = 1;
constexpr int kSink = 2;

int next_status(int status, Event e) {
  if (status == kSink) return kSink;
  switch (e) {
    case Event::Request:
      return status == kPending ? kSink : kPending;
    case Event::Ack:
      return kIdle;
    case Event::Other:
      return status;
  }
  return status;
}

/// Lowest pending pair, or -1.
int lowest_pending(const Abstract& a, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i)
    if (a[i] == kPending) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// One maximal-response-time tracker on registers (x, y), as in M_max.

constexpr int kMIdle = 0;
constexpr int kMBusyX = 1;  // pending, x counts the current response, x <= y
constexpr int kMBusyY = 2;  // pending, current response equals y
constexpr int kMSink = 3;

struct PairStep {
  Guard guard;
  std::vector<Update> updates;
  int mode;
};

std::vector<PairStep> mmax_step(int mode, Event e, std::size_t x, std::size_t y) {
  switch (mode) {
    case kMIdle:
      if (e == Event::Request) return {{{}, {set_zero(x)}, kMBusyX}};
      return {{{}, {}, kMIdle}};
    case kMBusyX: {
      if (e == Event::Request) return {{{}, {}, kMSink}};
      const int done = e == Event::Ack ? kMIdle : kMBusyY;
      const int cont = e == Event::Ack ? kMIdle : kMBusyX;
      return {{{ge(x, y)}, {inc(y), set_zero(x)}, done}, {{not_ge(x, y)}, {inc(x)}, cont}};
    }
    case kMBusyY:
      if (e == Event::Request) return {{{}, {}, kMSink}};
      return {{{}, {inc(y)}, e == Event::Ack ? kMIdle : kMBusyY}};
    default:
      return {{{}, {}, kMSink}};
  }
}

}  // namespace

// ---------------------------------------------------------------------------

RegisterMachine build_Mmax() {
  const AlphabetPtr sigma = server_alphabet();
  MachineBuilder b("M_max", sigma, InstructionSet::CounterInc);
  const std::size_t x = b.add_register("x");
  const std::size_t y = b.add_register("y");
  for (const char* n : {"idle", "busyX", "busyY", "sink"}) b.add_state(n);
  b.set_initial(kMIdle);
  for (int mode = kMIdle; mode <= kMSink; ++mode) {
    const auto q = static_cast<std::size_t>(mode);
    for (Symbol s = 0; s < sigma->size(); ++s) {
      for (auto& st : mmax_step(mode, server_event(s), x, y)) {
        b.add_edge(q, s, st.guard, st.updates, static_cast<std::size_t>(st.mode));
      }
    }
    b.set_output(q, OutputExpr::scalar(mode == kMSink ? OutputTerm::inf() : OutputTerm::reg(y)));
  }
  return b.build();
}

RegisterMachine build_Mavg() {
  const AlphabetPtr sigma = server_alphabet();
  MachineBuilder b("M_avg", sigma, InstructionSet::Extended);
  const std::size_t t = b.add_register("t");
  const std::size_t c = b.add_register("c");
  const std::size_t init = b.add_state("init");
  const std::size_t idle = b.add_state("idle");
  const std::size_t busy = b.add_state("busy");
  const std::size_t sink = b.add_state("sink");
  b.set_initial(init);
  for (Symbol s = 0; s < sigma->size(); ++s) {
    const Event e = server_event(s);
    for (std::size_t q : {init, idle}) {
      if (e == Event::Request) {
        b.add_edge(q, s, {}, {inc(c)}, busy);
      } else {
        b.add_edge(q, s, {}, {}, q);
      }
    }
    if (e == Event::Request) {
      b.add_edge(busy, s, {}, {}, sink);
    } else {
      b.add_edge(busy, s, {}, {inc(t)}, e == Event::Ack ? idle : busy);
    }
    b.add_edge(sink, s, {}, {}, sink);
  }
  b.set_output(init, OutputExpr::scalar(OutputTerm::constant(0)));
  b.set_output(idle, OutputExpr::scalar(OutputTerm::ratio(t, c)));
  b.set_output(busy, OutputExpr::scalar(OutputTerm::ratio(t, c)));
  b.set_output(sink, OutputExpr::scalar(OutputTerm::inf()));
  b.set_domain(ValueDomain::rat_inf());
  return b.build();
}

// ---------------------------------------------------------------------------
// Saturating mrt: the state stores the record y and the pending count n, both
// capped at `cap`.

std::size_t saturating_mrt_states(std::size_t cap) { return cap * (cap - (cap > 0 ? 1 : 0)) / 2 + 2 * cap + 3; }

RegisterMachine build_saturating_mrt(std::size_t cap) {
  const int m = static_cast<int>(cap);
  // Abstract states: {0, y} idle with record y < m; {1, n, y} pending with
  // count n < record y < m; {2, v} pending with count = record = v < m;
  // {3} idle with record >= m; {4} pending with record >= m; {5} sink.
  Exploration ex;
  ex.name = "mrt_cap_" + std::to_string(cap);
  ex.alphabet = server_alphabet();
  ex.iset = InstructionSet::Extended;
  ex.initial = m > 0 ? Abstract{0, 0} : Abstract{3};
  ex.domain = ValueDomain::nat_inf();
  auto saturate = [m](int v, bool pending) { return v < m ? Abstract{pending ? 2 : 0, v} : Abstract{pending ? 4 : 3}; };
  ex.expand = [m, saturate](const Abstract& a, Symbol s) -> std::vector<Branch> {
    const Event e = server_event(s);
    auto go = [](Abstract next) { return std::vector<Branch>{{{}, {}, std::move(next)}}; };
    switch (a[0]) {
      case 0:
        if (e != Event::Request) return go(a);
        return go(a[1] > 0 ? Abstract{1, 0, a[1]} : Abstract{2, 0});
      case 1: {
        if (e == Event::Request) return go({5});
        const int n = a[1] + 1;
        if (e == Event::Ack) return go({0, a[2]});
        return go(n < a[2] ? Abstract{1, n, a[2]} : Abstract{2, a[2]});
      }
      case 2:
        if (e == Event::Request) return go({5});
        return go(saturate(a[1] + 1, e != Event::Ack));
      case 3:
        return go(e == Event::Request ? Abstract{4} : Abstract{3});
      case 4:
        if (e == Event::Request) return go({5});
        return go(e == Event::Ack ? Abstract{3} : Abstract{4});
      default:
        (void)m;
        return go({5});
    }
  };
  ex.output = [m](const Abstract& a) {
    switch (a[0]) {
      case 0:
      case 2:
        return OutputExpr::scalar(OutputTerm::constant(a[1]));
      case 1:
        return OutputExpr::scalar(OutputTerm::constant(a[2]));
      case 3:
      case 4:
        return OutputExpr::scalar(OutputTerm::constant(m));
      default:
        return OutputExpr::scalar(OutputTerm::inf());
    }
  };
  ex.state_name = [](const Abstract& a) {
    static const char* kinds[] = {"idle", "busy", "busyY", "idleSat", "busySat", "sink"};
    return join_name(kinds[a[0]], Abstract(a.begin() + 1, a.end()));
  };
  return explore(ex);
}

RegisterMachine build_finite_state_mrt(std::size_t states) {
  if (states < saturating_mrt_states(0)) {
    const AlphabetPtr sigma = server_alphabet();
    MachineBuilder b("mrt_const_0", sigma, InstructionSet::CounterInc);
    const std::size_t q = b.add_state("q");
    b.set_initial(q);
    for (Symbol s = 0; s < sigma->size(); ++s) b.add_edge(q, s, {}, {}, q);
    b.set_output(q, OutputExpr::scalar(OutputTerm::constant(0)));
    if (states == 0) throw Error("a monitor needs at least one state");
    return b.build();
  }
  std::size_t cap = 0;
  while (saturating_mrt_states(cap + 1) <= states) ++cap;
  return build_saturating_mrt(cap);
}

// ---------------------------------------------------------------------------
// k request/ack pairs

std::string to_string(KPairScheme s) {
  switch (s) {
    case KPairScheme::Exact:
      return "exact";
    case KPairScheme::Priority:
      return "priority";
    case KPairScheme::PairedMax:
      return "paired-max";
    case KPairScheme::SharedWitness:
      return "shared-witness";
  }
  return "?";
}

std::size_t kpair_counters(KPairScheme s, std::size_t k) {
  switch (s) {
    case KPairScheme::Exact:
      return 2 * k;
    case KPairScheme::Priority:
      return k + 1;
    case KPairScheme::PairedMax:
      return (k + 1) / 2 + 1;
    case KPairScheme::SharedWitness:
      return 2;
  }
  return 0;
}

KPairScheme kpair_scheme_for(std::size_t k, std::size_t counters) {
  for (KPairScheme s : {KPairScheme::Exact, KPairScheme::Priority, KPairScheme::PairedMax, KPairScheme::SharedWitness}) {
    if (kpair_counters(s, k) <= counters) return s;
  }
  throw Error("no k-pair scheme fits in " + std::to_string(counters) + " counters");
}

namespace {

std::vector<Event> pair_events(Symbol s, std::size_t k) {
  std::vector<Event> es(k);
  for (std::size_t i = 0; i < k; ++i) es[i] = kpair_event(s, i);
  return es;
}

/// Statuses after the events; the first k entries of `a` are statuses.
Abstract advance_statuses(const Abstract& a, const std::vector<Event>& es) {
  Abstract ns(a.begin(), a.begin() + static_cast<long>(es.size()));
  for (std::size_t i = 0; i < es.size(); ++i) ns[i] = next_status(ns[i], es[i]);
  return ns;
}

RegisterMachine kpair_exact(std::size_t k) {
  Exploration ex;
  ex.name = "kpair_exact_" + std::to_string(k);
  ex.alphabet = kpair_alphabet(k);
  ex.iset = InstructionSet::CounterInc;
  for (std::size_t i = 1; i <= k; ++i) {
    ex.registers.push_back("x" + std::to_string(i));
    ex.registers.push_back("y" + std::to_string(i));
  }
  ex.initial = Abstract(k, kMIdle);
  ex.expand = [k](const Abstract& a, Symbol s) {
    std::vector<Branch> acc{{{}, {}, {}}};
    for (std::size_t i = 0; i < k; ++i) {
      auto steps = mmax_step(a[i], kpair_event(s, i), 2 * i, 2 * i + 1);
      std::vector<Branch> next;
      for (const auto& br : acc) {
        for (const auto& st : steps) {
          Branch nb = br;
          nb.guard.insert(nb.guard.end(), st.guard.begin(), st.guard.end());
          nb.updates.insert(nb.updates.end(), st.updates.begin(), st.updates.end());
          nb.next.push_back(st.mode);
          next.push_back(std::move(nb));
        }
      }
      acc = std::move(next);
    }
    return acc;
  };
  ex.output = [k](const Abstract& a) {
    std::vector<OutputTerm> ts;
    for (std::size_t i = 0; i < k; ++i) ts.push_back(a[i] == kMSink ? OutputTerm::inf() : OutputTerm::reg(2 * i + 1));
    return OutputExpr::of(std::move(ts));
  };
  ex.state_name = [](const Abstract& a) { return join_name("m", a); };
  return explore(ex);
}

/// Priority and PairedMax share the tracking logic: a running counter x
/// follows the lowest pending pair and is compared against that pair's
/// record register. Abstract layout: statuses[k], mode, owners[groups].
RegisterMachine kpair_tracking(std::size_t k, bool paired) {
  const std::size_t groups = paired ? (k + 1) / 2 : k;
  const std::size_t x = groups;
  auto record_of = [paired](std::size_t pair) { return paired ? pair / 2 : pair; };

  Exploration ex;
  ex.name = std::string(paired ? "kpair_paired_" : "kpair_priority_") + std::to_string(k);
  ex.alphabet = kpair_alphabet(k);
  ex.iset = InstructionSet::CounterInc;
  for (std::size_t g = 1; g <= groups; ++g) ex.registers.push_back((paired ? "z" : "y") + std::to_string(g));
  ex.registers.push_back("x");
  ex.initial = Abstract(k + 1 + (paired ? groups : 0), 0);
  ex.expand = [=](const Abstract& a, Symbol s) {
    const auto es = pair_events(s, k);
    const int t = lowest_pending(a, k);
    Abstract ns = advance_statuses(a, es);
    const int t2 = lowest_pending(ns, k);
    const int mode = a[k];
    Abstract owners(a.begin() + static_cast<long>(k) + 1, a.end());

    struct Partial {
      Guard guard;
      std::vector<Update> updates;
      int mode;
      Abstract owners;
    };
    std::vector<Partial> parts;
    if (t >= 0 && es[static_cast<std::size_t>(t)] != Event::Request) {
      const auto tp = static_cast<std::size_t>(t);
      const std::size_t r = record_of(tp);
      Abstract raised = owners;
      if (paired) raised[r] = static_cast<int>(tp % 2);
      if (mode == 0) {
        parts.push_back({{ge(x, r)}, {inc(r), set_zero(x)}, 1, raised});
        parts.push_back({{not_ge(x, r)}, {inc(x)}, 0, owners});
      } else {
        parts.push_back({{}, {inc(r)}, 1, owners});
      }
    } else {
      parts.push_back({{}, {}, mode, owners});
    }

    std::vector<Branch> out;
    for (auto& p : parts) {
      if (t2 != t) {
        if (t2 >= 0) put_update(p.updates, set_zero(x));
        p.mode = 0;
      }
      if (t2 < 0) p.mode = 0;
      Abstract next = ns;
      next.push_back(p.mode);
      next.insert(next.end(), p.owners.begin(), p.owners.end());
      out.push_back({std::move(p.guard), std::move(p.updates), std::move(next)});
    }
    return out;
  };
  ex.output = [=](const Abstract& a) {
    std::vector<OutputTerm> ts;
    for (std::size_t i = 0; i < k; ++i) {
      if (a[i] == kSink) {
        ts.push_back(OutputTerm::inf());
      } else if (!paired || a[k + 1 + i / 2] == static_cast<int>(i % 2)) {
        ts.push_back(OutputTerm::reg(record_of(i)));
      } else {
        ts.push_back(OutputTerm::constant(0));
      }
    }
    return OutputExpr::of(std::move(ts));
  };
  ex.state_name = [](const Abstract& a) { return join_name("s", a); };
  return explore(ex);
}

/// Registers w (common witnessed bound) and c (running count of the target
/// pair). Abstract layout: statuses[k], target.
RegisterMachine kpair_shared(std::size_t k) {
  const std::size_t w = 0;
  const std::size_t c = 1;
  Exploration ex;
  ex.name = "kpair_shared_" + std::to_string(k);
  ex.alphabet = kpair_alphabet(k);
  ex.iset = InstructionSet::CounterInc;
  ex.registers = {"w", "c"};
  ex.initial = Abstract(k + 1, 0);
  ex.expand = [=](const Abstract& a, Symbol s) {
    const auto es = pair_events(s, k);
    Abstract ns = advance_statuses(a, es);
    const auto j = static_cast<std::size_t>(a[k]);

    // Moves the target to the next non-sink pair; a wrap-around raises w.
    auto advance = [&](std::vector<Update> ups) {
      std::size_t i = j;
      bool wrapped = false;
      for (std::size_t step = 0; step < k; ++step) {
        if (++i == k) {
          i = 0;
          wrapped = true;
        }
        if (ns[i] != kSink) break;
      }
      Abstract next = ns;
      if (ns[i] == kSink) {
        next.push_back(static_cast<int>(j));
        return Branch{{}, std::move(ups), std::move(next)};
      }
      put_update(ups, set_zero(c));
      if (wrapped) put_update(ups, inc(w));
      next.push_back(static_cast<int>(i));
      return Branch{{}, std::move(ups), std::move(next)};
    };
    auto stay = [&](Guard g, std::vector<Update> ups) {
      Abstract next = ns;
      next.push_back(static_cast<int>(j));
      return Branch{std::move(g), std::move(ups), std::move(next)};
    };

    if (a[j] == kPending) {
      if (es[j] == Event::Request) return std::vector<Branch>{advance({})};
      Branch witnessed = advance({});
      witnessed.guard = {ge(c, w)};
      return std::vector<Branch>{witnessed, stay({not_ge(c, w)}, {inc(c)})};
    }
    if (a[j] == kIdle && es[j] == Event::Request) return std::vector<Branch>{stay({}, {set_zero(c)})};
    return std::vector<Branch>{stay({}, {})};
  };
  ex.output = [=](const Abstract& a) {
    std::vector<OutputTerm> ts;
    for (std::size_t i = 0; i < k; ++i) ts.push_back(a[i] == kSink ? OutputTerm::inf() : OutputTerm::reg(w));
    return OutputExpr::of(std::move(ts));
  };
  ex.state_name = [](const Abstract& a) { return join_name("s", a); };
  return explore(ex);
}

}  // namespace

RegisterMachine build_kpair_monitor(std::size_t k) { return build_kpair_approx(k, KPairScheme::Exact); }

RegisterMachine build_kpair_approx(std::size_t k, KPairScheme scheme) {
  if (k == 0) throw Error("k must be positive");
  switch (scheme) {
    case KPairScheme::Exact:
      return kpair_exact(k);
    case KPairScheme::Priority:
      return kpair_tracking(k, false);
    case KPairScheme::PairedMax:
      return kpair_tracking(k, true);
    case KPairScheme::SharedWitness:
      return kpair_shared(k);
  }
  throw Error("unknown scheme");
}

// ---------------------------------------------------------------------------
// p_k. Register r_i holds (|s|_i - |s|_{i+1}) - 1 once the first symbol has
// been read (the initial state applies the -1 offset); n counts symbols.

namespace {

RegisterMachine pk_machine(std::size_t k, std::size_t l, std::string name) {
  const AlphabetPtr sigma = pk_alphabet(k);
  MachineBuilder b(std::move(name), sigma, InstructionSet::CounterIncDec);
  std::vector<std::size_t> r(l + 1);  // r[1..l-1]
  for (std::size_t i = 1; i < l; ++i) r[i] = b.add_register("r" + std::to_string(i));
  const std::size_t n = b.add_register("n");
  const std::size_t init = b.add_state("init");
  const std::size_t ok = b.add_state("ok");
  const std::size_t bad = b.add_state("bad");
  b.set_initial(init);
  for (Symbol s = 0; s < sigma->size(); ++s) {
    const std::size_t j = s + 1;
    if (j == 1) {
      std::vector<Update> first{inc(n)};
      for (std::size_t i = 2; i < l; ++i) first.push_back(dec(r[i]));
      b.add_edge(init, s, {}, first, ok);
      std::vector<Update> later{inc(n)};
      if (l >= 2) later.push_back(inc(r[1]));
      b.add_edge(ok, s, {}, later, ok);
    } else if (j <= l) {
      b.add_edge(init, s, {}, {inc(n)}, bad);
      std::vector<Update> pass{inc(n), dec(r[j - 1])};
      if (j < l) pass.push_back(inc(r[j]));
      b.add_edge(ok, s, {ge_const(r[j - 1], 0)}, pass, ok);
      b.add_edge(ok, s, {not_ge_const(r[j - 1], 0)}, {inc(n)}, bad);
    } else {
      b.add_edge(init, s, {}, {inc(n)}, bad);
      b.add_edge(ok, s, {}, {inc(n)}, bad);
    }
    b.add_edge(bad, s, {}, {}, bad);
  }
  b.set_output(init, OutputExpr::scalar(OutputTerm::inf()));
  b.set_output(ok, OutputExpr::scalar(OutputTerm::inf()));
  b.set_output(bad, OutputExpr::scalar(OutputTerm::reg(n)));
  b.set_domain(ValueDomain::nat_inf());
  return b.build();
}

}  // namespace

RegisterMachine build_pk_monitor(std::size_t k) {
  if (k == 0) throw Error("k must be positive");
  return pk_machine(k, k, "p" + std::to_string(k) + "_exact");
}

RegisterMachine build_pk_approx(std::size_t k, std::size_t l) {
  if (l == 0 || l >= k) throw Error("approximation needs 1 <= l < k");
  return pk_machine(k, l, "p" + std::to_string(k) + "_approx_" + std::to_string(l));
}

// ---------------------------------------------------------------------------
// Binary blocks. The state holds the value of the current block (capped at
// k+1); r_i holds (n_i - n_{i+1}) - 1 and h counts separators.

RegisterMachine build_binary_pk(std::size_t k) {
  if (k == 0) throw Error("k must be positive");
  const AlphabetPtr sigma = binary_alphabet();
  const Symbol sep = sigma->symbol("sep");
  const int cap = static_cast<int>(k) + 1;
  std::vector<std::size_t> r(k + 1);
  Exploration ex;
  ex.name = "binary_" + std::to_string(k);
  ex.alphabet = sigma;
  ex.iset = InstructionSet::CounterIncDec;
  for (std::size_t i = 1; i < k; ++i) {
    r[i] = ex.registers.size();
    ex.registers.push_back("r" + std::to_string(i));
  }
  const std::size_t h = ex.registers.size();
  ex.registers.push_back("h");
  ex.domain = ValueDomain::nat_inf();
  // Abstract: {phase, block value}; phase 0 initial, 1 running, 2 violated.
  ex.initial = {0, 0};
  ex.expand = [=](const Abstract& a, Symbol s) -> std::vector<Branch> {
    if (a[0] == 2) return {{{}, {}, a}};
    std::vector<Update> base;
    if (a[0] == 0) {
      for (std::size_t i = 1; i < k; ++i) base.push_back(dec(r[i]));
    }
    if (s != sep) {
      const int bit = sigma->token(s) == "1" ? 1 : 0;
      return {{{}, base, {1, std::min(2 * a[1] + bit, cap)}}};
    }
    base.push_back(inc(h));
    const int v = a[1];
    if (v == 0) return {{{}, base, {1, 0}}};
    if (v == cap) return {{{}, base, {2, 0}}};
    const auto vi = static_cast<std::size_t>(v);
    if (vi < k) base.push_back(inc(r[vi]));
    if (vi == 1) return {{{}, base, {1, 0}}};
    std::vector<Update> pass = base;
    pass.push_back(dec(r[vi - 1]));
    return {{{ge_const(r[vi - 1], 0)}, pass, {1, 0}}, {{not_ge_const(r[vi - 1], 0)}, {inc(h)}, {2, 0}}};
  };
  ex.output = [h](const Abstract& a) {
    return OutputExpr::scalar(a[0] == 2 ? OutputTerm::reg(h) : OutputTerm::inf());
  };
  ex.state_name = [](const Abstract& a) {
    static const char* phases[] = {"init", "ok", "bad"};
    return a[0] == 2 ? std::string("bad") : join_name(phases[a[0]], {a[1]});
  };
  return explore(ex);
}

// ---------------------------------------------------------------------------
// Longest block of a's

RegisterMachine build_doubling_adder() {
  const AlphabetPtr sigma = ab_alphabet();
  const Symbol a = sigma->symbol("a");
  const Symbol bsym = sigma->symbol("b");
  MachineBuilder b("doubling_adder", sigma, InstructionSet::Adder);
  const std::size_t x = b.add_register("x");
  const std::size_t y = b.add_register("y");
  const std::size_t init = b.add_state("init");
  const std::size_t in = b.add_state("in");
  const std::size_t out = b.add_state("out");
  b.set_initial(init);
  b.add_edge(init, a, {}, {set_one(x), set_one(y)}, in);
  b.add_edge(init, bsym, {}, {}, init);
  b.add_edge(in, a, {ge(x, y)}, {add_reg(x, x), add_reg(y, y)}, in);
  b.add_edge(in, a, {not_ge(x, y)}, {add_reg(x, x)}, in);
  b.add_edge(in, bsym, {}, {}, out);
  b.add_edge(out, a, {}, {set_one(x)}, in);
  b.add_edge(out, bsym, {}, {}, out);
  b.set_output(init, OutputExpr::scalar(OutputTerm::constant(1)));
  b.set_output(in, OutputExpr::scalar(OutputTerm::sum(y, y)));
  b.set_output(out, OutputExpr::scalar(OutputTerm::sum(y, y)));
  b.set_domain(ValueDomain::nat_inf());
  return b.build();
}

RegisterMachine build_doubling_counter() {
  const AlphabetPtr sigma = ab_alphabet();
  const Symbol a = sigma->symbol("a");
  const Symbol bsym = sigma->symbol("b");
  MachineBuilder b("doubling_counter", sigma, InstructionSet::Extended);
  const std::size_t c = b.add_register("c");
  const std::size_t m = b.add_register("m");
  const std::size_t q = b.add_state("run");
  b.set_initial(q);
  b.add_edge(q, a, {ge(c, m)}, {inc(c), inc(m)}, q);
  b.add_edge(q, a, {not_ge(c, m)}, {inc(c)}, q);
  b.add_edge(q, bsym, {}, {set_zero(c)}, q);
  b.set_output(q, OutputExpr::scalar(OutputTerm::sum(m, m)));
  b.set_domain(ValueDomain::nat_inf());
  return b.build();
}

}  // namespace qmon
