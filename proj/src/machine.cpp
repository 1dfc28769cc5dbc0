#include "qmon/machine.hpp"

#include <algorithm>
#include <map>

namespace qmon {

std::string to_string(InstructionSet s) {
  switch (s) {
    case InstructionSet::CounterInc:
      return "counter";
    case InstructionSet::CounterIncDec:
      return "counter+-";
    case InstructionSet::Adder:
      return "adder";
    case InstructionSet::Extended:
      return "extended";
  }
  return "?";
}

Literal ge(std::size_t x, std::size_t y) { return {Atom{Atom::Kind::GeReg, x, y, 0}, false}; }
Literal not_ge(std::size_t x, std::size_t y) { return {Atom{Atom::Kind::GeReg, x, y, 0}, true}; }
Literal ge_const(std::size_t x, long long c) { return {Atom{Atom::Kind::GeConst, x, 0, BigInt(c)}, false}; }
Literal not_ge_const(std::size_t x, long long c) { return {Atom{Atom::Kind::GeConst, x, 0, BigInt(c)}, true}; }
Update set_zero(std::size_t x) { return {Update::Kind::Zero, x, 0}; }
Update set_one(std::size_t x) { return {Update::Kind::One, x, 0}; }
Update inc(std::size_t x) { return {Update::Kind::Inc, x, 0}; }
Update dec(std::size_t x) { return {Update::Kind::Dec, x, 0}; }
Update add_reg(std::size_t x, std::size_t y) { return {Update::Kind::AddReg, x, y}; }
Update copy_reg(std::size_t x, std::size_t y) { return {Update::Kind::Copy, x, y}; }

namespace {

bool holds(const Atom& a, const std::vector<BigInt>& regs) {
  switch (a.kind) {
    case Atom::Kind::True:
      return true;
    case Atom::Kind::GeReg:
      return regs[a.x] >= regs[a.y];
    case Atom::Kind::GeConst:
      return regs[a.x] >= a.c;
  }
  return false;
}

bool holds(const Guard& g, const std::vector<BigInt>& regs) {
  return std::all_of(g.begin(), g.end(), [&](const Literal& l) { return holds(l.atom, regs) != l.negated; });
}

}  // namespace

Configuration RegisterMachine::initial_configuration() const {
  return Configuration{initial_, std::vector<BigInt>(registers_.size(), BigInt(0))};
}

std::size_t RegisterMachine::enabled_edge(const Configuration& c, Symbol s) const {
  for (std::size_t e : edges_by_[c.state * alphabet_->size() + s]) {
    if (holds(edges_[e].guard, c.registers)) return e;
  }
  // Unreachable for validated machines.
  throw MachineError("no enabled edge in state " + states_[c.state] + " on " + alphabet_->token(s));
}

void RegisterMachine::step(Configuration& c, Symbol s) const {
  const MachineEdge& e = edges_[enabled_edge(c, s)];
  if (!e.updates.empty()) {
    const std::vector<BigInt> old = c.registers;
    for (const Update& u : e.updates) {
      BigInt& r = c.registers[u.target];
      switch (u.kind) {
        case Update::Kind::Zero:
          r = 0;
          break;
        case Update::Kind::One:
          r = 1;
          break;
        case Update::Kind::Inc:
          r = old[u.target] + 1;
          break;
        case Update::Kind::Dec:
          r = old[u.target] - 1;
          break;
        case Update::Kind::AddReg:
          r = old[u.target] + old[u.source];
          break;
        case Update::Kind::Copy:
          r = old[u.source];
          break;
      }
    }
  }
  c.state = e.to;
}

namespace {

ExtendedValue eval_term(const OutputTerm& t, const std::vector<BigInt>& regs) {
  switch (t.kind) {
    case OutputTerm::Kind::Const:
      return ExtendedValue::integer(t.c);
    case OutputTerm::Kind::Inf:
      return ExtendedValue::pos_inf();
    case OutputTerm::Kind::Reg:
      return ExtendedValue::integer(regs[t.x]);
    case OutputTerm::Kind::Sum:
      return ExtendedValue::integer(regs[t.x] + regs[t.y]);
    case OutputTerm::Kind::Ratio: {
      if (regs[t.y] == 0) throw ArithmeticError("division by zero in machine output");
      Rational r(regs[t.x], regs[t.y]);
      if (boost::multiprecision::denominator(r) == 1) {
        return ExtendedValue::integer(boost::multiprecision::numerator(r));
      }
      return ExtendedValue::rational(r);
    }
  }
  return ExtendedValue::integer(0);
}

}  // namespace

ExtendedValue RegisterMachine::output(const Configuration& c) const {
  const OutputExpr& out = outputs_[c.state];
  if (!out.tuple) return eval_term(out.terms.front(), c.registers);
  ExtendedValue::Tuple parts;
  parts.reserve(out.terms.size());
  for (const auto& t : out.terms) parts.push_back(eval_term(t, c.registers));
  return ExtendedValue::tuple(std::move(parts));
}

std::pair<Configuration, ExtendedValue> RegisterMachine::run(const FiniteTrace& s) const {
  Configuration c = initial_configuration();
  for (Symbol sym : s.symbols) step(c, sym);
  ExtendedValue v = output(c);
  return {std::move(c), std::move(v)};
}

// ---------------------------------------------------------------------------
// Builder and validation

MachineBuilder::MachineBuilder(std::string name, AlphabetPtr alphabet, InstructionSet iset)
    : name_(std::move(name)), alphabet_(std::move(alphabet)), iset_(iset) {
  if (!alphabet_) throw MachineError("machine needs an alphabet");
}

std::size_t MachineBuilder::add_register(const std::string& name) {
  if (!is_valid_token(name)) throw MachineError("invalid register name '" + name + "'");
  if (std::find(registers_.begin(), registers_.end(), name) != registers_.end()) {
    throw MachineError("duplicate register '" + name + "'");
  }
  registers_.push_back(name);
  return registers_.size() - 1;
}

std::size_t MachineBuilder::add_state(const std::string& name) {
  if (has_state(name)) throw MachineError("duplicate state '" + name + "'");
  states_.push_back(name);
  outputs_.emplace_back();
  return states_.size() - 1;
}

bool MachineBuilder::has_state(const std::string& name) const {
  return std::find(states_.begin(), states_.end(), name) != states_.end();
}

std::size_t MachineBuilder::state(const std::string& name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) throw MachineError("unknown state '" + name + "'");
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t MachineBuilder::reg(const std::string& name) const {
  auto it = std::find(registers_.begin(), registers_.end(), name);
  if (it == registers_.end()) throw MachineError("unknown register '" + name + "'");
  return static_cast<std::size_t>(it - registers_.begin());
}

MachineBuilder& MachineBuilder::set_initial(std::size_t q) {
  if (q >= states_.size()) throw MachineError("initial state out of range");
  initial_ = q;
  return *this;
}

MachineBuilder& MachineBuilder::add_edge(std::size_t from, Symbol s, Guard guard, std::vector<Update> updates,
                                         std::size_t to) {
  if (from >= states_.size() || to >= states_.size()) throw MachineError("edge state out of range");
  if (s >= alphabet_->size()) throw MachineError("edge symbol out of range");
  edges_.push_back(MachineEdge{from, s, std::move(guard), std::move(updates), to});
  return *this;
}

MachineBuilder& MachineBuilder::set_output(std::size_t q, OutputExpr out) {
  if (q >= states_.size()) throw MachineError("output state out of range");
  if (out.terms.empty()) throw MachineError("empty output expression");
  outputs_[q] = std::move(out);
  return *this;
}

MachineBuilder& MachineBuilder::set_domain(ValueDomain d) {
  domain_ = std::move(d);
  return *this;
}

namespace {

bool guard_allowed(InstructionSet iset, const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::True:
      return true;
    case Atom::Kind::GeReg:
      return iset == InstructionSet::CounterInc || iset == InstructionSet::Adder || iset == InstructionSet::Extended;
    case Atom::Kind::GeConst:
      if (iset == InstructionSet::Extended) return true;
      return iset == InstructionSet::CounterIncDec && a.c == 0;
  }
  return false;
}

bool update_allowed(InstructionSet iset, Update::Kind k) {
  if (iset == InstructionSet::Extended) return true;
  switch (k) {
    case Update::Kind::Zero:
      return iset == InstructionSet::CounterInc || iset == InstructionSet::CounterIncDec;
    case Update::Kind::Inc:
      return iset == InstructionSet::CounterInc || iset == InstructionSet::CounterIncDec;
    case Update::Kind::Dec:
      return iset == InstructionSet::CounterIncDec;
    case Update::Kind::One:
    case Update::Kind::AddReg:
      return iset == InstructionSet::Adder;
    case Update::Kind::Copy:
      return false;
  }
  return false;
}

bool output_allowed(InstructionSet iset, const OutputTerm& t) {
  if (iset == InstructionSet::Extended) return true;
  switch (t.kind) {
    case OutputTerm::Kind::Inf:
    case OutputTerm::Kind::Reg:
      return true;
    case OutputTerm::Kind::Const:
      return t.c == 0 || iset == InstructionSet::Adder;
    case OutputTerm::Kind::Sum:
      return iset == InstructionSet::Adder;
    case OutputTerm::Kind::Ratio:
      return false;
  }
  return false;
}

std::string render_atom(const Atom& a, const std::vector<std::string>& regs) {
  switch (a.kind) {
    case Atom::Kind::True:
      return "true";
    case Atom::Kind::GeReg:
      return regs[a.x] + ">=" + regs[a.y];
    case Atom::Kind::GeConst:
      return regs[a.x] + ">=" + a.c.str();
  }
  return "?";
}

/// Integer feasibility of a conjunction of (possibly negated) atoms via
/// difference constraints and Bellman-Ford over the registers plus a zero
/// node.
bool feasible(const std::vector<Atom>& atoms, const std::vector<bool>& values, std::size_t nregs) {
  struct Arc {
    std::size_t from, to;
    BigInt w;
  };
  // Constraint v - u <= w becomes arc u -> v with weight w.
  std::vector<Arc> arcs;
  const std::size_t zero = nregs;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    const bool positive = values[i];
    if (a.kind == Atom::Kind::GeReg) {
      if (positive) {
        arcs.push_back({a.x, a.y, 0});  // y - x <= 0
      } else {
        arcs.push_back({a.y, a.x, -1});  // x - y <= -1
      }
    } else if (a.kind == Atom::Kind::GeConst) {
      if (positive) {
        arcs.push_back({a.x, zero, -a.c});  // 0 - x <= -c
      } else {
        arcs.push_back({zero, a.x, a.c - 1});  // x - 0 <= c - 1
      }
    } else if (!positive) {
      return false;  // not(true)
    }
  }
  const std::size_t n = nregs + 1;
  std::vector<BigInt> dist(n, 0);
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (const auto& arc : arcs) {
      if (dist[arc.from] + arc.w < dist[arc.to]) {
        dist[arc.to] = dist[arc.from] + arc.w;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

}  // namespace

RegisterMachine MachineBuilder::build() const {
  if (states_.empty()) throw MachineError(name_ + ": machine has no states");
  if (!initial_) throw MachineError(name_ + ": no initial state");
  const std::size_t nsym = alphabet_->size();
  const std::string iset_name = to_string(iset_);

  bool any_ratio = false;
  std::optional<std::size_t> arity;
  for (std::size_t q = 0; q < states_.size(); ++q) {
    if (!outputs_[q]) throw MachineError(name_ + ": state " + states_[q] + " has no output");
    const OutputExpr& out = *outputs_[q];
    for (const auto& t : out.terms) {
      if (!output_allowed(iset_, t)) {
        throw MachineError(name_ + ": output of state " + states_[q] + " is outside instruction set " + iset_name);
      }
      if ((t.kind == OutputTerm::Kind::Reg || t.kind == OutputTerm::Kind::Sum || t.kind == OutputTerm::Kind::Ratio) &&
          (t.x >= registers_.size() || (t.kind != OutputTerm::Kind::Reg && t.y >= registers_.size()))) {
        throw MachineError(name_ + ": output of state " + states_[q] + " names an unknown register");
      }
      any_ratio = any_ratio || t.kind == OutputTerm::Kind::Ratio;
    }
    std::size_t this_arity = out.tuple ? out.terms.size() : 0;
    if (arity && *arity != this_arity) throw MachineError(name_ + ": outputs mix scalars and tuples of different arity");
    arity = this_arity;
  }

  for (const auto& e : edges_) {
    const std::string where = "edge " + states_[e.from] + " " + alphabet_->token(e.symbol);
    for (const auto& l : e.guard) {
      if (l.atom.kind != Atom::Kind::True && (l.atom.x >= registers_.size() ||
                                              (l.atom.kind == Atom::Kind::GeReg && l.atom.y >= registers_.size()))) {
        throw MachineError(name_ + ": " + where + " guard names an unknown register");
      }
      if (!guard_allowed(iset_, l.atom)) {
        throw MachineError(name_ + ": " + where + " guard '" + render_atom(l.atom, registers_) +
                           "' is outside instruction set " + iset_name);
      }
    }
    std::vector<bool> assigned(registers_.size(), false);
    for (const auto& u : e.updates) {
      const bool reads_source = u.kind == Update::Kind::AddReg || u.kind == Update::Kind::Copy;
      if (u.target >= registers_.size() || (reads_source && u.source >= registers_.size())) {
        throw MachineError(name_ + ": " + where + " update names an unknown register");
      }
      if (!update_allowed(iset_, u.kind)) {
        throw MachineError(name_ + ": " + where + " update of " + registers_[u.target] +
                           " is outside instruction set " + iset_name);
      }
      if (assigned[u.target]) throw MachineError(name_ + ": " + where + " assigns " + registers_[u.target] + " twice");
      assigned[u.target] = true;
    }
  }

  RegisterMachine m(ValueDomain::nat_inf());
  m.name_ = name_;
  m.alphabet_ = alphabet_;
  m.iset_ = iset_;
  m.registers_ = registers_;
  m.states_ = states_;
  m.initial_ = *initial_;
  m.edges_ = edges_;
  for (const auto& o : outputs_) m.outputs_.push_back(*o);
  m.edges_by_.assign(states_.size() * nsym, {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    m.edges_by_[edges_[i].from * nsym + edges_[i].symbol].push_back(i);
  }

  // Determinism and totality: every integer valuation enables exactly one edge.
  for (std::size_t q = 0; q < states_.size(); ++q) {
    for (Symbol s = 0; s < nsym; ++s) {
      const auto& ids = m.edges_by_[q * nsym + s];
      const std::string where = "state " + states_[q] + ", symbol " + alphabet_->token(s);
      if (ids.empty()) throw MachineError(name_ + ": missing case: no edge for " + where);
      std::vector<Atom> atoms;
      for (std::size_t e : ids) {
        for (const auto& l : edges_[e].guard) {
          if (l.atom.kind == Atom::Kind::True) continue;
          if (std::find(atoms.begin(), atoms.end(), l.atom) == atoms.end()) atoms.push_back(l.atom);
        }
      }
      if (atoms.size() > 20) throw MachineError(name_ + ": too many guard atoms for " + where);
      std::vector<bool> values(atoms.size());
      for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
        for (std::size_t i = 0; i < atoms.size(); ++i) values[i] = (mask >> i) & 1U;
        if (!feasible(atoms, values, registers_.size())) continue;
        std::size_t matches = 0;
        for (std::size_t e : ids) {
          bool ok = true;
          for (const auto& l : edges_[e].guard) {
            if (l.atom.kind == Atom::Kind::True) {
              ok = ok && !l.negated;
              continue;
            }
            auto idx = static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), l.atom) - atoms.begin());
            ok = ok && (values[idx] != l.negated);
          }
          if (ok) ++matches;
        }
        if (matches != 1) {
          std::string valuation;
          for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (i) valuation += " & ";
            valuation += (values[i] ? "" : "!") + render_atom(atoms[i], registers_);
          }
          if (valuation.empty()) valuation = "true";
          if (matches == 0) throw MachineError(name_ + ": missing case for " + where + " when " + valuation);
          throw MachineError(name_ + ": nondeterministic edges for " + where + " when " + valuation);
        }
      }
    }
  }

  if (domain_) {
    m.domain_ = *domain_;
  } else {
    ValueDomain scalar = any_ratio ? ValueDomain::rat_inf() : ValueDomain::nat_inf();
    m.domain_ = (arity && *arity > 0) ? ValueDomain::product(scalar, *arity) : scalar;
  }
  const bool product = m.domain_.kind() == DomainKind::Product;
  if (product != (arity && *arity > 0) || (product && m.domain_.arity() != *arity)) {
    throw MachineError(name_ + ": output shape does not match domain " + m.domain_.name());
  }
  return m;
}

VerdictFunction generated_verdict(const RegisterMachine& m, Monotonicity declared) {
  auto machine = std::make_shared<const RegisterMachine>(m);
  struct Run final : VerdictRun {
    std::shared_ptr<const RegisterMachine> m;
    Configuration c;
    void step(Symbol s) override { m->step(c, s); }
    ExtendedValue value() const override { return m->output(c); }
  };
  return VerdictFunction(m.name(), m.domain(), declared, [machine]() {
    auto run = std::make_unique<Run>();
    run->m = machine;
    run->c = machine->initial_configuration();
    return std::unique_ptr<VerdictRun>(std::move(run));
  });
}

}  // namespace qmon
