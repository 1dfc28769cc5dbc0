#pragma once

// Deterministic register machines with guarded edges, parallel register
// updates and a state-based output function.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmon/automaton.hpp"
#include "qmon/domain.hpp"
#include "qmon/trace.hpp"
#include "qmon/verdict.hpp"

namespace qmon {

enum class InstructionSet {
  /// Reset to 0, increment, compare two registers.
  CounterInc,
  /// Reset to 0, increment, decrement, test against 0.
  CounterIncDec,
  /// Set to 1, add a register, compare two registers.
  Adder,
  /// Any guard, update and output form.
  Extended,
};

std::string to_string(InstructionSet s);

/// Guard atom: `x>=y`, `x>=c` or `true`.
struct Atom {
  enum class Kind { GeReg, GeConst, True };
  Kind kind = Kind::True;
  std::size_t x = 0;
  std::size_t y = 0;
  BigInt c = 0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool negated = false;
};

/// Conjunction of literals; empty means `true`.
using Guard = std::vector<Literal>;

struct Update {
  enum class Kind { Zero, One, Inc, Dec, AddReg, Copy };
  Kind kind;
  std::size_t target;
  std::size_t source = 0;
};

struct MachineEdge {
  std::size_t from;
  Symbol symbol;
  Guard guard;
  std::vector<Update> updates;
  std::size_t to;
};

/// One output component: constant, infinity, register, sum of two registers
/// or the ratio of two registers.
struct OutputTerm {
  enum class Kind { Const, Inf, Reg, Sum, Ratio };
  Kind kind = Kind::Const;
  BigInt c = 0;
  std::size_t x = 0;
  std::size_t y = 0;

  static OutputTerm constant(long long v) { return {Kind::Const, BigInt(v), 0, 0}; }
  static OutputTerm inf() { return {Kind::Inf, 0, 0, 0}; }
  static OutputTerm reg(std::size_t r) { return {Kind::Reg, 0, r, 0}; }
  static OutputTerm sum(std::size_t a, std::size_t b) { return {Kind::Sum, 0, a, b}; }
  static OutputTerm ratio(std::size_t a, std::size_t b) { return {Kind::Ratio, 0, a, b}; }
};

/// A scalar output or a tuple of components.
struct OutputExpr {
  std::vector<OutputTerm> terms;
  bool tuple = false;

  static OutputExpr scalar(OutputTerm t) { return {{std::move(t)}, false}; }
  static OutputExpr of(std::vector<OutputTerm> ts) { return {std::move(ts), true}; }
};

struct Configuration {
  std::size_t state;
  std::vector<BigInt> registers;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

class RegisterMachine {
 public:
  const std::string& name() const { return name_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  InstructionSet instruction_set() const { return iset_; }
  const std::vector<std::string>& registers() const { return registers_; }
  const std::vector<std::string>& states() const { return states_; }
  std::size_t initial() const { return initial_; }
  const ValueDomain& domain() const { return domain_; }
  const std::vector<MachineEdge>& edges() const { return edges_; }
  const OutputExpr& output(std::size_t q) const { return outputs_.at(q); }

  Configuration initial_configuration() const;
  /// The unique successor configuration.
  void step(Configuration& c, Symbol s) const;
  ExtendedValue output(const Configuration& c) const;
  std::pair<Configuration, ExtendedValue> run(const FiniteTrace& s) const;
  /// Index of the edge enabled in configuration c on s.
  std::size_t enabled_edge(const Configuration& c, Symbol s) const;

 private:
  friend class MachineBuilder;
  RegisterMachine(ValueDomain d) : domain_(std::move(d)) {}

  std::string name_;
  AlphabetPtr alphabet_;
  InstructionSet iset_ = InstructionSet::Extended;
  std::vector<std::string> registers_;
  std::vector<std::string> states_;
  std::size_t initial_ = 0;
  ValueDomain domain_;
  std::vector<MachineEdge> edges_;
  std::vector<OutputExpr> outputs_;
  /// edges_by_[q * |Σ| + s] lists the edge indices leaving q on s.
  std::vector<std::vector<std::size_t>> edges_by_;
};

/// Machine that is not deterministic/total or uses instructions outside its set.
class MachineError : public LoadError {
 public:
  using LoadError::LoadError;
};

class MachineBuilder {
 public:
  MachineBuilder(std::string name, AlphabetPtr alphabet, InstructionSet iset);

  std::size_t add_register(const std::string& name);
  std::size_t add_state(const std::string& name);
  std::size_t state(const std::string& name) const;
  std::size_t reg(const std::string& name) const;
  bool has_state(const std::string& name) const;
  MachineBuilder& set_initial(std::size_t q);
  MachineBuilder& add_edge(std::size_t from, Symbol s, Guard guard, std::vector<Update> updates, std::size_t to);
  MachineBuilder& set_output(std::size_t q, OutputExpr out);
  MachineBuilder& set_domain(ValueDomain d);

  /// Validates instruction-set use, determinism and totality.
  RegisterMachine build() const;

 private:
  std::string name_;
  AlphabetPtr alphabet_;
  InstructionSet iset_;
  std::vector<std::string> registers_;
  std::vector<std::string> states_;
  std::optional<std::size_t> initial_;
  std::vector<MachineEdge> edges_;
  std::vector<std::optional<OutputExpr>> outputs_;
  std::optional<ValueDomain> domain_;
};

// Guard and update shorthands for builders.
Literal ge(std::size_t x, std::size_t y);
Literal not_ge(std::size_t x, std::size_t y);
Literal ge_const(std::size_t x, long long c);
Literal not_ge_const(std::size_t x, long long c);
Update set_zero(std::size_t x);
Update set_one(std::size_t x);
Update inc(std::size_t x);
Update dec(std::size_t x);
Update add_reg(std::size_t x, std::size_t y);
Update copy_reg(std::size_t x, std::size_t y);

/// Machine spec text: `registers:`, `instruction-set:`, `states:`,
/// `initial:`, `edge:` and `output:` lines; optional `alphabet:`, `domain:`
/// and `name:` lines.
RegisterMachine load_machine(std::string_view text);
std::string render_machine(const RegisterMachine& m);

/// Verdict v(s) = λ(run(M, s)).
VerdictFunction generated_verdict(const RegisterMachine& m, Monotonicity declared = Monotonicity::Unrestricted);

}  // namespace qmon
