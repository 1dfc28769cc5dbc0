// Text format for register machines.

#include <map>
#include <sstream>

#include "qmon/machine.hpp"
#include "text_util.hpp"

namespace qmon {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw MachineError("line " + std::to_string(line) + ": " + msg);
}

bool is_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

InstructionSet parse_iset(std::string_view v, std::size_t line) {
  if (v == "counter") return InstructionSet::CounterInc;
  if (v == "counter+-") return InstructionSet::CounterIncDec;
  if (v == "adder") return InstructionSet::Adder;
  if (v == "extended") return InstructionSet::Extended;
  fail(line, "unknown instruction-set '" + std::string(v) + "'");
}

struct Context {
  const MachineBuilder& b;
  std::size_t line;

  std::size_t reg(std::string_view name) const {
    try {
      return b.reg(std::string(text::trim(name)));
    } catch (const MachineError& e) {
      fail(line, e.what());
    }
  }
};

Literal parse_literal(std::string_view s, const Context& ctx) {
  s = text::trim(s);
  if (s.starts_with("!")) {
    auto inner = text::trim(s.substr(1));
    if (inner.size() < 2 || inner.front() != '(' || inner.back() != ')') fail(ctx.line, "expected '!(atom)'");
    Literal l = parse_literal(inner.substr(1, inner.size() - 2), ctx);
    l.negated = !l.negated;
    return l;
  }
  if (s == "true") return Literal{Atom{}, false};
  auto op = s.find(">=");
  if (op == std::string_view::npos) fail(ctx.line, "unknown guard atom '" + std::string(s) + "'");
  auto lhs = text::trim(s.substr(0, op));
  auto rhs = text::trim(s.substr(op + 2));
  std::size_t x = ctx.reg(lhs);
  if (is_integer(rhs)) return Literal{Atom{Atom::Kind::GeConst, x, 0, BigInt(std::string(rhs))}, false};
  return Literal{Atom{Atom::Kind::GeReg, x, ctx.reg(rhs), 0}, false};
}

Guard parse_guard(std::string_view s, const Context& ctx) {
  Guard g;
  std::size_t depth = 0, begin = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == '&' && depth == 0)) {
      auto part = text::trim(s.substr(begin, i - begin));
      if (part.empty()) fail(ctx.line, "empty guard conjunct");
      Literal l = parse_literal(part, ctx);
      if (!(l.atom.kind == Atom::Kind::True && !l.negated)) g.push_back(l);
      begin = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  return g;
}

Update parse_update(std::string_view s, const Context& ctx) {
  s = text::trim(s);
  auto op = s.find(":=");
  if (op == std::string_view::npos) fail(ctx.line, "expected 'x:=...' in update '" + std::string(s) + "'");
  auto lhs = text::trim(s.substr(0, op));
  auto rhs = text::trim(s.substr(op + 2));
  std::size_t x = ctx.reg(lhs);
  if (rhs == "0") return set_zero(x);
  if (rhs == "1") return set_one(x);
  auto plus = rhs.find('+');
  auto minus = rhs.find('-');
  if (plus != std::string_view::npos) {
    auto a = text::trim(rhs.substr(0, plus));
    auto b = text::trim(rhs.substr(plus + 1));
    if (a != lhs) fail(ctx.line, "update '" + std::string(s) + "' must add to the assigned register");
    if (b == "1") return inc(x);
    return add_reg(x, ctx.reg(b));
  }
  if (minus != std::string_view::npos) {
    auto a = text::trim(rhs.substr(0, minus));
    auto b = text::trim(rhs.substr(minus + 1));
    if (a != lhs || b != "1") fail(ctx.line, "unsupported update '" + std::string(s) + "'");
    return dec(x);
  }
  if (is_integer(rhs)) fail(ctx.line, "unsupported constant in update '" + std::string(s) + "'");
  return copy_reg(x, ctx.reg(rhs));
}

OutputTerm parse_term(std::string_view s, const Context& ctx) {
  s = text::trim(s);
  if (s == "inf") return OutputTerm::inf();
  if (is_integer(s)) return OutputTerm{OutputTerm::Kind::Const, BigInt(std::string(s)), 0, 0};
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto strip = [](std::string_view p) {
      p = text::trim(p);
      if (p.size() >= 2 && p.front() == '(' && p.back() == ')') p = p.substr(1, p.size() - 2);
      return p;
    };
    return OutputTerm::ratio(ctx.reg(strip(s.substr(0, slash))), ctx.reg(strip(s.substr(slash + 1))));
  }
  if (auto plus = s.find('+'); plus != std::string_view::npos) {
    return OutputTerm::sum(ctx.reg(s.substr(0, plus)), ctx.reg(s.substr(plus + 1)));
  }
  return OutputTerm::reg(ctx.reg(s));
}

OutputExpr parse_output(std::string_view s, const Context& ctx) {
  s = text::trim(s);
  const bool ratio = s.starts_with("(") && s.find(")/(") != std::string_view::npos;
  if (!s.starts_with("(") || ratio) return OutputExpr::scalar(parse_term(s, ctx));
  if (!s.ends_with(")")) fail(ctx.line, "unterminated output tuple");
  std::vector<OutputTerm> terms;
  auto body = s.substr(1, s.size() - 2);
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ',') {
      terms.push_back(parse_term(body.substr(begin, i - begin), ctx));
      begin = i + 1;
    }
  }
  return OutputExpr::of(std::move(terms));
}

}  // namespace

RegisterMachine load_machine(std::string_view text) {
  auto lines = text::content_lines(text);
  std::string name = "machine";
  std::vector<std::string> alphabet_tokens;
  std::optional<InstructionSet> iset;
  std::vector<std::string> registers, states;
  std::optional<std::pair<std::string, std::size_t>> initial;
  std::optional<std::pair<std::string, std::size_t>> domain;
  bool explicit_alphabet = false;
  struct Pending {
    std::size_t line;
    std::string_view body;
  };
  std::vector<Pending> edge_lines, output_lines;

  for (const auto& line : lines) {
    std::string_view key, value;
    if (!text::key_value(line.text, key, value)) fail(line.number, "expected 'key: value'");
    if (key == "name") {
      name = std::string(value);
    } else if (key == "alphabet") {
      alphabet_tokens = text::split_ws(value);
      explicit_alphabet = true;
    } else if (key == "registers") {
      registers = text::split_ws(value);
    } else if (key == "instruction-set") {
      iset = parse_iset(value, line.number);
    } else if (key == "states") {
      states = text::split_ws(value);
    } else if (key == "initial") {
      initial = {std::string(value), line.number};
    } else if (key == "domain") {
      domain = {std::string(value), line.number};
    } else if (key == "edge") {
      edge_lines.push_back({line.number, value});
    } else if (key == "output") {
      output_lines.push_back({line.number, value});
    } else {
      fail(line.number, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!iset) throw MachineError("missing 'instruction-set:' line");
  if (states.empty()) throw MachineError("missing 'states:' line");
  if (!initial) throw MachineError("missing 'initial:' line");

  struct EdgeText {
    std::size_t line;
    std::string from, symbol, guard, updates, to;
  };
  std::vector<EdgeText> edges;
  for (const auto& p : edge_lines) {
    EdgeText e{p.line, "", "", "true", "", ""};
    auto arrow = p.body.rfind("->");
    if (arrow == std::string_view::npos) fail(p.line, "edge needs '-> target'");
    e.to = std::string(text::trim(p.body.substr(arrow + 2)));
    std::string_view head = p.body.substr(0, arrow);
    std::string_view rest;
    if (auto open = head.find('['); open != std::string_view::npos) {
      auto close = head.rfind(']');
      if (close == std::string_view::npos || close < open) fail(p.line, "unterminated guard");
      e.guard = std::string(head.substr(open + 1, close - open - 1));
      rest = head.substr(close + 1);
      head = head.substr(0, open);
    } else if (auto slash = head.find('/'); slash != std::string_view::npos) {
      rest = head.substr(slash);
      head = head.substr(0, slash);
    }
    auto qa = text::split_ws(head);
    if (qa.size() != 2) fail(p.line, "edge needs 'state symbol'");
    e.from = qa[0];
    e.symbol = qa[1];
    rest = text::trim(rest);
    if (!rest.empty()) {
      if (rest.front() != '/') fail(p.line, "expected '/' before updates");
      e.updates = std::string(text::trim(rest.substr(1)));
    }
    if (!explicit_alphabet &&
        std::find(alphabet_tokens.begin(), alphabet_tokens.end(), e.symbol) == alphabet_tokens.end()) {
      alphabet_tokens.push_back(e.symbol);
    }
    edges.push_back(std::move(e));
  }
  if (alphabet_tokens.empty()) throw MachineError("machine alphabet is empty (no 'alphabet:' line and no edges)");

  AlphabetPtr alphabet;
  try {
    alphabet = make_alphabet(alphabet_tokens);
  } catch (const Error& e) {
    throw MachineError(std::string("alphabet: ") + e.what());
  }
  MachineBuilder b(name, alphabet, *iset);
  for (const auto& r : registers) b.add_register(r);
  for (const auto& s : states) b.add_state(s);
  auto state_at = [&](const std::string& n, std::size_t line) {
    if (!b.has_state(n)) fail(line, "unknown state '" + n + "'");
    return b.state(n);
  };
  b.set_initial(state_at(initial->first, initial->second));
  for (const auto& e : edges) {
    Context ctx{b, e.line};
    auto sym = alphabet->find(e.symbol);
    if (!sym) fail(e.line, "unknown symbol '" + e.symbol + "'");
    std::vector<Update> updates;
    if (!e.updates.empty()) {
      std::string_view u = e.updates;
      std::size_t begin = 0;
      for (std::size_t i = 0; i <= u.size(); ++i) {
        if (i == u.size() || u[i] == ',') {
          updates.push_back(parse_update(u.substr(begin, i - begin), ctx));
          begin = i + 1;
        }
      }
    }
    b.add_edge(state_at(e.from, e.line), *sym, parse_guard(e.guard, ctx), std::move(updates), state_at(e.to, e.line));
  }
  for (const auto& p : output_lines) {
    auto eq = p.body.find('=');
    if (eq == std::string_view::npos) fail(p.line, "output needs 'state = expression'");
    Context ctx{b, p.line};
    b.set_output(state_at(std::string(text::trim(p.body.substr(0, eq))), p.line),
                 parse_output(p.body.substr(eq + 1), ctx));
  }
  if (domain) {
    try {
      b.set_domain(ValueDomain::parse(domain->first));
    } catch (const Error& e) {
      fail(domain->second, e.what());
    }
  }
  return b.build();
}

namespace {

std::string render_literal(const Literal& l, const std::vector<std::string>& regs) {
  std::string atom;
  switch (l.atom.kind) {
    case Atom::Kind::True:
      atom = "true";
      break;
    case Atom::Kind::GeReg:
      atom = regs[l.atom.x] + ">=" + regs[l.atom.y];
      break;
    case Atom::Kind::GeConst:
      atom = regs[l.atom.x] + ">=" + l.atom.c.str();
      break;
  }
  return l.negated ? "!(" + atom + ")" : atom;
}

std::string render_update(const Update& u, const std::vector<std::string>& regs) {
  const std::string& x = regs[u.target];
  switch (u.kind) {
    case Update::Kind::Zero:
      return x + ":=0";
    case Update::Kind::One:
      return x + ":=1";
    case Update::Kind::Inc:
      return x + ":=" + x + "+1";
    case Update::Kind::Dec:
      return x + ":=" + x + "-1";
    case Update::Kind::AddReg:
      return x + ":=" + x + "+" + regs[u.source];
    case Update::Kind::Copy:
      return x + ":=" + regs[u.source];
  }
  return "?";
}

std::string render_term(const OutputTerm& t, const std::vector<std::string>& regs, bool in_tuple) {
  switch (t.kind) {
    case OutputTerm::Kind::Const:
      return t.c.str();
    case OutputTerm::Kind::Inf:
      return "inf";
    case OutputTerm::Kind::Reg:
      return regs[t.x];
    case OutputTerm::Kind::Sum:
      return regs[t.x] + "+" + regs[t.y];
    case OutputTerm::Kind::Ratio:
      return in_tuple ? regs[t.x] + "/" + regs[t.y] : "(" + regs[t.x] + ")/(" + regs[t.y] + ")";
  }
  return "?";
}

}  // namespace

std::string render_machine(const RegisterMachine& m) {
  std::ostringstream out;
  const auto& regs = m.registers();
  out << "name: " << m.name() << "\nalphabet:";
  for (const auto& t : m.alphabet()->tokens()) out << ' ' << t;
  out << "\nregisters:";
  for (const auto& r : regs) out << ' ' << r;
  out << "\ninstruction-set: " << to_string(m.instruction_set()) << "\nstates:";
  for (const auto& s : m.states()) out << ' ' << s;
  out << "\ninitial: " << m.states()[m.initial()] << "\ndomain: " << m.domain().name() << '\n';
  for (const auto& e : m.edges()) {
    out << "edge: " << m.states()[e.from] << ' ' << m.alphabet()->token(e.symbol) << " [";
    if (e.guard.empty()) out << "true";
    for (std::size_t i = 0; i < e.guard.size(); ++i) {
      if (i) out << " & ";
      out << render_literal(e.guard[i], regs);
    }
    out << ']';
    if (!e.updates.empty()) {
      out << " / ";
      for (std::size_t i = 0; i < e.updates.size(); ++i) {
        if (i) out << ", ";
        out << render_update(e.updates[i], regs);
      }
    }
    out << " -> " << m.states()[e.to] << '\n';
  }
  for (std::size_t q = 0; q < m.states().size(); ++q) {
    const auto& o = m.output(q);
    out << "output: " << m.states()[q] << " = ";
    if (o.tuple) {
      out << '(';
      for (std::size_t i = 0; i < o.terms.size(); ++i) {
        if (i) out << ',';
        out << render_term(o.terms[i], regs, true);
      }
      out << ')';
    } else {
      out << render_term(o.terms.front(), regs, false);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qmon
