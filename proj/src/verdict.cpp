#include "qmon/verdict.hpp"

namespace qmon {

VerdictFunction::VerdictFunction(std::string name, ValueDomain codomain, Monotonicity declared, Factory factory)
    : name_(std::move(name)), codomain_(std::move(codomain)), declared_(declared), factory_(std::move(factory)) {
  if (!factory_) throw Error("verdict function '" + name_ + "' has no evaluator");
}

ExtendedValue VerdictFunction::evaluate(const FiniteTrace& s) const {
  auto run = start();
  for (Symbol sym : s.symbols) run->step(sym);
  return run->value();
}

std::vector<ExtendedValue> VerdictFunction::sequence(const FiniteTrace& s) const {
  std::vector<ExtendedValue> out;
  out.reserve(s.size() + 1);
  auto run = start();
  out.push_back(run->value());
  for (Symbol sym : s.symbols) {
    run->step(sym);
    out.push_back(run->value());
  }
  return out;
}

VerdictFunction VerdictFunction::renamed(std::string name) const {
  VerdictFunction out = *this;
  out.name_ = std::move(name);
  return out;
}

VerdictFunction VerdictFunction::with_monotonicity(Monotonicity m) const {
  VerdictFunction out = *this;
  out.declared_ = m;
  return out;
}

VerdictFunction from_function(std::string name, ValueDomain codomain, Monotonicity declared,
                              std::function<ExtendedValue(const std::vector<Symbol>&)> f) {
  return stateful_verdict(
      std::move(name), std::move(codomain), declared, std::vector<Symbol>{},
      [](std::vector<Symbol>& prefix, Symbol s) { prefix.push_back(s); },
      [f = std::move(f)](const std::vector<Symbol>& prefix) { return f(prefix); });
}

VerdictFunction constant_verdict(ValueDomain codomain, ExtendedValue value) {
  if (!codomain.contains(value)) {
    throw DomainError("constant " + to_string(value) + " is not in domain " + codomain.name());
  }
  std::string name = "const:" + to_string(value);
  return stateful_verdict(
      std::move(name), std::move(codomain), Monotonicity::Increasing, 0, [](int&, Symbol) {},
      [value](const int&) { return value; });
}

std::string to_string(MonotonicityClass m) {
  switch (m) {
    case MonotonicityClass::Increasing:
      return "increasing";
    case MonotonicityClass::Decreasing:
      return "decreasing";
    case MonotonicityClass::Neither:
      return "neither";
  }
  return "?";
}

MonotonicityClass check_monotone(const VerdictFunction& v, const std::vector<LassoTrace>& suite, std::size_t depth) {
  if (depth == 0) throw Error("monotonicity check needs depth >= 1");
  bool up = false;
  bool down = false;
  for (const auto& t : suite) {
    auto run = v.start();
    ExtendedValue prev = run->value();
    for (std::size_t i = 0; i < depth; ++i) {
      run->step(t.at(i));
      ExtendedValue cur = run->value();
      switch (compare(v.codomain(), prev, cur)) {
        case Order::Less:
          up = true;
          break;
        case Order::Greater:
          down = true;
          break;
        case Order::Incomparable:
          return MonotonicityClass::Neither;
        case Order::Equal:
          break;
      }
      if (up && down) return MonotonicityClass::Neither;
      prev = std::move(cur);
    }
  }
  return down ? MonotonicityClass::Decreasing : MonotonicityClass::Increasing;
}

namespace {

using Combine = std::function<ExtendedValue(const ExtendedValue&, const ExtendedValue&)>;

VerdictFunction pairwise(std::string name, ValueDomain codomain, Monotonicity m, const VerdictFunction& v1,
                         const VerdictFunction& v2, Combine op) {
  struct Run final : VerdictRun {
    std::unique_ptr<VerdictRun> a;
    std::unique_ptr<VerdictRun> b;
    std::shared_ptr<const Combine> op;
    void step(Symbol s) override {
      a->step(s);
      b->step(s);
    }
    ExtendedValue value() const override { return (*op)(a->value(), b->value()); }
  };
  auto shared_op = std::make_shared<const Combine>(std::move(op));
  return VerdictFunction(std::move(name), std::move(codomain), m, [v1, v2, shared_op]() {
    auto run = std::make_unique<Run>();
    run->a = v1.start();
    run->b = v2.start();
    run->op = shared_op;
    return std::unique_ptr<VerdictRun>(std::move(run));
  });
}

void require_lattice(const VerdictFunction& v1, const VerdictFunction& v2, const char* op) {
  if (!(v1.codomain() == v2.codomain())) {
    throw DomainError(std::string(op) + ": codomains differ (" + v1.codomain().name() + " vs " +
                      v2.codomain().name() + ")");
  }
  if (!v1.codomain().is_lattice()) {
    throw DomainError(std::string(op) + " needs a lattice codomain, got " + v1.codomain().name());
  }
}

bool plain_numeric(const ValueDomain& d) {
  return d.kind() == DomainKind::NatInf || d.kind() == DomainKind::IntInf || d.kind() == DomainKind::RatInf;
}

ValueDomain arithmetic_domain(const VerdictFunction& v1, const VerdictFunction& v2, const char* op) {
  if (!plain_numeric(v1.codomain()) || !plain_numeric(v2.codomain())) {
    throw DomainError(std::string(op) + " needs numeric codomains, got " + v1.codomain().name() + " and " +
                      v2.codomain().name());
  }
  return common_domain(v1.codomain(), v2.codomain());
}

Monotonicity both(const VerdictFunction& v1, const VerdictFunction& v2) {
  if (v1.monotonicity() == v2.monotonicity()) return v1.monotonicity();
  return Monotonicity::Unrestricted;
}

}  // namespace

VerdictFunction combine_max(const VerdictFunction& v1, const VerdictFunction& v2) {
  require_lattice(v1, v2, "max");
  const ValueDomain d = v1.codomain();
  Monotonicity m = (v1.monotonicity() == Monotonicity::Increasing && v2.monotonicity() == Monotonicity::Increasing)
                       ? Monotonicity::Increasing
                       : Monotonicity::Unrestricted;
  return pairwise("max(" + v1.name() + "," + v2.name() + ")", d, m, v1, v2,
                  [d](const ExtendedValue& a, const ExtendedValue& b) { return join(d, a, b); });
}

VerdictFunction combine_min(const VerdictFunction& v1, const VerdictFunction& v2) {
  require_lattice(v1, v2, "min");
  const ValueDomain d = v1.codomain();
  Monotonicity m = (v1.monotonicity() == Monotonicity::Decreasing && v2.monotonicity() == Monotonicity::Decreasing)
                       ? Monotonicity::Decreasing
                       : Monotonicity::Unrestricted;
  return pairwise("min(" + v1.name() + "," + v2.name() + ")", d, m, v1, v2,
                  [d](const ExtendedValue& a, const ExtendedValue& b) { return meet(d, a, b); });
}

VerdictFunction combine_sum(const VerdictFunction& v1, const VerdictFunction& v2) {
  ValueDomain d = arithmetic_domain(v1, v2, "sum");
  return pairwise("sum(" + v1.name() + "," + v2.name() + ")", d, both(v1, v2), v1, v2,
                  [](const ExtendedValue& a, const ExtendedValue& b) { return add(a, b); });
}

VerdictFunction combine_product(const VerdictFunction& v1, const VerdictFunction& v2) {
  ValueDomain d = arithmetic_domain(v1, v2, "product");
  // Monotonicity survives multiplication only for non-negative values.
  Monotonicity m = (v1.codomain().kind() == DomainKind::NatInf && v2.codomain().kind() == DomainKind::NatInf)
                       ? both(v1, v2)
                       : Monotonicity::Unrestricted;
  return pairwise("product(" + v1.name() + "," + v2.name() + ")", d, m, v1, v2,
                  [](const ExtendedValue& a, const ExtendedValue& b) { return multiply(a, b); });
}

namespace {

std::vector<ExtendedValue> sample_values(const ValueDomain& d) {
  using EV = ExtendedValue;
  switch (d.kind()) {
    case DomainKind::B:
    case DomainKind::Bt:
    case DomainKind::Bf:
      return {EV::boolean(false), EV::boolean(true)};
    case DomainKind::BBot:
      return {EV::bot(), EV::boolean(false), EV::boolean(true)};
    case DomainKind::NatInf:
      return {EV::integer(0), EV::integer(1), EV::integer(2), EV::integer(3), EV::integer(7), EV::integer(100),
              EV::pos_inf()};
    case DomainKind::IntInf:
      return {EV::neg_inf(), EV::integer(-5), EV::integer(-1), EV::integer(0), EV::integer(1),
              EV::integer(2), EV::integer(3), EV::integer(100), EV::pos_inf()};
    case DomainKind::RatInf:
      return {EV::neg_inf(), EV::integer(-5), EV::rational(Rational(-1, 3)), EV::integer(0),
              EV::rational(Rational(1, 2)), EV::integer(1), EV::rational(Rational(5, 2)), EV::integer(3),
              EV::integer(100), EV::pos_inf()};
    case DomainKind::Inverse:
      return sample_values(d.inner());
    case DomainKind::Product: {
      auto inner = sample_values(d.inner());
      std::vector<EV> out;
      // Constant tuples plus tuples mixing two neighbouring samples.
      for (std::size_t i = 0; i < inner.size(); ++i) {
        out.push_back(EV::tuple(EV::Tuple(d.arity(), inner[i])));
        if (i + 1 < inner.size()) {
          EV::Tuple mixed(d.arity(), inner[i]);
          mixed.back() = inner[i + 1];
          out.push_back(EV::tuple(std::move(mixed)));
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace

VerdictFunction map_continuous(const VerdictFunction& v, std::string name,
                               std::function<ExtendedValue(const ExtendedValue&)> pi) {
  const ValueDomain& d = v.codomain();
  if (!d.is_lattice()) throw DomainError("map_continuous needs a lattice codomain, got " + d.name());
  auto samples = sample_values(d);
  for (const auto& a : samples) {
    for (const auto& b : samples) {
      if (leq(d, a, b) != Tri::Yes) continue;
      ExtendedValue pa = pi(a);
      ExtendedValue pb = pi(b);
      if (!d.contains(pa) || !d.contains(pb)) {
        throw InvalidFunctionError("function '" + name + "' leaves domain " + d.name());
      }
      if (leq(d, pa, pb) != Tri::Yes) {
        throw InvalidFunctionError("function '" + name + "' is not monotone: " + to_string(a) + " <= " +
                                   to_string(b) + " but f(" + to_string(a) + ") = " + to_string(pa) +
                                   " is not <= f(" + to_string(b) + ") = " + to_string(pb));
      }
    }
  }
  struct Run final : VerdictRun {
    std::unique_ptr<VerdictRun> inner;
    std::shared_ptr<std::function<ExtendedValue(const ExtendedValue&)>> pi;
    void step(Symbol s) override { inner->step(s); }
    ExtendedValue value() const override { return (*pi)(inner->value()); }
  };
  auto shared = std::make_shared<std::function<ExtendedValue(const ExtendedValue&)>>(std::move(pi));
  return VerdictFunction(name + "(" + v.name() + ")", d, v.monotonicity(), [v, shared]() {
    auto run = std::make_unique<Run>();
    run->inner = v.start();
    run->pi = shared;
    return std::unique_ptr<VerdictRun>(std::move(run));
  });
}

VerdictFunction complement(const VerdictFunction& v) {
  Monotonicity m = v.monotonicity();
  if (m == Monotonicity::Increasing) {
    m = Monotonicity::Decreasing;
  } else if (m == Monotonicity::Decreasing) {
    m = Monotonicity::Increasing;
  }
  VerdictFunction base = v;
  return VerdictFunction("complement(" + v.name() + ")", ValueDomain::inverse(v.codomain()), m,
                         [base]() { return base.start(); });
}

}  // namespace qmon
