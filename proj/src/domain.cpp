#include "qmon/domain.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace qmon {

namespace {

// Rank of a numeric value on the extended number line.
int numeric_rank(const ExtendedValue& v) {
  if (v.is_neg_inf()) return 0;
  if (v.is_pos_inf()) return 2;
  return 1;
}

Order compare_numeric(const ExtendedValue& a, const ExtendedValue& b) {
  const int ra = numeric_rank(a);
  const int rb = numeric_rank(b);
  if (ra != rb) return ra < rb ? Order::Less : Order::Greater;
  if (ra != 1) return Order::Equal;
  if (a.is_integer() && b.is_integer()) {
    const auto& x = a.as_integer();
    const auto& y = b.as_integer();
    return x < y ? Order::Less : (x > y ? Order::Greater : Order::Equal);
  }
  const Rational x = a.as_rational();
  const Rational y = b.as_rational();
  return x < y ? Order::Less : (x > y ? Order::Greater : Order::Equal);
}

Order reverse(Order o) {
  switch (o) {
    case Order::Less:
      return Order::Greater;
    case Order::Greater:
      return Order::Less;
    default:
      return o;
  }
}

[[noreturn]] void mismatch(const ValueDomain& d, const ExtendedValue& v) {
  throw DomainError("value " + to_string(v) + " is not in domain " + d.name());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational ExtendedValue::as_rational() const {
  if (is_integer()) return Rational(as_integer());
  if (is_rational()) return std::get<Rational>(repr_);
  throw DomainError("value " + to_string(*this) + " is not a finite number");
}

bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
  if (a.is_finite_number() && b.is_finite_number()) {
    if (a.is_integer() && b.is_integer()) return a.as_integer() == b.as_integer();
    return a.as_rational() == b.as_rational();
  }
  return a.repr_ == b.repr_;
}

std::string to_string(const ExtendedValue& v) {
  if (v.is_bot()) return "bot";
  if (v.is_top()) return "top";
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  if (v.is_boolean()) return v.as_boolean() ? "T" : "F";
  if (v.is_integer()) return v.as_integer().str();
  if (v.is_rational()) {
    const Rational r = v.as_rational();
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
  std::string out = "(";
  const auto& t = v.as_tuple();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += to_string(t[i]);
  }
  return out + ")";
}

std::ostream& operator<<(std::ostream& os, const ExtendedValue& v) { return os << to_string(v); }

namespace {

BigInt parse_bigint(std::string_view s) {
  if (s.empty()) throw Error("empty number");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw Error("malformed number '" + std::string(s) + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw Error("malformed number '" + std::string(s) + "'");
  }
  return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
}

}  // namespace

ExtendedValue parse_value(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return ExtendedValue::pos_inf();
  if (text == "-inf") return ExtendedValue::neg_inf();
  if (text == "bot") return ExtendedValue::bot();
  if (text == "top") return ExtendedValue::top();
  if (text == "T") return ExtendedValue::boolean(true);
  if (text == "F") return ExtendedValue::boolean(false);
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw Error("unterminated tuple '" + std::string(text) + "'");
    std::string_view body = text.substr(1, text.size() - 2);
    ExtendedValue::Tuple parts;
    int depth = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i == body.size() || (body[i] == ',' && depth == 0)) {
        auto part = trim(body.substr(begin, i - begin));
        if (part.empty()) throw Error("empty tuple component in '" + std::string(text) + "'");
        parts.push_back(parse_value(part));
        begin = i + 1;
      } else if (body[i] == '(') {
        ++depth;
      } else if (body[i] == ')') {
        --depth;
      }
    }
    return ExtendedValue::tuple(std::move(parts));
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_bigint(trim(text.substr(0, slash)));
    BigInt den = parse_bigint(trim(text.substr(slash + 1)));
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return ExtendedValue::rational(Rational(num, den));
  }
  return ExtendedValue::integer(parse_bigint(text));
}

ValueDomain ValueDomain::product(const ValueDomain& inner, std::size_t arity) {
  if (arity == 0) throw Error("product domain arity must be positive");
  ValueDomain d(DomainKind::Product);
  d.inner_ = std::make_shared<const ValueDomain>(inner);
  d.arity_ = arity;
  return d;
}

ValueDomain ValueDomain::inverse(const ValueDomain& inner) {
  if (inner.kind_ == DomainKind::Inverse) return *inner.inner_;
  ValueDomain d(DomainKind::Inverse);
  d.inner_ = std::make_shared<const ValueDomain>(inner);
  return d;
}

ValueDomain ValueDomain::parse(std::string_view name) {
  name = trim(name);
  if (name == "B") return boolean();
  if (name == "Bbot") return boolean_bot();
  if (name == "Bt") return boolean_true();
  if (name == "Bf") return boolean_false();
  if (name == "natinf") return nat_inf();
  if (name == "intinf") return int_inf();
  if (name == "ratinf") return rat_inf();
  if (name.starts_with("inv:")) return inverse(parse(name.substr(4)));
  if (name.starts_with("prod:")) {
    auto rest = name.substr(5);
    auto colon = rest.rfind(':');
    if (colon == std::string_view::npos) throw Error("product domain needs an arity: " + std::string(name));
    std::size_t arity = 0;
    auto digits = rest.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arity);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || arity == 0) {
      throw Error("bad product arity in domain '" + std::string(name) + "'");
    }
    return product(parse(rest.substr(0, colon)), arity);
  }
  throw Error("unknown domain '" + std::string(name) + "'");
}

std::string ValueDomain::name() const {
  switch (kind_) {
    case DomainKind::B:
      return "B";
    case DomainKind::BBot:
      return "Bbot";
    case DomainKind::Bt:
      return "Bt";
    case DomainKind::Bf:
      return "Bf";
    case DomainKind::NatInf:
      return "natinf";
    case DomainKind::IntInf:
      return "intinf";
    case DomainKind::RatInf:
      return "ratinf";
    case DomainKind::Product:
      return "prod:" + inner_->name() + ":" + std::to_string(arity_);
    case DomainKind::Inverse:
      return "inv:" + inner_->name();
  }
  return "?";
}

bool operator==(const ValueDomain& a, const ValueDomain& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == DomainKind::Product) return a.arity_ == b.arity_ && *a.inner_ == *b.inner_;
  if (a.kind_ == DomainKind::Inverse) return *a.inner_ == *b.inner_;
  return true;
}

bool ValueDomain::contains(const ExtendedValue& v) const {
  switch (kind_) {
    case DomainKind::B:
    case DomainKind::Bt:
    case DomainKind::Bf:
      return v.is_boolean();
    case DomainKind::BBot:
      return v.is_boolean() || v.is_bot();
    case DomainKind::NatInf:
      return v.is_pos_inf() || (v.is_integer() && v.as_integer() >= 0);
    case DomainKind::IntInf:
      return v.is_pos_inf() || v.is_neg_inf() || v.is_integer();
    case DomainKind::RatInf:
      return v.is_numeric();
    case DomainKind::Product: {
      if (!v.is_tuple() || v.as_tuple().size() != arity_) return false;
      return std::all_of(v.as_tuple().begin(), v.as_tuple().end(),
                         [&](const ExtendedValue& c) { return inner_->contains(c); });
    }
    case DomainKind::Inverse:
      return inner_->contains(v);
  }
  return false;
}

bool ValueDomain::is_total() const {
  switch (kind_) {
    case DomainKind::B:
    case DomainKind::BBot:
      return false;
    case DomainKind::Product:
      return arity_ == 1 && inner_->is_total();
    case DomainKind::Inverse:
      return inner_->is_total();
    default:
      return true;
  }
}

bool ValueDomain::is_lattice() const {
  switch (kind_) {
    case DomainKind::B:
    case DomainKind::BBot:
      return false;
    case DomainKind::Product:
    case DomainKind::Inverse:
      return inner_->is_lattice();
    default:
      return true;
  }
}

bool ValueDomain::is_numeric_order() const {
  switch (kind_) {
    case DomainKind::NatInf:
    case DomainKind::IntInf:
    case DomainKind::RatInf:
      return true;
    case DomainKind::Inverse:
      return inner_->is_numeric_order();
    default:
      return false;
  }
}

bool ValueDomain::is_boolean() const {
  return kind_ == DomainKind::B || kind_ == DomainKind::BBot || kind_ == DomainKind::Bt ||
         kind_ == DomainKind::Bf;
}

std::optional<ExtendedValue> ValueDomain::bottom() const {
  switch (kind_) {
    case DomainKind::B:
      return std::nullopt;
    case DomainKind::BBot:
      return ExtendedValue::bot();
    case DomainKind::Bt:
      return ExtendedValue::boolean(false);
    case DomainKind::Bf:
      return ExtendedValue::boolean(true);
    case DomainKind::NatInf:
      return ExtendedValue::integer(0);
    case DomainKind::IntInf:
    case DomainKind::RatInf:
      return ExtendedValue::neg_inf();
    case DomainKind::Product: {
      auto b = inner_->bottom();
      if (!b) return std::nullopt;
      return ExtendedValue::tuple(ExtendedValue::Tuple(arity_, *b));
    }
    case DomainKind::Inverse:
      return inner_->top();
  }
  return std::nullopt;
}

std::optional<ExtendedValue> ValueDomain::top() const {
  switch (kind_) {
    case DomainKind::B:
    case DomainKind::BBot:
      return std::nullopt;
    case DomainKind::Bt:
      return ExtendedValue::boolean(true);
    case DomainKind::Bf:
      return ExtendedValue::boolean(false);
    case DomainKind::NatInf:
    case DomainKind::IntInf:
    case DomainKind::RatInf:
      return ExtendedValue::pos_inf();
    case DomainKind::Product: {
      auto t = inner_->top();
      if (!t) return std::nullopt;
      return ExtendedValue::tuple(ExtendedValue::Tuple(arity_, *t));
    }
    case DomainKind::Inverse:
      return inner_->bottom();
  }
  return std::nullopt;
}

Order compare(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b) {
  if (!d.contains(a)) mismatch(d, a);
  if (!d.contains(b)) mismatch(d, b);
  switch (d.kind()) {
    case DomainKind::B:
      return a == b ? Order::Equal : Order::Incomparable;
    case DomainKind::BBot:
      if (a == b) return Order::Equal;
      if (a.is_bot()) return Order::Less;
      if (b.is_bot()) return Order::Greater;
      return Order::Incomparable;
    case DomainKind::Bt:
      if (a == b) return Order::Equal;
      return a.as_boolean() ? Order::Greater : Order::Less;
    case DomainKind::Bf:
      if (a == b) return Order::Equal;
      return a.as_boolean() ? Order::Less : Order::Greater;
    case DomainKind::NatInf:
    case DomainKind::IntInf:
    case DomainKind::RatInf:
      return compare_numeric(a, b);
    case DomainKind::Product: {
      bool some_less = false;
      bool some_greater = false;
      const auto& ta = a.as_tuple();
      const auto& tb = b.as_tuple();
      for (std::size_t i = 0; i < ta.size(); ++i) {
        switch (compare(d.inner(), ta[i], tb[i])) {
          case Order::Less:
            some_less = true;
            break;
          case Order::Greater:
            some_greater = true;
            break;
          case Order::Incomparable:
            return Order::Incomparable;
          case Order::Equal:
            break;
        }
      }
      if (some_less && some_greater) return Order::Incomparable;
      if (some_less) return Order::Less;
      if (some_greater) return Order::Greater;
      return Order::Equal;
    }
    case DomainKind::Inverse:
      return reverse(compare(d.inner(), a, b));
  }
  return Order::Incomparable;
}

Tri leq(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b) {
  switch (compare(d, a, b)) {
    case Order::Less:
    case Order::Equal:
      return Tri::Yes;
    case Order::Greater:
      return Tri::No;
    case Order::Incomparable:
      return Tri::Incomparable;
  }
  return Tri::Incomparable;
}

bool less_eq(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b) {
  return leq(d, a, b) == Tri::Yes;
}

bool strictly_less(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b) {
  return compare(d, a, b) == Order::Less;
}

namespace {

ExtendedValue bound(const ValueDomain& d, std::span<const ExtendedValue> vs, bool upper) {
  for (const auto& v : vs) {
    if (!d.contains(v)) mismatch(d, v);
  }
  const char* what = upper ? "supremum" : "infimum";
  if (vs.empty()) {
    auto e = upper ? d.bottom() : d.top();
    if (!e) throw NoBoundError(std::string("empty set has no ") + what + " in domain " + d.name());
    return *e;
  }
  if (d.kind() == DomainKind::Inverse) return bound(d.inner(), vs, !upper);
  if (d.kind() == DomainKind::Product) {
    ExtendedValue::Tuple out;
    std::vector<ExtendedValue> column;
    for (std::size_t i = 0; i < d.arity(); ++i) {
      column.clear();
      for (const auto& v : vs) column.push_back(v.as_tuple()[i]);
      out.push_back(bound(d.inner(), column, upper));
    }
    return ExtendedValue::tuple(std::move(out));
  }
  if (d.kind() == DomainKind::BBot && !upper) {
    // Any two distinct values meet at bottom.
    for (const auto& v : vs)
      if (!(v == vs.front())) return ExtendedValue::bot();
    return vs.front();
  }
  // Flat and total kinds: the bound exists in the carrier iff the set has a
  // greatest (least) element.
  const ExtendedValue* best = &vs.front();
  for (const auto& v : vs.subspan(1)) {
    Order o = compare(d, v, *best);
    if (o == Order::Incomparable) {
      // In BBot, bottom is below everything; only two distinct non-bottom
      // values fail.
      throw NoBoundError(std::string("no ") + what + " of {" + to_string(*best) + ", " + to_string(v) +
                         "} in domain " + d.name());
    }
    if ((upper && o == Order::Greater) || (!upper && o == Order::Less)) best = &v;
  }
  for (const auto& v : vs) {
    Order o = compare(d, v, *best);
    bool ok = upper ? (o == Order::Less || o == Order::Equal) : (o == Order::Greater || o == Order::Equal);
    if (!ok) throw NoBoundError(std::string("no ") + what + " in domain " + d.name());
  }
  return *best;
}

}  // namespace

ExtendedValue sup(const ValueDomain& d, std::span<const ExtendedValue> vs) { return bound(d, vs, true); }
ExtendedValue inf(const ValueDomain& d, std::span<const ExtendedValue> vs) { return bound(d, vs, false); }

ExtendedValue join(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b) {
  const ExtendedValue vs[] = {a, b};
  return sup(d, vs);
}

ExtendedValue meet(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b) {
  const ExtendedValue vs[] = {a, b};
  return inf(d, vs);
}

namespace {

ExtendedValue from_rational(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return ExtendedValue::integer(boost::multiprecision::numerator(r));
  return ExtendedValue::rational(r);
}

void require_numeric(const ExtendedValue& a, const char* op) {
  if (!a.is_numeric()) throw ArithmeticError(std::string("cannot ") + op + " non-numeric value " + to_string(a));
}

}  // namespace

ExtendedValue add(const ExtendedValue& a, const ExtendedValue& b) {
  require_numeric(a, "add");
  require_numeric(b, "add");
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
    throw ArithmeticError("inf + -inf is undefined");
  }
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtendedValue::pos_inf();
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtendedValue::neg_inf();
  if (a.is_integer() && b.is_integer()) return ExtendedValue::integer(a.as_integer() + b.as_integer());
  return from_rational(a.as_rational() + b.as_rational());
}

ExtendedValue multiply(const ExtendedValue& a, const ExtendedValue& b) {
  require_numeric(a, "multiply");
  require_numeric(b, "multiply");
  auto sign = [](const ExtendedValue& v) -> int {
    if (v.is_pos_inf()) return 1;
    if (v.is_neg_inf()) return -1;
    const Rational r = v.as_rational();
    return r > 0 ? 1 : (r < 0 ? -1 : 0);
  };
  const int sa = sign(a);
  const int sb = sign(b);
  if (sa == 0 || sb == 0) return ExtendedValue::integer(0);
  if (!a.is_finite_number() || !b.is_finite_number()) {
    return sa * sb > 0 ? ExtendedValue::pos_inf() : ExtendedValue::neg_inf();
  }
  if (a.is_integer() && b.is_integer()) return ExtendedValue::integer(a.as_integer() * b.as_integer());
  return from_rational(a.as_rational() * b.as_rational());
}

ValueDomain common_domain(const ValueDomain& preferred, const ValueDomain& other) {
  if (preferred == other) return preferred;
  auto plain_numeric = [](const ValueDomain& d) {
    return d.kind() == DomainKind::NatInf || d.kind() == DomainKind::IntInf || d.kind() == DomainKind::RatInf;
  };
  if (plain_numeric(preferred) && plain_numeric(other)) return ValueDomain::rat_inf();
  return preferred;
}

}  // namespace qmon
