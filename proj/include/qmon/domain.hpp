#pragma once

// Value domains: partially ordered sets of verdict and property values.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qmon {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value that does not belong to the carrier of the domain it is used with.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A set of values without a least upper (or greatest lower) bound.
class NoBoundError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic on infinities outside the supported conventions.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

class ExtendedValue {
 public:
  struct Bot {
    bool operator==(const Bot&) const = default;
  };
  struct Top {
    bool operator==(const Top&) const = default;
  };
  struct PosInf {
    bool operator==(const PosInf&) const = default;
  };
  struct NegInf {
    bool operator==(const NegInf&) const = default;
  };
  using Tuple = std::vector<ExtendedValue>;

  ExtendedValue() : repr_(BigInt(0)) {}

  static ExtendedValue bot() { return ExtendedValue(Bot{}); }
  static ExtendedValue top() { return ExtendedValue(Top{}); }
  static ExtendedValue pos_inf() { return ExtendedValue(PosInf{}); }
  static ExtendedValue neg_inf() { return ExtendedValue(NegInf{}); }
  static ExtendedValue integer(BigInt v) { return ExtendedValue(std::move(v)); }
  static ExtendedValue integer(long long v) { return ExtendedValue(BigInt(v)); }
  static ExtendedValue rational(Rational v) { return ExtendedValue(std::move(v)); }
  static ExtendedValue boolean(bool v) { return ExtendedValue(v); }
  static ExtendedValue tuple(Tuple v) { return ExtendedValue(std::move(v)); }

  bool is_bot() const { return std::holds_alternative<Bot>(repr_); }
  bool is_top() const { return std::holds_alternative<Top>(repr_); }
  bool is_pos_inf() const { return std::holds_alternative<PosInf>(repr_); }
  bool is_neg_inf() const { return std::holds_alternative<NegInf>(repr_); }
  bool is_integer() const { return std::holds_alternative<BigInt>(repr_); }
  bool is_rational() const { return std::holds_alternative<Rational>(repr_); }
  bool is_boolean() const { return std::holds_alternative<bool>(repr_); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(repr_); }
  /// Integer or rational (finite number).
  bool is_finite_number() const { return is_integer() || is_rational(); }
  /// Finite number or one of the two infinities.
  bool is_numeric() const { return is_finite_number() || is_pos_inf() || is_neg_inf(); }

  const BigInt& as_integer() const { return std::get<BigInt>(repr_); }
  bool as_boolean() const { return std::get<bool>(repr_); }
  const Tuple& as_tuple() const { return std::get<Tuple>(repr_); }
  /// Finite numbers as an exact rational; throws for anything else.
  Rational as_rational() const;

  /// Numbers compare by value (integer 1 equals rational 1/1); everything
  /// else compares structurally.
  friend bool operator==(const ExtendedValue& a, const ExtendedValue& b);

 private:
  using Repr = std::variant<Bot, Top, BigInt, Rational, PosInf, NegInf, bool, Tuple>;
  template <typename T>
  explicit ExtendedValue(T v) : repr_(std::move(v)) {}
  Repr repr_;
};

/// Renders `inf`, `-inf`, `bot`, `top`, `T`, `F`, integers, reduced `p/q`,
/// and tuples as `(a,b,...)`.
std::string to_string(const ExtendedValue& v);
ExtendedValue parse_value(std::string_view text);
std::ostream& operator<<(std::ostream& os, const ExtendedValue& v);

enum class DomainKind { B, BBot, Bt, Bf, NatInf, IntInf, RatInf, Product, Inverse };

enum class Order { Less, Equal, Greater, Incomparable };

/// Three-valued answer of `leq`.
enum class Tri { Yes, No, Incomparable };

class ValueDomain {
 public:
  static ValueDomain boolean() { return ValueDomain(DomainKind::B); }
  static ValueDomain boolean_bot() { return ValueDomain(DomainKind::BBot); }
  static ValueDomain boolean_true() { return ValueDomain(DomainKind::Bt); }
  static ValueDomain boolean_false() { return ValueDomain(DomainKind::Bf); }
  static ValueDomain nat_inf() { return ValueDomain(DomainKind::NatInf); }
  static ValueDomain int_inf() { return ValueDomain(DomainKind::IntInf); }
  static ValueDomain rat_inf() { return ValueDomain(DomainKind::RatInf); }
  static ValueDomain product(const ValueDomain& inner, std::size_t arity);
  /// Reversed order over the same carrier. inverse(inverse(d)) == d.
  static ValueDomain inverse(const ValueDomain& inner);

  /// Parses `B`, `Bbot`, `Bt`, `Bf`, `natinf`, `intinf`, `ratinf`,
  /// `prod:<inner>:<arity>`, `inv:<inner>`.
  static ValueDomain parse(std::string_view name);
  std::string name() const;

  DomainKind kind() const { return kind_; }
  const ValueDomain& inner() const { return *inner_; }
  std::size_t arity() const { return arity_; }

  bool contains(const ExtendedValue& v) const;
  bool is_total() const;
  bool is_lattice() const;
  /// NatInf, IntInf, RatInf, possibly under Inverse.
  bool is_numeric_order() const;
  /// Boolean kinds B, BBot, Bt, Bf.
  bool is_boolean() const;
  std::optional<ExtendedValue> bottom() const;
  std::optional<ExtendedValue> top() const;

  friend bool operator==(const ValueDomain& a, const ValueDomain& b);

 private:
  explicit ValueDomain(DomainKind k) : kind_(k) {}
  DomainKind kind_;
  std::shared_ptr<const ValueDomain> inner_;
  std::size_t arity_ = 0;
};

/// Partial-order comparison; throws DomainError for values outside the carrier.
Order compare(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b);
Tri leq(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b);
bool less_eq(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b);
bool strictly_less(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b);

/// Least upper bound of a finite set; the empty set yields the bottom element.
/// Throws NoBoundError when no bound exists in the carrier.
ExtendedValue sup(const ValueDomain& d, std::span<const ExtendedValue> vs);
ExtendedValue inf(const ValueDomain& d, std::span<const ExtendedValue> vs);
ExtendedValue join(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue meet(const ValueDomain& d, const ExtendedValue& a, const ExtendedValue& b);

// Numeric arithmetic with infinity conventions: inf absorbs addition
// (inf + -inf is an error), and 0 * inf = 0.
ExtendedValue add(const ExtendedValue& a, const ExtendedValue& b);
ExtendedValue multiply(const ExtendedValue& a, const ExtendedValue& b);

/// Domain used when a verdict and a property live in related domains: equal
/// domains are kept, two plain numeric domains widen to RatInf, and anything
/// else resolves to `preferred`.
ValueDomain common_domain(const ValueDomain& preferred, const ValueDomain& other);

}  // namespace qmon
