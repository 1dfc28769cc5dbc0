#include <doctest.h>

#include <json.hpp>

#include "qmon/builders.hpp"
#include "qmon/machine.hpp"
#include "qmon/precision.hpp"
#include "qmon/qprop.hpp"
#include "qmon/suite.hpp"

using namespace qmon;

namespace {

AlphabetPtr abcd() { return make_alphabet({"a", "b", "c", "d"}); }

/// T once one of the given letters has been seen (domain Bt).
VerdictFunction contains(const AlphabetPtr& sigma, std::vector<std::string> letters) {
  std::vector<Symbol> wanted;
  for (const auto& l : letters) wanted.push_back(sigma->symbol(l));
  return stateful_verdict(
      "contains", ValueDomain::boolean_true(), Monotonicity::Increasing, false,
      [wanted](bool& seen, Symbol s) { seen = seen || std::find(wanted.begin(), wanted.end(), s) != wanted.end(); },
      [](const bool& seen) { return ExtendedValue::boolean(seen); });
}

Relation flip(Relation r) {
  if (r == Relation::MorePrecise) return Relation::LessPrecise;
  if (r == Relation::LessPrecise) return Relation::MorePrecise;
  return r;
}

}  // namespace

TEST_CASE("eventually a-or-b-or-c example") {
  auto sigma = abcd();
  auto suite = exhaustive_lassos(sigma, 1, 2);
  auto va = contains(sigma, {"a"});
  auto vab = contains(sigma, {"a", "b"});
  auto vbc = contains(sigma, {"b", "c"});
  auto r = compare(vab, va, suite, Side::Below);
  CHECK(r.relation == Relation::MorePrecise);
  REQUIRE(r.firstBetter);
  CHECK(render_lasso(*r.firstBetter) == "; b");
  CHECK(compare(vab, vbc, suite, Side::Below).relation == Relation::Incomparable);
  CHECK(compare(vab, vab, suite, Side::Below).relation == Relation::EquallyPrecise);
  auto small = std::vector<LassoTrace>{parse_lasso("; a", sigma), parse_lasso("; c", sigma)};
  CHECK(compare(vab, vbc, small, Side::Below).relation == Relation::Incomparable);
}

TEST_CASE("comparison is antisymmetric and stable under restriction") {
  auto sigma = server_alphabet();
  auto suite = exhaustive_lassos(sigma, 2, 3);
  std::vector<VerdictFunction> vs{generated_verdict(build_Mmax()), generated_verdict(build_finite_state_mrt(4)),
                                  generated_verdict(build_finite_state_mrt(8)),
                                  constant_verdict(ValueDomain::nat_inf(), ExtendedValue::integer(1))};
  for (const auto& a : vs) {
    for (const auto& b : vs) {
      auto ab = compare(a, b, suite, Side::Below);
      auto ba = compare(b, a, suite, Side::Below);
      REQUIRE(ab.unresolved.empty());
      CHECK(ba.relation == flip(ab.relation));
      // Every other suite element: a MorePrecise claim may weaken but never flip.
      std::vector<LassoTrace> half;
      for (std::size_t i = 0; i < suite.size(); i += 2) half.push_back(suite[i]);
      auto sub = compare(a, b, half, Side::Below);
      if (ab.relation == Relation::MorePrecise) CHECK(sub.relation != Relation::LessPrecise);
      if (ab.relation == Relation::LessPrecise) CHECK(sub.relation != Relation::MorePrecise);
    }
  }
}

TEST_CASE("universal monitors of one property are equally precise") {
  auto sigma = server_alphabet();
  auto suite = exhaustive_lassos(sigma, 2, 3);
  CHECK(compare(generated_verdict(build_Mmax()), mrt_verdict(), suite, Side::Below).relation ==
        Relation::EquallyPrecise);
  CHECK(compare(generated_verdict(build_Mavg()), art_verdict(), suite, Side::Above).relation ==
        Relation::EquallyPrecise);
}

TEST_CASE("precision from above reverses the order") {
  auto sigma = server_alphabet();
  auto suite = exhaustive_lassos(sigma, 1, 2);
  auto low = constant_verdict(ValueDomain::nat_inf(), ExtendedValue::integer(1));
  auto high = constant_verdict(ValueDomain::nat_inf(), ExtendedValue::integer(5));
  CHECK(compare(high, low, suite, Side::Below).relation == Relation::MorePrecise);
  CHECK(compare(high, low, suite, Side::Above).relation == Relation::LessPrecise);
  CHECK_THROWS_AS(compare(mrt_verdict(), art_verdict(), suite, Side::Below), DomainError);
}

TEST_CASE("finite-state mrt family") {
  auto sigma = server_alphabet();
  auto suite = exhaustive_lassos(sigma, 2, 3);
  // One more cap level separates the monitors on a trace whose maximum exceeds cap.
  for (std::size_t cap = 1; cap <= 3; ++cap) {
    auto lo = generated_verdict(build_saturating_mrt(cap));
    auto hi = generated_verdict(build_saturating_mrt(cap + 1));
    auto r = compare(hi, lo, suite, Side::Below);
    CHECK(r.relation == Relation::MorePrecise);
    REQUIRE(r.firstBetter);
    CHECK(less_eq(ValueDomain::nat_inf(), ExtendedValue::integer(static_cast<long long>(cap + 1)),
                  eval_mrt(*r.firstBetter)));
  }
}

TEST_CASE("hierarchy experiment") {
  auto sigma = pk_alphabet(4);
  auto suite = exhaustive_lassos(sigma, 2, 3);
  std::vector<VerdictFunction> family{generated_verdict(build_pk_approx(4, 2)),
                                      generated_verdict(build_pk_approx(4, 3)),
                                      generated_verdict(build_pk_monitor(4))};
  auto steps = hierarchy_experiment(family, suite, Side::Below);
  REQUIRE(steps.size() == 2);
  for (const auto& s : steps) CHECK(s.report.relation == Relation::MorePrecise);
}

TEST_CASE("json lines") {
  auto sigma = abcd();
  auto suite = std::vector<LassoTrace>{parse_lasso("; a", sigma), parse_lasso("; b", sigma)};
  auto r = compare(contains(sigma, {"a", "b"}), contains(sigma, {"a"}), suite, Side::Below, {}, "two");
  std::istringstream in(to_json_lines(r));
  std::string line;
  std::vector<nlohmann::json> rows;
  while (std::getline(in, line)) rows.push_back(nlohmann::json::parse(line));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["trace"] == "; a");
  CHECK(rows[0]["limit_v1"] == "T");
  CHECK(rows[0]["relation"] == "equal");
  CHECK(rows[1]["relation"] == "v1");
  CHECK(rows[1]["limit_v2"] == "F");
  CHECK(rows[2]["summary"] == true);
  CHECK(rows[2]["relation"] == "more-precise");
  CHECK(rows[2]["suite"] == "two");
  CHECK(rows[2]["traces"] == 2);
  CHECK(rows[2]["witness_v1_better"] == "; b");
  CHECK(rows[2]["witness_v2_better"].is_null());
}
