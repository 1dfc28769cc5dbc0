#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qmon/qprop.hpp"
#include "qmon/suite.hpp"

using namespace qmon;

namespace {

ExtendedValue I(long long v) { return ExtendedValue::integer(v); }
ExtendedValue Q(long long n, long long d) { return ExtendedValue::rational(Rational(n, d)); }

const char* kNeverB =
    "alphabet: a b\nstates: ok bad\ninitial: ok\naccept-kind: safety\naccept: ok\n"
    "ok a -> ok\nok b -> bad\nbad a -> bad\nbad b -> bad\n";
const char* kEventuallyA =
    "alphabet: a b\nstates: wait done\ninitial: wait\naccept-kind: cosafety\naccept: done\n"
    "wait a -> done\nwait b -> wait\ndone a -> done\ndone b -> done\n";

WeightedAutomaton one_state(int wa, int wb) {
  return WeightedAutomaton::parse("alphabet: a b\nstates: s\ninitial: s\ns a -> s : " + std::to_string(wa) +
                                  "\ns b -> s : " + std::to_string(wb) + "\n");
}

}  // namespace

TEST_CASE("response times on lassos") {
  auto sigma = server_alphabet();
  CHECK(eval_mrt(parse_lasso("req ack ; other", sigma)) == I(1));
  CHECK(eval_mrt(parse_lasso("req req ; other", sigma)).is_pos_inf());
  CHECK(eval_mrt(parse_lasso("req ; other", sigma)).is_pos_inf());
  CHECK(eval_art(parse_lasso("; req ack", sigma)) == I(1));
  CHECK(eval_art(parse_lasso("req ack ; other", sigma)) == I(1));
  CHECK(eval_art(parse_lasso("req ack req other ack req ack other ; other", sigma)) == Q(4, 3));
  const std::vector<ExtendedValue> fig2{I(0), I(0), I(1), Q(1, 2), I(1), Q(3, 2), I(1), Q(4, 3), Q(4, 3)};
  CHECK(art_verdict().sequence(parse_finite("req ack req other ack req ack other", sigma)) == fig2);
}

TEST_CASE("finite response-time functions equal the oracle") {
  auto sigma = server_alphabet();
  for (const auto& w : words_up_to(3, 7)) {
    FiniteTrace s{sigma, w};
    const auto toks = oracle::tokens(s);
    REQUIRE(mrt_value(s) == oracle::mrt(toks));
    REQUIRE(art_value(s) == oracle::art(toks));
  }
}

TEST_CASE("response-time properties agree with their verdicts") {
  auto sigma = server_alphabet();
  const auto rat = ValueDomain::rat_inf();
  for (const auto& t : exhaustive_lassos(sigma, 2, 3)) {
    CAPTURE(render_lasso(t));
    const auto m = eval_mrt(t);
    CHECK(m == oracle::mrt_lasso(t));
    auto hi = eval_limsup(mrt_verdict(), t);
    REQUIRE(hi.resolved());
    CHECK(*hi.value == m);
    const auto a = eval_art(t);
    auto lo = eval_liminf(art_verdict(), t);
    REQUIRE(lo.resolved());
    CHECK(*lo.value == a);
    CHECK(less_eq(rat, a, m));
  }
}

TEST_CASE("mrt verdict chains never decrease") {
  auto sigma = server_alphabet();
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    auto seq = mrt_verdict().sequence(random_finite(sigma, 40, rng));
    for (std::size_t j = 1; j < seq.size(); ++j) CHECK(less_eq(ValueDomain::nat_inf(), seq[j - 1], seq[j]));
  }
}

TEST_CASE("k-pair response times") {
  CHECK(eval_kpair_mrt(parse_lasso("req1 ack1 req2 other ack2 ; other", kpair_alphabet(2)), 2) ==
        ExtendedValue::tuple({I(1), I(2)}));
  CHECK(eval_kpair_mrt(parse_lasso("; other", kpair_alphabet(2)), 2) == ExtendedValue::tuple({I(0), I(0)}));
  CHECK(eval_kpair_mrt(parse_lasso("req2 req2 ; other", kpair_alphabet(3)), 3) ==
        ExtendedValue::tuple({I(0), ExtendedValue::pos_inf(), I(0)}));
}

TEST_CASE("discounted safety and co-safety") {
  auto ab = ab_alphabet();
  auto neverB = Automaton::parse(kNeverB);
  auto evA = Automaton::parse(kEventuallyA);
  CHECK(eval_discounted_safety(neverB, parse_lasso("a a ; a", ab)) == I(1));
  CHECK(eval_discounted_safety(neverB, parse_lasso("a b ; a", ab)) == Q(3, 4));
  CHECK(eval_discounted_safety(neverB, parse_lasso("; b", ab)) == Q(1, 2));
  CHECK(eval_discounted_cosafety(evA, parse_lasso("; b", ab)) == I(0));
  CHECK(eval_discounted_cosafety(evA, parse_lasso("a ; b", ab)) == Q(1, 2));
  CHECK(eval_discounted_cosafety(evA, parse_lasso("b b a ; b", ab)) == Q(1, 8));
  CHECK_THROWS_AS(discounted_safety_property(evA), Error);

  SUBCASE("values follow the first violation") {
    const auto rat = ValueDomain::rat_inf();
    for (const auto& t : exhaustive_lassos(ab, 3, 3)) {
      const auto v = eval_discounted_safety(neverB, t);
      CHECK(less_eq(rat, I(0), v));
      CHECK(less_eq(rat, v, I(1)));
      // First b position, found by scanning.
      std::optional<std::size_t> first;
      for (std::size_t i = 0; i < t.stem().size() + t.loop().size() && !first; ++i)
        if (t.at(i) == 1) first = i + 1;
      if (!first) {
        CHECK(v == I(1));
      } else {
        CHECK(v == ExtendedValue::rational(Rational(1) - Rational(1, BigInt(1) << *first)));
      }
    }
    // Strictly increasing in the violation length.
    ExtendedValue prev = I(0);
    for (int n = 1; n <= 10; ++n) {
      std::string w(static_cast<std::size_t>(2 * (n - 1)), ' ');
      for (int i = 0; i < n - 1; ++i) w[2 * i] = 'a';
      auto v = eval_discounted_safety(neverB, parse_lasso(w + "b ; a", ab));
      CHECK(strictly_less(rat, prev, v));
      prev = v;
    }
  }
}

TEST_CASE("energy") {
  auto ab = ab_alphabet();
  CHECK(eval_energy(one_state(0, 0), parse_lasso("; a b", ab)) == I(0));
  CHECK(eval_energy(one_state(-1, 0), parse_lasso("; a", ab)).is_pos_inf());
  CHECK(eval_energy(one_state(-3, 1), parse_lasso("a ; b", ab)) == I(3));
  SUBCASE("brute force over prefixes") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 150; ++i) {
      auto a = oracle::random_weighted(ab, 1 + i % 4, -3, 3, rng);
      for (const auto& t : sampled_lassos(ab, 10, 4, 4, rng())) {
        const auto v = eval_energy(a, t);
        const long long k100 = oracle::energy_credit(a, t, 100);
        const long long k200 = oracle::energy_credit(a, t, 200);
        if (v.is_pos_inf()) {
          CHECK(k200 > k100);
        } else {
          CHECK(v == I(k200));
        }
      }
    }
  }
}

TEST_CASE("sup and inf over continuations") {
  auto sigma = server_alphabet();
  auto mrt = mrt_property();
  auto art = art_property();
  auto fin = [&](const char* w) { return parse_finite(w, sigma); };
  CHECK(nu(mrt, fin("req ack")).value.is_pos_inf());
  CHECK(mu(mrt, fin("req ack")).value == I(1));
  CHECK(mu(mrt, fin("req other")).value == I(2));
  CHECK(mu(mrt, fin("req req")).value.is_pos_inf());
  CHECK(nu(art, fin("req ack")).value.is_pos_inf());
  SUBCASE("analytic bounds agree with a lasso search") {
    // Every lasso continuation is bounded by ν and μ, and the bounds are
    // approached within the small search space.
    const auto rat = ValueDomain::rat_inf();
    auto conts = exhaustive_lassos(sigma, 3, 3);
    for (const auto& w : words_up_to(3, 3)) {
      FiniteTrace s{sigma, w};
      const auto up = nu(mrt, s).value;
      const auto down = mu(mrt, s).value;
      ExtendedValue lowest = ExtendedValue::pos_inf();
      for (const auto& c : conts) {
        const auto v = eval_mrt(c.prepend(s));
        CHECK(less_eq(rat, v, up));
        CHECK(less_eq(rat, down, v));
        lowest = meet(rat, lowest, v);
      }
      CHECK(lowest == down);
    }
  }
  SUBCASE("safety bounds") {
    auto ab = ab_alphabet();
    auto p = discounted_safety_property(Automaton::parse(kNeverB));
    CHECK(nu(p, parse_finite("a", ab)).value == I(1));
    CHECK(mu(p, parse_finite("a", ab)).value == Q(3, 4));
    CHECK(nu(p, parse_finite("a b", ab)).value == Q(3, 4));
  }
  SUBCASE("energy bounds") {
    auto ab = ab_alphabet();
    auto p = energy_property(one_state(-1, 1));
    CHECK(nu(p, parse_finite("a a", ab)).value.is_pos_inf());
    CHECK(mu(p, parse_finite("a a", ab)).value == I(2));
  }
}

TEST_CASE("continuity") {
  auto sigma = server_alphabet();
  auto suite = exhaustive_lassos(sigma, 2, 3);
  SUBCASE("maximal response time is co-continuous only") {
    auto r = check_continuity(mrt_property(), suite);
    CHECK(r.cocontinuity.verdict == ContinuityVerdict::Consistent);
    CHECK(r.continuity.verdict == ContinuityVerdict::Refuted);
    REQUIRE(r.continuity.witness);
    CHECK(r.continuity.limit->is_pos_inf());
    CHECK(r.continuity.value->is_finite_number());
  }
  SUBCASE("average response time is neither") {
    auto r = check_continuity(art_property(), suite);
    CHECK(r.continuity.verdict == ContinuityVerdict::Refuted);
    CHECK(r.cocontinuity.verdict == ContinuityVerdict::Refuted);
    CHECK(r.continuity.witness);
    CHECK(r.cocontinuity.witness);
  }
  SUBCASE("discounted properties") {
    auto ab = ab_alphabet();
    auto absuite = exhaustive_lassos(ab, 2, 3);
    auto safe = check_continuity(discounted_safety_property(Automaton::parse(kNeverB)), absuite);
    CHECK(safe.continuity.verdict == ContinuityVerdict::Consistent);
    auto cosafe = check_continuity(discounted_cosafety_property(Automaton::parse(kEventuallyA)), absuite);
    CHECK(cosafe.cocontinuity.verdict == ContinuityVerdict::Consistent);
  }
  CHECK(to_string(ContinuityVerdict::Refuted) == "refuted");
}

TEST_CASE("hierarchy properties") {
  CHECK(eval_pk(parse_lasso("2 ; 1", pk_alphabet(2)), 2) == I(1));
  CHECK(eval_pk(parse_lasso("1 2 3 ; 1", pk_alphabet(3)), 3).is_pos_inf());
  CHECK(eval_pk(parse_lasso("1 ; 2", pk_alphabet(2)), 2) == I(3));
  CHECK(eval_doubling(parse_lasso("a a a b ; b", ab_alphabet())) == I(8));
  CHECK(eval_doubling(parse_lasso("; a", ab_alphabet())).is_pos_inf());
  CHECK(eval_doubling(parse_lasso("; b", ab_alphabet())) == I(1));
  // p_k on lassos equals the limit of its prefix values.
  for (std::size_t k = 2; k <= 3; ++k) {
    for (const auto& t : exhaustive_lassos(pk_alphabet(k), 2, 3)) {
      auto v = pk_value(t.prefix(t.stem().size() + 40 * t.loop().size()), k);
      CHECK(eval_pk(t, k) == v);
    }
  }
  for (const auto& t : sampled_lassos(binary_alphabet(), 300, 6, 4, 8)) {
    auto v = binary_p_value(t.prefix(t.stem().size() + 60 * t.loop().size()));
    CHECK(eval_binary_p(t) == v);
  }
}
