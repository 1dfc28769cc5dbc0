#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qmon/builders.hpp"
#include "qmon/machine.hpp"
#include "qmon/qprop.hpp"
#include "qmon/suite.hpp"

using namespace qmon;

namespace {

ExtendedValue I(long long v) { return ExtendedValue::integer(v); }
ExtendedValue Q(long long n, long long d) { return ExtendedValue::rational(Rational(n, d)); }

const char* kFig = "req ack req other ack req ack other";

std::vector<ExtendedValue> ints(std::initializer_list<long long> xs) {
  std::vector<ExtendedValue> out;
  for (auto x : xs) out.push_back(I(x));
  return out;
}

const char* kCounter = R"(alphabet: a b
registers: x y
instruction-set: counter
states: q0
initial: q0
edge: q0 a [true] / x:=x+1 -> q0
edge: q0 b [true] / y:=y+1 -> q0
output: q0 = x
)";

std::vector<RegisterMachine> all_builtins() {
  return {build_Mmax(),           build_Mavg(),          build_finite_state_mrt(5), build_saturating_mrt(3),
          build_kpair_monitor(2), build_kpair_approx(3, KPairScheme::Priority),
          build_kpair_approx(3, KPairScheme::PairedMax), build_kpair_approx(3, KPairScheme::SharedWitness),
          build_pk_monitor(3),    build_pk_approx(4, 2), build_binary_pk(3),        build_doubling_adder(),
          build_doubling_counter()};
}

}  // namespace

TEST_CASE("response-time machines on the example trace") {
  auto sigma = server_alphabet();
  auto fig = parse_finite(kFig, sigma);
  CHECK(generated_verdict(build_Mmax()).sequence(fig) == ints({0, 0, 1, 1, 1, 2, 2, 2, 2}));
  const std::vector<ExtendedValue> avg{I(0), I(0), I(1), Q(1, 2), I(1), Q(3, 2), I(1), Q(4, 3), Q(4, 3)};
  CHECK(generated_verdict(build_Mavg()).sequence(fig) == avg);
  CHECK(build_Mmax().run(parse_finite("req ack req other ack", sigma)).second == I(2));
  CHECK(build_Mavg().run(fig).second == Q(4, 3));
  CHECK(build_Mmax().run(parse_finite("req req", sigma)).second.is_pos_inf());
  CHECK(build_Mmax().run(parse_finite("", sigma)).second == I(0));
  CHECK(build_Mavg().run(parse_finite("", sigma)).second == I(0));
  CHECK(build_Mmax().registers().size() == 2);
  CHECK(build_Mmax().instruction_set() == InstructionSet::CounterInc);
  CHECK(build_Mavg().instruction_set() == InstructionSet::Extended);
}

TEST_CASE("M_max equals the response-time oracle") {
  auto sigma = server_alphabet();
  auto v = generated_verdict(build_Mmax());
  for (const auto& w : words_up_to(3, 7)) {
    FiniteTrace s{sigma, w};
    REQUIRE(v.evaluate(s) == oracle::mrt(oracle::tokens(s)));
  }
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    auto s = random_finite(sigma, 1 + i % 120, rng);
    auto seq = v.sequence(s);
    CHECK(seq.back() == oracle::mrt(oracle::tokens(s)));
  }
}

TEST_CASE("M_avg equals the average oracle") {
  auto sigma = server_alphabet();
  auto v = generated_verdict(build_Mavg());
  for (const auto& w : words_up_to(3, 6)) {
    FiniteTrace s{sigma, w};
    REQUIRE(v.evaluate(s) == oracle::art(oracle::tokens(s)));
  }
}

TEST_CASE("machine text round trip") {
  for (const auto& m : all_builtins()) {
    CAPTURE(m.name());
    auto again = load_machine(render_machine(m));
    CHECK(render_machine(again) == render_machine(m));
    CHECK(again.instruction_set() == m.instruction_set());
    auto sigma = m.alphabet();
    std::mt19937_64 rng(m.states().size());
    for (int i = 0; i < 20; ++i) {
      auto s = random_finite(sigma, 30, rng);
      CHECK(generated_verdict(again).sequence(s) == generated_verdict(m).sequence(s));
    }
  }
}

TEST_CASE("machine validation") {
  CHECK_NOTHROW(load_machine(kCounter));
  SUBCASE("two unguarded edges") {
    std::string t = kCounter;
    t += "edge: q0 a [true] -> q0\n";
    CHECK_THROWS_AS(load_machine(t), MachineError);
  }
  SUBCASE("overlapping guards") {
    std::string t = kCounter;
    t.replace(t.find("edge: q0 a [true]"), 17, "edge: q0 a [x>=y]");
    t += "edge: q0 a [y>=x] -> q0\n";
    CHECK_THROWS_AS(load_machine(t), MachineError);
  }
  SUBCASE("missing case") {
    std::string t = kCounter;
    t.replace(t.find("edge: q0 a [true]"), 17, "edge: q0 a [x>=y]");
    CHECK_THROWS_AS(load_machine(t), MachineError);
  }
  SUBCASE("counter machine may not output a sum") {
    std::string t = kCounter;
    t.replace(t.find("q0 = x"), 6, "q0 = x+y");
    CHECK_THROWS_AS(load_machine(t), MachineError);
  }
  SUBCASE("counter machine may not decrement") {
    std::string t = kCounter;
    t.replace(t.find("x:=x+1"), 6, "x:=x-1");
    CHECK_THROWS_AS(load_machine(t), MachineError);
  }
  SUBCASE("unknown register") {
    std::string t = kCounter;
    t.replace(t.find("q0 = x"), 6, "q0 = z");
    CHECK_THROWS_AS(load_machine(t), MachineError);
  }
  SUBCASE("adder outputs a sum") {
    std::string t = kCounter;
    t.replace(t.find("counter"), 7, "adder");
    t.replace(t.find("x:=x+1"), 6, "x:=x+y");
    t.replace(t.find("y:=y+1"), 6, "y:=1");
    t.replace(t.find("q0 = x"), 6, "q0 = x+y");
    CHECK_NOTHROW(load_machine(t));
  }
  SUBCASE("errors name the line") {
    std::string t = kCounter;
    t += "edge: q0 c [true] -> q0\n";
    try {
      load_machine(t);
      FAIL("expected an error");
    } catch (const MachineError& e) {
      CHECK(std::string(e.what()).find("line 9") != std::string::npos);
    }
  }
}

TEST_CASE("exactly one edge is enabled in random configurations") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> val(0, 6);
  for (const auto& m : all_builtins()) {
    CAPTURE(m.name());
    for (int probe = 0; probe < 200; ++probe) {
      Configuration c{rng() % m.states().size(), {}};
      for (std::size_t r = 0; r < m.registers().size(); ++r) c.registers.push_back(val(rng));
      const Symbol s = rng() % m.alphabet()->size();
      std::size_t enabled = 0;
      for (const auto& e : m.edges()) {
        if (e.from != c.state || e.symbol != s) continue;
        bool all = true;
        for (const auto& l : e.guard) {
          bool holds = true;
          switch (l.atom.kind) {
            case Atom::Kind::True:
              break;
            case Atom::Kind::GeReg:
              holds = c.registers[l.atom.x] >= c.registers[l.atom.y];
              break;
            case Atom::Kind::GeConst:
              holds = c.registers[l.atom.x] >= l.atom.c;
              break;
          }
          all = all && (holds != l.negated);
        }
        if (all) ++enabled;
      }
      CHECK(enabled == 1);
      CHECK_NOTHROW(m.enabled_edge(c, s));
    }
  }
}

TEST_CASE("counter registers grow at most linearly") {
  std::mt19937_64 rng(12);
  for (const auto& m : {build_Mmax(), build_pk_monitor(3), build_binary_pk(2), build_kpair_monitor(2),
                        build_kpair_approx(4, KPairScheme::SharedWitness)}) {
    if (m.instruction_set() != InstructionSet::CounterInc && m.instruction_set() != InstructionSet::CounterIncDec)
      continue;
    for (int i = 0; i < 50; ++i) {
      auto s = random_finite(m.alphabet(), 60, rng);
      Configuration c = m.initial_configuration();
      for (std::size_t j = 0; j < s.size(); ++j) {
        m.step(c, s[j]);
        for (const auto& r : c.registers) CHECK(r <= BigInt(j + 1));
      }
    }
  }
}

TEST_CASE("finite-state response-time monitors") {
  auto sigma = server_alphabet();
  auto fig = parse_finite(kFig, sigma);
  CHECK(generated_verdict(build_finite_state_mrt(40)).sequence(fig) == ints({0, 0, 1, 1, 1, 2, 2, 2, 2}));
  CHECK(build_saturating_mrt(3).registers().empty());
  CHECK(build_saturating_mrt(3).states().size() == saturating_mrt_states(3));
  auto ten = parse_finite("req other other other other other other other other other ack", sigma);
  CHECK(oracle::mrt(oracle::tokens(ten)) == I(10));
  CHECK(build_saturating_mrt(3).run(ten).second == I(3));
  CHECK(build_finite_state_mrt(2).run(ten).second == I(0));
  CHECK_THROWS_AS(build_finite_state_mrt(0), Error);
  // Saturation oracle: min(mrt, cap) on every short word.
  for (std::size_t cap = 1; cap <= 4; ++cap) {
    auto v = generated_verdict(build_saturating_mrt(cap));
    for (const auto& w : words_up_to(3, 6)) {
      FiniteTrace s{sigma, w};
      auto exact = oracle::mrt(oracle::tokens(s));
      auto want = exact.is_pos_inf() ? exact : meet(ValueDomain::nat_inf(), exact, I(cap));
      REQUIRE(v.evaluate(s) == want);
    }
  }
}

TEST_CASE("k-pair monitors") {
  auto k2 = kpair_alphabet(2);
  auto t = parse_lasso("req1 ack1 req2 other ack2 ; other", k2);
  const auto want = ExtendedValue::tuple({I(1), I(2)});
  CHECK(eval_kpair_mrt(t, 2) == want);
  CHECK(*eval_limsup(generated_verdict(build_kpair_monitor(2)), t).value == want);
  CHECK(build_kpair_monitor(3).registers().size() == 6);
  CHECK(build_kpair_approx(3, KPairScheme::Priority).registers().size() == 4);
  CHECK(build_kpair_approx(4, KPairScheme::PairedMax).registers().size() == 3);
  CHECK(build_kpair_approx(5, KPairScheme::SharedWitness).registers().size() == 2);
  CHECK(kpair_scheme_for(3, 6) == KPairScheme::Exact);
  CHECK(kpair_scheme_for(3, 4) == KPairScheme::Priority);
  CHECK(kpair_scheme_for(4, 3) == KPairScheme::PairedMax);
  CHECK(kpair_scheme_for(4, 2) == KPairScheme::SharedWitness);
  CHECK_THROWS_AS(kpair_scheme_for(4, 1), Error);

  SUBCASE("exact scheme agrees with the componentwise evaluator") {
    for (std::size_t k = 1; k <= 3; ++k) {
      auto v = generated_verdict(build_kpair_monitor(k));
      for (const auto& l : sampled_lassos(kpair_alphabet(k), 150, 4, 4, 17 + k)) {
        auto r = eval_limsup(v, l);
        REQUIRE(r.resolved());
        CHECK(*r.value == eval_kpair_mrt(l, k));
      }
    }
  }
  SUBCASE("without overlapping requests the priority scheme is exact") {
    auto k3 = kpair_alphabet(3);
    auto v = generated_verdict(build_kpair_approx(3, KPairScheme::Priority));
    auto l = parse_lasso("req1 other ack1 req2 ack2 other req3 other other ack3 ; other", k3);
    CHECK(*eval_limsup(v, l).value == eval_kpair_mrt(l, 3));
  }
  SUBCASE("approximations stay below the property") {
    for (std::size_t k = 2; k <= 4; ++k) {
      const auto d = ValueDomain::product(ValueDomain::nat_inf(), k);
      for (auto scheme : {KPairScheme::Priority, KPairScheme::PairedMax, KPairScheme::SharedWitness}) {
        auto v = generated_verdict(build_kpair_approx(k, scheme));
        for (const auto& l : sampled_lassos(kpair_alphabet(k), 150, 4, 4, k * 10)) {
          auto r = eval_limsup(v, l);
          REQUIRE(r.resolved());
          CAPTURE(render_lasso(l));
          CAPTURE(to_string(scheme));
          CHECK(less_eq(d, *r.value, eval_kpair_mrt(l, k)));
        }
      }
    }
  }
}

TEST_CASE("counting-hierarchy monitors") {
  SUBCASE("examples") {
    auto p2 = pk_alphabet(2);
    auto v = generated_verdict(build_pk_monitor(2));
    auto t = parse_lasso("2 ; 1", p2);
    CHECK(eval_pk(t, 2) == I(1));
    auto seq = v.sequence(t.prefix(4));
    CHECK(seq[0].is_pos_inf());
    CHECK(seq[1] == I(1));
    CHECK(seq[3] == I(1));
    CHECK(eval_pk(parse_lasso("1 2 3 ; 1", pk_alphabet(3)), 3).is_pos_inf());
    CHECK(*eval_limsup(generated_verdict(build_pk_monitor(3)), parse_lasso("1 2 3 ; 1", pk_alphabet(3))).value ==
          ExtendedValue::pos_inf());
  }
  SUBCASE("exact monitor agrees with prefix counting") {
    for (std::size_t k = 2; k <= 4; ++k) {
      auto v = generated_verdict(build_pk_monitor(k));
      for (const auto& w : words_up_to(k, 5)) {
        FiniteTrace s{pk_alphabet(k), w};
        // Oracle: first prefix where some count |s|_i falls below |s|_{i+1}.
        std::vector<long long> count(k + 1, 0);
        ExtendedValue want = ExtendedValue::pos_inf();
        for (std::size_t j = 0; j < w.size() && want.is_pos_inf(); ++j) {
          ++count[w[j] + 1];
          for (std::size_t i = 1; i < k; ++i)
            if (count[i] < count[i + 1]) want = I(static_cast<long long>(j + 1));
        }
        REQUIRE(v.evaluate(s) == want);
        REQUIRE(pk_value(s, k) == want);
      }
    }
  }
  SUBCASE("approximations stay below and monitors decrease") {
    for (std::size_t l = 1; l < 4; ++l) {
      auto v = generated_verdict(build_pk_approx(4, l));
      for (const auto& t : exhaustive_lassos(pk_alphabet(4), 2, 2)) {
        auto r = eval_limsup(v, t);
        REQUIRE(r.resolved());
        CHECK(less_eq(ValueDomain::nat_inf(), *r.value, eval_pk(t, 4)));
      }
    }
  }
  SUBCASE("binary blocks") {
    auto bin = binary_alphabet();
    CHECK(binary_p_value(parse_finite("1 sep 1 0 sep", bin)).is_pos_inf());
    CHECK(binary_p_value(parse_finite("1 0 sep", bin)) == I(1));
    CHECK(eval_binary_p(parse_lasso("1 sep ; 1 0 sep 1 0 sep", bin)) == I(3));
    for (std::size_t k = 2; k <= 4; ++k) {
      auto v = generated_verdict(build_binary_pk(k));
      for (const auto& t : sampled_lassos(bin, 200, 6, 4, 3 * k)) {
        auto r = eval_limsup(v, t);
        REQUIRE(r.resolved());
        CHECK(less_eq(ValueDomain::nat_inf(), *r.value, eval_binary_p(t)));
      }
    }
  }
}

TEST_CASE("adders and counters") {
  auto ab = ab_alphabet();
  auto add = generated_verdict(build_doubling_adder());
  auto cnt = generated_verdict(build_doubling_counter());
  CHECK(add.evaluate(parse_finite("a a a b", ab)) == I(8));
  CHECK(cnt.evaluate(parse_finite("a a a b", ab)) == I(6));
  CHECK(add.evaluate(parse_finite("b b", ab)) == I(1));
  CHECK(cnt.evaluate(parse_finite("b b", ab)) == I(0));
  CHECK(build_doubling_adder().instruction_set() == InstructionSet::Adder);
  for (int n = 0; n <= 20; ++n) {
    std::string word;
    for (int i = 0; i < n; ++i) word += "a ";
    auto s = parse_finite(word, ab);
    CHECK(add.evaluate(s) == ExtendedValue::integer(BigInt(1) << n));
    CHECK(longest_a_block(s) == static_cast<std::size_t>(n));
  }
}
