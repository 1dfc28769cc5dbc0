#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qmon/automaton.hpp"
#include "qmon/qprop.hpp"
#include "qmon/suite.hpp"

using namespace qmon;

namespace {

const char* kNeverB = R"(alphabet: a b
states: ok bad
initial: ok
accept-kind: safety
accept: ok
ok a -> ok
ok b -> bad
bad a -> bad
bad b -> bad
)";

const char* kEventuallyA = R"(alphabet: a b
states: wait done
initial: wait
accept-kind: cosafety
accept: done
wait a -> done
wait b -> wait
done a -> done
done b -> done
)";

std::string two_state(const char* kind) {
  return std::string("alphabet: a b\nstates: sawA sawB\ninitial: sawB\naccept-kind: ") + kind +
         "\naccept: sawA\nsawA a -> sawA\nsawA b -> sawB\nsawB a -> sawA\nsawB b -> sawB\n";
}

// "The first symbol is a": decided by the first letter either way.
const char* kFirstA = R"(alphabet: a b
states: start yes no
initial: start
accept-kind: cosafety
accept: yes
start a -> yes
start b -> no
yes a -> yes
yes b -> yes
no a -> no
no b -> no
)";

}  // namespace

TEST_CASE("membership") {
  auto ab = ab_alphabet();
  auto neverB = Automaton::parse(kNeverB);
  auto infA = Automaton::parse(two_state("buchi"));
  auto evAlwaysA = Automaton::parse(two_state("cobuchi"));
  CHECK(neverB.member(parse_lasso("; a", ab)));
  CHECK_FALSE(neverB.member(parse_lasso("a ; a b", ab)));
  CHECK(infA.member(parse_lasso("b ; a b", ab)));
  CHECK_FALSE(infA.member(parse_lasso("a a ; b", ab)));
  CHECK_FALSE(evAlwaysA.member(parse_lasso("; a b", ab)));
  CHECK(evAlwaysA.member(parse_lasso("b b ; a", ab)));
}

TEST_CASE("membership agrees with simulation") {
  std::mt19937_64 rng(77);
  auto ab = ab_alphabet();
  auto suite = exhaustive_lassos(ab, 3, 3);
  for (auto kind : {AcceptKind::Safety, AcceptKind::CoSafety, AcceptKind::Buchi, AcceptKind::CoBuchi}) {
    for (int i = 0; i < 15; ++i) {
      auto a = oracle::random_automaton(ab, 1 + i % 4, kind, rng);
      for (const auto& t : suite) CHECK(a.member(t) == oracle::accepts_from(a, a.initial(), t.stem(), t.loop()));
    }
  }
}

TEST_CASE("determination") {
  auto ab = ab_alphabet();
  auto neverB = Automaton::parse(kNeverB);
  auto evA = Automaton::parse(kEventuallyA);
  auto infA = Automaton::parse(two_state("buchi"));
  CHECK(neverB.determines(parse_finite("a b", ab), Polarity::Negative));
  CHECK_FALSE(neverB.determines(parse_finite("a a", ab), Polarity::Negative));
  CHECK(evA.determines(parse_finite("a", ab), Polarity::Positive));
  for (const auto& w : words_up_to(2, 4)) {
    FiniteTrace s{ab, w};
    CHECK_FALSE(infA.determines(s, Polarity::Positive));
    CHECK_FALSE(infA.determines(s, Polarity::Negative));
  }
}

TEST_CASE("determination matches a brute-force lasso sweep") {
  std::mt19937_64 rng(4242);
  auto ab = ab_alphabet();
  for (auto kind : {AcceptKind::Safety, AcceptKind::CoSafety, AcceptKind::Buchi, AcceptKind::CoBuchi}) {
    for (int i = 0; i < 25; ++i) {
      auto a = oracle::random_automaton(ab, 1 + i % 4, kind, rng);
      CAPTURE(render_automaton(a));
      for (std::size_t q = 0; q < a.state_count(); ++q) {
        CHECK(a.determines_state(q, Polarity::Positive) == oracle::determines(a, q, true));
        CHECK(a.determines_state(q, Polarity::Negative) == oracle::determines(a, q, false));
      }
      CHECK(a.classically_monitorable() == oracle::classically_monitorable(a));
    }
  }
}

TEST_CASE("classical monitorability") {
  CHECK(Automaton::parse(kNeverB).classically_monitorable());
  CHECK(Automaton::parse(kEventuallyA).classically_monitorable());
  CHECK(Automaton::parse(kFirstA).classically_monitorable());
  CHECK_FALSE(Automaton::parse(two_state("buchi")).classically_monitorable());
  CHECK_FALSE(Automaton::parse(two_state("cobuchi")).classically_monitorable());
}

TEST_CASE("automaton files") {
  auto a = Automaton::parse(kNeverB);
  CHECK(a.kind() == AcceptKind::Safety);
  CHECK(a.state_count() == 2);
  auto again = Automaton::parse(render_automaton(a));
  CHECK(render_automaton(again) == render_automaton(a));
  SUBCASE("errors") {
    std::string missing = kNeverB;
    missing.erase(missing.find("bad b -> bad"));
    CHECK_THROWS_AS(Automaton::parse(missing), LoadError);
    CHECK_THROWS_AS(Automaton::parse(std::string(kNeverB) + "ok a -> bad\n"), LoadError);
    std::string leaky = kNeverB;
    leaky.replace(leaky.find("bad a -> bad"), 12, "bad a -> ok");
    CHECK_THROWS_AS(Automaton::parse(leaky), LoadError);  // bad states must form a trap
    std::string kind = kNeverB;
    kind.replace(kind.find("safety"), 6, "rabin");
    CHECK_THROWS_AS(Automaton::parse(kind), LoadError);
    CHECK_THROWS_AS(read_file("/nonexistent/file.aut"), LoadError);
  }
  SUBCASE("weighted") {
    auto w = WeightedAutomaton::parse("alphabet: a b\nstates: s\ninitial: s\ns a -> s : -3\ns b -> s : 1\n");
    CHECK(w.edge(0, 0).weight == -3);
    CHECK(w.edge(0, 1).weight == 1);
    CHECK_THROWS_AS(WeightedAutomaton::parse("alphabet: a b\nstates: s\ninitial: s\ns a -> s : x\ns b -> s : 1\n"),
                    LoadError);
    CHECK(render_weighted(WeightedAutomaton::parse(render_weighted(w))) == render_weighted(w));
  }
}
