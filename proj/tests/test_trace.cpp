#include <doctest.h>

#include <random>

#include "qmon/qprop.hpp"
#include "qmon/suite.hpp"
#include "qmon/trace.hpp"

using namespace qmon;

namespace {

std::vector<std::string> toks(const FiniteTrace& s) {
  std::vector<std::string> out;
  for (auto x : s.symbols) out.push_back(s.alphabet->token(x));
  return out;
}

}  // namespace

TEST_CASE("alphabet") {
  CHECK_THROWS_AS(make_alphabet({}), Error);
  CHECK_THROWS_AS(make_alphabet({"a", "a"}), Error);
  CHECK_THROWS_AS(make_alphabet({"a b"}), Error);
  CHECK_THROWS_AS(make_alphabet({";"}), Error);
  auto sigma = make_alphabet({"req", "ack"});
  CHECK(sigma->symbol("ack") == 1);
  CHECK_FALSE(sigma->find("other"));
  CHECK_THROWS_AS(sigma->symbol("other"), Error);
}

TEST_CASE("lasso prefixes") {
  auto sigma = server_alphabet();
  LassoTrace t = parse_lasso("req ; ack", sigma);
  CHECK(t.prefix(0).empty());
  CHECK(toks(t.prefix(3)) == std::vector<std::string>{"req", "ack", "ack"});
  auto ab = ab_alphabet();
  CHECK(toks(parse_lasso("; a b", ab).prefix(5)) == std::vector<std::string>{"a", "b", "a", "b", "a"});
}

TEST_CASE("parse_lasso") {
  auto sigma = server_alphabet();
  LassoTrace t = parse_lasso("req ack ; other", sigma);
  CHECK(t.stem() == std::vector<Symbol>{0, 1});
  CHECK(t.loop() == std::vector<Symbol>{2});
  LassoTrace u = parse_lasso("; a b", ab_alphabet());
  CHECK(u.stem().empty());
  CHECK(u.loop().size() == 2);
  CHECK_THROWS_AS(parse_lasso("req ack", sigma), ParseError);
  CHECK_THROWS_AS(parse_lasso("req ;", sigma), ParseError);
  CHECK_THROWS_AS(parse_lasso("req ; ack ; ack", sigma), ParseError);
  SUBCASE("tokens split on any whitespace and comments are skipped") {
    LassoTrace w = parse_lasso("# header\nreq\tack  # trailing\n;\nother\n", sigma);
    CHECK(w == t);
  }
  SUBCASE("unknown tokens report their position") {
    try {
      parse_lasso("req\nack bogus ; other", sigma);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 5);
    }
  }
  CHECK(parse_finite("req ack", sigma).size() == 2);
  CHECK_THROWS_AS(parse_finite("req ; ack", sigma), ParseError);
}

TEST_CASE("prefix and unrolling invariants") {
  std::mt19937_64 rng(2024);
  auto sigma = server_alphabet();
  for (const auto& t : sampled_lassos(sigma, 200, 5, 4, 99)) {
    const std::size_t u = t.stem().size(), v = t.loop().size();
    const auto long_prefix = t.prefix(u + 6 * v + 2);
    for (std::size_t i = 0; i <= long_prefix.size(); ++i) {
      auto p = t.prefix(i);
      CHECK(std::equal(p.symbols.begin(), p.symbols.end(), long_prefix.symbols.begin()));
    }
    for (std::size_t m = 0; m < 5 * v; ++m) CHECK(t.at(u + m) == t.loop()[m % v]);
    CHECK(parse_lasso(render_lasso(t), sigma) == t);
  }
  FiniteTrace s = random_finite(sigma, 12, rng);
  CHECK(parse_finite(render_finite(s), sigma) == s);
}

TEST_CASE("prepend") {
  auto ab = ab_alphabet();
  LassoTrace t = parse_lasso("a ; b", ab);
  LassoTrace p = t.prepend(parse_finite("b b", ab));
  CHECK(render_lasso(p) == "b b a ; b");
}

TEST_CASE("suites") {
  auto ab = ab_alphabet();
  CHECK(words_of_length(2, 3).size() == 8);
  CHECK(words_up_to(2, 3).size() == 15);
  auto ex = exhaustive_lassos(ab, 2, 3);
  CHECK(ex.size() == 7 * 14);
  auto s1 = sampled_lassos(ab, 50, 6, 4, 42);
  auto s2 = sampled_lassos(ab, 50, 6, 4, 42);
  CHECK(s1 == s2);
  for (const auto& t : s1) {
    CHECK(t.stem().size() <= 6);
    CHECK(t.loop().size() >= 1);
    CHECK(t.loop().size() <= 4);
  }
  auto spec = parse_suite_spec("exhaustive:1:2");
  CHECK(make_suite(spec, ab, 0).size() == 3 * 6);
  CHECK(parse_suite_spec("sample:30").samples == 30);
  CHECK(make_suite(parse_suite_spec("sample:30"), ab, 1).size() == 30);
  CHECK_THROWS_AS(parse_suite_spec("exhaustive:1"), Error);
  CHECK_THROWS_AS(parse_suite_spec("bogus:1"), Error);
  auto listed = parse_lasso_list("# two lassos\n; a\na ; b\n", ab);
  CHECK(listed.size() == 2);
  CHECK_THROWS_AS(parse_lasso_list("; a\n; c\n", ab), ParseError);
}
