#include "qmon/suite.hpp"

#include <charconv>

#include "qmon/automaton.hpp"
#include "text_util.hpp"

namespace qmon {

std::vector<std::vector<Symbol>> words_of_length(std::size_t m, std::size_t n) {
  std::vector<std::vector<Symbol>> out;
  if (m == 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  std::vector<Symbol> w(n, 0);
  while (true) {
    out.push_back(w);
    std::size_t i = n;
    while (i > 0 && w[i - 1] + 1 == m) w[--i] = 0;
    if (i == 0) break;
    ++w[i - 1];
  }
  return out;
}

std::vector<std::vector<Symbol>> words_up_to(std::size_t m, std::size_t maxLen) {
  std::vector<std::vector<Symbol>> out;
  for (std::size_t n = 0; n <= maxLen; ++n) {
    auto ws = words_of_length(m, n);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

std::vector<LassoTrace> exhaustive_lassos(const AlphabetPtr& alphabet, std::size_t maxStem, std::size_t maxLoop) {
  std::vector<LassoTrace> out;
  const auto stems = words_up_to(alphabet->size(), maxStem);
  for (std::size_t l = 1; l <= maxLoop; ++l) {
    for (const auto& loop : words_of_length(alphabet->size(), l)) {
      for (const auto& stem : stems) out.emplace_back(alphabet, stem, loop);
    }
  }
  return out;
}

FiniteTrace random_finite(const AlphabetPtr& alphabet, std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> sym(0, alphabet->size() - 1);
  FiniteTrace t{alphabet, {}};
  t.symbols.reserve(length);
  for (std::size_t i = 0; i < length; ++i) t.symbols.push_back(sym(rng));
  return t;
}

std::vector<LassoTrace> sampled_lassos(const AlphabetPtr& alphabet, std::size_t n, std::size_t maxStem,
                                       std::size_t maxLoop, std::uint64_t seed) {
  if (maxLoop == 0) throw Error("loop length bound must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> stem_len(0, maxStem);
  std::uniform_int_distribution<std::size_t> loop_len(1, maxLoop);
  std::vector<LassoTrace> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto stem = random_finite(alphabet, stem_len(rng), rng);
    auto loop = random_finite(alphabet, loop_len(rng), rng);
    out.emplace_back(alphabet, std::move(stem.symbols), std::move(loop.symbols));
  }
  return out;
}

std::vector<LassoTrace> parse_lasso_list(std::string_view text, const AlphabetPtr& alphabet) {
  std::vector<LassoTrace> out;
  for (const auto& line : text::content_lines(text)) {
    try {
      out.push_back(parse_lasso(line.text, alphabet));
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(' ') + 1), line.number, e.column());
    }
  }
  return out;
}

namespace {

std::size_t parse_count(std::string_view s, std::string_view whole) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw Error("bad suite '" + std::string(whole) + "': expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

SuiteSpec parse_suite_spec(std::string_view text) {
  SuiteSpec s;
  const std::string_view exhaustive = "exhaustive:";
  const std::string_view sample = "sample:";
  const std::string_view file = "file:";
  if (text.starts_with(exhaustive)) {
    auto rest = text.substr(exhaustive.size());
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw Error("bad suite '" + std::string(text) + "': expected exhaustive:<u>:<v>");
    s.kind = SuiteSpec::Kind::Exhaustive;
    s.maxStem = parse_count(rest.substr(0, colon), text);
    s.maxLoop = parse_count(rest.substr(colon + 1), text);
    if (s.maxLoop == 0) throw Error("bad suite '" + std::string(text) + "': loop bound must be positive");
  } else if (text.starts_with(sample)) {
    s.kind = SuiteSpec::Kind::Sample;
    s.samples = parse_count(text.substr(sample.size()), text);
    s.maxStem = kSampleMaxStem;
    s.maxLoop = kSampleMaxLoop;
  } else if (text.starts_with(file)) {
    s.kind = SuiteSpec::Kind::File;
    s.path = std::string(text.substr(file.size()));
    if (s.path.empty()) throw Error("bad suite '" + std::string(text) + "': missing path");
  } else {
    throw Error("bad suite '" + std::string(text) + "': expected exhaustive:<u>:<v>, sample:<n> or file:<path>");
  }
  return s;
}

std::string to_string(const SuiteSpec& s) {
  switch (s.kind) {
    case SuiteSpec::Kind::Exhaustive:
      return "exhaustive:" + std::to_string(s.maxStem) + ":" + std::to_string(s.maxLoop);
    case SuiteSpec::Kind::Sample:
      return "sample:" + std::to_string(s.samples);
    case SuiteSpec::Kind::File:
      return "file:" + s.path;
  }
  return "?";
}

std::vector<LassoTrace> make_suite(const SuiteSpec& spec, const AlphabetPtr& alphabet, std::uint64_t seed) {
  switch (spec.kind) {
    case SuiteSpec::Kind::Exhaustive:
      return exhaustive_lassos(alphabet, spec.maxStem, spec.maxLoop);
    case SuiteSpec::Kind::Sample:
      return sampled_lassos(alphabet, spec.samples, spec.maxStem, spec.maxLoop, seed);
    case SuiteSpec::Kind::File:
      return parse_lasso_list(read_file(spec.path), alphabet);
  }
  return {};
}

}  // namespace qmon
