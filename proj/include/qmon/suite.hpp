#pragma once

// Families of test lassos: exhaustive enumeration, seeded sampling and files.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qmon/trace.hpp"

namespace qmon {

/// All words over {0..m-1} of length exactly n, in lexicographic order.
std::vector<std::vector<Symbol>> words_of_length(std::size_t m, std::size_t n);
/// All words of length 0..maxLen, shortest first.
std::vector<std::vector<Symbol>> words_up_to(std::size_t m, std::size_t maxLen);

/// Every lasso u·v^ω with |u| <= maxStem and 1 <= |v| <= maxLoop.
std::vector<LassoTrace> exhaustive_lassos(const AlphabetPtr& alphabet, std::size_t maxStem, std::size_t maxLoop);
/// n lassos with uniformly drawn lengths (stem 0..maxStem, loop 1..maxLoop)
/// and symbols.
std::vector<LassoTrace> sampled_lassos(const AlphabetPtr& alphabet, std::size_t n, std::size_t maxStem,
                                       std::size_t maxLoop, std::uint64_t seed);
FiniteTrace random_finite(const AlphabetPtr& alphabet, std::size_t length, std::mt19937_64& rng);

/// One lasso per non-empty line (`#` comments allowed).
std::vector<LassoTrace> parse_lasso_list(std::string_view text, const AlphabetPtr& alphabet);

struct SuiteSpec {
  enum class Kind { Exhaustive, Sample, File };
  Kind kind = Kind::Exhaustive;
  std::size_t maxStem = 2;
  std::size_t maxLoop = 3;
  std::size_t samples = 0;
  std::string path;
};

/// Stem and loop bounds used by `sample:<n>`.
inline constexpr std::size_t kSampleMaxStem = 6;
inline constexpr std::size_t kSampleMaxLoop = 4;

/// `exhaustive:<u>:<v>`, `sample:<n>` or `file:<path>`; throws Error otherwise.
SuiteSpec parse_suite_spec(std::string_view text);
std::string to_string(const SuiteSpec& s);
std::vector<LassoTrace> make_suite(const SuiteSpec& spec, const AlphabetPtr& alphabet, std::uint64_t seed);

}  // namespace qmon
