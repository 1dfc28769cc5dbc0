#pragma once

// Finite traces and ultimately periodic (lasso) infinite traces.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmon/domain.hpp"

namespace qmon {

using Symbol = std::size_t;

/// Ordered set of observation tokens; symbols are indices into it.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(Symbol s) const { return tokens_.at(s); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<Symbol> find(std::string_view token) const;
  /// Throws Error for unknown tokens.
  Symbol symbol(std::string_view token) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr make_alphabet(std::vector<std::string> tokens);
/// True if `token` is a non-empty string over [A-Za-z0-9_].
bool is_valid_token(std::string_view token);

struct FiniteTrace {
  AlphabetPtr alphabet;
  std::vector<Symbol> symbols;

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  Symbol operator[](std::size_t i) const { return symbols[i]; }
  FiniteTrace prefix(std::size_t n) const;
  FiniteTrace concat(const FiniteTrace& other) const;

  friend bool operator==(const FiniteTrace& a, const FiniteTrace& b) { return a.symbols == b.symbols; }
};

/// The infinite word stem · loop^ω.
class LassoTrace {
 public:
  LassoTrace(AlphabetPtr alphabet, std::vector<Symbol> stem, std::vector<Symbol> loop);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<Symbol>& stem() const { return stem_; }
  const std::vector<Symbol>& loop() const { return loop_; }

  /// Symbol at position i (0-based) of the infinite word.
  Symbol at(std::size_t i) const;
  /// The length-n prefix.
  FiniteTrace prefix(std::size_t n) const;
  /// The same infinite word shifted behind a finite prefix: prefix · this.
  LassoTrace prepend(const FiniteTrace& prefix) const;

  friend bool operator==(const LassoTrace& a, const LassoTrace& b) {
    return a.stem_ == b.stem_ && a.loop_ == b.loop_;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Symbol> stem_;
  std::vector<Symbol> loop_;
};

/// Malformed trace text; carries the 1-based position of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Whitespace-separated tokens, a single `;` between stem and loop, `#`
/// comments to end of line.
LassoTrace parse_lasso(std::string_view text, const AlphabetPtr& alphabet);
/// Same format without a `;`.
FiniteTrace parse_finite(std::string_view text, const AlphabetPtr& alphabet);

/// Tokens of a trace file in order (with `;` kept as its own token); used to
/// infer an alphabet when none is given.
std::vector<std::string> scan_tokens(std::string_view text);

std::string render_lasso(const LassoTrace& t);
std::string render_finite(const FiniteTrace& t);

}  // namespace qmon
