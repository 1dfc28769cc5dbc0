#include "qmon/trace.hpp"

#include <algorithm>
#include <unordered_set>

namespace qmon {

bool is_valid_token(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw Error("alphabet must not be empty");
  std::unordered_set<std::string> seen;
  for (const auto& t : tokens_) {
    if (!is_valid_token(t)) throw Error("invalid alphabet token '" + t + "'");
    if (!seen.insert(t).second) throw Error("duplicate alphabet token '" + t + "'");
  }
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
  auto it = std::find(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end()) return std::nullopt;
  return static_cast<Symbol>(it - tokens_.begin());
}

Symbol Alphabet::symbol(std::string_view token) const {
  if (auto s = find(token)) return *s;
  throw Error("unknown token '" + std::string(token) + "'");
}

AlphabetPtr make_alphabet(std::vector<std::string> tokens) {
  return std::make_shared<const Alphabet>(std::move(tokens));
}

FiniteTrace FiniteTrace::prefix(std::size_t n) const {
  n = std::min(n, symbols.size());
  return FiniteTrace{alphabet, std::vector<Symbol>(symbols.begin(), symbols.begin() + static_cast<std::ptrdiff_t>(n))};
}

FiniteTrace FiniteTrace::concat(const FiniteTrace& other) const {
  FiniteTrace out{alphabet, symbols};
  out.symbols.insert(out.symbols.end(), other.symbols.begin(), other.symbols.end());
  return out;
}

LassoTrace::LassoTrace(AlphabetPtr alphabet, std::vector<Symbol> stem, std::vector<Symbol> loop)
    : alphabet_(std::move(alphabet)), stem_(std::move(stem)), loop_(std::move(loop)) {
  if (loop_.empty()) throw Error("lasso loop must not be empty");
  if (alphabet_) {
    for (Symbol s : stem_)
      if (s >= alphabet_->size()) throw Error("stem symbol outside alphabet");
    for (Symbol s : loop_)
      if (s >= alphabet_->size()) throw Error("loop symbol outside alphabet");
  }
}

Symbol LassoTrace::at(std::size_t i) const {
  if (i < stem_.size()) return stem_[i];
  return loop_[(i - stem_.size()) % loop_.size()];
}

FiniteTrace LassoTrace::prefix(std::size_t n) const {
  FiniteTrace out{alphabet_, {}};
  out.symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.symbols.push_back(at(i));
  return out;
}

LassoTrace LassoTrace::prepend(const FiniteTrace& prefix) const {
  std::vector<Symbol> stem = prefix.symbols;
  stem.insert(stem.end(), stem_.begin(), stem_.end());
  return LassoTrace(alphabet_, std::move(stem), loop_);
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}

namespace {

struct Token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
    } else if (is_space(c)) {
      ++column;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ';') {
      out.push_back({";", line, column});
      ++column;
      ++i;
    } else {
      Token tok{"", line, column};
      while (i < text.size() && !is_space(text[i]) && text[i] != ';' && text[i] != '#') {
        tok.text += text[i];
        ++column;
        ++i;
      }
      out.push_back(std::move(tok));
    }
  }
  return out;
}

Symbol lookup(const Token& tok, const Alphabet& alphabet) {
  if (tok.text == "!halt") {
    throw ParseError("'!halt' marker is not allowed: traces are infinite lassos", tok.line, tok.column);
  }
  if (auto s = alphabet.find(tok.text)) return *s;
  throw ParseError("unknown token '" + tok.text + "'", tok.line, tok.column);
}

}  // namespace

std::vector<std::string> scan_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
  return out;
}

LassoTrace parse_lasso(std::string_view text, const AlphabetPtr& alphabet) {
  std::vector<Symbol> stem;
  std::vector<Symbol> loop;
  const Token* separator = nullptr;
  auto tokens = tokenize(text);
  for (const auto& tok : tokens) {
    if (tok.text == ";") {
      if (separator) throw ParseError("second ';' separator", tok.line, tok.column);
      separator = &tok;
      continue;
    }
    (separator ? loop : stem).push_back(lookup(tok, *alphabet));
  }
  if (!separator) {
    std::size_t line = tokens.empty() ? 1 : tokens.back().line;
    std::size_t column = tokens.empty() ? 1 : tokens.back().column;
    throw ParseError("missing ';' between stem and loop (infinite traces need a loop)", line, column);
  }
  if (loop.empty()) throw ParseError("empty loop after ';'", separator->line, separator->column);
  return LassoTrace(alphabet, std::move(stem), std::move(loop));
}

FiniteTrace parse_finite(std::string_view text, const AlphabetPtr& alphabet) {
  FiniteTrace out{alphabet, {}};
  for (const auto& tok : tokenize(text)) {
    if (tok.text == ";") throw ParseError("';' is not allowed in a finite trace", tok.line, tok.column);
    out.symbols.push_back(lookup(tok, *alphabet));
  }
  return out;
}

std::string render_finite(const FiniteTrace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.symbols.size(); ++i) {
    if (i) out += ' ';
    out += t.alphabet->token(t.symbols[i]);
  }
  return out;
}

std::string render_lasso(const LassoTrace& t) {
  std::string out;
  for (Symbol s : t.stem()) {
    out += t.alphabet()->token(s);
    out += ' ';
  }
  out += ';';
  for (Symbol s : t.loop()) {
    out += ' ';
    out += t.alphabet()->token(s);
  }
  return out;
}

}  // namespace qmon
