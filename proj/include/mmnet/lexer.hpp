#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mmnet {

enum class TokenKind {
  Ident,    // name, may contain apostrophes (id') and non-ASCII bytes
  PName,    // prefix:local
  Var,      // ?x (text holds "x")
  Oid,      // @addr (text holds "addr")
  String,   // "..." or """...""" (text holds the unescaped contents)
  Int,
  Iri,      // <scheme:...> (text holds the contents)
  Punct,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::int64_t number = 0;
  int line = 1;
  int column = 1;
};

/// Shared tokenizer for value literals, net-definition files and queries.
/// `#` starts a comment that runs to the end of the line.
std::vector<Token> tokenize(std::string_view source);

/// Cursor over a token vector with the usual peek/expect helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const;
  bool is_keyword(std::string_view word, std::size_t ahead = 0) const;
  bool accept_punct(std::string_view p);
  bool accept_keyword(std::string_view word);
  void expect_punct(std::string_view p);
  void expect_keyword(std::string_view word);
  std::string expect_ident();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& token, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Quotes and escapes text the way the tokenizer reads it back.
std::string quote(std::string_view text);

}  // namespace mmnet
