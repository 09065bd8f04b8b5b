#include "mmnet/lexer.hpp"

#include <cctype>

#include "mmnet/error.hpp"

namespace mmnet {
namespace {

bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '\'' || u >= 0x80;
}

bool is_local_char(char c) { return is_name_char(c) || c == '-'; }

// Characters that may follow '@' in an address.
bool is_oid_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' ||
         c == '/' || u >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(tok);
        return out;
      }
      char c = src_[pos_];
      if (c == '"') {
        tok.kind = TokenKind::String;
        tok.text = read_string(tok);
      } else if (c == '?' && pos_ + 1 < src_.size() && is_name_start(src_[pos_ + 1])) {
        advance();
        tok.kind = TokenKind::Var;
        tok.text = read_name();
      } else if (c == '@' && pos_ + 1 < src_.size() && is_oid_char(src_[pos_ + 1])) {
        advance();
        tok.kind = TokenKind::Oid;
        while (pos_ < src_.size() && is_oid_char(src_[pos_])) {
          // a trailing '.' ends an N-Triples style statement
          if (src_[pos_] == '.' &&
              (pos_ + 1 >= src_.size() || !is_oid_char(src_[pos_ + 1])))
            break;
          tok.text += src_[pos_];
          advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) &&
                  !prev_is_operand(out))) {
        tok.kind = TokenKind::Int;
        std::string digits;
        if (c == '-') {
          digits += c;
          advance();
        }
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits += src_[pos_];
          advance();
        }
        tok.text = digits;
        try {
          tok.number = std::stoll(digits);
        } catch (const std::out_of_range&) {
          throw SyntaxError("integer out of range: " + digits, tok.line, tok.column);
        }
      } else if (c == '<' && iri_ahead()) {
        advance();
        tok.kind = TokenKind::Iri;
        while (src_[pos_] != '>') {
          tok.text += src_[pos_];
          advance();
        }
        advance();
      } else if (is_name_start(c)) {
        std::string name = read_name();
        if (pos_ + 1 < src_.size() && src_[pos_] == ':' && src_[pos_ + 1] != ':' &&
            (is_name_char(src_[pos_ + 1]))) {
          advance();
          tok.kind = TokenKind::PName;
          tok.text = name + ":" + read_local();
        } else {
          tok.kind = TokenKind::Ident;
          tok.text = std::move(name);
        }
      } else {
        tok.kind = TokenKind::Punct;
        tok.text = read_punct(tok);
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  static bool prev_is_operand(const std::vector<Token>& out) {
    if (out.empty()) return false;
    const Token& t = out.back();
    switch (t.kind) {
      case TokenKind::Ident:
      case TokenKind::PName:
      case TokenKind::Var:
      case TokenKind::Oid:
      case TokenKind::String:
      case TokenKind::Int:
      case TokenKind::Iri:
        return true;
      case TokenKind::Punct:
        return t.text == ")" || t.text == "]";
      default:
        return false;
    }
  }

  // '<' opens an IRI when a '>' follows with no whitespace, quotes or commas
  // in between and the contents carry a scheme separator.
  bool iri_ahead() const {
    bool colon = false;
    for (std::size_t i = pos_ + 1; i < src_.size(); ++i) {
      char c = src_[i];
      if (c == '>') return colon && i > pos_ + 1;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == ',' || c == '<' ||
          c == '[' || c == ']')
        return false;
      if (c == ':') colon = true;
    }
    return false;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string read_name() {
    std::string s;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) {
      s += src_[pos_];
      advance();
    }
    return s;
  }

  std::string read_local() {
    std::string s;
    while (pos_ < src_.size() && (is_local_char(src_[pos_]) || src_[pos_] == '.')) {
      if (src_[pos_] == '.' &&
          (pos_ + 1 >= src_.size() || !is_local_char(src_[pos_ + 1])))
        break;
      s += src_[pos_];
      advance();
    }
    return s;
  }

  std::string read_string(const Token& tok) {
    if (src_.substr(pos_, 3) == "\"\"\"") {
      for (int i = 0; i < 3; ++i) advance();
      std::string s;
      while (true) {
        if (pos_ >= src_.size())
          throw SyntaxError("unterminated triple-quoted string", tok.line, tok.column);
        if (src_.substr(pos_, 3) == "\"\"\"") {
          for (int i = 0; i < 3; ++i) advance();
          return s;
        }
        s += src_[pos_];
        advance();
      }
    }
    advance();
    std::string s;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n')
        throw SyntaxError("unterminated string", tok.line, tok.column);
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return s;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) throw SyntaxError("dangling escape", line_, col_);
        char e = src_[pos_];
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case 'r': s += '\r'; break;
          case '"': s += '"'; break;
          case '\\': s += '\\'; break;
          default:
            throw SyntaxError(std::string("unknown escape \\") + e, line_, col_);
        }
        advance();
        continue;
      }
      s += c;
      advance();
    }
  }

  std::string read_punct(const Token& tok) {
    static const char* const kMulti[] = {"::", "->", "..", "!=", "<=", ">=", "^^", "&&", "||"};
    for (const char* m : kMulti) {
      std::string_view mv(m);
      if (src_.substr(pos_, mv.size()) == mv) {
        for (std::size_t i = 0; i < mv.size(); ++i) advance();
        return std::string(mv);
      }
    }
    char c = src_[pos_];
    static const std::string_view kSingle = "()[]{},;.:=<>!*+-|&";
    if (kSingle.find(c) == std::string_view::npos)
      throw SyntaxError(std::string("unexpected character '") + c + "'", tok.line, tok.column);
    advance();
    return std::string(1, c);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t i = pos_ + ahead;
  if (i >= tokens_.size()) return tokens_.back();
  return tokens_[i];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::is_punct(std::string_view p, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Punct && t.text == p;
}

bool TokenStream::is_keyword(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  if (t.kind != TokenKind::Ident || t.text.size() != word.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t.text[i])) !=
        std::toupper(static_cast<unsigned char>(word[i])))
      return false;
  }
  return true;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view word) {
  if (!is_keyword(word)) return false;
  next();
  return true;
}

void TokenStream::expect_punct(std::string_view p) {
  if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
}

void TokenStream::expect_keyword(std::string_view word) {
  if (!accept_keyword(word)) fail("expected " + std::string(word));
}

std::string TokenStream::expect_ident() {
  if (peek().kind != TokenKind::Ident) fail("expected a name");
  return next().text;
}

void TokenStream::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenStream::fail_at(const Token& token, const std::string& message) const {
  std::string found = token.kind == TokenKind::End ? "end of input" : "'" + token.text + "'";
  throw SyntaxError(message + ", found " + found, token.line, token.column);
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace mmnet
