#include "threadlint/lexer.hpp"

#include <algorithm>
#include <array>

namespace threadlint {
namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",      "case",
    "catch",    "char",       "class",     "const",     "continue",  "default",
    "do",       "double",     "else",      "enum",      "extends",   "final",
    "finally",  "float",      "for",       "goto",      "if",        "implements",
    "import",   "instanceof", "int",       "interface", "long",      "native",
    "new",      "package",    "private",   "protected", "public",    "return",
    "short",    "static",     "strictfp",  "super",     "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",       "void",
    "volatile", "while",      "true",      "false",     "null",
};

// Longest first so that greedy matching picks e.g. ">>>=" over ">>".
constexpr std::array<std::string_view, 39> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&",
    "||",   "==",  "!=",  "<=",  ">=",  "+=", "-=", "*=", "/=", "%=",
    "&=",   "|=",  "^=",  "<<",  ">>",  "(",  ")",  "{",  "}",  "[",
    "]",    ";",   ",",   ".",   "@",   "=",  ">",  "<",  "!",
};
constexpr std::string_view kSingleOps = "~?:+-*/&|^%";

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}
bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

class Lexer {
 public:
  explicit Lexer(const SourceFile& file) : file_(file), src_(file.content) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_.offset >= src_.size()) break;
      out.push_back(next());
    }
    Token end;
    end.kind = TokenKind::End;
    end.begin = end.end = pos_;
    end.text = std::string_view(src_).substr(src_.size());
    out.push_back(end);
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    auto i = pos_.offset + ahead;
    return i < src_.size() ? src_[i] : '\0';
  }

  void advance() {
    char c = src_[pos_.offset++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++pos_.column;
    }
  }
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) advance();
  }

  [[noreturn]] void fail(const SourcePos& at, const std::string& msg) const {
    throw ParseError(file_.path, at.line, at.column, msg);
  }

  void skip_trivia() {
    while (pos_.offset < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_.offset < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start = pos_;
        advance(2);
        for (;;) {
          if (pos_.offset >= src_.size()) fail(start, "unterminated comment");
          if (peek() == '*' && peek(1) == '/') {
            advance(2);
            break;
          }
          advance();
        }
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, const SourcePos& start) const {
    Token t;
    t.kind = kind;
    t.begin = start;
    t.end = pos_;
    t.text = std::string_view(src_).substr(start.offset, pos_.offset - start.offset);
    return t;
  }

  Token next() {
    SourcePos start = pos_;
    auto c = static_cast<unsigned char>(peek());
    if (is_ident_start(c)) {
      while (pos_.offset < src_.size() && is_ident_part(static_cast<unsigned char>(peek())))
        advance();
      Token t = make(TokenKind::Identifier, start);
      if (is_java_keyword(t.text)) t.kind = TokenKind::Keyword;
      return t;
    }
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return number(start);
    if (c == '"') return string_literal(start);
    if (c == '\'') return char_literal(start);
    for (auto op : kOperators) {
      if (std::string_view(src_).substr(pos_.offset, op.size()) == op) {
        advance(op.size());
        return make(TokenKind::Operator, start);
      }
    }
    if (kSingleOps.find(static_cast<char>(c)) != std::string_view::npos) {
      advance();
      return make(TokenKind::Operator, start);
    }
    fail(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

  Token number(const SourcePos& start) {
    bool is_float = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance(2);
      while (is_hex(peek()) || peek() == '_') advance();
    } else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
      advance(2);
      while (peek() == '0' || peek() == '1' || peek() == '_') advance();
    } else {
      while (is_digit(peek()) || peek() == '_') advance();
      if (peek() == '.' && is_digit(peek(1))) {
        is_float = true;
        advance();
        while (is_digit(peek()) || peek() == '_') advance();
      } else if (peek() == '.' && !is_ident_start(static_cast<unsigned char>(peek(1))) &&
                 peek(1) != '.') {
        // "1." is a valid double literal.
        is_float = true;
        advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        is_float = true;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        if (!is_digit(peek())) fail(pos_, "malformed exponent");
        while (is_digit(peek())) advance();
      }
      if (peek() == 'f' || peek() == 'F' || peek() == 'd' || peek() == 'D') {
        is_float = true;
        advance();
      }
    }
    if (!is_float && (peek() == 'l' || peek() == 'L')) advance();
    if (is_ident_part(static_cast<unsigned char>(peek()))) fail(pos_, "malformed number literal");
    return make(is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral, start);
  }

  Token string_literal(const SourcePos& start) {
    if (peek(1) == '"' && peek(2) == '"') {
      advance(3);
      for (;;) {
        if (pos_.offset >= src_.size()) fail(start, "unterminated text block");
        if (peek() == '\\') {
          advance(2);
          continue;
        }
        if (peek() == '"' && peek(1) == '"' && peek(2) == '"') {
          advance(3);
          break;
        }
        advance();
      }
      return make(TokenKind::StringLiteral, start);
    }
    advance();
    for (;;) {
      if (pos_.offset >= src_.size() || peek() == '\n') fail(start, "unterminated string literal");
      if (peek() == '\\') {
        advance(2);
        continue;
      }
      if (peek() == '"') {
        advance();
        break;
      }
      advance();
    }
    return make(TokenKind::StringLiteral, start);
  }

  Token char_literal(const SourcePos& start) {
    advance();
    std::size_t count = 0;
    for (;;) {
      if (pos_.offset >= src_.size() || peek() == '\n') fail(start, "unterminated character literal");
      if (peek() == '\\') {
        advance(2);
        ++count;
        continue;
      }
      if (peek() == '\'') {
        advance();
        break;
      }
      advance();
      ++count;
    }
    if (count == 0) fail(start, "empty character literal");
    return make(TokenKind::CharLiteral, start);
  }

  const SourceFile& file_;
  const std::string& src_;
  SourcePos pos_;
};

}  // namespace

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(const SourceFile& file) { return Lexer(file).run(); }

}  // namespace threadlint
