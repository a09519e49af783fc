#pragma once

#include <string_view>
#include <vector>

#include "threadlint/source.hpp"

namespace threadlint {

enum class TokenKind {
  Identifier,
  Keyword,
  IntLiteral,
  FloatLiteral,
  CharLiteral,
  StringLiteral,
  Operator,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;
  SourcePos begin;
  SourcePos end;

  bool is(std::string_view s) const {
    return (kind == TokenKind::Operator || kind == TokenKind::Keyword) && text == s;
  }
};

bool is_java_keyword(std::string_view word);

/// Splits `file` into tokens, dropping whitespace and comments. The returned
/// views point into `file.content`; the last token has kind End.
std::vector<Token> tokenize(const SourceFile& file);

}  // namespace threadlint
