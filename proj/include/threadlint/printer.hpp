#pragma once

#include <functional>
#include <optional>
#include <string>

#include "threadlint/ast.hpp"

namespace threadlint {

/// Regenerates Java source from the tree. The output is token-equivalent to
/// the parsed input (same token sequence once comments and layout are
/// dropped), not byte-identical.
std::string to_source(const Ast& ast);

/// Hook for canonical printing: returning a value replaces the printed text of
/// that sub-expression.
using ExprRewrite = std::function<std::optional<std::string>(const Expr&)>;

/// Compact single-line rendering of an expression (no whitespace between
/// tokens). Used for monitor identities and messages.
std::string compact_text(const Expr& e, const ExprRewrite& rewrite = {});

}  // namespace threadlint
