#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "threadlint/source.hpp"

namespace threadlint {

// Syntax tree for the supported Java subset. Every node carries a span into
// the owning Ast's source text and expressions/statements carry an id that is
// unique within the Ast (used to key control-flow and analysis tables).

enum class ExprKind {
  Literal,
  Name,           // simple identifier: local, parameter, field or type name
  This,
  QualifiedThis,  // Outer.this; operands[0] is the qualifier
  Super,
  FieldAccess,    // operands[0] is the qualifier, text is the member name
  MethodCall,     // operands[0] is the qualifier or null, then arguments
  New,            // text is the instantiated type, operands are arguments
  NewArray,       // text is the element type; operands are dimension sizes,
                  // optionally followed by an ArrayInit
  ArrayInit,
  ArrayIndex,     // operands: array, index
  Unary,          // text is the operator; `postfix` distinguishes x++ / ++x
  Binary,         // text is the operator; operands: lhs, rhs
  Assign,         // text is "=", "+=", ...; operands: target, value
  Conditional,    // operands: condition, then, else
  Cast,           // text is the target type; operands: operand
  InstanceOf,     // text is the tested type; operands: operand
  ClassLiteral,   // text is the type name
  Paren,
};

enum class LiteralKind { Integer, Floating, Character, String, Boolean, Null };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::Literal;
  int id = -1;
  SourceSpan span;
  std::string text;
  LiteralKind literal = LiteralKind::Null;
  bool postfix = false;
  int dims = 0;  // NewArray: total number of [] pairs
  std::vector<ExprPtr> operands;

  const Expr* operand(std::size_t i) const {
    return i < operands.size() ? operands[i].get() : nullptr;
  }
  /// MethodCall only.
  const Expr* qualifier() const { return operand(0); }
  std::span<const ExprPtr> call_args() const {
    return std::span<const ExprPtr>(operands).subspan(1);
  }
  bool is_assignment() const { return kind == ExprKind::Assign; }
  bool is_increment() const {
    return kind == ExprKind::Unary && (text == "++" || text == "--");
  }
};

enum class StmtKind {
  Block,
  LocalVar,
  ExprStmt,
  If,
  While,
  DoWhile,
  For,
  ForEach,
  Return,
  Break,
  Continue,
  Throw,
  Synchronized,
  Try,
  Empty,
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct VarDeclarator {
  std::string name;
  SourceSpan name_span;
  ExprPtr init;
};

struct CatchClause {
  std::string modifiers;  // e.g. "final", verbatim
  std::string type;       // may contain '|' alternatives
  std::string name;
  SourceSpan span;
  StmtPtr body;
};

struct Stmt {
  StmtKind kind = StmtKind::Empty;
  int id = -1;
  SourceSpan span;

  // Condition (If/While/DoWhile/For), value (ExprStmt/Return/Throw),
  // iterable (ForEach) or monitor expression (Synchronized).
  ExprPtr expr;

  std::vector<StmtPtr> stmts;  // Block
  StmtPtr body;                // If-then, loop body, synchronized/try block
  StmtPtr else_stmt;           // If
  StmtPtr finally_block;       // Try
  std::vector<CatchClause> catches;

  // LocalVar / ForEach variable.
  std::string var_modifiers;
  std::string var_type;
  std::vector<VarDeclarator> vars;

  // For
  std::vector<StmtPtr> for_init;
  std::vector<ExprPtr> for_update;
};

enum class Visibility { Public, Protected, Package, Private };

struct Annotation {
  std::string name;  // as written, e.g. "ThreadSafe" or "javax.annotation.concurrent.ThreadSafe"
  std::string text;  // full text including arguments
  SourceSpan span;

  std::string simple_name() const;
};

struct Modifiers {
  enum Flag : std::uint32_t {
    kPublic = 1u << 0,
    kProtected = 1u << 1,
    kPrivate = 1u << 2,
    kStatic = 1u << 3,
    kFinal = 1u << 4,
    kVolatile = 1u << 5,
    kSynchronized = 1u << 6,
    kAbstract = 1u << 7,
    kNative = 1u << 8,
    kTransient = 1u << 9,
    kStrictfp = 1u << 10,
    kDefault = 1u << 11,
  };

  std::uint32_t flags = 0;
  std::vector<Annotation> annotations;
  std::vector<std::string> spelled;  // modifiers and annotations in source order

  bool has(Flag f) const { return (flags & f) != 0; }
  Visibility visibility() const;
};

struct FieldDecl {
  Modifiers mods;
  std::string type;
  std::string name;
  ExprPtr init;
  SourceSpan span;        // the whole declaration, modifiers to ';'
  SourceSpan name_span;
  SourceSpan declarator;  // name through the end of the initializer
  int group = 0;          // declarators sharing one declaration share a group

  Visibility visibility() const { return mods.visibility(); }
  bool is_private() const { return mods.has(Modifiers::kPrivate); }
  bool is_final() const { return mods.has(Modifiers::kFinal); }
  bool is_volatile() const { return mods.has(Modifiers::kVolatile); }
  bool is_static() const { return mods.has(Modifiers::kStatic); }
};

struct Param {
  std::string modifiers;
  std::string type;
  std::string name;
  bool varargs = false;
};

enum class CallableKind { Method, Constructor, Initializer };

struct MethodDecl {
  CallableKind kind = CallableKind::Method;
  Modifiers mods;
  std::string type_params;
  std::string return_type;  // empty for constructors and initializers
  std::string name;         // class name for constructors, "<init>"/"<clinit>" for blocks
  std::vector<Param> params;
  std::string throws_clause;
  StmtPtr body;  // null for abstract/native/interface methods
  SourceSpan span;
  SourceSpan name_span;

  Visibility visibility() const { return mods.visibility(); }
  bool is_public() const { return mods.has(Modifiers::kPublic); }
  bool is_static() const { return mods.has(Modifiers::kStatic); }
  bool is_synchronized() const { return mods.has(Modifiers::kSynchronized); }
  bool is_constructor() const { return kind == CallableKind::Constructor; }
};

enum class ClassKind { Class, Interface, Enum };

enum class MemberKind { Field, Method, Constructor, Initializer, Nested, Empty };

struct MemberRef {
  MemberKind kind;
  std::size_t index;
};

struct ClassDecl {
  ClassKind kind = ClassKind::Class;
  Modifiers mods;
  std::string name;
  std::string qualified_name;
  std::string type_params;   // verbatim, including angle brackets
  std::string header_tail;   // verbatim extends/implements text
  std::string enum_constants;  // verbatim constant list for enums
  bool enum_constants_terminated = false;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  std::vector<MethodDecl> constructors;
  std::vector<MethodDecl> initializers;
  std::vector<ClassDecl> nested;
  std::vector<MemberRef> members;  // source order
  SourceSpan span;
  SourceSpan name_span;

  const FieldDecl* find_field(std::string_view field_name) const;
  /// Visits this class and every nested class, outermost first.
  template <typename F>
  void visit_classes(F&& fn) const {
    fn(*this);
    for (const auto& inner : nested) inner.visit_classes(fn);
  }
};

struct ImportDecl {
  std::string name;  // without the trailing ".*"
  bool is_static = false;
  bool on_demand = false;
};

struct Ast {
  SourceFile source;
  std::string package_name;
  std::vector<ImportDecl> imports;
  std::vector<ClassDecl> classes;
  SourceSpan package_span;
  int node_count = 0;

  Ast() = default;
  Ast(Ast&&) = default;
  Ast& operator=(Ast&&) = default;
  Ast(const Ast&) = delete;
  Ast& operator=(const Ast&) = delete;

  template <typename F>
  void visit_classes(F&& fn) const {
    for (const auto& c : classes) c.visit_classes(fn);
  }
};

class SpanOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Parses one compilation unit. Throws ParseError on malformed input or
/// constructs outside the supported subset.
Ast parse_compilation_unit(SourceFile src);

/// Classes (including nested ones) carrying an annotation whose simple name is
/// in `annotation_names`.
std::vector<const ClassDecl*> annotated_as_thread_safe(
    const Ast& ast, std::span<const std::string> annotation_names);
std::vector<const ClassDecl*> annotated_as_thread_safe(const Ast& ast);

/// The exact source slice covered by `span`.
std::string_view reconstruct_span(const Ast& ast, const SourceSpan& span);

// Traversal helpers. Visitors see nodes in source order, parents first.

template <typename F>
void for_each_expr(const Expr& e, F&& fn) {
  fn(e);
  for (const auto& op : e.operands)
    if (op) for_each_expr(*op, fn);
}

template <typename F>
void for_each_stmt(const Stmt& s, F&& fn) {
  fn(s);
  for (const auto& c : s.for_init) for_each_stmt(*c, fn);
  for (const auto& c : s.stmts) for_each_stmt(*c, fn);
  if (s.body) for_each_stmt(*s.body, fn);
  if (s.else_stmt) for_each_stmt(*s.else_stmt, fn);
  for (const auto& c : s.catches)
    if (c.body) for_each_stmt(*c.body, fn);
  if (s.finally_block) for_each_stmt(*s.finally_block, fn);
}

/// Expressions directly owned by `s` (not by its child statements), in
/// evaluation order of their roots.
template <typename F>
void for_each_own_expr_root(const Stmt& s, F&& fn) {
  for (const auto& v : s.vars)
    if (v.init) fn(*v.init);
  if (s.expr) fn(*s.expr);
  for (const auto& u : s.for_update) fn(*u);
}

/// Every expression in the statement tree rooted at `s`.
template <typename F>
void for_each_expr_in(const Stmt& s, F&& fn) {
  for_each_stmt(s, [&](const Stmt& st) {
    for_each_own_expr_root(st, [&](const Expr& root) { for_each_expr(root, fn); });
  });
}

}  // namespace threadlint
