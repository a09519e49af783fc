#include <algorithm>
#include <array>
#include <functional>

#include "threadlint/ast.hpp"
#include "threadlint/lexer.hpp"

namespace threadlint {
namespace {

constexpr std::array<std::string_view, 8> kPrimitiveTypes = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double"};

bool is_primitive(std::string_view s) {
  return std::find(kPrimitiveTypes.begin(), kPrimitiveTypes.end(), s) != kPrimitiveTypes.end();
}

struct ModifierWord {
  std::string_view word;
  Modifiers::Flag flag;
};
constexpr std::array<ModifierWord, 12> kModifierWords = {{
    {"public", Modifiers::kPublic},
    {"protected", Modifiers::kProtected},
    {"private", Modifiers::kPrivate},
    {"static", Modifiers::kStatic},
    {"final", Modifiers::kFinal},
    {"volatile", Modifiers::kVolatile},
    {"synchronized", Modifiers::kSynchronized},
    {"abstract", Modifiers::kAbstract},
    {"native", Modifiers::kNative},
    {"transient", Modifiers::kTransient},
    {"strictfp", Modifiers::kStrictfp},
    {"default", Modifiers::kDefault},
}};

const std::array<std::string_view, 12> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};

int binary_precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "|") return 3;
  if (op == "^") return 4;
  if (op == "&") return 5;
  if (op == "==" || op == "!=") return 6;
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "instanceof") return 7;
  if (op == "<<" || op == ">>" || op == ">>>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  return -1;
}

class Parser {
 public:
  explicit Parser(Ast& ast) : ast_(ast), toks_(tokenize(ast.source)) {}

  void compilation_unit() {
    if (at("package")) {
      SourcePos start = cur().begin;
      advance();
      ast_.package_name = qualified_name();
      expect(";");
      ast_.package_span = span_from(start);
    }
    while (at("import")) {
      advance();
      ImportDecl imp;
      if (accept("static")) imp.is_static = true;
      imp.name = std::string(expect_ident());
      while (accept(".")) {
        if (accept("*")) {
          imp.on_demand = true;
          break;
        }
        imp.name += "." + std::string(expect_ident());
      }
      expect(";");
      ast_.imports.push_back(std::move(imp));
    }
    while (!at_end()) {
      if (accept(";")) continue;
      SourcePos start = cur().begin;
      Modifiers mods = modifiers();
      ast_.classes.push_back(type_declaration(std::move(mods), start, ast_.package_name));
    }
  }

 private:
  // ---- token plumbing -------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at_end() const { return cur().kind == TokenKind::End; }
  bool at(std::string_view s) const { return cur().is(s); }
  bool at_ident() const { return cur().kind == TokenKind::Identifier; }
  void advance() {
    if (!at_end()) {
      prev_end_ = cur().end;
      ++pos_;
    }
  }
  bool accept(std::string_view s) {
    if (!at(s)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(ast_.source.path, t.begin.line, t.begin.column, msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(cur(), msg); }
  [[noreturn]] void unsupported(const std::string& what) const {
    fail(what + " is not supported");
  }

  std::string describe(const Token& t) const {
    if (t.kind == TokenKind::End) return "end of input";
    return "'" + std::string(t.text) + "'";
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "' but found " + describe(cur()));
  }
  std::string_view expect_ident() {
    if (!at_ident()) fail("expected identifier but found " + describe(cur()));
    auto text = cur().text;
    advance();
    return text;
  }

  SourceSpan span_from(const SourcePos& start) const { return SourceSpan{start, prev_end_}; }
  std::string slice(const SourcePos& start) const {
    return ast_.source.content.substr(start.offset, prev_end_.offset - start.offset);
  }

  int next_id() { return ast_.node_count++; }

  std::string qualified_name() {
    std::string name(expect_ident());
    while (at(".") && peek().kind == TokenKind::Identifier) {
      advance();
      name += "." + std::string(expect_ident());
    }
    return name;
  }

  // ---- declarations ---------------------------------------------------------

  void skip_balanced(std::string_view open, std::string_view close) {
    int depth = 0;
    do {
      if (at_end()) fail("unbalanced '" + std::string(open) + "'");
      if (at(open)) ++depth;
      if (at(close)) --depth;
      advance();
    } while (depth > 0);
  }

  Annotation annotation() {
    SourcePos start = cur().begin;
    expect("@");
    Annotation a;
    a.name = qualified_name();
    if (at("(")) skip_balanced("(", ")");
    a.span = span_from(start);
    a.text = slice(start);
    return a;
  }

  Modifiers modifiers() {
    Modifiers mods;
    for (;;) {
      if (at("@") && !peek().is("interface")) {
        Annotation a = annotation();
        mods.spelled.push_back(a.text);
        mods.annotations.push_back(std::move(a));
        continue;
      }
      auto it = std::find_if(kModifierWords.begin(), kModifierWords.end(),
                             [&](const ModifierWord& m) { return at(m.word); });
      // `default` inside a class body only acts as a modifier on interface methods.
      if (it == kModifierWords.end() || (at("default") && peek().is(":"))) break;
      if (mods.has(it->flag)) fail("repeated modifier '" + std::string(it->word) + "'");
      mods.flags |= it->flag;
      mods.spelled.emplace_back(it->word);
      advance();
    }
    return mods;
  }

  void check_member_modifiers(const Modifiers& mods, const Token& where) const {
    int vis = mods.has(Modifiers::kPublic) + mods.has(Modifiers::kProtected) +
              mods.has(Modifiers::kPrivate);
    if (vis > 1) fail_at(where, "conflicting visibility modifiers");
    if (mods.has(Modifiers::kFinal) && mods.has(Modifiers::kVolatile))
      fail_at(where, "a field cannot be both final and volatile");
  }

  ClassDecl type_declaration(Modifiers mods, const SourcePos& start, const std::string& outer) {
    ClassDecl cls;
    cls.mods = std::move(mods);
    check_member_modifiers(cls.mods, cur());
    if (accept("class")) {
      cls.kind = ClassKind::Class;
    } else if (accept("interface")) {
      cls.kind = ClassKind::Interface;
    } else if (accept("enum")) {
      cls.kind = ClassKind::Enum;
    } else if (at("@") && peek().is("interface")) {
      unsupported("annotation type declaration");
    } else if (at_ident() && cur().text == "record") {
      unsupported("record declaration");
    } else {
      fail("expected type declaration but found " + describe(cur()));
    }
    SourcePos name_start = cur().begin;
    cls.name = std::string(expect_ident());
    cls.name_span = span_from(name_start);
    cls.qualified_name = outer.empty() ? cls.name : outer + "." + cls.name;
    if (at("<")) {
      SourcePos tp = cur().begin;
      type_arguments();
      cls.type_params = slice(tp);
    }
    if (!at("{")) {
      SourcePos tail = cur().begin;
      while (!at("{")) {
        if (at_end() || at(";") || at("}")) fail("expected '{' but found " + describe(cur()));
        advance();
      }
      cls.header_tail = slice(tail);
    }
    expect("{");
    if (cls.kind == ClassKind::Enum) enum_constants(cls);
    while (!at("}")) {
      if (at_end()) fail("expected '}' to close class '" + cls.name + "' but found end of input");
      member(cls);
    }
    expect("}");
    cls.span = span_from(start);
    return cls;
  }

  void enum_constants(ClassDecl& cls) {
    if (at(";")) {
      advance();
      cls.enum_constants_terminated = true;
      return;
    }
    if (at("}")) return;
    SourcePos start = cur().begin;
    int depth = 0;
    while (!at_end()) {
      if (depth == 0 && (at(";") || at("}"))) break;
      if (at("(") || at("{")) ++depth;
      if (at(")") || at("}")) --depth;
      advance();
    }
    cls.enum_constants = slice(start);
    if (accept(";")) cls.enum_constants_terminated = true;
  }

  void member(ClassDecl& cls) {
    if (accept(";")) {
      cls.members.push_back({MemberKind::Empty, 0});
      return;
    }
    SourcePos start = cur().begin;
    const Token& first = cur();
    Modifiers mods = modifiers();
    if (at("class") || at("interface") || at("enum") || (at("@") && peek().is("interface")) ||
        (at_ident() && cur().text == "record" && peek().kind == TokenKind::Identifier)) {
      cls.nested.push_back(type_declaration(std::move(mods), start, cls.qualified_name));
      cls.members.push_back({MemberKind::Nested, cls.nested.size() - 1});
      return;
    }
    check_member_modifiers(mods, first);
    if (at("{")) {
      MethodDecl init;
      init.kind = CallableKind::Initializer;
      init.mods = std::move(mods);
      init.name = init.mods.has(Modifiers::kStatic) ? "<clinit>" : "<init>";
      init.body = block();
      init.span = span_from(start);
      cls.initializers.push_back(std::move(init));
      cls.members.push_back({MemberKind::Initializer, cls.initializers.size() - 1});
      return;
    }
    std::string type_params;
    if (at("<")) {
      SourcePos tp = cur().begin;
      type_arguments();
      type_params = slice(tp);
    }
    if (at_ident() && cur().text == cls.name && peek().is("(")) {
      MethodDecl ctor;
      ctor.kind = CallableKind::Constructor;
      ctor.mods = std::move(mods);
      ctor.type_params = std::move(type_params);
      callable_rest(ctor, start);
      cls.constructors.push_back(std::move(ctor));
      cls.members.push_back({MemberKind::Constructor, cls.constructors.size() - 1});
      return;
    }
    std::string type = type_text();
    if (at_ident() && peek().is("(")) {
      MethodDecl m;
      m.kind = CallableKind::Method;
      m.mods = std::move(mods);
      m.type_params = std::move(type_params);
      m.return_type = std::move(type);
      callable_rest(m, start);
      cls.methods.push_back(std::move(m));
      cls.members.push_back({MemberKind::Method, cls.methods.size() - 1});
      return;
    }
    if (!type_params.empty()) fail("type parameters are only allowed on methods");
    field_declarators(cls, std::move(mods), std::move(type), start);
  }

  void field_declarators(ClassDecl& cls, Modifiers mods, std::string type,
                         const SourcePos& start) {
    int group = static_cast<int>(cls.fields.size());
    std::size_t first = cls.fields.size();
    for (;;) {
      FieldDecl f;
      f.mods = mods;
      f.type = type;
      f.group = group;
      SourcePos name_start = cur().begin;
      f.name = std::string(expect_ident());
      f.name_span = span_from(name_start);
      if (at("[")) unsupported("C-style array declarator");
      if (accept("=")) f.init = variable_initializer();
      f.declarator = span_from(name_start);
      if (cls.find_field(f.name)) fail("duplicate field '" + f.name + "'");
      cls.fields.push_back(std::move(f));
      cls.members.push_back({MemberKind::Field, cls.fields.size() - 1});
      if (!accept(",")) break;
    }
    expect(";");
    for (std::size_t i = first; i < cls.fields.size(); ++i) cls.fields[i].span = span_from(start);
  }

  void callable_rest(MethodDecl& m, const SourcePos& start) {
    SourcePos name_start = cur().begin;
    m.name = std::string(expect_ident());
    m.name_span = span_from(name_start);
    expect("(");
    if (!at(")")) {
      for (;;) {
        m.params.push_back(parameter());
        if (!accept(",")) break;
      }
    }
    expect(")");
    if (at("[")) unsupported("array dimensions after a parameter list");
    if (at("throws")) {
      SourcePos t = cur().begin;
      advance();
      type_text();
      while (accept(",")) type_text();
      m.throws_clause = slice(t);
    }
    if (accept(";")) {
      m.span = span_from(start);
      return;
    }
    if (at("default")) unsupported("annotation method default");
    m.body = block();
    m.span = span_from(start);
  }

  Param parameter() {
    Param p;
    SourcePos start = cur().begin;
    Modifiers mods = modifiers();
    if (!mods.spelled.empty()) p.modifiers = slice(start);
    p.type = type_text();
    if (accept("...")) p.varargs = true;
    p.name = std::string(expect_ident());
    if (at("[")) unsupported("C-style array declarator");
    return p;
  }

  // ---- types ----------------------------------------------------------------

  // Consumes a balanced <...> group; returns false (position unspecified) when
  // the tokens do not form one.
  bool try_type_arguments() {
    if (!at("<")) return false;
    int depth = 0;
    for (;;) {
      if (at("<")) {
        ++depth;
      } else if (at(">")) {
        depth -= 1;
      } else if (at(">>")) {
        depth -= 2;
      } else if (at(">>>")) {
        depth -= 3;
      } else if (!(at_ident() || cur().kind == TokenKind::Keyword || at(".") || at(",") ||
                   at("?") || at("[") || at("]") || at("&") || at("@"))) {
        return false;
      }
      if (cur().kind == TokenKind::Keyword && !at("extends") && !at("super") &&
          !is_primitive(cur().text))
        return false;
      advance();
      if (depth < 0) return false;
      if (depth == 0) return true;
    }
  }

  void type_arguments() {
    const Token& start = cur();
    if (!try_type_arguments()) fail_at(start, "malformed type arguments");
  }

  // Type without array dimensions; used by `new`.
  bool try_class_type() {
    if (cur().kind == TokenKind::Keyword && is_primitive(cur().text)) {
      advance();
      return true;
    }
    if (!at_ident()) return false;
    for (;;) {
      advance();
      if (at("<") && !try_type_arguments()) return false;
      if (at(".") && peek().kind == TokenKind::Identifier) {
        advance();
        continue;
      }
      return true;
    }
  }

  bool try_type() {
    if (at("void")) {
      advance();
      return true;
    }
    while (at("@")) {
      advance();
      if (!at_ident()) return false;
      qualified_name();
      if (at("(")) skip_balanced("(", ")");
    }
    if (!try_class_type()) return false;
    while (at("[") && peek().is("]")) {
      advance();
      advance();
    }
    return true;
  }

  std::string type_text() {
    SourcePos start = cur().begin;
    const Token& first = cur();
    if (!try_type()) fail_at(first, "expected type but found " + describe(first));
    return slice(start);
  }

  // ---- statements -----------------------------------------------------------

  StmtPtr new_stmt(StmtKind kind) {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->id = next_id();
    return s;
  }

  StmtPtr block() {
    SourcePos start = cur().begin;
    if (!at("{")) fail("expected '{' but found " + describe(cur()));
    auto s = new_stmt(StmtKind::Block);
    advance();
    while (!at("}")) {
      if (at_end()) fail("expected '}' but found end of input");
      s->stmts.push_back(statement());
    }
    advance();
    s->span = span_from(start);
    return s;
  }

  // Decides whether a local variable declaration starts here, without
  // consuming anything.
  bool at_local_var_decl() {
    if (at("final") || at("@")) return true;
    if (cur().kind == TokenKind::Keyword && is_primitive(cur().text)) return true;
    if (!at_ident()) return false;
    std::size_t saved = pos_;
    SourcePos saved_end = prev_end_;
    bool ok = try_type() && at_ident() &&
              (peek().is("=") || peek().is(";") || peek().is(",") || peek().is(":") ||
               peek().is("["));
    pos_ = saved;
    prev_end_ = saved_end;
    return ok;
  }

  void local_var_head(Stmt& s) {
    SourcePos mods_start = cur().begin;
    Modifiers mods = modifiers();
    if (mods.flags & ~Modifiers::kFinal) fail("only 'final' may modify a local variable");
    if (!mods.spelled.empty()) s.var_modifiers = slice(mods_start);
    s.var_type = type_text();
  }

  void local_var_declarators(Stmt& s) {
    for (;;) {
      VarDeclarator v;
      SourcePos name_start = cur().begin;
      v.name = std::string(expect_ident());
      v.name_span = span_from(name_start);
      if (at("[")) unsupported("C-style array declarator");
      if (accept("=")) v.init = variable_initializer();
      s.vars.push_back(std::move(v));
      if (!accept(",")) break;
    }
  }

  StmtPtr statement() {
    SourcePos start = cur().begin;
    if (at("{")) return block();
    if (at(";")) {
      auto s = new_stmt(StmtKind::Empty);
      advance();
      s->span = span_from(start);
      return s;
    }
    if (at("if")) {
      auto s = new_stmt(StmtKind::If);
      advance();
      s->expr = paren_condition();
      s->body = statement();
      if (accept("else")) s->else_stmt = statement();
      s->span = span_from(start);
      return s;
    }
    if (at("while")) {
      auto s = new_stmt(StmtKind::While);
      advance();
      s->expr = paren_condition();
      s->body = statement();
      s->span = span_from(start);
      return s;
    }
    if (at("do")) {
      auto s = new_stmt(StmtKind::DoWhile);
      advance();
      s->body = statement();
      expect("while");
      s->expr = paren_condition();
      expect(";");
      s->span = span_from(start);
      return s;
    }
    if (at("for")) return for_statement();
    if (at("return")) {
      auto s = new_stmt(StmtKind::Return);
      advance();
      if (!at(";")) s->expr = expression();
      expect(";");
      s->span = span_from(start);
      return s;
    }
    if (at("break") || at("continue")) {
      auto s = new_stmt(at("break") ? StmtKind::Break : StmtKind::Continue);
      advance();
      if (at_ident()) unsupported("labeled jump");
      expect(";");
      s->span = span_from(start);
      return s;
    }
    if (at("throw")) {
      auto s = new_stmt(StmtKind::Throw);
      advance();
      s->expr = expression();
      expect(";");
      s->span = span_from(start);
      return s;
    }
    if (at("synchronized")) {
      auto s = new_stmt(StmtKind::Synchronized);
      advance();
      s->expr = paren_condition();
      s->body = block();
      s->span = span_from(start);
      return s;
    }
    if (at("try")) return try_statement();
    if (at("switch")) unsupported("switch statement");
    if (at("case") || at("default")) unsupported("switch label");
    if (at("assert")) unsupported("assert statement");
    if (at("class") || at("interface") || at("enum") || at("abstract") || at("static"))
      unsupported("local type declaration");
    if (at_ident() && peek().is(":")) unsupported("labeled statement");
    if (at_ident() && cur().text == "yield" && !peek().is("(") && !peek().is("="))
      unsupported("yield statement");
    if (at_local_var_decl()) {
      auto s = new_stmt(StmtKind::LocalVar);
      local_var_head(*s);
      local_var_declarators(*s);
      expect(";");
      s->span = span_from(start);
      return s;
    }
    auto s = new_stmt(StmtKind::ExprStmt);
    s->expr = expression();
    expect(";");
    s->span = span_from(start);
    return s;
  }

  ExprPtr paren_condition() {
    expect("(");
    auto e = expression();
    expect(")");
    return e;
  }

  StmtPtr for_statement() {
    SourcePos start = cur().begin;
    advance();
    expect("(");
    StmtPtr s;
    if (at_local_var_decl()) {
      SourcePos decl_start = cur().begin;
      auto decl = new_stmt(StmtKind::LocalVar);
      local_var_head(*decl);
      if (at_ident() && peek().is(":")) {
        s = new_stmt(StmtKind::ForEach);
        s->var_modifiers = std::move(decl->var_modifiers);
        s->var_type = std::move(decl->var_type);
        VarDeclarator v;
        SourcePos name_start = cur().begin;
        v.name = std::string(expect_ident());
        v.name_span = span_from(name_start);
        s->vars.push_back(std::move(v));
        expect(":");
        s->expr = expression();
        expect(")");
        s->body = statement();
        s->span = span_from(start);
        return s;
      }
      local_var_declarators(*decl);
      decl->span = span_from(decl_start);
      s = new_stmt(StmtKind::For);
      s->for_init.push_back(std::move(decl));
    } else {
      s = new_stmt(StmtKind::For);
      if (!at(";")) {
        for (;;) {
          SourcePos e_start = cur().begin;
          auto es = new_stmt(StmtKind::ExprStmt);
          es->expr = expression();
          es->span = span_from(e_start);
          s->for_init.push_back(std::move(es));
          if (!accept(",")) break;
        }
      }
    }
    expect(";");
    if (!at(";")) s->expr = expression();
    expect(";");
    if (!at(")")) {
      for (;;) {
        s->for_update.push_back(expression());
        if (!accept(",")) break;
      }
    }
    expect(")");
    s->body = statement();
    s->span = span_from(start);
    return s;
  }

  StmtPtr try_statement() {
    SourcePos start = cur().begin;
    advance();
    if (at("(")) unsupported("try-with-resources");
    auto s = new_stmt(StmtKind::Try);
    s->body = block();
    while (at("catch")) {
      SourcePos c_start = cur().begin;
      advance();
      expect("(");
      CatchClause c;
      SourcePos mods_start = cur().begin;
      Modifiers mods = modifiers();
      if (!mods.spelled.empty()) c.modifiers = slice(mods_start);
      SourcePos type_start = cur().begin;
      type_text();
      while (accept("|")) type_text();
      c.type = slice(type_start);
      c.name = std::string(expect_ident());
      expect(")");
      c.body = block();
      c.span = span_from(c_start);
      s->catches.push_back(std::move(c));
    }
    if (accept("finally")) s->finally_block = block();
    if (s->catches.empty() && !s->finally_block) fail("expected 'catch' or 'finally' after try block");
    s->span = span_from(start);
    return s;
  }

  // ---- expressions ----------------------------------------------------------

  ExprPtr new_expr(ExprKind kind, const SourcePos& start) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->id = next_id();
    e->span.begin = start;
    return e;
  }
  ExprPtr finish(ExprPtr e) {
    e->span.end = prev_end_;
    return e;
  }

  ExprPtr variable_initializer() {
    if (at("{")) return array_initializer();
    return expression();
  }

  ExprPtr array_initializer() {
    SourcePos start = cur().begin;
    expect("{");
    auto e = new_expr(ExprKind::ArrayInit, start);
    while (!at("}")) {
      e->operands.push_back(variable_initializer());
      if (!accept(",")) break;
    }
    expect("}");
    return finish(std::move(e));
  }

  ExprPtr expression() {
    auto e = assignment();
    if (at("->")) unsupported("lambda expression");
    return e;
  }

  ExprPtr assignment() {
    SourcePos start = cur().begin;
    auto lhs = conditional();
    if (cur().kind == TokenKind::Operator &&
        std::find(kAssignOps.begin(), kAssignOps.end(), cur().text) != kAssignOps.end()) {
      auto k = lhs->kind;
      if (k != ExprKind::Name && k != ExprKind::FieldAccess && k != ExprKind::ArrayIndex &&
          k != ExprKind::Paren)
        fail("invalid assignment target");
      auto e = new_expr(ExprKind::Assign, start);
      e->text = std::string(cur().text);
      advance();
      e->operands.push_back(std::move(lhs));
      e->operands.push_back(assignment());
      return finish(std::move(e));
    }
    return lhs;
  }

  ExprPtr conditional() {
    SourcePos start = cur().begin;
    auto c = binary(1);
    if (!at("?")) return c;
    advance();
    auto e = new_expr(ExprKind::Conditional, start);
    e->operands.push_back(std::move(c));
    e->operands.push_back(expression());
    expect(":");
    e->operands.push_back(conditional());
    return finish(std::move(e));
  }

  ExprPtr binary(int min_prec) {
    SourcePos start = cur().begin;
    auto lhs = unary();
    for (;;) {
      if (cur().kind != TokenKind::Operator && !at("instanceof")) break;
      int prec = binary_precedence(cur().text);
      if (prec < min_prec) break;
      if (at("instanceof")) {
        advance();
        auto e = new_expr(ExprKind::InstanceOf, start);
        accept("final");
        e->text = type_text();
        if (at_ident()) unsupported("instanceof pattern binding");
        e->operands.push_back(std::move(lhs));
        lhs = finish(std::move(e));
        continue;
      }
      auto e = new_expr(ExprKind::Binary, start);
      e->text = std::string(cur().text);
      advance();
      e->operands.push_back(std::move(lhs));
      e->operands.push_back(binary(prec + 1));
      lhs = finish(std::move(e));
    }
    return lhs;
  }

  // Index of the ')' matching the '(' at `open`, or npos.
  std::size_t matching_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks_.size(); ++i) {
      if (toks_[i].is("(")) ++depth;
      if (toks_[i].is(")") && --depth == 0) return i;
      if (toks_[i].kind == TokenKind::End) break;
    }
    return std::string_view::npos;
  }

  bool starts_cast_operand(const Token& t) const {
    switch (t.kind) {
      case TokenKind::Identifier:
      case TokenKind::IntLiteral:
      case TokenKind::FloatLiteral:
      case TokenKind::CharLiteral:
      case TokenKind::StringLiteral:
        return true;
      case TokenKind::Keyword:
        return t.is("this") || t.is("new") || t.is("super") || t.is("true") ||
               t.is("false") || t.is("null");
      case TokenKind::Operator:
        return t.is("(") || t.is("!") || t.is("~");
      default:
        return false;
    }
  }

  // At '(' : returns the cast type text when this is a cast, restoring the
  // position otherwise.
  std::optional<std::string> try_cast_prefix() {
    std::size_t saved = pos_;
    SourcePos saved_end = prev_end_;
    advance();
    SourcePos type_start = cur().begin;
    bool primitive = cur().kind == TokenKind::Keyword && is_primitive(cur().text);
    if (try_type() && at(")")) {
      std::string type = slice(type_start);
      advance();
      if (primitive || starts_cast_operand(cur())) return type;
    }
    pos_ = saved;
    prev_end_ = saved_end;
    return std::nullopt;
  }

  ExprPtr unary() {
    SourcePos start = cur().begin;
    if (at("++") || at("--") || at("+") || at("-") || at("!") || at("~")) {
      auto e = new_expr(ExprKind::Unary, start);
      e->text = std::string(cur().text);
      advance();
      e->operands.push_back(unary());
      return finish(std::move(e));
    }
    if (at("(")) {
      std::size_t close = matching_paren(pos_);
      if (close != std::string_view::npos && toks_[close + 1].is("->"))
        unsupported("lambda expression");
      if (auto type = try_cast_prefix()) {
        auto e = new_expr(ExprKind::Cast, start);
        e->text = std::move(*type);
        e->operands.push_back(unary());
        return finish(std::move(e));
      }
    }
    return postfix();
  }

  ExprPtr postfix() {
    SourcePos start = cur().begin;
    auto e = primary();
    for (;;) {
      if (at(".")) {
        advance();
        if (at("this")) {
          advance();
          auto q = new_expr(ExprKind::QualifiedThis, start);
          q->operands.push_back(std::move(e));
          e = finish(std::move(q));
          continue;
        }
        if (at("class")) {
          advance();
          auto q = new_expr(ExprKind::ClassLiteral, start);
          q->text = std::string(reconstruct(*e));
          q->operands.push_back(std::move(e));
          e = finish(std::move(q));
          continue;
        }
        if (at("new")) unsupported("qualified instance creation");
        if (at("<")) unsupported("explicit generic method invocation");
        std::string name(expect_ident());
        if (at("(")) {
          auto call = new_expr(ExprKind::MethodCall, start);
          call->text = std::move(name);
          call->operands.push_back(std::move(e));
          arguments(*call);
          e = finish(std::move(call));
        } else {
          auto fa = new_expr(ExprKind::FieldAccess, start);
          fa->text = std::move(name);
          fa->operands.push_back(std::move(e));
          e = finish(std::move(fa));
        }
        continue;
      }
      if (at("[")) {
        advance();
        auto idx = new_expr(ExprKind::ArrayIndex, start);
        idx->operands.push_back(std::move(e));
        idx->operands.push_back(expression());
        expect("]");
        e = finish(std::move(idx));
        continue;
      }
      if (at("::")) unsupported("method reference");
      break;
    }
    while (at("++") || at("--")) {
      auto u = new_expr(ExprKind::Unary, start);
      u->text = std::string(cur().text);
      u->postfix = true;
      advance();
      u->operands.push_back(std::move(e));
      e = finish(std::move(u));
    }
    return e;
  }

  std::string_view reconstruct(const Expr& e) const {
    return std::string_view(ast_.source.content)
        .substr(e.span.begin.offset, e.span.end.offset - e.span.begin.offset);
  }

  void arguments(Expr& call) {
    expect("(");
    if (!at(")")) {
      for (;;) {
        call.operands.push_back(expression());
        if (!accept(",")) break;
      }
    }
    expect(")");
  }

  ExprPtr primary() {
    SourcePos start = cur().begin;
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::IntLiteral:
      case TokenKind::FloatLiteral:
      case TokenKind::CharLiteral:
      case TokenKind::StringLiteral: {
        auto e = new_expr(ExprKind::Literal, start);
        e->text = std::string(t.text);
        e->literal = t.kind == TokenKind::IntLiteral     ? LiteralKind::Integer
                     : t.kind == TokenKind::FloatLiteral ? LiteralKind::Floating
                     : t.kind == TokenKind::CharLiteral  ? LiteralKind::Character
                                                         : LiteralKind::String;
        advance();
        return finish(std::move(e));
      }
      case TokenKind::Identifier: {
        if (peek().is("->")) unsupported("lambda expression");
        std::string name(t.text);
        advance();
        if (at("(")) {
          auto call = new_expr(ExprKind::MethodCall, start);
          call->text = std::move(name);
          call->operands.push_back(nullptr);
          arguments(*call);
          return finish(std::move(call));
        }
        auto e = new_expr(ExprKind::Name, start);
        e->text = std::move(name);
        return finish(std::move(e));
      }
      case TokenKind::Keyword: {
        if (t.is("true") || t.is("false") || t.is("null")) {
          auto e = new_expr(ExprKind::Literal, start);
          e->text = std::string(t.text);
          e->literal = t.is("null") ? LiteralKind::Null : LiteralKind::Boolean;
          advance();
          return finish(std::move(e));
        }
        if (t.is("this") || t.is("super")) {
          bool is_this = t.is("this");
          advance();
          if (at("(")) {
            // Explicit constructor invocation: this(...) / super(...).
            auto call = new_expr(ExprKind::MethodCall, start);
            call->text = is_this ? "this" : "super";
            call->operands.push_back(nullptr);
            arguments(*call);
            return finish(std::move(call));
          }
          return finish(new_expr(is_this ? ExprKind::This : ExprKind::Super, start));
        }
        if (t.is("new")) return creation();
        if (is_primitive(t.text) || t.is("void")) {
          std::string type = type_text();
          if (!at(".") || !peek().is("class")) fail("unexpected type '" + type + "' in expression");
          advance();
          advance();
          auto e = new_expr(ExprKind::ClassLiteral, start);
          e->text = std::move(type);
          return finish(std::move(e));
        }
        if (t.is("switch")) unsupported("switch expression");
        break;
      }
      case TokenKind::Operator:
        if (t.is("(")) {
          advance();
          auto e = new_expr(ExprKind::Paren, start);
          e->operands.push_back(expression());
          expect(")");
          return finish(std::move(e));
        }
        break;
      case TokenKind::End:
        break;
    }
    fail("expected expression but found " + describe(t));
  }

  ExprPtr creation() {
    SourcePos start = cur().begin;
    expect("new");
    SourcePos type_start = cur().begin;
    const Token& first = cur();
    if (!try_class_type()) fail_at(first, "expected type after 'new'");
    std::string type = slice(type_start);
    if (at("[")) {
      auto e = new_expr(ExprKind::NewArray, start);
      e->text = std::move(type);
      while (at("[")) {
        advance();
        ++e->dims;
        if (accept("]")) continue;
        e->operands.push_back(expression());
        expect("]");
      }
      if (at("{")) {
        if (!e->operands.empty()) fail("array creation with both sizes and initializer");
        e->operands.push_back(array_initializer());
      } else if (e->operands.empty()) {
        fail("array creation needs a size or an initializer");
      }
      return finish(std::move(e));
    }
    auto e = new_expr(ExprKind::New, start);
    e->text = std::move(type);
    if (!at("(")) fail("expected '(' or '[' after 'new " + e->text + "'");
    e->operands.push_back(nullptr);
    arguments(*e);
    e->operands.erase(e->operands.begin());
    if (at("{")) unsupported("anonymous class");
    return finish(std::move(e));
  }

  Ast& ast_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SourcePos prev_end_;
};

}  // namespace

std::string Annotation::simple_name() const {
  auto dot = name.rfind('.');
  return dot == std::string::npos ? name : name.substr(dot + 1);
}

Visibility Modifiers::visibility() const {
  if (has(kPublic)) return Visibility::Public;
  if (has(kProtected)) return Visibility::Protected;
  if (has(kPrivate)) return Visibility::Private;
  return Visibility::Package;
}

const FieldDecl* ClassDecl::find_field(std::string_view field_name) const {
  for (const auto& f : fields)
    if (f.name == field_name) return &f;
  return nullptr;
}

Ast parse_compilation_unit(SourceFile src) {
  Ast ast;
  ast.source = std::move(src);
  Parser parser(ast);
  parser.compilation_unit();
  return ast;
}

std::vector<const ClassDecl*> annotated_as_thread_safe(
    const Ast& ast, std::span<const std::string> annotation_names) {
  std::vector<const ClassDecl*> out;
  ast.visit_classes([&](const ClassDecl& cls) {
    for (const auto& a : cls.mods.annotations) {
      auto simple = a.simple_name();
      bool match = std::any_of(annotation_names.begin(), annotation_names.end(),
                               [&](const std::string& want) {
                                 return want == simple || want == a.name;
                               });
      if (match) {
        out.push_back(&cls);
        break;
      }
    }
  });
  return out;
}

std::vector<const ClassDecl*> annotated_as_thread_safe(const Ast& ast) {
  static const std::vector<std::string> kDefault = {"ThreadSafe"};
  return annotated_as_thread_safe(ast, kDefault);
}

std::string_view reconstruct_span(const Ast& ast, const SourceSpan& span) {
  const auto& content = ast.source.content;
  if (span.begin.offset > span.end.offset || span.end.offset > content.size())
    throw SpanOutOfRange("span [" + std::to_string(span.begin.offset) + ", " +
                         std::to_string(span.end.offset) + ") outside " + ast.source.path);
  return std::string_view(content).substr(span.begin.offset,
                                          span.end.offset - span.begin.offset);
}

}  // namespace threadlint
