#include "threadlint/printer.hpp"

namespace threadlint {
namespace {

class Printer {
 public:
  Printer(bool compact, const ExprRewrite* rewrite) : compact_(compact), rewrite_(rewrite) {}

  std::string take() { return std::move(out_); }

  void unit(const Ast& ast) {
    if (!ast.package_name.empty()) line("package " + ast.package_name + ";");
    for (const auto& imp : ast.imports) {
      std::string s = "import ";
      if (imp.is_static) s += "static ";
      s += imp.name;
      if (imp.on_demand) s += ".*";
      line(s + ";");
    }
    for (const auto& c : ast.classes) type_decl(c);
  }

  void expr(const Expr& e) {
    if (rewrite_ && *rewrite_) {
      if (auto text = (*rewrite_)(e)) {
        out_ += *text;
        return;
      }
    }
    switch (e.kind) {
      case ExprKind::Literal:
      case ExprKind::Name:
        out_ += e.text;
        break;
      case ExprKind::This:
        out_ += "this";
        break;
      case ExprKind::Super:
        out_ += "super";
        break;
      case ExprKind::QualifiedThis:
        expr(*e.operands[0]);
        out_ += ".this";
        break;
      case ExprKind::FieldAccess:
        expr(*e.operands[0]);
        out_ += "." + e.text;
        break;
      case ExprKind::MethodCall:
        if (e.qualifier()) {
          expr(*e.qualifier());
          out_ += ".";
        }
        out_ += e.text;
        args(e.call_args());
        break;
      case ExprKind::New:
        out_ += "new " + e.text;
        args(e.operands);
        break;
      case ExprKind::NewArray: {
        out_ += "new " + e.text;
        int printed = 0;
        const Expr* init = nullptr;
        for (const auto& op : e.operands) {
          if (op->kind == ExprKind::ArrayInit) {
            init = op.get();
            continue;
          }
          out_ += "[";
          expr(*op);
          out_ += "]";
          ++printed;
        }
        for (; printed < e.dims; ++printed) out_ += "[]";
        if (init) {
          sp();
          expr(*init);
        }
        break;
      }
      case ExprKind::ArrayInit:
        out_ += "{";
        for (std::size_t i = 0; i < e.operands.size(); ++i) {
          if (i) comma();
          expr(*e.operands[i]);
        }
        out_ += "}";
        break;
      case ExprKind::ArrayIndex:
        expr(*e.operands[0]);
        out_ += "[";
        expr(*e.operands[1]);
        out_ += "]";
        break;
      case ExprKind::Unary:
        if (e.postfix) {
          expr(*e.operands[0]);
          out_ += e.text;
        } else {
          out_ += e.text;
          // Keep "- -x" from re-lexing as "--x".
          if (!compact_) sp();
          expr(*e.operands[0]);
        }
        break;
      case ExprKind::Binary:
      case ExprKind::Assign:
        expr(*e.operands[0]);
        sp();
        out_ += e.text;
        sp();
        expr(*e.operands[1]);
        break;
      case ExprKind::Conditional:
        expr(*e.operands[0]);
        sp();
        out_ += "?";
        sp();
        expr(*e.operands[1]);
        sp();
        out_ += ":";
        sp();
        expr(*e.operands[2]);
        break;
      case ExprKind::Cast:
        out_ += "(" + e.text + ")";
        sp();
        expr(*e.operands[0]);
        break;
      case ExprKind::InstanceOf:
        expr(*e.operands[0]);
        out_ += " instanceof " + e.text;
        break;
      case ExprKind::ClassLiteral:
        out_ += e.text + ".class";
        break;
      case ExprKind::Paren:
        out_ += "(";
        expr(*e.operands[0]);
        out_ += ")";
        break;
    }
  }

 private:
  void sp() {
    if (!compact_) out_ += ' ';
  }
  void comma() { out_ += compact_ ? "," : ", "; }

  void indent() { out_.append(static_cast<std::size_t>(depth_) * 2, ' '); }
  void line(const std::string& s) {
    indent();
    out_ += s;
    out_ += '\n';
  }

  template <typename Range>
  void args(const Range& operands) {
    out_ += "(";
    bool first = true;
    for (const auto& op : operands) {
      if (!first) comma();
      first = false;
      expr(*op);
    }
    out_ += ")";
  }

  static std::string mods_text(const Modifiers& m) {
    std::string s;
    for (const auto& w : m.spelled) s += w + " ";
    return s;
  }

  void type_decl(const ClassDecl& c) {
    std::string head = mods_text(c.mods);
    head += c.kind == ClassKind::Class ? "class " : c.kind == ClassKind::Interface ? "interface " : "enum ";
    head += c.name + c.type_params;
    if (!c.header_tail.empty()) head += " " + c.header_tail;
    line(head + " {");
    ++depth_;
    if (!c.enum_constants.empty() || c.enum_constants_terminated)
      line(c.enum_constants + (c.enum_constants_terminated ? ";" : ""));
    int last_group = -1;
    for (const auto& m : c.members) {
      switch (m.kind) {
        case MemberKind::Field: {
          const auto& f = c.fields[m.index];
          if (f.group == last_group) break;
          last_group = f.group;
          indent();
          out_ += mods_text(f.mods) + f.type + " ";
          bool first = true;
          for (const auto& g : c.fields) {
            if (g.group != f.group) continue;
            if (!first) out_ += ", ";
            first = false;
            out_ += g.name;
            if (g.init) {
              out_ += " = ";
              expr(*g.init);
            }
          }
          out_ += ";\n";
          break;
        }
        case MemberKind::Method:
          callable(c.methods[m.index]);
          break;
        case MemberKind::Constructor:
          callable(c.constructors[m.index]);
          break;
        case MemberKind::Initializer:
          callable(c.initializers[m.index]);
          break;
        case MemberKind::Nested:
          type_decl(c.nested[m.index]);
          break;
        case MemberKind::Empty:
          line(";");
          break;
      }
    }
    --depth_;
    line("}");
  }

  void callable(const MethodDecl& m) {
    indent();
    out_ += mods_text(m.mods);
    if (m.kind != CallableKind::Initializer) {
      if (!m.type_params.empty()) out_ += m.type_params + " ";
      if (!m.return_type.empty()) out_ += m.return_type + " ";
      out_ += m.name + "(";
      for (std::size_t i = 0; i < m.params.size(); ++i) {
        const auto& p = m.params[i];
        if (i) out_ += ", ";
        if (!p.modifiers.empty()) out_ += p.modifiers + " ";
        out_ += p.type + (p.varargs ? "... " : " ") + p.name;
      }
      out_ += ")";
      if (!m.throws_clause.empty()) out_ += " " + m.throws_clause;
    }
    if (!m.body) {
      out_ += ";\n";
      return;
    }
    out_ += " ";
    block_inline(*m.body);
    out_ += "\n";
  }

  // Prints a block starting at the current column.
  void block_inline(const Stmt& b) {
    out_ += "{\n";
    ++depth_;
    for (const auto& s : b.stmts) stmt(*s);
    --depth_;
    indent();
    out_ += "}";
  }

  void local_head(const Stmt& s) {
    if (!s.var_modifiers.empty()) out_ += s.var_modifiers + " ";
    out_ += s.var_type + " ";
  }

  void declarators(const Stmt& s) {
    for (std::size_t i = 0; i < s.vars.size(); ++i) {
      if (i) out_ += ", ";
      out_ += s.vars[i].name;
      if (s.vars[i].init) {
        out_ += " = ";
        expr(*s.vars[i].init);
      }
    }
  }

  // Statement body of if/loops: blocks stay on the same line.
  void nested(const Stmt& s) {
    if (s.kind == StmtKind::Block) {
      out_ += " ";
      block_inline(s);
      out_ += "\n";
    } else {
      out_ += "\n";
      ++depth_;
      stmt(s);
      --depth_;
    }
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Block:
        indent();
        block_inline(s);
        out_ += "\n";
        break;
      case StmtKind::Empty:
        line(";");
        break;
      case StmtKind::LocalVar:
        indent();
        local_head(s);
        declarators(s);
        out_ += ";\n";
        break;
      case StmtKind::ExprStmt:
        indent();
        expr(*s.expr);
        out_ += ";\n";
        break;
      case StmtKind::Return:
        indent();
        out_ += "return";
        if (s.expr) {
          out_ += " ";
          expr(*s.expr);
        }
        out_ += ";\n";
        break;
      case StmtKind::Break:
        line("break;");
        break;
      case StmtKind::Continue:
        line("continue;");
        break;
      case StmtKind::Throw:
        indent();
        out_ += "throw ";
        expr(*s.expr);
        out_ += ";\n";
        break;
      case StmtKind::If:
        indent();
        out_ += "if (";
        expr(*s.expr);
        out_ += ")";
        nested(*s.body);
        if (s.else_stmt) {
          line("else");
          ++depth_;
          stmt(*s.else_stmt);
          --depth_;
        }
        break;
      case StmtKind::While:
        indent();
        out_ += "while (";
        expr(*s.expr);
        out_ += ")";
        nested(*s.body);
        break;
      case StmtKind::DoWhile:
        indent();
        out_ += "do";
        nested(*s.body);
        indent();
        out_ += "while (";
        expr(*s.expr);
        out_ += ");\n";
        break;
      case StmtKind::For:
        indent();
        out_ += "for (";
        for (std::size_t i = 0; i < s.for_init.size(); ++i) {
          const auto& init = *s.for_init[i];
          if (i) out_ += ", ";
          if (init.kind == StmtKind::LocalVar) {
            local_head(init);
            declarators(init);
          } else {
            expr(*init.expr);
          }
        }
        out_ += "; ";
        if (s.expr) expr(*s.expr);
        out_ += "; ";
        for (std::size_t i = 0; i < s.for_update.size(); ++i) {
          if (i) out_ += ", ";
          expr(*s.for_update[i]);
        }
        out_ += ")";
        nested(*s.body);
        break;
      case StmtKind::ForEach:
        indent();
        out_ += "for (";
        local_head(s);
        out_ += s.vars[0].name + " : ";
        expr(*s.expr);
        out_ += ")";
        nested(*s.body);
        break;
      case StmtKind::Synchronized:
        indent();
        out_ += "synchronized (";
        expr(*s.expr);
        out_ += ") ";
        block_inline(*s.body);
        out_ += "\n";
        break;
      case StmtKind::Try:
        indent();
        out_ += "try ";
        block_inline(*s.body);
        for (const auto& c : s.catches) {
          out_ += " catch (";
          if (!c.modifiers.empty()) out_ += c.modifiers + " ";
          out_ += c.type + " " + c.name + ") ";
          block_inline(*c.body);
        }
        if (s.finally_block) {
          out_ += " finally ";
          block_inline(*s.finally_block);
        }
        out_ += "\n";
        break;
    }
  }

  bool compact_;
  const ExprRewrite* rewrite_;
  std::string out_;
  int depth_ = 0;
};

}  // namespace

std::string to_source(const Ast& ast) {
  Printer p(false, nullptr);
  p.unit(ast);
  return p.take();
}

std::string compact_text(const Expr& e, const ExprRewrite& rewrite) {
  Printer p(true, &rewrite);
  p.expr(e);
  return p.take();
}

}  // namespace threadlint
