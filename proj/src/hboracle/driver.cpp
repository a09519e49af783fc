#include <algorithm>
#include <map>

#include "threadlint/access_paths.hpp"
#include "threadlint/hb_oracle.hpp"
#include "threadlint/monitors.hpp"

namespace threadlint {

namespace {

const Expr* strip_parens(const Expr* e) {
  while (e && e->kind == ExprKind::Paren) e = e->operands[0].get();
  return e;
}

std::string element_target(const FieldDecl& f) { return f.name + "[]"; }
std::string state_target(const FieldDecl& f) { return f.name + ".state"; }

std::string monitor_target(const Monitor& m) {
  switch (m.kind) {
    case MonitorKind::LockField:
      return "lock:" + m.identity;
    case MonitorKind::ThisMonitor:
      return "this";
    case MonitorKind::ClassMonitor:
      return m.identity + ".class";
    case MonitorKind::SyncExpr:
      return m.identity;
  }
  return m.identity;
}

// Lowers straight-line code to the actions one thread performs.
class ActionBuilder {
 public:
  ActionBuilder(const ClassModel& cm, int thread) : cm_(cm), thread_(thread) {
    for (const auto& f : cm.decl->fields)
      if (is_lock_type(f.type, *cm.options)) lock_fields_.push_back(&f);
  }

  std::vector<TraceAction> run(const MethodDecl& m) {
    method(m);
    check_balanced(m);
    return std::move(out_);
  }

 private:
  [[noreturn]] void unsupported(const std::string& what, std::uint32_t line) const {
    throw UnsupportedForOracle(cm_.class_id() + "." + stack_.front()->name + ": " + what +
                               " at line " + std::to_string(line));
  }

  void emit(ActionOp op, std::string target, std::uint32_t line) {
    TraceAction a;
    a.thread = thread_;
    a.op = op;
    a.target = std::move(target);
    a.seq = static_cast<int>(out_.size());
    a.line = line;
    out_.push_back(std::move(a));
  }

  void read(const FieldDecl& f, std::uint32_t line) {
    emit(f.is_volatile() ? ActionOp::VolatileRead : ActionOp::Read, f.name, line);
  }
  void write(const FieldDecl& f, std::uint32_t line) {
    emit(f.is_volatile() ? ActionOp::VolatileWrite : ActionOp::Write, f.name, line);
  }

  void method(const MethodDecl& m) {
    if (std::find(stack_.begin(), stack_.end(), &m) != stack_.end())
      unsupported("recursive call to " + m.name, m.span.begin.line);
    stack_.push_back(&m);
    std::string mon;
    if (m.is_synchronized())
      mon = m.is_static() ? cm_.class_id() + ".class" : std::string("this");
    if (!mon.empty()) emit(ActionOp::Lock, mon, m.span.begin.line);
    if (m.body) stmt(*m.body, true);
    if (!mon.empty()) emit(ActionOp::Unlock, mon, m.span.end.line);
    stack_.pop_back();
  }

  void stmt(const Stmt& s, bool tail) {
    std::size_t before = out_.size();
    std::uint32_t line = s.span.begin.line;
    switch (s.kind) {
      case StmtKind::Block:
        for (std::size_t i = 0; i < s.stmts.size(); ++i)
          stmt(*s.stmts[i], tail && i + 1 == s.stmts.size());
        return;
      case StmtKind::Empty:
        return;
      case StmtKind::LocalVar:
        for (const auto& v : s.vars)
          if (v.init) expr(*v.init);
        break;
      case StmtKind::ExprStmt:
        expr(*s.expr);
        break;
      case StmtKind::Return:
        if (!tail) unsupported("early return", line);
        if (s.expr) expr(*s.expr);
        break;
      case StmtKind::Synchronized: {
        expr(*s.expr);
        std::string mon = monitor_target(sync_monitor(cm_, *s.expr));
        emit(ActionOp::Lock, mon, line);
        stmt(*s.body, tail);
        emit(ActionOp::Unlock, mon, s.span.end.line);
        return;
      }
      case StmtKind::Try:
        if (!s.catches.empty()) unsupported("catch clause", line);
        stmt(*s.body, tail);
        if (s.finally_block) stmt(*s.finally_block, tail);
        return;
      case StmtKind::If:
        unsupported("if statement", line);
      case StmtKind::While:
      case StmtKind::DoWhile:
      case StmtKind::For:
      case StmtKind::ForEach:
        unsupported("loop", line);
      case StmtKind::Throw:
        unsupported("throw statement", line);
      case StmtKind::Break:
      case StmtKind::Continue:
        unsupported("jump statement", line);
    }
    if (out_.size() == before) emit(ActionOp::Local, "-", line);
  }

  // Operands after the first one of &&, || and ?: may not run; they must
  // not touch shared state.
  void conditional_operand(const Expr& e) {
    std::size_t before = out_.size();
    expr(e);
    if (out_.size() != before) unsupported("conditionally evaluated shared access", e.span.begin.line);
  }

  void expr(const Expr& e) {
    std::uint32_t line = e.span.begin.line;
    switch (e.kind) {
      case ExprKind::Literal:
      case ExprKind::This:
      case ExprKind::QualifiedThis:
      case ExprKind::Super:
      case ExprKind::ClassLiteral:
        return;
      case ExprKind::Name:
      case ExprKind::FieldAccess:
        if (const FieldDecl* f = cm_.field_of(e)) {
          read(*f, line);
        } else if (e.kind == ExprKind::FieldAccess) {
          expr(*e.operands[0]);
        }
        return;
      case ExprKind::Unary:
        if (e.is_increment()) {
          update(*e.operands[0], nullptr, true, line);
          return;
        }
        expr(*e.operands[0]);
        return;
      case ExprKind::Binary:
        expr(*e.operands[0]);
        if (e.text == "&&" || e.text == "||")
          conditional_operand(*e.operands[1]);
        else
          expr(*e.operands[1]);
        return;
      case ExprKind::Conditional:
        expr(*e.operands[0]);
        conditional_operand(*e.operands[1]);
        conditional_operand(*e.operands[2]);
        return;
      case ExprKind::Assign:
        update(*e.operands[0], e.operands[1].get(), e.text != "=", line);
        return;
      case ExprKind::ArrayIndex: {
        expr(*e.operands[0]);
        expr(*e.operands[1]);
        if (const FieldDecl* f = array_field(*e.operands[0])) emit(ActionOp::Read, element_target(*f), line);
        return;
      }
      case ExprKind::MethodCall:
        call(e);
        return;
      default:
        for (const auto& op : e.operands)
          if (op) expr(*op);
        return;
    }
  }

  // Field holding the array, looking through nested indexing.
  const FieldDecl* array_field(const Expr& arr) const {
    const Expr* a = strip_parens(&arr);
    while (a->kind == ExprKind::ArrayIndex) a = strip_parens(a->operands[0].get());
    return cm_.field_of(*a);
  }

  // Assignment, compound assignment or increment of `target`.
  void update(const Expr& target_in, const Expr* value, bool reads_first, std::uint32_t line) {
    const Expr* target = strip_parens(&target_in);
    if (const FieldDecl* f = cm_.field_of(*target)) {
      if (reads_first) read(*f, line);
      if (value) expr(*value);
      write(*f, line);
      return;
    }
    if (target->kind == ExprKind::ArrayIndex) {
      expr(*target->operands[0]);
      expr(*target->operands[1]);
      const FieldDecl* f = array_field(*target->operands[0]);
      if (f && reads_first) emit(ActionOp::Read, element_target(*f), line);
      if (value) expr(*value);
      if (f) emit(ActionOp::Write, element_target(*f), line);
      return;
    }
    if (target->kind == ExprKind::FieldAccess) expr(*target->operands[0]);
    if (value) expr(*value);
  }

  void call(const Expr& e) {
    std::uint32_t line = e.span.begin.line;
    const Expr* q = strip_parens(e.qualifier());
    auto args = [&] {
      for (const auto& a : e.call_args()) expr(*a);
    };
    if (q) {
      const AnalysisOptions& opts = *cm_.options;
      bool is_lock = contains_name(opts.lock_methods, e.text);
      bool is_unlock = contains_name(opts.unlock_methods, e.text);
      if (is_lock || is_unlock) {
        for (const FieldDecl* f : lock_fields_) {
          if (!represents(cm_, *f, *stack_.back(), *q)) continue;
          args();
          Monitor m{MonitorKind::LockField, cm_.class_id() + "." + f->name};
          emit(is_lock ? ActionOp::Lock : ActionOp::Unlock, monitor_target(m), line);
          return;
        }
      }
      if (const FieldDecl* f = cm_.field_of(*q)) {
        read(*f, line);
        args();
        if (cm_.is_thread_safe_type(*f)) return;
        bool mutates = contains_name(opts.mutator_methods, e.text);
        emit(mutates ? ActionOp::Write : ActionOp::Read, state_target(*f), line);
        return;
      }
    }
    auto callees = resolve_call(cm_, e);
    if (callees.size() > 1) unsupported("ambiguous call to " + e.text, line);
    if (q) expr(*q);
    args();
    if (callees.size() == 1) method(*callees[0]);
  }

  void check_balanced(const MethodDecl& m) const {
    std::map<std::string, int> depth;
    for (const auto& a : out_) {
      if (a.op == ActionOp::Lock) ++depth[a.target];
      if (a.op == ActionOp::Unlock && --depth[a.target] < 0)
        throw UnsupportedForOracle(cm_.class_id() + "." + m.name + ": unlock of " + a.target +
                                   " without a matching lock");
    }
    for (const auto& [mon, d] : depth)
      if (d != 0)
        throw UnsupportedForOracle(cm_.class_id() + "." + m.name + ": " + mon +
                                   " is still held when the method returns");
  }

  const ClassModel& cm_;
  int thread_;
  std::vector<const FieldDecl*> lock_fields_;
  std::vector<const MethodDecl*> stack_;
  std::vector<TraceAction> out_;
};

std::vector<TraceAction> init_actions(const ClassModel& cm) {
  std::vector<TraceAction> inits, publish;
  for (const auto& f : cm.decl->fields) {
    TraceAction a;
    a.thread = 0;
    a.target = f.name;
    a.line = f.span.begin.line;
    if (f.is_final()) {
      a.op = ActionOp::FinalInit;
      inits.push_back(a);
    } else if (is_default_initialized(f)) {
      a.op = ActionOp::DefaultInit;
      inits.push_back(a);
    } else {
      // Non-default value without final: published by an ordinary write
      // that gets no initialization edge.
      a.op = f.is_volatile() ? ActionOp::VolatileWrite : ActionOp::Write;
      publish.push_back(a);
    }
  }
  inits.insert(inits.end(), publish.begin(), publish.end());
  for (std::size_t i = 0; i < inits.size(); ++i) inits[i].seq = static_cast<int>(i);
  return inits;
}

}  // namespace

std::vector<TraceAction> method_actions(const ClassModel& cm, const MethodDecl& m, int thread) {
  return ActionBuilder(cm, thread).run(m);
}

std::vector<ThreadProgram> driver_from_class(const ClassModel& cm) {
  std::vector<const MethodDecl*> publics;
  for (const auto& m : cm.decl->methods)
    if (m.is_public() && m.body) publics.push_back(&m);
  std::vector<std::vector<TraceAction>> bodies;
  for (const MethodDecl* m : publics) bodies.push_back(method_actions(cm, *m, 1));

  std::vector<TraceAction> main = init_actions(cm);
  std::vector<ThreadProgram> out;
  for (std::size_t i = 0; i < publics.size(); ++i) {
    for (std::size_t j = i; j < publics.size(); ++j) {
      ThreadProgram p;
      p.name = cm.class_id() + ": " + publics[i]->name + " || " + publics[j]->name;
      p.main = main;
      p.threads.push_back(bodies[i]);
      p.threads.push_back(bodies[j]);
      for (auto& a : p.threads[1]) a.thread = 2;
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace threadlint
