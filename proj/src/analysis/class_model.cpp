#include "threadlint/class_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cctype>
#include <cstdlib>

namespace threadlint {
namespace {

// Public types of java.util.concurrent and its subpackages, used to resolve
// simple names brought in by on-demand imports.
constexpr std::array<std::string_view, 64> kConcurrentTypes = {
    "java.util.concurrent.ArrayBlockingQueue",
    "java.util.concurrent.BlockingDeque",
    "java.util.concurrent.BlockingQueue",
    "java.util.concurrent.Callable",
    "java.util.concurrent.CompletableFuture",
    "java.util.concurrent.CompletionService",
    "java.util.concurrent.ConcurrentHashMap",
    "java.util.concurrent.ConcurrentLinkedDeque",
    "java.util.concurrent.ConcurrentLinkedQueue",
    "java.util.concurrent.ConcurrentMap",
    "java.util.concurrent.ConcurrentNavigableMap",
    "java.util.concurrent.ConcurrentSkipListMap",
    "java.util.concurrent.ConcurrentSkipListSet",
    "java.util.concurrent.CopyOnWriteArrayList",
    "java.util.concurrent.CopyOnWriteArraySet",
    "java.util.concurrent.CountDownLatch",
    "java.util.concurrent.CyclicBarrier",
    "java.util.concurrent.DelayQueue",
    "java.util.concurrent.Exchanger",
    "java.util.concurrent.ExecutorCompletionService",
    "java.util.concurrent.Executor",
    "java.util.concurrent.ExecutorService",
    "java.util.concurrent.Executors",
    "java.util.concurrent.ForkJoinPool",
    "java.util.concurrent.Future",
    "java.util.concurrent.FutureTask",
    "java.util.concurrent.LinkedBlockingDeque",
    "java.util.concurrent.LinkedBlockingQueue",
    "java.util.concurrent.LinkedTransferQueue",
    "java.util.concurrent.Phaser",
    "java.util.concurrent.PriorityBlockingQueue",
    "java.util.concurrent.ScheduledExecutorService",
    "java.util.concurrent.ScheduledFuture",
    "java.util.concurrent.ScheduledThreadPoolExecutor",
    "java.util.concurrent.Semaphore",
    "java.util.concurrent.SynchronousQueue",
    "java.util.concurrent.ThreadLocalRandom",
    "java.util.concurrent.ThreadPoolExecutor",
    "java.util.concurrent.TimeUnit",
    "java.util.concurrent.TransferQueue",
    "java.util.concurrent.atomic.AtomicBoolean",
    "java.util.concurrent.atomic.AtomicInteger",
    "java.util.concurrent.atomic.AtomicIntegerArray",
    "java.util.concurrent.atomic.AtomicLong",
    "java.util.concurrent.atomic.AtomicLongArray",
    "java.util.concurrent.atomic.AtomicMarkableReference",
    "java.util.concurrent.atomic.AtomicReference",
    "java.util.concurrent.atomic.AtomicReferenceArray",
    "java.util.concurrent.atomic.AtomicStampedReference",
    "java.util.concurrent.atomic.DoubleAccumulator",
    "java.util.concurrent.atomic.DoubleAdder",
    "java.util.concurrent.atomic.LongAccumulator",
    "java.util.concurrent.atomic.LongAdder",
    "java.util.concurrent.locks.Condition",
    "java.util.concurrent.locks.Lock",
    "java.util.concurrent.locks.LockSupport",
    "java.util.concurrent.locks.ReadWriteLock",
    "java.util.concurrent.locks.ReentrantLock",
    "java.util.concurrent.locks.ReentrantReadWriteLock",
    "java.util.concurrent.locks.StampedLock",
    "java.util.concurrent.locks.AbstractQueuedSynchronizer",
    "java.util.concurrent.locks.AbstractOwnableSynchronizer",
    "java.util.concurrent.locks.AbstractQueuedLongSynchronizer",
    "java.util.concurrent.RecursiveTask",
};

bool is_known_concurrent_type(std::string_view qualified) {
  return std::find(kConcurrentTypes.begin(), kConcurrentTypes.end(), qualified) !=
         kConcurrentTypes.end();
}

// Walks one callable (or one field initializer) resolving names and
// classifying field references.
class AccessCollector {
 public:
  AccessCollector(ClassModel& cm, const MethodDecl* callable, AccessContext context)
      : cm_(cm), callable_(callable), context_(context) {}

  void run_callable() {
    scopes_.emplace_back();
    for (const auto& p : callable_->params) {
      declare(p.name);
      auto& info = local_info(p.name);
      info.is_parameter = true;
      info.assigned_values.push_back(nullptr);
    }
    if (callable_->body) stmt(*callable_->body);
    scopes_.pop_back();
  }

  void run_expr(const Expr& e, const Stmt* owner) {
    owner_ = owner;
    expr(e);
  }

 private:
  bool is_local(const std::string& name) const {
    for (const auto& s : scopes_)
      if (s.count(name)) return true;
    return false;
  }
  void declare(const std::string& name) {
    scopes_.back().insert(name);
    if (callable_) ++local_info(name).declarations;
  }
  LocalVarInfo& local_info(const std::string& name) {
    return cm_.locals[{callable_, name}];
  }

  void stmt(const Stmt& s) {
    const Stmt* saved = owner_;
    owner_ = &s;
    switch (s.kind) {
      case StmtKind::Block:
        scopes_.emplace_back();
        for (const auto& c : s.stmts) stmt(*c);
        scopes_.pop_back();
        break;
      case StmtKind::LocalVar:
        for (const auto& v : s.vars) {
          if (v.init) expr(*v.init);
          declare(v.name);
          if (v.init) local_info(v.name).assigned_values.push_back(v.init.get());
        }
        break;
      case StmtKind::For:
        scopes_.emplace_back();
        for (const auto& i : s.for_init) stmt(*i);
        owner_ = &s;
        if (s.expr) expr(*s.expr);
        for (const auto& u : s.for_update) expr(*u);
        stmt(*s.body);
        scopes_.pop_back();
        break;
      case StmtKind::ForEach:
        scopes_.emplace_back();
        expr(*s.expr);
        declare(s.vars[0].name);
        local_info(s.vars[0].name).assigned_values.push_back(nullptr);
        stmt(*s.body);
        scopes_.pop_back();
        break;
      case StmtKind::Try:
        stmt(*s.body);
        for (const auto& c : s.catches) {
          scopes_.emplace_back();
          declare(c.name);
          local_info(c.name).assigned_values.push_back(nullptr);
          stmt(*c.body);
          scopes_.pop_back();
        }
        if (s.finally_block) stmt(*s.finally_block);
        break;
      default:
        if (s.expr) expr(*s.expr);
        if (s.body) stmt(*s.body);
        if (s.else_stmt) stmt(*s.else_stmt);
        break;
    }
    owner_ = saved;
  }

  // Resolves a reference to one of the class's own fields.
  const FieldDecl* resolve(const Expr& e) const {
    const ClassDecl& cls = *cm_.decl;
    if (e.kind == ExprKind::Name) {
      if (is_local(e.text)) return nullptr;
      return cls.find_field(e.text);
    }
    if (e.kind == ExprKind::FieldAccess) {
      const Expr& q = *e.operands[0];
      if (q.kind == ExprKind::This) return cls.find_field(e.text);
      if (q.kind == ExprKind::QualifiedThis && q.operands[0]->kind == ExprKind::Name &&
          q.operands[0]->text == cls.name)
        return cls.find_field(e.text);
      if (q.kind == ExprKind::Name && q.text == cls.name && !is_local(q.text) &&
          !cls.find_field(q.text)) {
        const FieldDecl* f = cls.find_field(e.text);
        return f && f->is_static() ? f : nullptr;
      }
    }
    return nullptr;
  }

  static const Expr* skip_parens_up(const std::vector<const Expr*>& parents, std::size_t& i) {
    while (i > 0 && parents[i - 1]->kind == ExprKind::Paren) --i;
    return i > 0 ? parents[i - 1] : nullptr;
  }

  void record(const Expr& ref, const FieldDecl& field) {
    FieldAccess a;
    a.field = &field;
    a.context = context_;
    a.enclosing = callable_;
    a.expr = &ref;
    a.site = &ref;
    a.span = ref.span;
    a.kind = AccessKind::Read;

    // Walk up through parentheses and array indexing.
    std::size_t i = parents_.size();
    const Expr* child = &ref;
    const Expr* parent = skip_parens_up(parents_, i);
    bool through_index = false;
    while (parent && parent->kind == ExprKind::ArrayIndex && parent->operands[0].get() == child) {
      through_index = true;
      child = parent;
      --i;
      parent = skip_parens_up(parents_, i);
    }
    auto is_child = [&](const Expr* p, std::size_t k) {
      if (!p || p->operands.size() <= k || !p->operands[k]) return false;
      const Expr* op = p->operands[k].get();
      while (op->kind == ExprKind::Paren) op = op->operands[0].get();
      return op == child;
    };
    if (parent && parent->kind == ExprKind::Assign && is_child(parent, 0)) {
      a.kind = through_index ? AccessKind::ArrayElementWrite : AccessKind::Write;
      a.also_reads = parent->text != "=";
      a.site = parent;
    } else if (parent && parent->is_increment()) {
      a.kind = through_index ? AccessKind::ArrayElementWrite : AccessKind::Write;
      a.also_reads = true;
      a.site = parent;
    } else if (!through_index && parent && parent->kind == ExprKind::MethodCall &&
               is_child(parent, 0) && contains_name(cm_.options->mutator_methods, parent->text)) {
      a.kind = AccessKind::MutatorCall;
      a.site = parent;
    }
    cm_.access_by_expr[ref.id] = cm_.accesses.size();
    cm_.accesses.push_back(a);
  }

  void expr(const Expr& e) {
    if (owner_) cm_.owner_stmt[e.id] = owner_;
    if (e.kind == ExprKind::MethodCall) cm_.calls.push_back({callable_, &e});
    if (e.kind == ExprKind::Name && is_local(e.text)) cm_.local_refs.insert(e.id);
    if (const FieldDecl* f = resolve(e)) {
      cm_.field_refs[e.id] = f;
      record(e, *f);
      if (e.kind == ExprKind::FieldAccess) {
        // Qualifier is `this`, `C.this` or the class name: nothing to collect.
        for_each_expr(*e.operands[0], [&](const Expr& sub) {
          if (owner_) cm_.owner_stmt[sub.id] = owner_;
        });
      }
      return;
    }
    if (e.kind == ExprKind::Assign && e.operands[0]->kind == ExprKind::Name &&
        is_local(e.operands[0]->text) && callable_) {
      // Compound assignments keep the variable's value unknown.
      local_info(e.operands[0]->text)
          .assigned_values.push_back(e.text == "=" ? e.operands[1].get() : nullptr);
    }
    if (e.is_increment() && e.operands[0]->kind == ExprKind::Name &&
        is_local(e.operands[0]->text) && callable_) {
      local_info(e.operands[0]->text).assigned_values.push_back(nullptr);
    }
    parents_.push_back(&e);
    for (const auto& op : e.operands)
      if (op) expr(*op);
    parents_.pop_back();
  }

  ClassModel& cm_;
  const MethodDecl* callable_;
  AccessContext context_;
  const Stmt* owner_ = nullptr;
  std::vector<std::unordered_set<std::string>> scopes_;
  std::vector<const Expr*> parents_;
};

bool literal_is_zero(const std::string& text) {
  std::string digits;
  bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  bool bin = text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B');
  for (std::size_t i = (hex || bin) ? 2 : 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '_') continue;
    if (!hex && (c == 'l' || c == 'L' || c == 'f' || c == 'F' || c == 'd' || c == 'D')) continue;
    if (hex && (c == 'l' || c == 'L')) continue;
    digits += c;
  }
  if (digits.empty()) return false;
  if (hex || bin)
    return std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; });
  char* end = nullptr;
  double v = std::strtod(digits.c_str(), &end);
  return end && *end == '\0' && v == 0.0;
}

}  // namespace

std::string_view access_kind_name(AccessKind k) {
  switch (k) {
    case AccessKind::Read:
      return "read";
    case AccessKind::Write:
      return "write";
    case AccessKind::ArrayElementWrite:
      return "arrayElementWrite";
    case AccessKind::MutatorCall:
      return "mutatorCall";
  }
  return "?";
}

const FieldDecl* ClassModel::field_of(const Expr& e) const {
  auto it = field_refs.find(e.id);
  return it == field_refs.end() ? nullptr : it->second;
}

const FieldAccess* ClassModel::access_of(const Expr& e) const {
  auto it = access_by_expr.find(e.id);
  return it == access_by_expr.end() ? nullptr : &accesses[it->second];
}

const LocalVarInfo* ClassModel::local(const MethodDecl& m, const std::string& name) const {
  auto it = locals.find({&m, name});
  return it == locals.end() ? nullptr : &it->second;
}

std::string ClassModel::resolve_type(std::string_view type) const {
  std::string erased = erase_type_arguments(type);
  if (erased.find('.') != std::string::npos) return erased;
  for (const auto& imp : ast->imports) {
    if (imp.is_static || imp.on_demand) continue;
    auto dot = imp.name.rfind('.');
    if (imp.name.compare(dot == std::string::npos ? 0 : dot + 1, std::string::npos, erased) == 0)
      return imp.name;
  }
  for (const auto& imp : ast->imports) {
    if (imp.is_static || !imp.on_demand) continue;
    std::string candidate = imp.name + "." + erased;
    if (is_known_concurrent_type(candidate) || contains_name(options->allowlist.exact_types, candidate))
      return candidate;
  }
  // Anything else is taken to live in the same package.
  static constexpr std::array<std::string_view, 9> kLang = {
      "String", "Object", "Integer", "Long", "Boolean", "Double", "Thread", "Runnable", "Class"};
  if (ast->package_name.empty() || std::find(kLang.begin(), kLang.end(), erased) != kLang.end() ||
      erased.empty() || std::islower(static_cast<unsigned char>(erased[0])))
    return erased;
  return ast->package_name + "." + erased;
}

bool ClassModel::is_thread_safe_type(const FieldDecl& f) const {
  if (is_array_type(f.type)) return false;
  return options->allowlist.contains(resolve_type(f.type), simple_type_name(f.type));
}

std::vector<const MethodDecl*> ClassModel::callables() const {
  std::vector<const MethodDecl*> out;
  for (const auto& m : decl->methods) out.push_back(&m);
  for (const auto& m : decl->constructors) out.push_back(&m);
  for (const auto& m : decl->initializers) out.push_back(&m);
  return out;
}

ClassModel build_class_model(const Ast& ast, const ClassDecl& decl, const AnalysisOptions& options) {
  ClassModel cm;
  cm.ast = &ast;
  cm.decl = &decl;
  cm.options = &options;
  for (const auto& a : decl.mods.annotations) {
    if (contains_name(options.annotation_names, a.simple_name()) ||
        contains_name(options.annotation_names, a.name))
      cm.annotated = true;
  }

  for (const auto& f : decl.fields) {
    if (!f.init) continue;
    FieldAccess w;
    w.field = &f;
    w.kind = AccessKind::Write;
    w.context = AccessContext::FieldInitializer;
    w.span = f.declarator;
    w.expr = f.init.get();
    w.site = f.init.get();
    w.is_initializer_write = true;
    cm.accesses.push_back(w);
    AccessCollector(cm, nullptr, AccessContext::FieldInitializer).run_expr(*f.init, nullptr);
  }
  for (const auto& m : decl.methods) AccessCollector(cm, &m, AccessContext::Method).run_callable();
  for (const auto& m : decl.constructors)
    AccessCollector(cm, &m, AccessContext::Constructor).run_callable();
  for (const auto& m : decl.initializers)
    AccessCollector(cm, &m, AccessContext::Initializer).run_callable();

  std::stable_sort(cm.accesses.begin(), cm.accesses.end(),
                   [](const FieldAccess& a, const FieldAccess& b) {
                     return a.span.begin.offset < b.span.begin.offset;
                   });
  cm.access_by_expr.clear();
  for (std::size_t i = 0; i < cm.accesses.size(); ++i) {
    cm.accesses[i].index = i;
    if (!cm.accesses[i].is_initializer_write) cm.access_by_expr[cm.accesses[i].expr->id] = i;
  }
  std::stable_sort(cm.calls.begin(), cm.calls.end(), [](const CallSite& a, const CallSite& b) {
    return a.call->span.begin.offset < b.call->span.begin.offset;
  });
  return cm;
}

std::vector<Alert> check_no_escaping(const ClassModel& cm) {
  std::vector<Alert> out;
  for (const auto& f : cm.decl->fields) {
    if (f.is_private()) continue;
    Alert a;
    a.rule = Rule::P1;
    a.file = cm.file();
    a.primary = f.span;
    a.field = f.name;
    a.class_id = cm.class_id();
    a.message = "field '" + f.name + "' is not private, so its state can be accessed without "
                "going through the methods of " + cm.decl->name;
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Alert> check_safe_publication(const ClassModel& cm) {
  std::vector<Alert> out;
  for (const auto& f : cm.decl->fields) {
    if (f.is_final() || f.is_volatile() || is_default_initialized(f)) continue;
    Alert a;
    a.rule = Rule::P2;
    a.file = cm.file();
    a.primary = f.span;
    a.field = f.name;
    a.class_id = cm.class_id();
    a.message = "field '" + f.name +
                "' is not safely published: it is initialized to a non-default value but is "
                "neither final nor volatile";
    out.push_back(std::move(a));
  }
  return out;
}

bool is_default_initialized(const FieldDecl& f) {
  if (!f.init) return true;
  const Expr& init = *f.init;
  if (init.kind != ExprKind::Literal) return false;
  std::string type = erase_type_arguments(f.type);
  bool array = is_array_type(f.type);
  if (!array && (type == "int" || type == "long" || type == "short" || type == "byte" ||
                 type == "float" || type == "double")) {
    return (init.literal == LiteralKind::Integer || init.literal == LiteralKind::Floating) &&
           literal_is_zero(init.text);
  }
  if (!array && type == "char") {
    if (init.literal == LiteralKind::Integer) return literal_is_zero(init.text);
    return init.literal == LiteralKind::Character &&
           (init.text == "'\\u0000'" || init.text == "'\\0'" || init.text == "'\\000'");
  }
  if (!array && type == "boolean") return init.literal == LiteralKind::Boolean && init.text == "false";
  return init.literal == LiteralKind::Null;
}

bool is_exposed(const ClassModel& cm, const FieldAccess& a) {
  if (!cm.annotated) return false;
  if (a.field->is_volatile()) return false;
  if (a.is_initializer_write) return false;
  if (a.context != AccessContext::Method) return false;
  if (cm.is_thread_safe_type(*a.field)) return false;
  return true;
}

std::vector<const FieldAccess*> exposed_accesses(const ClassModel& cm) {
  std::vector<const FieldAccess*> out;
  for (const auto& a : cm.accesses)
    if (is_exposed(cm, a)) out.push_back(&a);
  return out;
}

bool is_modifying(const FieldAccess& a) {
  return a.kind == AccessKind::Write || a.kind == AccessKind::ArrayElementWrite ||
         a.kind == AccessKind::MutatorCall;
}

}  // namespace threadlint
