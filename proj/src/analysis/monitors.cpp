#include "threadlint/monitors.hpp"

#include <algorithm>

#include "threadlint/printer.hpp"

namespace threadlint {

namespace {

const Expr* strip_parens(const Expr* e) {
  while (e && e->kind == ExprKind::Paren) e = e->operands[0].get();
  return e;
}

std::string field_identity(const ClassModel& cm, const FieldDecl& f) {
  return cm.class_id() + "." + f.name;
}

}  // namespace

std::string describe(const Monitor& m) {
  switch (m.kind) {
    case MonitorKind::LockField:
      return "lock " + m.identity;
    case MonitorKind::ThisMonitor:
      return "this";
    case MonitorKind::ClassMonitor:
      return m.identity + ".class";
    case MonitorKind::SyncExpr:
      return "synchronized(" + m.identity + ")";
  }
  return m.identity;
}

bool is_lock_type(std::string_view type_name, const AnalysisOptions& options) {
  if (is_array_type(type_name)) return false;
  std::string erased = erase_type_arguments(type_name);
  std::string simple = simple_type_name(type_name);
  for (const auto& t : options.lock_types)
    if (t == erased || t == simple) return true;
  return false;
}

bool represents(const ClassModel& cm, const FieldDecl& lock_field, const MethodDecl& m,
                const Expr& var) {
  const Expr* v = strip_parens(&var);
  if (cm.field_of(*v) == &lock_field) return true;
  if (v->kind != ExprKind::Name || !cm.local_refs.count(v->id)) return false;
  const LocalVarInfo* info = cm.local(m, v->text);
  if (!info || info->is_parameter || info->declarations != 1 || info->assigned_values.size() != 1)
    return false;
  const Expr* value = strip_parens(info->assigned_values[0]);
  return value && cm.field_of(*value) == &lock_field;
}

MethodFlow::MethodFlow(const ClassModel& cm, const MethodDecl& m)
    : method_(&m), cfg_(build_cfg(m)), dom_(cfg_) {
  const AnalysisOptions& opts = *cm.options;
  std::vector<const FieldDecl*> lock_fields;
  for (const auto& f : cm.decl->fields)
    if (is_lock_type(f.type, opts)) lock_fields.push_back(&f);

  for (const auto& c : cm.calls) {
    if (c.caller != &m || !c.call->qualifier()) continue;
    bool is_lock = contains_name(opts.lock_methods, c.call->text);
    bool is_unlock = contains_name(opts.unlock_methods, c.call->text);
    if (!is_lock && !is_unlock) continue;
    for (const FieldDecl* f : lock_fields) {
      if (!represents(cm, *f, m, *c.call->qualifier())) continue;
      LockCall lc{c.call, f, cfg_.node_of(*c.call)};
      (is_lock ? lock_calls_ : unlock_calls_).push_back(lc);
    }
  }
  for (const auto& l : lock_calls_) {
    if (l.node < 0 || !dom_.reachable(l.node)) continue;
    for (const auto& u : unlock_calls_) {
      if (u.field != l.field || u.node < 0 || !dom_.reachable(u.node)) continue;
      if (dom_.dominates(l.node, u.node)) windows_.push_back({l.node, u.node, l.field});
    }
  }

  if (m.body) {
    std::vector<const Stmt*> stack;
    auto walk = [&](auto&& self, const Stmt& s) -> void {
      for_each_own_expr_root(s, [&](const Expr& root) {
        for_each_expr(root, [&](const Expr& e) {
          if (!stack.empty()) syncs_[e.id] = stack;
        });
      });
      if (s.kind == StmtKind::Synchronized) stack.push_back(&s);
      for (const auto& c : s.for_init) self(self, *c);
      for (const auto& c : s.stmts) self(self, *c);
      if (s.body) self(self, *s.body);
      if (s.else_stmt) self(self, *s.else_stmt);
      for (const auto& c : s.catches) self(self, *c.body);
      if (s.finally_block) self(self, *s.finally_block);
      if (s.kind == StmtKind::Synchronized) stack.pop_back();
    };
    walk(walk, *m.body);
  }
}

const std::vector<const Stmt*>& MethodFlow::enclosing_syncs(const Expr& e) const {
  static const std::vector<const Stmt*> kNone;
  auto it = syncs_.find(e.id);
  return it == syncs_.end() ? kNone : it->second;
}

bool locally_locked_on(const MethodFlow& flow, NodeId e, const FieldDecl& lock_field,
                       const AnalysisOptions& options) {
  if (!is_lock_type(lock_field.type, options)) return false;
  const DomInfo& d = flow.dom();
  if (e < 0 || !d.reachable(e) || !d.reaches_exit(e)) return false;
  for (const auto& w : flow.windows()) {
    if (w.field != &lock_field || !d.reaches_exit(w.unlock_call)) continue;
    if (d.dominates(w.lock_call, e) && d.post_dominates(w.unlock_call, e)) return true;
  }
  return false;
}

Monitor sync_monitor(const ClassModel& cm, const Expr& e) {
  const Expr* x = strip_parens(&e);
  if (x->kind == ExprKind::This) return {MonitorKind::ThisMonitor, "this"};
  if (x->kind == ExprKind::ClassLiteral &&
      (x->text == cm.decl->name || x->text == cm.decl->qualified_name))
    return {MonitorKind::ClassMonitor, cm.class_id()};
  std::string text = compact_text(*x, [&](const Expr& sub) -> std::optional<std::string> {
    if (sub.kind != ExprKind::Name) return std::nullopt;
    const FieldDecl* f = cm.field_of(sub);
    if (!f) return std::nullopt;
    return (f->is_static() ? cm.decl->name : std::string("this")) + "." + f->name;
  });
  return {MonitorKind::SyncExpr, text};
}

std::vector<Monitor> locally_synchronized_on(const ClassModel& cm, const MethodFlow& flow,
                                             const Expr& e) {
  std::vector<Monitor> out;
  const MethodDecl& m = flow.method();
  if (m.is_synchronized()) {
    out.push_back(m.is_static() ? Monitor{MonitorKind::ClassMonitor, cm.class_id()}
                                : Monitor{MonitorKind::ThisMonitor, "this"});
  }
  for (const Stmt* s : flow.enclosing_syncs(e)) out.push_back(sync_monitor(cm, *s->expr));
  return out;
}

std::set<Monitor> protecting_monitors(const ClassModel& cm, const MethodFlow& flow, const Expr& e) {
  std::set<Monitor> out;
  for (auto& m : locally_synchronized_on(cm, flow, e)) out.insert(std::move(m));
  NodeId n = flow.cfg().node_of(e);
  std::set<const FieldDecl*> seen;
  for (const auto& w : flow.windows()) {
    if (!seen.insert(w.field).second) continue;
    if (locally_locked_on(flow, n, *w.field, *cm.options))
      out.insert({MonitorKind::LockField, field_identity(cm, *w.field)});
  }
  return out;
}

const MethodFlow& FlowCache::get(const MethodDecl& m) {
  auto& slot = flows_[&m];
  if (!slot) slot = std::make_unique<MethodFlow>(cm_, m);
  return *slot;
}

std::set<Monitor> monitors(const ClassModel& cm, const AccessPaths& paths, FlowCache& flows,
                           const FieldAccess& a) {
  auto facts = paths.public_facts(a);
  if (facts.empty()) return {};
  std::set<Monitor> common;
  bool first = true;
  for (const auto& f : facts) {
    std::set<Monitor> here = protecting_monitors(cm, flows.get(*f.method), *f.expr);
    if (first) {
      common = std::move(here);
      first = false;
    } else {
      std::set<Monitor> keep;
      std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                            std::inserter(keep, keep.end()));
      common = std::move(keep);
    }
    if (common.empty()) break;
  }
  return common;
}

}  // namespace threadlint
