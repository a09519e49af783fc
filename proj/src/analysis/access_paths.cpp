#include "threadlint/access_paths.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace threadlint {

namespace {

bool is_own_receiver(const ClassModel& cm, const Expr* q) {
  if (!q) return true;
  if (q->kind == ExprKind::This) return true;
  if (q->kind == ExprKind::QualifiedThis) return q->operands[0]->text == cm.decl->name;
  // Static call through the class name, unless a field or local shadows it.
  return q->kind == ExprKind::Name && q->text == cm.decl->name && !cm.field_of(*q) &&
         !cm.local_refs.count(q->id);
}

std::string visibility_word(Visibility v) {
  return v == Visibility::Protected ? "protected" : "package-private";
}

}  // namespace

std::vector<const MethodDecl*> resolve_call(const ClassModel& cm, const Expr& call) {
  std::vector<const MethodDecl*> out;
  if (call.kind != ExprKind::MethodCall || !is_own_receiver(cm, call.qualifier())) return out;
  std::size_t argc = call.call_args().size();
  for (const auto& m : cm.decl->methods) {
    if (m.name != call.text) continue;
    std::size_t n = m.params.size();
    bool varargs = n > 0 && m.params.back().varargs;
    if (n == argc || (varargs && argc + 1 >= n)) out.push_back(&m);
  }
  return out;
}

std::vector<AccessPathFact> AccessPaths::public_facts(const FieldAccess& a) const {
  std::vector<AccessPathFact> out;
  if (a.index >= by_access_.size()) return out;
  for (std::size_t i : by_access_[a.index])
    if (facts_[i].method->is_public()) out.push_back(facts_[i]);
  return out;
}

AccessPaths provides_access(const ClassModel& cm) {
  AccessPaths result;
  result.by_access_.resize(cm.accesses.size());

  std::vector<const MethodDecl*> methods;
  std::map<const MethodDecl*, std::size_t> method_index;
  for (const auto& m : cm.decl->methods) {
    method_index[&m] = methods.size();
    methods.push_back(&m);
  }

  // Base: exposed accesses contained in each method.
  std::vector<std::set<std::size_t>> reach(methods.size());
  for (const auto& a : cm.accesses) {
    if (!is_exposed(cm, a) || !a.enclosing) continue;
    auto it = method_index.find(a.enclosing);
    if (it != method_index.end()) reach[it->second].insert(a.index);
  }

  struct Edge {
    std::size_t caller;
    const Expr* call;
    std::vector<std::size_t> callees;
  };
  std::vector<Edge> edges;
  for (const auto& c : cm.calls) {
    if (!c.caller) continue;
    auto it = method_index.find(c.caller);
    if (it == method_index.end()) continue;
    Edge e{it->second, c.call, {}};
    for (const MethodDecl* k : resolve_call(cm, *c.call)) e.callees.push_back(method_index.at(k));
    if (!e.callees.empty()) edges.push_back(std::move(e));
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : edges) {
      for (std::size_t k : e.callees) {
        for (std::size_t a : reach[k]) changed |= reach[e.caller].insert(a).second;
      }
    }
  }

  // Materialize the facts.
  std::vector<std::vector<AccessPathFact>> per_access(cm.accesses.size());
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (const auto& a : cm.accesses) {
      if (a.enclosing == methods[mi] && reach[mi].count(a.index))
        per_access[a.index].push_back({methods[mi], a.site, &a});
    }
  }
  for (const auto& e : edges) {
    std::set<std::size_t> provided;
    for (std::size_t k : e.callees) provided.insert(reach[k].begin(), reach[k].end());
    for (std::size_t a : provided)
      per_access[a].push_back({methods[e.caller], e.call, &cm.accesses[a]});
  }

  std::set<std::pair<const MethodDecl*, const FieldDecl*>> noted;
  for (std::size_t a = 0; a < per_access.size(); ++a) {
    auto& facts = per_access[a];
    std::stable_sort(facts.begin(), facts.end(), [&](const AccessPathFact& x, const AccessPathFact& y) {
      std::size_t mx = method_index.at(x.method), my = method_index.at(y.method);
      if (mx != my) return mx < my;
      return x.expr->span.begin.offset < y.expr->span.begin.offset;
    });
    for (const auto& f : facts) {
      result.by_access_[a].push_back(result.facts_.size());
      result.facts_.push_back(f);
      Visibility v = f.method->visibility();
      if ((v == Visibility::Package || v == Visibility::Protected) &&
          noted.insert({f.method, f.access->field}).second) {
        result.notes_.push_back(cm.class_id() + "." + f.method->name + " is " + visibility_word(v) +
                                " and reaches field '" + f.access->field->name +
                                "'; only public methods are treated as entry points");
      }
    }
  }
  return result;
}

std::vector<const Expr*> public_access(const AccessPaths& paths, const FieldAccess& a) {
  std::vector<const Expr*> out;
  for (const auto& f : paths.public_facts(a)) out.push_back(f.expr);
  return out;
}

}  // namespace threadlint
