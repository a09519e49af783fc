#include "threadlint/race_analysis.hpp"

#include <algorithm>

namespace threadlint {

namespace {

std::string at(const FieldAccess& a) {
  return std::to_string(a.span.begin.line) + ":" + std::to_string(a.span.begin.column);
}

std::string kind_word(const FieldAccess& a) {
  switch (a.kind) {
    case AccessKind::Read:
      return "read";
    case AccessKind::Write:
      return "write";
    case AccessKind::ArrayElementWrite:
      return "array element write";
    case AccessKind::MutatorCall:
      return "mutating call";
  }
  return "access";
}

std::string monitor_list(const std::set<Monitor>& ms) {
  if (ms.empty()) return "none";
  std::string out;
  for (const auto& m : ms) {
    if (!out.empty()) out += ", ";
    out += describe(m);
  }
  return out;
}

}  // namespace

std::vector<ConflictPair> conflicting_pairs(const ClassModel& cm) {
  std::vector<ConflictPair> out;
  auto exposed = exposed_accesses(cm);
  for (std::size_t i = 0; i < exposed.size(); ++i) {
    for (std::size_t j = i; j < exposed.size(); ++j) {
      const FieldAccess* x = exposed[i];
      const FieldAccess* y = exposed[j];
      if (x->field != y->field) continue;
      if (is_modifying(*x))
        out.push_back({x, y});
      else if (is_modifying(*y))
        out.push_back({y, x});
    }
  }
  return out;
}

MonitorInfo compute_monitor_info(const ClassModel& cm, const AccessPaths& paths, FlowCache& flows) {
  MonitorInfo info;
  for (const FieldAccess* a : exposed_accesses(cm)) {
    info.by_access[a->index] = monitors(cm, paths, flows, *a);
  }
  return info;
}

std::vector<Alert> check_correct_synchronization(const ClassModel& cm, const AccessPaths& paths,
                                                 const MonitorInfo& info) {
  std::vector<Alert> out;
  auto monitors_of = [&](const FieldAccess& a) -> const std::set<Monitor>& {
    static const std::set<Monitor> kEmpty;
    auto it = info.by_access.find(a.index);
    return it == info.by_access.end() ? kEmpty : it->second;
  };
  for (const auto& p : conflicting_pairs(cm)) {
    const auto& ma = monitors_of(*p.a);
    const auto& mb = monitors_of(*p.b);
    bool shared = std::any_of(ma.begin(), ma.end(), [&](const Monitor& m) { return mb.count(m) > 0; });
    if (shared) continue;

    Alert alert;
    alert.rule = Rule::P3;
    alert.file = cm.file();
    alert.primary = p.a->span;
    alert.secondary = p.b->span;
    alert.field = p.a->field->name;
    alert.class_id = cm.class_id();
    std::string pair = "conflicting " + kind_word(*p.a) + " at " + at(*p.a) + " and " +
                       kind_word(*p.b) + " at " + at(*p.b) + " on field '" + p.a->field->name + "'";
    const FieldAccess* orphan = paths.public_facts(*p.a).empty()   ? p.a
                                : paths.public_facts(*p.b).empty() ? p.b
                                                                   : nullptr;
    if (orphan) {
      alert.message = pair + ": no public access path reaches the " + kind_word(*orphan) +
                      " at " + at(*orphan);
    } else {
      alert.message = pair + " share no monitor (held: " + monitor_list(ma) +
                      " / " + monitor_list(mb) + ")";
    }
    out.push_back(std::move(alert));
  }
  std::stable_sort(out.begin(), out.end(), alert_less);
  return out;
}

ClassResult analyze_class(const ClassModel& cm, const RuleSet& rules) {
  ClassResult r;
  if (!cm.annotated) return r;
  if (rules.p1) {
    auto a = check_no_escaping(cm);
    r.alerts.insert(r.alerts.end(), a.begin(), a.end());
  }
  if (rules.p2) {
    auto a = check_safe_publication(cm);
    r.alerts.insert(r.alerts.end(), a.begin(), a.end());
  }
  AccessPaths paths = provides_access(cm);
  if (rules.p3) {
    FlowCache flows(cm);
    MonitorInfo info = compute_monitor_info(cm, paths, flows);
    auto a = check_correct_synchronization(cm, paths, info);
    r.alerts.insert(r.alerts.end(), a.begin(), a.end());
  }
  r.notes = paths.notes();
  std::stable_sort(r.alerts.begin(), r.alerts.end(), alert_less);
  return r;
}

}  // namespace threadlint
