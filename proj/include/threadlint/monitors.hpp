#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "threadlint/access_paths.hpp"
#include "threadlint/cfg.hpp"
#include "threadlint/class_model.hpp"

namespace threadlint {

enum class MonitorKind { LockField, ThisMonitor, ClassMonitor, SyncExpr };

/// Identity is the lock field's qualified name, "this", the class's qualified
/// name, or the canonical text of a synchronized-block expression.
struct Monitor {
  MonitorKind kind = MonitorKind::ThisMonitor;
  std::string identity;

  friend auto operator<=>(const Monitor&, const Monitor&) = default;
  friend bool operator==(const Monitor&, const Monitor&) = default;
};

std::string describe(const Monitor& m);

bool is_lock_type(std::string_view type_name, const AnalysisOptions& options);

/// True when `var` (a call qualifier) denotes `lock_field` inside `m`: either
/// a direct reference to the field, or a local assigned exactly once, from a
/// read of the field.
bool represents(const ClassModel& cm, const FieldDecl& lock_field, const MethodDecl& m,
                const Expr& var);

struct LockCall {
  const Expr* call = nullptr;
  const FieldDecl* field = nullptr;
  NodeId node = -1;
};

struct LockWindow {
  NodeId lock_call = -1;
  NodeId unlock_call = -1;
  const FieldDecl* field = nullptr;
};

/// Control flow and lock structure of one method.
class MethodFlow {
 public:
  MethodFlow(const ClassModel& cm, const MethodDecl& m);

  const MethodDecl& method() const { return *method_; }
  const Cfg& cfg() const { return cfg_; }
  const DomInfo& dom() const { return dom_; }
  const std::vector<LockCall>& lock_calls() const { return lock_calls_; }
  const std::vector<LockCall>& unlock_calls() const { return unlock_calls_; }
  /// Lock/unlock pairs on the same field where the lock dominates the unlock.
  const std::vector<LockWindow>& windows() const { return windows_; }
  /// Synchronized statements enclosing `e`, innermost last.
  const std::vector<const Stmt*>& enclosing_syncs(const Expr& e) const;

 private:
  const MethodDecl* method_;
  Cfg cfg_;
  DomInfo dom_;
  std::vector<LockCall> lock_calls_;
  std::vector<LockCall> unlock_calls_;
  std::vector<LockWindow> windows_;
  std::unordered_map<int, std::vector<const Stmt*>> syncs_;
};

bool locally_locked_on(const MethodFlow& flow, NodeId e, const FieldDecl& lock_field,
                       const AnalysisOptions& options);

/// Every monitor held by virtue of `synchronized` while `e` runs in `m`:
/// the method's own monitor, then enclosing synchronized blocks outermost
/// first.
std::vector<Monitor> locally_synchronized_on(const ClassModel& cm, const MethodFlow& flow,
                                             const Expr& e);

/// Canonical monitor for the expression of a synchronized block.
Monitor sync_monitor(const ClassModel& cm, const Expr& e);

/// Monitors protecting `e` inside the flow's method.
std::set<Monitor> protecting_monitors(const ClassModel& cm, const MethodFlow& flow, const Expr& e);

/// Lazily built MethodFlow per method of a class.
class FlowCache {
 public:
  explicit FlowCache(const ClassModel& cm) : cm_(cm) {}
  const MethodFlow& get(const MethodDecl& m);

 private:
  const ClassModel& cm_;
  std::map<const MethodDecl*, std::unique_ptr<MethodFlow>> flows_;
};

/// Monitors held on every public access path of `a`; empty when no public
/// path exists.
std::set<Monitor> monitors(const ClassModel& cm, const AccessPaths& paths, FlowCache& flows,
                           const FieldAccess& a);

}  // namespace threadlint
