#pragma once

#include <string>
#include <vector>

#include "threadlint/class_model.hpp"

namespace threadlint {

/// `expr` in `method` results in the execution of `access`: either it is the
/// access itself or a call that (transitively) reaches it.
struct AccessPathFact {
  const MethodDecl* method = nullptr;
  const Expr* expr = nullptr;
  const FieldAccess* access = nullptr;
};

class AccessPaths {
 public:
  /// Facts in deterministic order: by access, then method, then expression
  /// position.
  const std::vector<AccessPathFact>& facts() const { return facts_; }
  /// Facts for `a` whose method is public.
  std::vector<AccessPathFact> public_facts(const FieldAccess& a) const;
  /// Non-public, non-private methods that reach an exposed access.
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  friend AccessPaths provides_access(const ClassModel& cm);
  std::vector<AccessPathFact> facts_;
  std::vector<std::vector<std::size_t>> by_access_;  // indexed by FieldAccess::index
  std::vector<std::string> notes_;
};

/// Same-class callees of a call, by name and argument count. Calls on other
/// objects resolve to nothing; ambiguous overloads resolve to all candidates.
std::vector<const MethodDecl*> resolve_call(const ClassModel& cm, const Expr& call);

/// Least fixpoint of: a method provides the accesses it contains, and a call
/// to a same-class method provides whatever the callee provides.
AccessPaths provides_access(const ClassModel& cm);

/// Expressions in public methods that provide `a`.
std::vector<const Expr*> public_access(const AccessPaths& paths, const FieldAccess& a);

}  // namespace threadlint
