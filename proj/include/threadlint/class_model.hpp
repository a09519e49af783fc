#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "threadlint/alert.hpp"
#include "threadlint/ast.hpp"
#include "threadlint/options.hpp"

namespace threadlint {

enum class AccessKind { Read, Write, ArrayElementWrite, MutatorCall };

std::string_view access_kind_name(AccessKind k);

/// Where an access executes. Everything except Method runs while the object
/// is being initialized.
enum class AccessContext { Method, Constructor, Initializer, FieldInitializer };

/// One syntactic read or write of a field of the modeled class.
struct FieldAccess {
  const FieldDecl* field = nullptr;
  AccessKind kind = AccessKind::Read;
  AccessContext context = AccessContext::Method;
  SourceSpan span;
  /// The field reference (`x`, `this.x`); for an initializer write, the
  /// initializer expression.
  const Expr* expr = nullptr;
  /// Innermost expression performing the modification (assignment, ++/--,
  /// mutator call); equals `expr` for reads.
  const Expr* site = nullptr;
  const MethodDecl* enclosing = nullptr;  // null for field initializers
  bool is_initializer_write = false;
  bool also_reads = false;  // compound assignment or increment
  std::size_t index = 0;    // position in ClassModel::accesses
};

/// A local variable (or parameter) of one callable, keyed by name.
struct LocalVarInfo {
  bool is_parameter = false;
  int declarations = 0;
  /// Every value assigned to the variable, including its initializer. A null
  /// entry stands for an unknown value (foreach/catch variables).
  std::vector<const Expr*> assigned_values;
};

struct CallSite {
  const MethodDecl* caller = nullptr;
  const Expr* call = nullptr;
};

/// Per-class analysis model: the declaration plus every access to its own
/// fields, in file order.
struct ClassModel {
  const Ast* ast = nullptr;
  const ClassDecl* decl = nullptr;
  const AnalysisOptions* options = nullptr;
  std::vector<FieldAccess> accesses;

  std::unordered_map<int, const FieldDecl*> field_refs;     // expr id -> referenced field
  std::unordered_map<int, std::size_t> access_by_expr;      // field-ref expr id -> access
  std::unordered_set<int> local_refs;                        // Name ids bound to locals
  std::map<std::pair<const MethodDecl*, std::string>, LocalVarInfo> locals;
  std::vector<CallSite> calls;  // every method call in every callable, file order
  /// Innermost statement (owning the expression directly) for each expr id.
  std::unordered_map<int, const Stmt*> owner_stmt;

  bool annotated = false;

  const std::string& file() const { return ast->source.path; }
  const std::string& class_id() const { return decl->qualified_name; }
  const FieldDecl* field_of(const Expr& e) const;
  const FieldAccess* access_of(const Expr& e) const;
  const LocalVarInfo* local(const MethodDecl& m, const std::string& name) const;
  bool is_thread_safe_type(const FieldDecl& f) const;
  /// Best-effort qualified name of a declared type using the imports.
  std::string resolve_type(std::string_view type) const;
  /// All callables in declaration order: methods, then constructors, then
  /// initializer blocks.
  std::vector<const MethodDecl*> callables() const;
};

ClassModel build_class_model(const Ast& ast, const ClassDecl& decl, const AnalysisOptions& options);

std::vector<Alert> check_no_escaping(const ClassModel& cm);
std::vector<Alert> check_safe_publication(const ClassModel& cm);

/// True when the field has no initializer or is initialized to the literal
/// default value of its declared type.
bool is_default_initialized(const FieldDecl& f);

/// Accesses that need synchronization: non-volatile fields, not the
/// initializer write, not executed during object construction, and not of an
/// allowlisted thread-safe type.
std::vector<const FieldAccess*> exposed_accesses(const ClassModel& cm);
bool is_exposed(const ClassModel& cm, const FieldAccess& a);

bool is_modifying(const FieldAccess& a);

}  // namespace threadlint
