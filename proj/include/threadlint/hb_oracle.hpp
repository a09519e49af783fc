#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "threadlint/class_model.hpp"

namespace threadlint {

// Memory-model fragment: thread actions, happens-before and data races over
// explicit interleavings.

enum class ActionOp {
  Read,
  Write,
  VolatileRead,
  VolatileWrite,
  Lock,
  Unlock,
  DefaultInit,
  FinalInit,
  Local,  // a step touching no shared state
};

std::string_view op_name(ActionOp op);
std::optional<ActionOp> parse_op(std::string_view s);

struct TraceAction {
  int thread = 0;
  ActionOp op = ActionOp::Local;
  std::string target;  // field or monitor; "-" for Local
  int seq = 0;         // position in the thread's program
  std::uint32_t line = 0;  // source line, 0 when unknown

  bool is_sync() const;
  /// Plain (non-volatile) field access, including initialization.
  bool is_data() const;
  bool is_data_write() const;
};

struct Execution {
  std::vector<TraceAction> actions;
};

/// One thread-0 ("main") prefix followed by the spawned threads, numbered
/// from 1.
struct ThreadProgram {
  std::string name;
  std::vector<TraceAction> main;
  std::vector<std::vector<TraceAction>> threads;

  std::size_t total_actions() const;
};

class MalformedExecution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedForOracle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws MalformedExecution unless sequence numbers increase per thread,
/// every unlock matches a lock held by the same thread, and no monitor is
/// held by two threads at once.
void validate(const Execution& e);

enum class HbEdgeKind { ProgramOrder, Synchronization, Initialization };

struct HbEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  HbEdgeKind kind = HbEdgeKind::ProgramOrder;
};

/// Happens-before over the action indices of one execution.
class HbGraph {
 public:
  HbGraph() = default;
  HbGraph(std::size_t n, std::vector<HbEdge> edges);

  std::size_t size() const { return n_; }
  /// Generating edges before transitive closure.
  const std::vector<HbEdge>& edges() const { return edges_; }
  /// a happens before b.
  bool ordered(std::size_t a, std::size_t b) const;
  /// Irreflexive and transitive.
  bool is_strict_partial_order() const;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<HbEdge> edges_;
  std::vector<std::uint64_t> reach_;
};

HbGraph hb_closure(const Execution& e);

/// Index pairs (i < j) of racing actions.
std::vector<std::pair<std::size_t, std::size_t>> detect_races(const Execution& e);

struct EnumerationStats {
  std::size_t executions = 0;
  bool truncated = false;
};

/// Largest program enumerated without an explicit bound.
constexpr std::size_t kDefaultActionBudget = 16;

/// Calls `visit` with every well-formed interleaving, main actions first,
/// choosing the lowest runnable thread first at each step. Interleavings that
/// deadlock are dropped. Without a bound, programs over kDefaultActionBudget
/// actions throw BudgetExceeded; with one, enumeration stops after `bound`
/// executions.
EnumerationStats enumerate_executions(const ThreadProgram& p, std::optional<std::size_t> bound,
                                      const std::function<void(const Execution&)>& visit);
std::vector<Execution> enumerate_executions(const ThreadProgram& p,
                                            std::optional<std::size_t> bound = std::nullopt);

struct RaceResult {
  bool racy = false;
  std::optional<Execution> witness;  // first racy execution in enumeration order
  std::vector<std::pair<std::size_t, std::size_t>> witness_races;
  std::size_t executions = 0;
  std::size_t racy_executions = 0;
};

/// Exhaustive race check. Throws BudgetExceeded when the program cannot be
/// enumerated completely within `bound` executions (or the action budget).
RaceResult program_races(const ThreadProgram& p, std::optional<std::size_t> bound = std::nullopt);

/// Two-thread drivers: for every pair (i <= j) of public methods, main
/// initializes the fields, then thread 1 runs method i and thread 2 method j.
/// Throws UnsupportedForOracle for bodies with branches, loops, recursion or
/// other non-straight-line control flow.
std::vector<ThreadProgram> driver_from_class(const ClassModel& cm);

/// Actions of one straight-line method body, for thread `thread`.
std::vector<TraceAction> method_actions(const ClassModel& cm, const MethodDecl& m, int thread);

/// Trace files: one action per line, `<thread> <op> <target>`; `#` starts a
/// comment. Throws ParseError with the line number.
Execution parse_trace(std::string_view text, const std::string& path = "<trace>");
std::string format_trace(const Execution& e);
std::string format_action(const TraceAction& a);

}  // namespace threadlint
