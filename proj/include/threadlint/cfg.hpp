#pragma once

#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "threadlint/ast.hpp"

namespace threadlint {

using NodeId = int;

enum class CfgNodeKind {
  Entry,
  Exit,
  Statement,   // simple statement, or the update part of a for loop
  Condition,   // if/while/do/for condition, foreach iteration test
  SyncEnter,   // evaluates the monitor expression and acquires it
  SyncExit,
  TryEnter,
  Finally,     // entry of the (single, shared) finally block
  CatchEnter,
};

struct CfgNode {
  CfgNodeKind kind = CfgNodeKind::Statement;
  const Stmt* stmt = nullptr;  // owning statement, null for entry/exit
  std::vector<NodeId> succs;
  std::vector<NodeId> preds;
};

class CfgError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Statement-level control-flow graph of one callable. Expressions map to the
/// node of the statement (or condition) that evaluates them.
class Cfg {
 public:
  static constexpr NodeId kEntry = 0;
  static constexpr NodeId kExit = 1;

  Cfg();
  /// Graph with `n` nodes (0 = entry, 1 = exit) and the given edges; used for
  /// testing the dominance algorithms on arbitrary shapes.
  static Cfg from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges);

  NodeId entry() const { return kEntry; }
  NodeId exit() const { return kExit; }
  std::size_t size() const { return nodes_.size(); }
  const CfgNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<CfgNode>& nodes() const { return nodes_; }

  /// Node evaluating `e`, or -1 when `e` is not part of this callable.
  NodeId node_of(const Expr& e) const;
  /// Main node of a non-block statement, or -1.
  NodeId node_of(const Stmt& s) const;

  NodeId add_node(CfgNodeKind kind, const Stmt* stmt);
  void add_edge(NodeId from, NodeId to);
  void map_expr(const Expr& e, NodeId n) { expr_node_[e.id] = n; }
  void map_stmt(const Stmt& s, NodeId n) { stmt_node_[s.id] = n; }

 private:
  std::vector<CfgNode> nodes_;
  std::unordered_map<int, NodeId> expr_node_;
  std::unordered_map<int, NodeId> stmt_node_;
};

/// Builds the CFG of a method, constructor or initializer block. Jumps out of
/// a try block with a finally clause are routed through the finally block;
/// jumps out of a synchronized block pass through its SyncExit node.
/// Throws CfgError for break/continue outside a loop.
Cfg build_cfg(const MethodDecl& m);

/// Immediate dominators and post-dominators of a Cfg.
class DomInfo {
 public:
  explicit DomInfo(const Cfg& g);

  /// -1 for the entry node.
  NodeId idom(NodeId n) const;
  /// -1 for the exit node.
  NodeId ipdom(NodeId n) const;
  bool reachable(NodeId n) const;
  bool reaches_exit(NodeId n) const;

  /// Throws CfgError when either node is unreachable from entry.
  bool dominates(NodeId a, NodeId b) const;
  /// Throws CfgError when either node cannot reach exit.
  bool post_dominates(NodeId a, NodeId b) const;

 private:
  std::vector<NodeId> idom_;
  std::vector<NodeId> ipdom_;
  std::vector<int> dom_depth_;
  std::vector<int> pdom_depth_;
};

inline bool dominates(const DomInfo& d, NodeId a, NodeId b) { return d.dominates(a, b); }
inline bool post_dominates(const DomInfo& d, NodeId a, NodeId b) { return d.post_dominates(a, b); }

/// Iterative dominator computation over reverse postorder from `root`.
/// Returns the immediate dominator of every node; the root maps to itself and
/// unreachable nodes to -1.
std::vector<NodeId> immediate_dominators(const std::vector<std::vector<NodeId>>& succs,
                                         const std::vector<std::vector<NodeId>>& preds,
                                         NodeId root);

}  // namespace threadlint
