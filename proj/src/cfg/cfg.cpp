#include "threadlint/cfg.hpp"

#include <algorithm>
#include <string>

namespace threadlint {

Cfg::Cfg() {
  add_node(CfgNodeKind::Entry, nullptr);
  add_node(CfgNodeKind::Exit, nullptr);
}

Cfg Cfg::from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  Cfg g;
  while (g.size() < n) g.add_node(CfgNodeKind::Statement, nullptr);
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

NodeId Cfg::add_node(CfgNodeKind kind, const Stmt* stmt) {
  CfgNode n;
  n.kind = kind;
  n.stmt = stmt;
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Cfg::add_edge(NodeId from, NodeId to) {
  auto& s = nodes_.at(static_cast<std::size_t>(from)).succs;
  if (std::find(s.begin(), s.end(), to) != s.end()) return;
  s.push_back(to);
  nodes_.at(static_cast<std::size_t>(to)).preds.push_back(from);
}

NodeId Cfg::node_of(const Expr& e) const {
  auto it = expr_node_.find(e.id);
  return it == expr_node_.end() ? -1 : it->second;
}

NodeId Cfg::node_of(const Stmt& s) const {
  auto it = stmt_node_.find(s.id);
  return it == stmt_node_.end() ? -1 : it->second;
}

namespace {

enum class Jump { Return, Throw, Break, Continue };

using Frontier = std::vector<NodeId>;

struct Pending {
  Jump kind;
  Frontier from;
};

struct Frame {
  enum Type { Loop, Try, Sync } type;
  Frontier breaks;
  Frontier continues;
  Frontier catch_entries;
  bool in_catch = false;
  bool has_finally = false;
  std::vector<Pending> pending;
};

void append(Frontier& to, const Frontier& from) { to.insert(to.end(), from.begin(), from.end()); }

class CfgBuilder {
 public:
  explicit CfgBuilder(Cfg& g) : g_(g) {}

  void run(const MethodDecl& m) {
    Frontier out{g_.entry()};
    if (m.body) out = build(*m.body, out);
    for (NodeId n : out) g_.add_edge(n, g_.exit());
  }

 private:
  NodeId node(CfgNodeKind kind, const Stmt* s, const Frontier& preds) {
    NodeId n = g_.add_node(kind, s);
    for (NodeId p : preds) g_.add_edge(p, n);
    return n;
  }

  void map_expr_tree(const Expr& root, NodeId n) {
    for_each_expr(root, [&](const Expr& e) { g_.map_expr(e, n); });
  }

  void map_own(const Stmt& s, NodeId n) {
    for_each_own_expr_root(s, [&](const Expr& root) { map_expr_tree(root, n); });
    g_.map_stmt(s, n);
  }

  void dispatch(Jump kind, const Frontier& from, int i) {
    for (; i >= 0; --i) {
      Frame& f = frames_[static_cast<std::size_t>(i)];
      switch (f.type) {
        case Frame::Try:
          if (kind == Jump::Throw && !f.in_catch && !f.catch_entries.empty()) {
            for (NodeId a : from)
              for (NodeId c : f.catch_entries) g_.add_edge(a, c);
            return;
          }
          if (f.has_finally) {
            f.pending.push_back({kind, from});
            return;
          }
          break;
        case Frame::Sync:
          f.pending.push_back({kind, from});
          return;
        case Frame::Loop:
          if (kind == Jump::Break) {
            append(f.breaks, from);
            return;
          }
          if (kind == Jump::Continue) {
            append(f.continues, from);
            return;
          }
          break;
      }
    }
    if (kind == Jump::Break || kind == Jump::Continue)
      throw CfgError(std::string(kind == Jump::Break ? "break" : "continue") + " outside of a loop");
    for (NodeId a : from) g_.add_edge(a, g_.exit());
  }

  int top() const { return static_cast<int>(frames_.size()) - 1; }

  Frontier loop_body(const Stmt& body, const Frontier& in, Frame& out_frame) {
    frames_.push_back(Frame{Frame::Loop, {}, {}, {}, false, false, {}});
    Frontier body_out = build(body, in);
    out_frame = std::move(frames_.back());
    frames_.pop_back();
    return body_out;
  }

  Frontier build(const Stmt& s, Frontier in) {
    switch (s.kind) {
      case StmtKind::Block:
        for (const auto& c : s.stmts) in = build(*c, std::move(in));
        return in;

      case StmtKind::LocalVar:
      case StmtKind::ExprStmt:
      case StmtKind::Empty: {
        NodeId n = node(CfgNodeKind::Statement, &s, in);
        map_own(s, n);
        return {n};
      }

      case StmtKind::Return:
      case StmtKind::Throw:
      case StmtKind::Break:
      case StmtKind::Continue: {
        NodeId n = node(CfgNodeKind::Statement, &s, in);
        map_own(s, n);
        Jump k = s.kind == StmtKind::Return  ? Jump::Return
                 : s.kind == StmtKind::Throw ? Jump::Throw
                 : s.kind == StmtKind::Break ? Jump::Break
                                             : Jump::Continue;
        dispatch(k, {n}, top());
        return {};
      }

      case StmtKind::If: {
        NodeId c = node(CfgNodeKind::Condition, &s, in);
        map_own(s, c);
        Frontier out = build(*s.body, {c});
        if (s.else_stmt)
          append(out, build(*s.else_stmt, {c}));
        else
          out.push_back(c);
        return out;
      }

      case StmtKind::While:
      case StmtKind::ForEach: {
        NodeId c = node(CfgNodeKind::Condition, &s, in);
        map_own(s, c);
        Frame f{Frame::Loop, {}, {}, {}, false, false, {}};
        Frontier body_out = loop_body(*s.body, {c}, f);
        for (NodeId n : body_out) g_.add_edge(n, c);
        for (NodeId n : f.continues) g_.add_edge(n, c);
        Frontier out{c};
        append(out, f.breaks);
        return out;
      }

      case StmtKind::DoWhile: {
        std::size_t first = g_.size();
        Frame f{Frame::Loop, {}, {}, {}, false, false, {}};
        Frontier body_out = loop_body(*s.body, in, f);
        Frontier cpreds = body_out;
        append(cpreds, f.continues);
        bool empty_body = g_.size() == first;
        if (empty_body) append(cpreds, in);
        NodeId c = node(CfgNodeKind::Condition, &s, cpreds);
        map_own(s, c);
        g_.add_edge(c, empty_body ? c : static_cast<NodeId>(first));
        Frontier out{c};
        append(out, f.breaks);
        return out;
      }

      case StmtKind::For: {
        for (const auto& i : s.for_init) in = build(*i, std::move(in));
        NodeId c = node(CfgNodeKind::Condition, &s, in);
        if (s.expr) map_expr_tree(*s.expr, c);
        g_.map_stmt(s, c);
        Frame f{Frame::Loop, {}, {}, {}, false, false, {}};
        Frontier back = loop_body(*s.body, {c}, f);
        append(back, f.continues);
        if (!s.for_update.empty()) {
          NodeId u = node(CfgNodeKind::Statement, &s, back);
          for (const auto& e : s.for_update) map_expr_tree(*e, u);
          back = {u};
        }
        for (NodeId n : back) g_.add_edge(n, c);
        Frontier out{c};
        append(out, f.breaks);
        return out;
      }

      case StmtKind::Synchronized: {
        NodeId enter = node(CfgNodeKind::SyncEnter, &s, in);
        map_own(s, enter);
        frames_.push_back(Frame{Frame::Sync, {}, {}, {}, false, false, {}});
        Frontier body_out = build(*s.body, {enter});
        std::vector<Pending> pending = std::move(frames_.back().pending);
        frames_.pop_back();
        Frontier preds = body_out;
        for (const auto& p : pending) append(preds, p.from);
        NodeId exit = node(CfgNodeKind::SyncExit, &s, preds);
        for (const auto& p : pending) dispatch(p.kind, {exit}, top());
        if (body_out.empty()) return {};
        return {exit};
      }

      case StmtKind::Try: {
        NodeId t = node(CfgNodeKind::TryEnter, &s, in);
        g_.map_stmt(s, t);
        Frame f{Frame::Try, {}, {}, {}, false, s.finally_block != nullptr, {}};
        for (std::size_t i = 0; i < s.catches.size(); ++i)
          f.catch_entries.push_back(node(CfgNodeKind::CatchEnter, &s, {t}));
        Frontier catch_entries = f.catch_entries;
        frames_.push_back(std::move(f));
        std::size_t idx = frames_.size() - 1;
        Frontier normal = build(*s.body, {t});
        frames_[idx].in_catch = true;
        for (std::size_t i = 0; i < s.catches.size(); ++i)
          append(normal, build(*s.catches[i].body, {catch_entries[i]}));
        std::vector<Pending> pending = std::move(frames_[idx].pending);
        frames_.pop_back();
        if (!s.finally_block) return normal;

        Frontier preds = normal;
        for (const auto& p : pending) append(preds, p.from);
        NodeId fin = node(CfgNodeKind::Finally, &s, preds);
        Frontier fin_out = build(*s.finally_block, {fin});
        for (const auto& p : pending) dispatch(p.kind, fin_out, top());
        if (normal.empty()) return {};
        return fin_out;
      }
    }
    return in;
  }

  Cfg& g_;
  std::vector<Frame> frames_;
};

std::vector<NodeId> reverse_postorder(const std::vector<std::vector<NodeId>>& succs, NodeId root) {
  std::vector<NodeId> post;
  std::vector<char> seen(succs.size(), 0);
  std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
  seen[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    auto& [n, i] = stack.back();
    const auto& out = succs[static_cast<std::size_t>(n)];
    if (i < out.size()) {
      NodeId next = out[i++];
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = 1;
        stack.emplace_back(next, 0);
      }
    } else {
      post.push_back(n);
      stack.pop_back();
    }
  }
  std::reverse(post.begin(), post.end());
  return post;
}

std::vector<int> depths(const std::vector<NodeId>& idom, const std::vector<NodeId>& rpo) {
  std::vector<int> d(idom.size(), -1);
  for (NodeId n : rpo) {
    auto i = static_cast<std::size_t>(n);
    d[i] = idom[i] == n ? 0 : d[static_cast<std::size_t>(idom[i])] + 1;
  }
  return d;
}

bool tree_ancestor(const std::vector<NodeId>& idom, const std::vector<int>& depth, NodeId a,
                   NodeId b) {
  while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)])
    b = idom[static_cast<std::size_t>(b)];
  return a == b;
}

}  // namespace

Cfg build_cfg(const MethodDecl& m) {
  Cfg g;
  CfgBuilder(g).run(m);
  return g;
}

std::vector<NodeId> immediate_dominators(const std::vector<std::vector<NodeId>>& succs,
                                         const std::vector<std::vector<NodeId>>& preds,
                                         NodeId root) {
  std::vector<NodeId> rpo = reverse_postorder(succs, root);
  std::vector<int> order(succs.size(), -1);
  for (std::size_t i = 0; i < rpo.size(); ++i) order[static_cast<std::size_t>(rpo[i])] = static_cast<int>(i);

  std::vector<NodeId> idom(succs.size(), -1);
  idom[static_cast<std::size_t>(root)] = root;
  auto intersect = [&](NodeId a, NodeId b) {
    while (a != b) {
      while (order[static_cast<std::size_t>(a)] > order[static_cast<std::size_t>(b)])
        a = idom[static_cast<std::size_t>(a)];
      while (order[static_cast<std::size_t>(b)] > order[static_cast<std::size_t>(a)])
        b = idom[static_cast<std::size_t>(b)];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 1; i < rpo.size(); ++i) {
      NodeId b = rpo[i];
      NodeId next = -1;
      for (NodeId p : preds[static_cast<std::size_t>(b)]) {
        if (idom[static_cast<std::size_t>(p)] == -1) continue;
        next = next == -1 ? p : intersect(p, next);
      }
      if (idom[static_cast<std::size_t>(b)] != next) {
        idom[static_cast<std::size_t>(b)] = next;
        changed = true;
      }
    }
  }
  return idom;
}

DomInfo::DomInfo(const Cfg& g) {
  std::vector<std::vector<NodeId>> succs, preds;
  succs.reserve(g.size());
  preds.reserve(g.size());
  for (const auto& n : g.nodes()) {
    succs.push_back(n.succs);
    preds.push_back(n.preds);
  }
  idom_ = immediate_dominators(succs, preds, g.entry());
  ipdom_ = immediate_dominators(preds, succs, g.exit());
  dom_depth_ = depths(idom_, reverse_postorder(succs, g.entry()));
  pdom_depth_ = depths(ipdom_, reverse_postorder(preds, g.exit()));
}

NodeId DomInfo::idom(NodeId n) const {
  NodeId d = idom_.at(static_cast<std::size_t>(n));
  return d == n ? -1 : d;
}

NodeId DomInfo::ipdom(NodeId n) const {
  NodeId d = ipdom_.at(static_cast<std::size_t>(n));
  return d == n ? -1 : d;
}

bool DomInfo::reachable(NodeId n) const { return idom_.at(static_cast<std::size_t>(n)) != -1; }

bool DomInfo::reaches_exit(NodeId n) const { return ipdom_.at(static_cast<std::size_t>(n)) != -1; }

bool DomInfo::dominates(NodeId a, NodeId b) const {
  if (!reachable(a) || !reachable(b))
    throw CfgError("dominance query on a node unreachable from entry");
  return tree_ancestor(idom_, dom_depth_, a, b);
}

bool DomInfo::post_dominates(NodeId a, NodeId b) const {
  if (!reaches_exit(a) || !reaches_exit(b))
    throw CfgError("post-dominance query on a node that cannot reach exit");
  return tree_ancestor(ipdom_, pdom_depth_, a, b);
}

}  // namespace threadlint
