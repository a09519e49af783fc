#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "threadlint/hb_oracle.hpp"

namespace threadlint {

namespace {

constexpr std::array<std::pair<ActionOp, std::string_view>, 9> kOpNames = {{
    {ActionOp::Read, "read"},
    {ActionOp::Write, "write"},
    {ActionOp::VolatileRead, "volatileRead"},
    {ActionOp::VolatileWrite, "volatileWrite"},
    {ActionOp::Lock, "lock"},
    {ActionOp::Unlock, "unlock"},
    {ActionOp::DefaultInit, "defaultInit"},
    {ActionOp::FinalInit, "finalInit"},
    {ActionOp::Local, "local"},
}};

bool is_init(ActionOp op) { return op == ActionOp::DefaultInit || op == ActionOp::FinalInit; }

struct Held {
  int owner = -1;
  int count = 0;
};

}  // namespace

std::string_view op_name(ActionOp op) {
  for (auto [o, n] : kOpNames)
    if (o == op) return n;
  return "?";
}

std::optional<ActionOp> parse_op(std::string_view s) {
  for (auto [o, n] : kOpNames)
    if (n == s) return o;
  return std::nullopt;
}

bool TraceAction::is_sync() const {
  return op == ActionOp::Lock || op == ActionOp::Unlock || op == ActionOp::VolatileRead ||
         op == ActionOp::VolatileWrite;
}

bool TraceAction::is_data() const {
  return op == ActionOp::Read || op == ActionOp::Write || is_init(op);
}

bool TraceAction::is_data_write() const { return op == ActionOp::Write || is_init(op); }

std::size_t ThreadProgram::total_actions() const {
  std::size_t n = main.size();
  for (const auto& t : threads) n += t.size();
  return n;
}

void validate(const Execution& e) {
  std::map<int, int> last_seq;
  std::map<std::string, Held> held;
  std::map<int, bool> started;
  for (std::size_t i = 0; i < e.actions.size(); ++i) {
    const TraceAction& a = e.actions[i];
    std::string where = "action " + std::to_string(i) + " (" + format_action(a) + ")";
    if (a.thread < 0) throw MalformedExecution(where + ": negative thread id");
    auto it = last_seq.find(a.thread);
    if (it != last_seq.end() && a.seq <= it->second)
      throw MalformedExecution(where + ": sequence numbers must increase within a thread");
    last_seq[a.thread] = a.seq;
    if (is_init(a.op)) {
      for (auto [t, s] : started)
        if (s && t != a.thread)
          throw MalformedExecution(where + ": initialization after thread " + std::to_string(t) +
                                   " started");
    } else {
      started[a.thread] = true;
    }
    if (a.op == ActionOp::Lock) {
      Held& h = held[a.target];
      if (h.count > 0 && h.owner != a.thread)
        throw MalformedExecution(where + ": monitor " + a.target + " is held by thread " +
                                 std::to_string(h.owner));
      h.owner = a.thread;
      ++h.count;
    } else if (a.op == ActionOp::Unlock) {
      auto h = held.find(a.target);
      if (h == held.end() || h->second.count == 0 || h->second.owner != a.thread)
        throw MalformedExecution(where + ": unlock of a monitor the thread does not hold");
      if (--h->second.count == 0) held.erase(h);
    }
  }
}

HbGraph::HbGraph(std::size_t n, std::vector<HbEdge> edges)
    : n_(n), words_((n + 63) / 64), edges_(std::move(edges)), reach_(n * ((n + 63) / 64), 0) {
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& e : edges_) {
    if (e.from >= e.to) throw MalformedExecution("happens-before edge against the execution order");
    succ[e.from].push_back(e.to);
  }
  // Edges point forward, so one backward sweep closes the relation.
  for (std::size_t i = n; i-- > 0;) {
    std::uint64_t* row = &reach_[i * words_];
    for (std::size_t j : succ[i]) {
      row[j / 64] |= std::uint64_t{1} << (j % 64);
      const std::uint64_t* other = &reach_[j * words_];
      for (std::size_t w = 0; w < words_; ++w) row[w] |= other[w];
    }
  }
}

bool HbGraph::ordered(std::size_t a, std::size_t b) const {
  if (a >= n_ || b >= n_) return false;
  return (reach_[a * words_ + b / 64] >> (b % 64)) & 1u;
}

bool HbGraph::is_strict_partial_order() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (ordered(i, i)) return false;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!ordered(i, j)) continue;
      for (std::size_t k = 0; k < n_; ++k)
        if (ordered(j, k) && !ordered(i, k)) return false;
    }
  }
  return true;
}

HbGraph hb_closure(const Execution& e) {
  validate(e);
  const auto& acts = e.actions;
  std::size_t n = acts.size();
  std::vector<HbEdge> edges;
  std::map<int, std::size_t> last;
  std::map<int, std::size_t> first;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = last.find(acts[i].thread);
    if (it != last.end()) edges.push_back({it->second, i, HbEdgeKind::ProgramOrder});
    last[acts[i].thread] = i;
    first.emplace(acts[i].thread, i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const TraceAction& a = acts[i];
    if (a.op == ActionOp::Unlock || a.op == ActionOp::VolatileWrite) {
      ActionOp match = a.op == ActionOp::Unlock ? ActionOp::Lock : ActionOp::VolatileRead;
      for (std::size_t j = i + 1; j < n; ++j)
        if (acts[j].op == match && acts[j].target == a.target && acts[j].thread != a.thread)
          edges.push_back({i, j, HbEdgeKind::Synchronization});
    }
    if (is_init(a.op)) {
      for (auto [t, j] : first)
        if (t != a.thread && j > i) edges.push_back({i, j, HbEdgeKind::Initialization});
    }
  }
  return HbGraph(n, std::move(edges));
}

std::vector<std::pair<std::size_t, std::size_t>> detect_races(const Execution& e) {
  HbGraph hb = hb_closure(e);
  const auto& acts = e.actions;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (!acts[i].is_data()) continue;
    for (std::size_t j = i + 1; j < acts.size(); ++j) {
      if (!acts[j].is_data() || acts[i].thread == acts[j].thread) continue;
      if (acts[i].target != acts[j].target) continue;
      if (!acts[i].is_data_write() && !acts[j].is_data_write()) continue;
      if (!hb.ordered(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

namespace {

class Enumerator {
 public:
  Enumerator(const ThreadProgram& p, std::optional<std::size_t> bound,
             const std::function<void(const Execution&)>& visit)
      : p_(p), bound_(bound), visit_(visit), pos_(p.threads.size(), 0) {}

  EnumerationStats run() {
    for (std::size_t i = 0; i < p_.main.size(); ++i) {
      TraceAction a = p_.main[i];
      a.thread = 0;
      a.seq = static_cast<int>(i);
      if (!apply(a)) return stats_;  // main blocks on itself: nothing to run
      exec_.actions.push_back(std::move(a));
    }
    dfs();
    return stats_;
  }

 private:
  // Updates the monitor table; false when the action would block.
  bool apply(const TraceAction& a) {
    if (a.op == ActionOp::Lock) {
      Held& h = held_[a.target];
      if (h.count > 0 && h.owner != a.thread) return false;
      h.owner = a.thread;
      ++h.count;
    } else if (a.op == ActionOp::Unlock) {
      auto it = held_.find(a.target);
      if (it == held_.end() || it->second.owner != a.thread || it->second.count == 0)
        throw MalformedExecution("thread " + std::to_string(a.thread) + " unlocks " + a.target +
                                 " without holding it");
      --it->second.count;
    }
    return true;
  }

  void undo(const TraceAction& a) {
    if (a.op == ActionOp::Lock) {
      --held_[a.target].count;
    } else if (a.op == ActionOp::Unlock) {
      Held& h = held_[a.target];
      h.owner = a.thread;
      ++h.count;
    }
  }

  void dfs() {
    if (stop_) return;
    bool done = true;
    for (std::size_t k = 0; k < pos_.size() && !stop_; ++k) {
      const auto& prog = p_.threads[k];
      if (pos_[k] == prog.size()) continue;
      done = false;
      TraceAction a = prog[pos_[k]];
      a.thread = static_cast<int>(k + 1);
      a.seq = static_cast<int>(pos_[k]);
      if (!apply(a)) continue;
      exec_.actions.push_back(a);
      ++pos_[k];
      dfs();
      --pos_[k];
      exec_.actions.pop_back();
      undo(a);
    }
    if (!done) return;
    if (bound_ && stats_.executions == *bound_) {
      stats_.truncated = true;
      stop_ = true;
      return;
    }
    ++stats_.executions;
    visit_(exec_);
  }

  const ThreadProgram& p_;
  std::optional<std::size_t> bound_;
  const std::function<void(const Execution&)>& visit_;
  std::vector<std::size_t> pos_;
  std::map<std::string, Held> held_;
  Execution exec_;
  EnumerationStats stats_;
  bool stop_ = false;
};

}  // namespace

EnumerationStats enumerate_executions(const ThreadProgram& p, std::optional<std::size_t> bound,
                                      const std::function<void(const Execution&)>& visit) {
  if (!bound && p.total_actions() > kDefaultActionBudget)
    throw BudgetExceeded(p.name + ": " + std::to_string(p.total_actions()) +
                         " actions exceed the enumeration budget of " +
                         std::to_string(kDefaultActionBudget));
  return Enumerator(p, bound, visit).run();
}

std::vector<Execution> enumerate_executions(const ThreadProgram& p, std::optional<std::size_t> bound) {
  std::vector<Execution> out;
  enumerate_executions(p, bound, [&](const Execution& e) { out.push_back(e); });
  return out;
}

RaceResult program_races(const ThreadProgram& p, std::optional<std::size_t> bound) {
  RaceResult r;
  EnumerationStats stats = enumerate_executions(p, bound, [&](const Execution& e) {
    auto races = detect_races(e);
    if (races.empty()) return;
    ++r.racy_executions;
    if (!r.witness) {
      r.witness = e;
      r.witness_races = std::move(races);
    }
  });
  if (stats.truncated)
    throw BudgetExceeded(p.name + ": more than " + std::to_string(*bound) + " executions");
  r.executions = stats.executions;
  r.racy = r.racy_executions > 0;
  return r;
}

std::string format_action(const TraceAction& a) {
  return std::to_string(a.thread) + " " + std::string(op_name(a.op)) + " " +
         (a.target.empty() ? "-" : a.target);
}

std::string format_trace(const Execution& e) {
  std::string out;
  for (const auto& a : e.actions) out += format_action(a) + "\n";
  return out;
}

Execution parse_trace(std::string_view text, const std::string& path) {
  Execution e;
  std::map<int, int> seq;
  std::istringstream in{std::string(text)};
  std::string line;
  std::uint32_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string thread, op, target, extra;
    if (!(words >> thread)) continue;
    words >> op >> target >> extra;
    auto fail = [&](const std::string& msg) { throw ParseError(path, lineno, 1, msg); };
    if (!extra.empty()) fail("expected `<thread> <op> <target>`, found extra text '" + extra + "'");
    if (thread.find_first_not_of("0123456789") != std::string::npos || thread.size() > 6)
      fail("thread id must be a non-negative integer, got '" + thread + "'");
    auto parsed = parse_op(op);
    if (!parsed) fail(op.empty() ? "missing operation" : "unknown operation '" + op + "'");
    if (target.empty()) {
      if (*parsed != ActionOp::Local) fail("missing field or monitor name");
      target = "-";
    }
    TraceAction a;
    a.thread = std::stoi(thread);
    a.op = *parsed;
    a.target = target;
    a.seq = seq[a.thread]++;
    a.line = lineno;
    e.actions.push_back(std::move(a));
  }
  return e;
}

}  // namespace threadlint
