#pragma once

// Brute-force dominance by enumerating simple paths. Independent of the
// iterative idom algorithm under test.

#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Graph = std::vector<std::vector<int>>;

/// Calls `visit` with every simple path from `from` to `to`.
inline void simple_paths(const Graph& succ, int from, int to,
                         const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> path{from};
  std::vector<char> on(succ.size(), 0);
  on[static_cast<std::size_t>(from)] = 1;
  std::function<void(int)> dfs = [&](int n) {
    if (n == to) {
      visit(path);
      return;
    }
    for (int s : succ[static_cast<std::size_t>(n)]) {
      if (on[static_cast<std::size_t>(s)]) continue;
      on[static_cast<std::size_t>(s)] = 1;
      path.push_back(s);
      dfs(s);
      path.pop_back();
      on[static_cast<std::size_t>(s)] = 0;
    }
  };
  dfs(from);
}

/// Result per (a, b): -1 when b is not reachable from root, else 0/1.
inline std::vector<std::vector<int>> brute_dominance(const Graph& succ, int root) {
  std::size_t n = succ.size();
  std::vector<std::vector<int>> dom(n, std::vector<int>(n, -1));
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<int> count(n, 0);
    int paths = 0;
    simple_paths(succ, root, static_cast<int>(b), [&](const std::vector<int>& p) {
      ++paths;
      std::vector<char> in(n, 0);
      for (int x : p) in[static_cast<std::size_t>(x)] = 1;
      for (std::size_t a = 0; a < n; ++a) count[a] += in[a];
    });
    if (paths == 0) continue;
    for (std::size_t a = 0; a < n; ++a) dom[a][b] = count[a] == paths ? 1 : 0;
  }
  return dom;
}

inline Graph reversed(const Graph& succ) {
  Graph r(succ.size());
  for (std::size_t a = 0; a < succ.size(); ++a)
    for (int b : succ[a]) r[static_cast<std::size_t>(b)].push_back(static_cast<int>(a));
  return r;
}

/// Random graph with 2..max_nodes nodes; node 0 is entry (no preds), node 1
/// is exit (no succs).
inline std::pair<int, std::vector<std::pair<int, int>>> random_cfg(std::mt19937& rng, int max_nodes) {
  int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes - 1));
  std::vector<std::pair<int, int>> edges;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  double p = 1.5 / n + coin(rng) * 0.25;
  for (int a = 0; a < n; ++a) {
    if (a == 1) continue;
    for (int b = 1; b < n; ++b) {
      if (a == b && coin(rng) > 0.1) continue;
      if (coin(rng) < p) edges.emplace_back(a, b);
    }
  }
  return {n, edges};
}

}  // namespace oracle
