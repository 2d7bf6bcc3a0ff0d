#pragma once

// Small dense-index flow routines used by the exact solver and by solution
// reconstruction. Graphs here have at most a few hundred nodes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace hamflow::detail {

// Dinic's algorithm on integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adjacency_(nodes), level_(nodes), cursor_(nodes) {}

  // Returns the id of the forward edge, usable with flow().
  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t capacity) {
    adjacency_[from].push_back(edges_.size());
    edges_.push_back({to, capacity});
    adjacency_[to].push_back(edges_.size());
    edges_.push_back({from, 0});
    capacity_.push_back(capacity);
    return edges_.size() - 2;
  }

  std::int64_t flow(std::size_t edge) const { return capacity_[edge / 2] - edges_[edge].residual; }

  std::int64_t solve(std::size_t source, std::size_t sink) {
    std::int64_t total = 0;
    while (bfs(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      while (const std::int64_t pushed =
                 dfs(source, sink, std::numeric_limits<std::int64_t>::max())) {
        total += pushed;
      }
    }
    return total;
  }

 private:
  struct Edge {
    std::size_t to;
    std::int64_t residual;
  };

  bool bfs(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> queue;
    level_[source] = 0;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t e : adjacency_[u]) {
        if (edges_[e].residual > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          queue.push(edges_[e].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  std::int64_t dfs(std::size_t u, std::size_t sink, std::int64_t limit) {
    if (u == sink) return limit;
    for (std::size_t& i = cursor_[u]; i < adjacency_[u].size(); ++i) {
      const std::size_t e = adjacency_[u][i];
      Edge& edge = edges_[e];
      if (edge.residual <= 0 || level_[edge.to] != level_[u] + 1) continue;
      const std::int64_t pushed = dfs(edge.to, sink, std::min(limit, edge.residual));
      if (pushed > 0) {
        edge.residual -= pushed;
        edges_[e ^ 1].residual += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

// Successive shortest paths with Bellman-Ford (SPFA) on real costs. Costs may
// be any sign on forward edges as long as no negative cycle exists.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes) : adjacency_(nodes) {}

  void add_edge(std::size_t from, std::size_t to, std::int64_t capacity, double cost) {
    adjacency_[from].push_back(edges_.size());
    edges_.push_back({to, capacity, cost});
    adjacency_[to].push_back(edges_.size());
    edges_.push_back({from, 0, -cost});
  }

  struct Result {
    std::int64_t flow = 0;
    double cost = 0.0;
  };

  // Sends up to `demand` units from source to sink at minimum cost.
  Result solve(std::size_t source, std::size_t sink, std::int64_t demand) {
    const std::size_t n = adjacency_.size();
    Result result;
    std::vector<double> dist(n);
    std::vector<std::size_t> via(n);
    std::vector<char> queued(n);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    while (result.flow < demand) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(via.begin(), via.end(), kNone);
      std::queue<std::size_t> queue;
      dist[source] = 0.0;
      queue.push(source);
      queued[source] = 1;
      while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop();
        queued[u] = 0;
        for (std::size_t e : adjacency_[u]) {
          const Edge& edge = edges_[e];
          if (edge.residual <= 0) continue;
          const double candidate = dist[u] + edge.cost;
          if (candidate < dist[edge.to] - 1e-12) {
            dist[edge.to] = candidate;
            via[edge.to] = e;
            if (!queued[edge.to]) {
              queued[edge.to] = 1;
              queue.push(edge.to);
            }
          }
        }
      }
      if (via[sink] == kNone) break;
      std::int64_t push = demand - result.flow;
      for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        push = std::min(push, edges_[via[v]].residual);
      }
      for (std::size_t v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].residual -= push;
        edges_[via[v] ^ 1].residual += push;
      }
      result.flow += push;
      result.cost += static_cast<double>(push) * dist[sink];
    }
    return result;
  }

 private:
  struct Edge {
    std::size_t to;
    std::int64_t residual;
    double cost;
  };

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

}  // namespace hamflow::detail
