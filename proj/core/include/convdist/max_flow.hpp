// Copyright 2026 The convdist Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dinic's algorithm on an explicit residual graph. Cap is int64_t for exact
// integer flows or double for floating flows (residuals at or below
// `epsilon` count as saturated).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

namespace convdist {

template <typename Cap>
class FlowNetwork {
 public:
  static_assert(std::is_same_v<Cap, std::int64_t> || std::is_same_v<Cap, double>);

  explicit FlowNetwork(std::size_t nodes, Cap epsilon = Cap{0})
      : adjacency_(nodes), epsilon_(epsilon) {}

  std::size_t add_edge(std::size_t from, std::size_t to, Cap capacity) {
    const std::size_t id = edges_.size();
    edges_.push_back({to, capacity, capacity});
    adjacency_[from].push_back(id);
    edges_.push_back({from, Cap{0}, Cap{0}});
    adjacency_[to].push_back(id + 1);
    return id;
  }

  Cap max_flow(std::size_t source, std::size_t sink) {
    Cap total{0};
    level_.assign(adjacency_.size(), -1);
    cursor_.assign(adjacency_.size(), 0);
    while (build_levels(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      while (true) {
        const Cap pushed = augment(source, sink, std::numeric_limits<Cap>::max());
        if (!(pushed > epsilon_)) break;
        total += pushed;
      }
    }
    return total;
  }

  // Flow currently on the edge returned by add_edge.
  Cap flow(std::size_t edge) const { return edges_[edge].capacity - edges_[edge].residual; }

 private:
  struct Edge {
    std::size_t to;
    Cap residual;
    Cap capacity;
  };

  bool build_levels(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> frontier;
    level_[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t id : adjacency_[u]) {
        const Edge& e = edges_[id];
        if (e.residual > epsilon_ && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          frontier.push(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // Iterative blocking-flow DFS along the level graph.
  Cap augment(std::size_t source, std::size_t sink, Cap limit) {
    std::vector<std::size_t> path;  // edge ids
    std::size_t u = source;
    while (true) {
      if (u == sink) {
        Cap bottleneck = limit;
        for (std::size_t id : path) bottleneck = std::min(bottleneck, edges_[id].residual);
        for (std::size_t id : path) {
          edges_[id].residual -= bottleneck;
          edges_[id ^ 1].residual += bottleneck;
        }
        return bottleneck;
      }
      bool advanced = false;
      for (auto& c = cursor_[u]; c < adjacency_[u].size(); ++c) {
        const std::size_t id = adjacency_[u][c];
        const Edge& e = edges_[id];
        if (e.residual > epsilon_ && level_[e.to] == level_[u] + 1) {
          path.push_back(id);
          u = e.to;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (path.empty()) return Cap{0};
      // Dead end: retire u from this phase and back up.
      level_[u] = -1;
      const std::size_t back = path.back();
      path.pop_back();
      u = edges_[back ^ 1].to;
      ++cursor_[u];
    }
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  Cap epsilon_;
};

}  // namespace convdist
