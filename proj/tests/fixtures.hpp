#pragma once

// Graph generators shared by the unit and acceptance suites.

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "immunet/graph.hpp"

namespace immunet::testing {

inline IndexedGraph from_pairs(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  NodeIndexMap ids;
  for (std::size_t i = 0; i < n; ++i) ids.intern("v" + std::to_string(i));
  std::vector<RawEdge> edges;
  for (auto [a, b] : pairs) edges.push_back({ids.id(a), ids.id(b), 1.0});
  IndexedGraph g;
  g.graph = build_graph(edges, ids, Weighting::kUnweighted);
  g.ids = std::move(ids);
  return g;
}

inline IndexedGraph complete(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return from_pairs(n, e);
}

/// Node 0 is the center.
inline IndexedGraph star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return from_pairs(leaves + 1, e);
}

inline IndexedGraph path(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return from_pairs(n, e);
}

inline IndexedGraph cycle(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  return from_pairs(n, e);
}

inline IndexedGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return from_pairs(n, e);
}

/// Preferential attachment: each new node links to `m` distinct existing
/// nodes chosen proportionally to degree.
inline IndexedGraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<NodeId, NodeId>> e;
  std::vector<NodeId> endpoints;  // each node repeated once per incident edge
  for (NodeId i = 0; i <= m; ++i)
    for (NodeId j = i + 1; j <= m; ++j) {
      e.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    std::vector<NodeId> targets;
    while (targets.size() < m) {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      NodeId t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      e.emplace_back(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return from_pairs(n, e);
}

/// Random graph on exactly `n` nodes with exactly `m` distinct edges.
inline IndexedGraph gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<NodeId, NodeId>> all;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) all.emplace_back(i, j);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(m, all.size()));
  return from_pairs(n, all);
}

}  // namespace immunet::testing
