#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "immunet/ingest.hpp"

namespace immunet {

using NodeId = std::uint32_t;

/// Bijection between external ids and dense indices 0..n-1.
class NodeIndexMap {
 public:
  NodeIndexMap() = default;
  explicit NodeIndexMap(std::vector<std::string> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& id(NodeId i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Dense index for `id`, or nullptr when absent.
  const NodeId* find(const std::string& id) const;
  NodeId at(const std::string& id) const;  // throws Error("graph", ...)

  /// Inserts if missing; returns the index either way.
  NodeId intern(const std::string& id);

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Immutable undirected simple graph in compressed sparse row form.
/// Neighbor lists are sorted ascending, symmetric, free of self-loops and
/// duplicates; every stored weight is positive.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<std::size_t> offsets, std::vector<NodeId> neighbors, std::vector<double> weights,
        bool unweighted);

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }
  bool unweighted() const noexcept { return unweighted_; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  /// Edge weights aligned with neighbors(v). All 1 when unweighted().
  std::span<const double> weights(NodeId v) const {
    return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  bool has_edge(NodeId u, NodeId v) const;
  /// A_uv (0 when not adjacent).
  double weight(NodeId u, NodeId v) const;

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeId>& adjacency() const noexcept { return neighbors_; }
  const std::vector<double>& edge_weights() const noexcept { return weights_; }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<double> weights_;
  bool unweighted_ = true;
};

enum class Weighting {
  kAuto,        // unweighted iff every input weight equals 1
  kUnweighted,  // read every edge as 1 (propagation trees)
  kWeighted,
};

struct IndexedGraph {
  Graph graph;
  NodeIndexMap ids;
};

/// Symmetrizes, drops self-loops and zero weights, keeps the max weight of
/// parallel edges. Nodes are indexed in first-appearance order.
IndexedGraph build_graph(const std::vector<RawEdge>& edges, Weighting weighting = Weighting::kAuto);

/// Builds on a preexisting id map (isolated nodes survive).
Graph build_graph(const std::vector<RawEdge>& edges, NodeIndexMap& ids, Weighting weighting);

/// Induced subgraph on ceil(fraction * n) nodes drawn uniformly without
/// replacement. Retained nodes keep their relative order.
IndexedGraph sample_subgraph(const IndexedGraph& g, double fraction, std::uint64_t seed);

/// Induced subgraph on an explicit node list (indices of `g`).
IndexedGraph induced_subgraph(const IndexedGraph& g, std::vector<NodeId> keep);

struct RestrictedSet {
  std::vector<NodeId> nodes;  // ascending
  std::size_t dropped = 0;
};

RestrictedSet restrict_set(const HarmfulSet& set, const NodeIndexMap& map);

/// Undirected edges once each (u < v) as RawEdge, in index order.
std::vector<RawEdge> edge_dump(const IndexedGraph& g);

/// Writes `<prefix>.edges`, `<prefix>.ids` and the `<prefix>.json` header
/// {n, m, unweighted, id_map_file}.
void write_graph_dump(const IndexedGraph& g, const std::filesystem::path& prefix);
IndexedGraph read_graph_dump(const std::filesystem::path& prefix);

}  // namespace immunet
