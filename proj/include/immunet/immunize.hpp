#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "immunet/graph.hpp"
#include "immunet/spectral.hpp"

namespace immunet {

enum class Algorithm { kNetShield, kSparseShield, kRandom };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);  // throws Error("immunize", ...)

/// Ordered selection of nodes to block. `selection_scores[i]` is the queue
/// score `blocked[i]` had when it was popped (0 for the random solver).
struct ImmunizationPlan {
  Algorithm algorithm = Algorithm::kSparseShield;
  std::size_t k = 0;
  std::vector<NodeId> blocked;
  std::vector<double> selection_scores;
  std::optional<std::uint64_t> seed;
};

/// Max-priority queue with lazy deletion. Each update pushes a new entry
/// tagged with the node's bumped version; pops drop entries whose version is
/// stale or whose node was already taken. Equal scores pop the smaller index.
class ScoreQueue {
 public:
  explicit ScoreQueue(std::span<const double> scores);

  void update(NodeId node, double score);
  /// Pops the best live node and marks it taken.
  std::optional<NodeId> pop();

  double score(NodeId node) const { return scores_[node]; }
  bool taken(NodeId node) const { return taken_[node] != 0; }
  std::size_t stale_entries() const noexcept { return heap_.size(); }

 private:
  struct Entry {
    double score;
    NodeId node;
    std::uint32_t version;
  };
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.score != b.score) return a.score < b.score;
      return a.node > b.node;
    }
  };

  std::vector<double> scores_;
  std::vector<std::uint32_t> version_;
  std::vector<char> taken_;
  std::priority_queue<Entry, std::vector<Entry>, Lower> heap_;
};

/// Factor applied once to the initial score of every harmful node.
inline constexpr double kHarmfulPenalty = 0.5;

/// Shield value 2*lambda*u_i^2 of each node, halved for harmful nodes.
std::vector<double> init_scores(const Graph& g, const EigenPair& eig, std::span<const NodeId> harmful);

/// Greedy shield-value selection reading A through the neighbor lists.
/// After each pick i, every untaken neighbor j loses 2*A_ij*u_i*u_j.
ImmunizationPlan greedy_select(const Graph& g, const EigenPair& eig, std::size_t k,
                               std::span<const NodeId> harmful);

inline constexpr std::size_t kDefaultDenseLimit = 20'000;

/// Greedy over a materialized dense n x n adjacency matrix.
/// Throws Error when n exceeds `dense_limit`.
ImmunizationPlan netshield(const Graph& g, std::size_t k, std::span<const NodeId> harmful,
                           std::size_t dense_limit = kDefaultDenseLimit,
                           const PowerIterationOptions& eig_opts = {});
ImmunizationPlan netshield(const Graph& g, const EigenPair& eig, std::size_t k, std::span<const NodeId> harmful,
                           std::size_t dense_limit = kDefaultDenseLimit);

/// Same greedy reading A only through the CSR structure; O(n + m + k) memory.
ImmunizationPlan sparseshield(const Graph& g, std::size_t k, std::span<const NodeId> harmful,
                              const PowerIterationOptions& eig_opts = {});
ImmunizationPlan sparseshield(const Graph& g, const EigenPair& eig, std::size_t k,
                              std::span<const NodeId> harmful);

/// k distinct nodes drawn uniformly without replacement. Harmful nodes are
/// not excluded.
ImmunizationPlan random_solver(const Graph& g, std::size_t k, std::uint64_t seed);

}  // namespace immunet
