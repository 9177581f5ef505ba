#include "immunet/immunize.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "immunet/error.hpp"

namespace immunet {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kNetShield: return "netshield";
    case Algorithm::kSparseShield: return "sparseshield";
    case Algorithm::kRandom: return "random";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "netshield") return Algorithm::kNetShield;
  if (name == "sparseshield") return Algorithm::kSparseShield;
  if (name == "random") return Algorithm::kRandom;
  throw Error("immunize", "unknown algorithm '" + name + "' (expected netshield, sparseshield or random)");
}

ScoreQueue::ScoreQueue(std::span<const double> scores)
    : scores_(scores.begin(), scores.end()), version_(scores.size(), 0), taken_(scores.size(), 0) {
  std::vector<Entry> entries;
  entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) entries.push_back({scores[i], static_cast<NodeId>(i), 0});
  heap_ = decltype(heap_)(Lower{}, std::move(entries));
}

void ScoreQueue::update(NodeId node, double score) {
  scores_[node] = score;
  heap_.push({score, node, ++version_[node]});
}

std::optional<NodeId> ScoreQueue::pop() {
  while (!heap_.empty()) {
    Entry top = heap_.top();
    heap_.pop();
    if (taken_[top.node] || top.version != version_[top.node]) continue;
    taken_[top.node] = 1;
    return top.node;
  }
  return std::nullopt;
}

std::vector<double> init_scores(const Graph& g, const EigenPair& eig, std::span<const NodeId> harmful) {
  const std::size_t n = g.num_nodes();
  if (eig.u.size() != n) throw Error("immunize", "eigenvector length does not match the graph");
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) score[i] = 2.0 * eig.lambda * eig.u[i] * eig.u[i];
  std::vector<char> penalized(n, 0);
  for (NodeId h : harmful) {
    if (h >= n) throw Error("immunize", "harmful node index " + std::to_string(h) + " out of range");
    if (penalized[h]) continue;
    penalized[h] = 1;
    score[h] *= kHarmfulPenalty;
  }
  return score;
}

namespace {

// ForEachNeighbor(i, fn) calls fn(j, A_ij) for every j != i with A_ij != 0,
// in ascending j.
template <class ForEachNeighbor>
ImmunizationPlan greedy_core(const Graph& g, const EigenPair& eig, std::size_t k, std::span<const NodeId> harmful,
                             ForEachNeighbor&& for_each_neighbor) {
  ImmunizationPlan plan;
  plan.k = k;
  const auto scores = init_scores(g, eig, harmful);
  const std::size_t picks = std::min(k, g.num_nodes());
  plan.blocked.reserve(picks);
  plan.selection_scores.reserve(picks);
  ScoreQueue queue(scores);
  const auto& u = eig.u;
  for (std::size_t step = 0; step < picks; ++step) {
    auto picked = queue.pop();
    if (!picked) break;
    const NodeId i = *picked;
    plan.blocked.push_back(i);
    plan.selection_scores.push_back(queue.score(i));
    for_each_neighbor(i, [&](NodeId j, double a_ij) {
      if (queue.taken(j)) return;
      queue.update(j, queue.score(j) - 2.0 * a_ij * u[i] * u[j]);
    });
  }
  return plan;
}

}  // namespace

ImmunizationPlan greedy_select(const Graph& g, const EigenPair& eig, std::size_t k,
                               std::span<const NodeId> harmful) {
  auto plan = greedy_core(g, eig, k, harmful, [&](NodeId i, auto&& fn) {
    auto nb = g.neighbors(i);
    auto wt = g.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) fn(nb[e], wt[e]);
  });
  plan.algorithm = Algorithm::kSparseShield;
  return plan;
}

ImmunizationPlan sparseshield(const Graph& g, const EigenPair& eig, std::size_t k,
                              std::span<const NodeId> harmful) {
  return greedy_select(g, eig, k, harmful);
}

ImmunizationPlan sparseshield(const Graph& g, std::size_t k, std::span<const NodeId> harmful,
                              const PowerIterationOptions& eig_opts) {
  if (g.num_nodes() == 0 || k == 0) {
    ImmunizationPlan plan;
    plan.k = k;
    return plan;
  }
  return sparseshield(g, largest_eigenpair(g, eig_opts), k, harmful);
}

ImmunizationPlan netshield(const Graph& g, const EigenPair& eig, std::size_t k, std::span<const NodeId> harmful,
                           std::size_t dense_limit) {
  const std::size_t n = g.num_nodes();
  if (n > dense_limit) {
    throw Error("immunize", "netshield needs a dense " + std::to_string(n) + "x" + std::to_string(n) +
                                " matrix, above the limit of " + std::to_string(dense_limit) +
                                " nodes; use sparseshield");
  }
  std::vector<double> dense(n * n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    auto wt = g.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) dense[i * n + nb[e]] = wt[e];
  }
  auto plan = greedy_core(g, eig, k, harmful, [&](NodeId i, auto&& fn) {
    const double* row = dense.data() + static_cast<std::size_t>(i) * n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && row[j] != 0.0) fn(static_cast<NodeId>(j), row[j]);
    }
  });
  plan.algorithm = Algorithm::kNetShield;
  return plan;
}

ImmunizationPlan netshield(const Graph& g, std::size_t k, std::span<const NodeId> harmful, std::size_t dense_limit,
                           const PowerIterationOptions& eig_opts) {
  if (g.num_nodes() > dense_limit) return netshield(g, EigenPair{}, k, harmful, dense_limit);
  if (g.num_nodes() == 0 || k == 0) {
    ImmunizationPlan plan;
    plan.algorithm = Algorithm::kNetShield;
    plan.k = k;
    return plan;
  }
  return netshield(g, largest_eigenpair(g, eig_opts), k, harmful, dense_limit);
}

ImmunizationPlan random_solver(const Graph& g, std::size_t k, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  const std::size_t picks = std::min(k, n);
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < picks; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(picks);
  ImmunizationPlan plan;
  plan.algorithm = Algorithm::kRandom;
  plan.k = k;
  plan.blocked = std::move(pool);
  plan.selection_scores.assign(picks, 0.0);
  plan.seed = seed;
  return plan;
}

}  // namespace immunet
