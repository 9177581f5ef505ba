#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "immunet/graph.hpp"
#include "immunet/immunize.hpp"
#include "immunet/kernels.hpp"

namespace immunet {

/// Independent-cascade parameters: one global activation probability `p`.
struct SpreadConfig {
  double p = 0.1;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::size_t max_steps = 64;
  Exec exec = Exec::kParallel;
};

struct SpreadOutcome {
  double mean_activated = 0.0;
  /// Mean cumulative active count per step; [0] is the effective seed count.
  /// Shorter trials are padded with their final count before averaging.
  std::vector<double> active_series;
  std::vector<std::uint32_t> per_trial_activated;
};

struct MitigationReport {
  SpreadOutcome unblocked;
  SpreadOutcome blocked;
  double saved = 0.0;
};

/// One cascade. `active` is sorted; `series[s]` is the cumulative active
/// count after step s, recorded only while new nodes keep activating.
struct TrialResult {
  std::vector<NodeId> active;
  std::vector<std::uint32_t> series;
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

/// Shared coin of the undirected edge {a, b} in one trial. Both directions
/// and both runs of a coupled comparison see the same outcome, so the
/// cascade equals reachability over the live edges. `epoch` is the
/// cascade's attempt epoch; a cascade attempts each edge at most once,
/// so every cascade uses epoch 0.
bool edge_coin(std::uint64_t trial_seed, NodeId a, NodeId b, double p, std::uint64_t epoch = 0);

/// Runs a single cascade from `seeds`, skipping nodes flagged in
/// `blocked_mask` (size n, nonzero = blocked).
TrialResult run_trial(const Graph& g, std::span<const NodeId> seeds, std::span<const char> blocked_mask, double p,
                      std::uint64_t trial_seed, std::size_t max_steps);

/// Monte-Carlo cascade over cfg.trials independent trials. Identical output
/// for any thread count.
SpreadOutcome simulate_spread(const Graph& g, std::span<const NodeId> seeds, std::span<const NodeId> blocked,
                              const SpreadConfig& cfg);

/// Runs the unblocked and the plan-blocked cascade with shared coins.
MitigationReport compare_with_plan(const Graph& g, std::span<const NodeId> seeds, const ImmunizationPlan& plan,
                                   const SpreadConfig& cfg);

}  // namespace immunet
