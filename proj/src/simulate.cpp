#include "immunet/simulate.hpp"

#include <omp.h>

#include <algorithm>

#include "immunet/error.hpp"
#include "immunet/random.hpp"

namespace immunet {

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) { return derive_seed(master_seed, trial); }

bool edge_coin(std::uint64_t seed, NodeId a, NodeId b, double p, std::uint64_t epoch) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  const std::uint64_t lo = std::min(a, b);
  const std::uint64_t hi = std::max(a, b);
  const std::uint64_t key = (lo << 32) | hi;
  return to_unit(mix64(seed ^ mix64(key ^ mix64(epoch)))) < p;
}

namespace {

// Per-thread scratch. `stamp[v] == round` marks v as active in the current
// trial, so nothing is cleared between trials.
struct Workspace {
  explicit Workspace(std::size_t n) : stamp(n, 0) {}
  std::vector<std::uint32_t> stamp;
  std::uint32_t round = 0;
  std::vector<NodeId> frontier, next, active;
};

void cascade(const Graph& g, std::span<const NodeId> seeds, std::span<const char> blocked, double p,
             std::uint64_t seed, std::size_t max_steps, Workspace& ws, std::vector<std::uint32_t>& series) {
  if (++ws.round == 0) {
    std::fill(ws.stamp.begin(), ws.stamp.end(), 0);
    ws.round = 1;
  }
  const std::uint32_t round = ws.round;
  ws.frontier.clear();
  ws.active.clear();
  series.clear();
  for (NodeId s : seeds) {
    if (blocked[s] || ws.stamp[s] == round) continue;
    ws.stamp[s] = round;
    ws.frontier.push_back(s);
    ws.active.push_back(s);
  }
  series.push_back(static_cast<std::uint32_t>(ws.active.size()));
  for (std::size_t step = 0; step < max_steps && !ws.frontier.empty(); ++step) {
    ws.next.clear();
    for (NodeId i : ws.frontier) {
      for (NodeId j : g.neighbors(i)) {
        if (ws.stamp[j] == round || blocked[j]) continue;
        if (!edge_coin(seed, i, j, p)) continue;
        ws.stamp[j] = round;
        ws.next.push_back(j);
        ws.active.push_back(j);
      }
    }
    if (ws.next.empty()) break;
    series.push_back(static_cast<std::uint32_t>(ws.active.size()));
    std::swap(ws.frontier, ws.next);
  }
}

void check_indices(const Graph& g, std::span<const NodeId> nodes, const char* what) {
  for (NodeId v : nodes) {
    if (v >= g.num_nodes()) {
      throw Error("simulate", std::string(what) + " index " + std::to_string(v) + " out of range");
    }
  }
}

void check_config(const SpreadConfig& cfg) {
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw Error("simulate", "p must lie in [0, 1]");
  if (cfg.trials < 1) throw Error("simulate", "trials must be at least 1");
  if (cfg.max_steps < 1) throw Error("simulate", "max_steps must be at least 1");
}

SpreadOutcome aggregate(const std::vector<std::vector<std::uint32_t>>& series) {
  SpreadOutcome out;
  const std::size_t trials = series.size();
  std::size_t longest = 0;
  for (const auto& s : series) longest = std::max(longest, s.size());
  std::vector<std::uint64_t> sums(longest, 0);
  out.per_trial_activated.reserve(trials);
  for (const auto& s : series) {
    for (std::size_t t = 0; t < longest; ++t) sums[t] += s[std::min(t, s.size() - 1)];
    out.per_trial_activated.push_back(s.back());
  }
  out.active_series.reserve(longest);
  for (auto v : sums) out.active_series.push_back(static_cast<double>(v) / static_cast<double>(trials));
  out.mean_activated = out.active_series.back();
  return out;
}

}  // namespace

TrialResult run_trial(const Graph& g, std::span<const NodeId> seeds, std::span<const char> blocked_mask, double p,
                      std::uint64_t seed, std::size_t max_steps) {
  check_indices(g, seeds, "seed");
  if (blocked_mask.size() != g.num_nodes()) throw Error("simulate", "blocked mask has the wrong length");
  Workspace ws(g.num_nodes());
  TrialResult out;
  cascade(g, seeds, blocked_mask, p, seed, max_steps, ws, out.series);
  out.active = std::move(ws.active);
  std::sort(out.active.begin(), out.active.end());
  return out;
}

SpreadOutcome simulate_spread(const Graph& g, std::span<const NodeId> seeds, std::span<const NodeId> blocked,
                              const SpreadConfig& cfg) {
  check_config(cfg);
  check_indices(g, seeds, "seed");
  check_indices(g, blocked, "blocked");
  std::vector<char> mask(g.num_nodes(), 0);
  for (NodeId b : blocked) mask[b] = 1;

  std::vector<std::vector<std::uint32_t>> series(cfg.trials);
  const auto trials = static_cast<std::int64_t>(cfg.trials);
  if (cfg.exec == Exec::kSerial) {
    Workspace ws(g.num_nodes());
    for (std::int64_t t = 0; t < trials; ++t) {
      cascade(g, seeds, mask, cfg.p, trial_seed(cfg.master_seed, static_cast<std::uint64_t>(t)), cfg.max_steps, ws,
              series[static_cast<std::size_t>(t)]);
    }
  } else {
#pragma omp parallel
    {
      Workspace ws(g.num_nodes());
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t t = 0; t < trials; ++t) {
        cascade(g, seeds, mask, cfg.p, trial_seed(cfg.master_seed, static_cast<std::uint64_t>(t)), cfg.max_steps,
                ws, series[static_cast<std::size_t>(t)]);
      }
    }
  }
  return aggregate(series);
}

MitigationReport compare_with_plan(const Graph& g, std::span<const NodeId> seeds, const ImmunizationPlan& plan,
                                   const SpreadConfig& cfg) {
  MitigationReport report;
  report.unblocked = simulate_spread(g, seeds, {}, cfg);
  report.blocked = simulate_spread(g, seeds, plan.blocked, cfg);
  report.saved = report.unblocked.mean_activated - report.blocked.mean_activated;
  return report;
}

}  // namespace immunet
