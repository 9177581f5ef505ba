#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "immunet/error.hpp"
#include "immunet/serialize.hpp"
#include "immunet/simulate.hpp"
#include "oracles/cascade_exact.hpp"

using namespace immunet;
using namespace immunet::testing;

namespace {
double stderr_of(const SpreadOutcome& o) {
  const double n = static_cast<double>(o.per_trial_activated.size());
  double var = 0.0;
  for (auto a : o.per_trial_activated) var += (a - o.mean_activated) * (a - o.mean_activated);
  return std::sqrt(var / (n - 1) / n);
}
}  // namespace

TEST_CASE("p = 0 activates only the unblocked seeds") {
  auto g = path(5);
  SpreadConfig cfg;
  cfg.p = 0.0;
  cfg.trials = 50;
  std::vector<NodeId> seeds{0, 2, 4}, blocked{2};
  auto o = simulate_spread(g.graph, seeds, blocked, cfg);
  CHECK(o.mean_activated == 2.0);
  CHECK(o.active_series == std::vector<double>{2.0});
}

TEST_CASE("p = 1 floods the reachable region avoiding blocked nodes") {
  auto g = path(6);
  SpreadConfig cfg;
  cfg.p = 1.0;
  cfg.trials = 3;
  std::vector<NodeId> seeds{0};
  CHECK(simulate_spread(g.graph, seeds, {}, cfg).mean_activated == 6.0);
  std::vector<NodeId> blocked{3};
  auto o = simulate_spread(g.graph, seeds, blocked, cfg);
  CHECK(o.mean_activated == 3.0);
  CHECK(o.active_series == std::vector<double>{1, 2, 3});
}

TEST_CASE("path a-b-c at p = 0.5 averages 1.75") {
  auto g = path(3);
  SpreadConfig cfg;
  cfg.p = 0.5;
  cfg.trials = 10'000;
  cfg.master_seed = 17;
  std::vector<NodeId> seeds{0};
  auto o = simulate_spread(g.graph, seeds, {}, cfg);
  // coin outcomes: (ab, bc) in {00, 01, 10, 11} -> 1, 1, 2, 3 active
  CHECK(std::abs(o.mean_activated - 1.75) <= 3 * stderr_of(o));
  oracle::ExactCascade exact(g.graph, 0.5, 0);
  CHECK(exact.expected_active(1u) == doctest::Approx(1.75));
}

TEST_CASE("series shape invariants") {
  auto g = barabasi_albert(200, 2, 4);
  SpreadConfig cfg;
  cfg.p = 0.2;
  cfg.trials = 300;
  std::vector<NodeId> seeds{0, 5, 9};
  auto o = simulate_spread(g.graph, seeds, {}, cfg);
  CHECK(o.active_series.front() == 3.0);
  CHECK(o.active_series.back() == o.mean_activated);
  CHECK(std::is_sorted(o.active_series.begin(), o.active_series.end()));
  CHECK(o.per_trial_activated.size() == 300);

  cfg.max_steps = 1;
  auto capped = simulate_spread(g.graph, seeds, {}, cfg);
  CHECK(capped.active_series.size() <= 2);
}

TEST_CASE("blocked nodes never activate; trials are reproducible") {
  auto g = erdos_renyi(40, 0.15, 8);
  std::vector<NodeId> seeds{0, 1, 2};
  std::vector<char> mask(40, 0);
  for (NodeId b : {3u, 7u, 11u, 1u}) mask[b] = 1;
  for (std::uint64_t t = 0; t < 200; ++t) {
    auto r = run_trial(g.graph, seeds, mask, 0.4, trial_seed(5, t), 64);
    for (NodeId v : r.active) CHECK_FALSE(mask[v]);
    auto again = run_trial(g.graph, seeds, mask, 0.4, trial_seed(5, t), 64);
    CHECK(again.active == r.active);
    CHECK(again.series == r.series);
  }
}

TEST_CASE("coupled runs: the blocked active set is a subset in every trial") {
  auto g = barabasi_albert(120, 2, 13);
  std::vector<NodeId> seeds{0, 3, 50};
  std::vector<char> none(120, 0), some(120, 0);
  for (NodeId b : {1u, 2u, 4u, 10u, 3u}) some[b] = 1;
  for (std::uint64_t t = 0; t < 300; ++t) {
    auto open = run_trial(g.graph, seeds, none, 0.3, trial_seed(1, t), 64);
    auto shut = run_trial(g.graph, seeds, some, 0.3, trial_seed(1, t), 64);
    CHECK(std::includes(open.active.begin(), open.active.end(), shut.active.begin(), shut.active.end()));
  }
}

TEST_CASE("compare_with_plan") {
  auto g = star(6);
  std::vector<NodeId> seeds{0};
  SpreadConfig cfg;
  cfg.p = 1.0;
  cfg.trials = 10;
  ImmunizationPlan none;
  CHECK(compare_with_plan(g.graph, seeds, none, cfg).saved == 0.0);
  ImmunizationPlan leaves;
  leaves.blocked = {1, 2, 3, 4, 5, 6};
  auto r = compare_with_plan(g.graph, seeds, leaves, cfg);
  CHECK(r.saved == 6.0);
  CHECK(r.blocked.mean_activated == 1.0);

  cfg.p = 0.3;
  cfg.trials = 500;
  leaves.blocked = {2, 5};
  r = compare_with_plan(g.graph, seeds, leaves, cfg);
  CHECK(r.saved >= 0.0);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    CHECK(r.blocked.per_trial_activated[t] <= r.unblocked.per_trial_activated[t]);
  }
  auto j = report_to_json(r, leaves);
  CHECK(j["rows"][0]["graph"] == "unblocked");
  CHECK(j["rows"][1]["saved_nodes"] == r.saved);
}

TEST_CASE("matches exact enumeration on small graphs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto g = gnm(8, 10, seed);
    SpreadConfig cfg;
    cfg.p = 0.35;
    cfg.trials = 10'000;
    cfg.master_seed = seed;
    std::vector<NodeId> seeds{0, 1};
    std::vector<NodeId> blocked{5};
    auto o = simulate_spread(g.graph, seeds, blocked, cfg);
    oracle::ExactCascade exact(g.graph, cfg.p, 1u << 5);
    CHECK(std::abs(o.mean_activated - exact.expected_active(0b11)) <= 3 * stderr_of(o));
  }
}

TEST_CASE("serial and parallel trial loops are identical") {
  auto g = barabasi_albert(2000, 3, 2);
  std::vector<NodeId> seeds{0, 1, 2, 3, 4};
  SpreadConfig cfg;
  cfg.p = 0.15;
  cfg.trials = 400;
  cfg.master_seed = 99;
  auto par = simulate_spread(g.graph, seeds, {}, cfg);
  cfg.exec = Exec::kSerial;
  auto ser = simulate_spread(g.graph, seeds, {}, cfg);
  CHECK(par.per_trial_activated == ser.per_trial_activated);
  CHECK(par.active_series == ser.active_series);
  kernels::set_num_threads(3);
  cfg.exec = Exec::kParallel;
  auto par3 = simulate_spread(g.graph, seeds, {}, cfg);
  kernels::set_num_threads(0);
  CHECK(par3.active_series == ser.active_series);
}

TEST_CASE("config validation") {
  auto g = path(3);
  SpreadConfig cfg;
  cfg.p = 1.5;
  CHECK_THROWS_AS(simulate_spread(g.graph, {}, {}, cfg), Error);
  cfg.p = 0.5;
  cfg.trials = 0;
  CHECK_THROWS_AS(simulate_spread(g.graph, {}, {}, cfg), Error);
  cfg.trials = 1;
  std::vector<NodeId> bad{7};
  CHECK_THROWS_AS(simulate_spread(g.graph, bad, {}, cfg), Error);
}
