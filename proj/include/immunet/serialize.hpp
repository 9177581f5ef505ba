#pragma once

#include <json.hpp>

#include "immunet/graph.hpp"
#include "immunet/immunize.hpp"
#include "immunet/metrics.hpp"
#include "immunet/simulate.hpp"
#include "immunet/spectral.hpp"

namespace immunet {

using Json = nlohmann::json;

/// {algorithm, k, blocked: [external ids], scores: [reals], seed?}
Json plan_to_json(const ImmunizationPlan& plan, const NodeIndexMap& ids);
ImmunizationPlan plan_from_json(const Json& j, const NodeIndexMap& ids);

/// {mean_activated, active_series, per_trial_activated}
Json outcome_to_json(const SpreadOutcome& outcome, bool with_trials = true);
SpreadOutcome outcome_from_json(const Json& j);

/// Table-shaped report: {algorithm, k, saved_nodes, rows: [{graph,
/// activated_nodes, saved_nodes, active_series} for unblocked, blocked]}
Json report_to_json(const MitigationReport& report, const ImmunizationPlan& plan);

Json classification_to_json(const ClassificationReport& report);

/// lambda, iterations, residual and the `top` largest eigenvector entries.
Json eigen_to_json(const EigenPair& eig, const NodeIndexMap& ids, std::size_t top = 10);

}  // namespace immunet
