#include "immunet/serialize.hpp"

#include <algorithm>
#include <numeric>

#include "immunet/error.hpp"

namespace immunet {

Json plan_to_json(const ImmunizationPlan& plan, const NodeIndexMap& ids) {
  Json blocked = Json::array();
  for (NodeId v : plan.blocked) blocked.push_back(ids.id(v));
  Json j = {{"algorithm", algorithm_name(plan.algorithm)},
            {"k", plan.k},
            {"blocked", std::move(blocked)},
            {"scores", plan.selection_scores}};
  if (plan.seed) j["seed"] = *plan.seed;
  return j;
}

ImmunizationPlan plan_from_json(const Json& j, const NodeIndexMap& ids) {
  try {
    ImmunizationPlan plan;
    plan.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    plan.k = j.at("k").get<std::size_t>();
    for (const auto& id : j.at("blocked")) plan.blocked.push_back(ids.at(id.get<std::string>()));
    if (j.contains("scores")) plan.selection_scores = j.at("scores").get<std::vector<double>>();
    if (j.contains("seed") && !j.at("seed").is_null()) plan.seed = j.at("seed").get<std::uint64_t>();
    return plan;
  } catch (const Json::exception& e) {
    throw Error("immunize", std::string("malformed plan: ") + e.what());
  }
}

Json outcome_to_json(const SpreadOutcome& outcome, bool with_trials) {
  Json j = {{"mean_activated", outcome.mean_activated}, {"active_series", outcome.active_series}};
  if (with_trials) j["per_trial_activated"] = outcome.per_trial_activated;
  return j;
}

SpreadOutcome outcome_from_json(const Json& j) {
  SpreadOutcome o;
  o.mean_activated = j.at("mean_activated").get<double>();
  o.active_series = j.at("active_series").get<std::vector<double>>();
  if (j.contains("per_trial_activated")) {
    o.per_trial_activated = j.at("per_trial_activated").get<std::vector<std::uint32_t>>();
  }
  return o;
}

Json report_to_json(const MitigationReport& report, const ImmunizationPlan& plan) {
  auto row = [](const char* name, const SpreadOutcome& o, double saved) {
    return Json{{"graph", name},
                {"activated_nodes", o.mean_activated},
                {"saved_nodes", saved},
                {"active_series", o.active_series}};
  };
  return Json{{"algorithm", algorithm_name(plan.algorithm)},
              {"k", plan.k},
              {"saved_nodes", report.saved},
              {"rows", Json::array({row("unblocked", report.unblocked, 0.0),
                                    row("blocked", report.blocked, report.saved)})}};
}

Json classification_to_json(const ClassificationReport& report) {
  Json per_class = Json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& s = report.per_class[c];
    Json entry = {{"class", c}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
    if (const char* name = class_name(static_cast<int>(c))) entry["name"] = name;
    per_class.push_back(std::move(entry));
  }
  auto avg = [](const Averages& a) { return Json{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}}; };
  return Json{{"accuracy", report.accuracy},
              {"per_class", std::move(per_class)},
              {"macro", avg(report.macro)},
              {"weighted", avg(report.weighted)},
              {"confusion", report.confusion.counts}};
}

Json eigen_to_json(const EigenPair& eig, const NodeIndexMap& ids, std::size_t top) {
  std::vector<NodeId> order(eig.u.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  top = std::min(top, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](NodeId a, NodeId b) { return eig.u[a] != eig.u[b] ? eig.u[a] > eig.u[b] : a < b; });
  Json entries = Json::array();
  for (std::size_t i = 0; i < top; ++i) entries.push_back({{"id", ids.id(order[i])}, {"value", eig.u[order[i]]}});
  return Json{{"lambda", eig.lambda}, {"iterations", eig.iterations}, {"residual", eig.residual}, {"top", entries}};
}

}  // namespace immunet
