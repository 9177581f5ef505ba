#include "immunet/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <numeric>
#include <regex>
#include <sstream>

#include "immunet/error.hpp"

namespace immunet {

GraphSession::GraphSession(IndexedGraph g) : g_(std::move(g)), harmful_(std::make_shared<HarmfulSet>()) {}

std::shared_ptr<const HarmfulSet> GraphSession::harmful() const {
  std::lock_guard lock(mu_);
  return harmful_;
}

void GraphSession::set_harmful(HarmfulSet set) {
  auto next = std::make_shared<const HarmfulSet>(std::move(set));
  std::lock_guard lock(mu_);
  harmful_ = std::move(next);
}

const EigenPair& GraphSession::eigenpair() const {
  std::call_once(eig_once_, [this] {
    eig_ = largest_eigenpair(g_.graph);
    eig_ready_ = true;
  });
  return eig_;
}

namespace {

using Response = Service::Response;

Response error_response(int status, const std::string& error, const std::string& stage, const std::string& detail) {
  return {status, Json{{"error", error}, {"stage", stage}, {"detail", detail}}.dump()};
}

Response ok(const Json& j, int status = 200) { return {status, j.dump()}; }

// Maps a thrown exception onto the {error, stage, detail} envelope.
Response from_exception(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConvergenceError& e) {
    return error_response(500, "solver_failed", e.stage(), e.detail());
  } catch (const Error& e) {
    return error_response(400, "bad_request", e.stage(), e.detail());
  } catch (const Json::exception& e) {
    return error_response(400, "bad_request", "service", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", "service", e.what());
  }
}

Json parse_body(const std::string& body) {
  if (body.empty()) return Json::object();
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    throw Error("service", std::string("request body is not JSON: ") + e.what());
  }
}

std::vector<NodeId> ids_to_nodes(const Json& list, const NodeIndexMap& ids, const char* what) {
  if (!list.is_array()) throw Error("service", std::string(what) + " must be an array of node ids");
  std::vector<NodeId> out;
  for (const auto& id : list) out.push_back(ids.at(id.is_string() ? id.get<std::string>() : id.dump()));
  return out;
}

SpreadConfig spread_config(const Json& body) {
  SpreadConfig cfg;
  cfg.p = body.value("p", cfg.p);
  cfg.trials = body.value("trials", cfg.trials);
  cfg.master_seed = body.value("master_seed", cfg.master_seed);
  cfg.max_steps = body.value("max_steps", cfg.max_steps);
  return cfg;
}

std::vector<NodeId> harmful_nodes(const GraphSession& s) {
  return restrict_set(*s.harmful(), s.graph().ids).nodes;
}

}  // namespace

Service::~Service() { drain_jobs(); }

void Service::drain_jobs() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

std::shared_ptr<GraphSession> Service::session(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = graphs_.find(id);
  return it == graphs_.end() ? nullptr : it->second;
}

Service::Response Service::handle(const Request& req) {
  static const std::regex kGraph(R"(^/graphs/([^/]+)$)");
  static const std::regex kGraphAction(R"(^/graphs/([^/]+)/(harmful|immunize|simulate|compare|view)$)");
  static const std::regex kJob(R"(^/jobs/([^/]+)$)");
  try {
    std::smatch m;
    if (req.path == "/graphs") {
      if (req.method == "POST") return create_graph(req);
      return error_response(405, "method_not_allowed", "service", req.method + " " + req.path);
    }
    if (std::regex_match(req.path, m, kGraph)) {
      if (req.method == "GET") return graph_stats(m[1]);
      return error_response(405, "method_not_allowed", "service", req.method + " " + req.path);
    }
    if (std::regex_match(req.path, m, kGraphAction)) {
      const std::string id = m[1];
      const std::string action = m[2];
      if (action == "harmful" && req.method == "PUT") return put_harmful(id, req);
      if (action == "immunize" && req.method == "POST") return immunize(id, req);
      if (action == "simulate" && req.method == "POST") return simulate(id, req);
      if (action == "compare" && req.method == "POST") return compare(id, req);
      if (action == "view" && req.method == "GET") return view(id, req);
      return error_response(405, "method_not_allowed", "service", req.method + " " + req.path);
    }
    if (std::regex_match(req.path, m, kJob) && req.method == "GET") return job(m[1]);
    return error_response(404, "not_found", "service", "no route for " + req.method + " " + req.path);
  } catch (...) {
    return from_exception(std::current_exception());
  }
}

Service::Response Service::create_graph(const Request& req) {
  IndexedGraph g;
  Json body;
  bool is_json = false;
  try {
    body = Json::parse(req.body);
    is_json = body.is_object();
  } catch (const Json::exception&) {
  }
  if (is_json && body.contains("trees")) {
    std::map<std::string, std::string> files;
    for (auto& [name, text] : body.at("trees").items()) files.emplace(name, text.get<std::string>());
    g = build_graph(parse_propagation_trees(files).edges, Weighting::kUnweighted);
  } else {
    std::string text = req.body;
    char delim = '\0';
    if (is_json) {
      if (!body.contains("edge_list")) throw Error("ingest", "upload needs an 'edge_list' or 'trees' member");
      text = body.at("edge_list").get<std::string>();
      const std::string d = body.value("delimiter", std::string());
      if (!d.empty()) delim = d[0];
    }
    std::istringstream in(text);
    g = build_graph(parse_edge_list(in, delim, "upload"));
  }
  const std::size_t n = g.graph.num_nodes(), m = g.graph.num_edges();
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "g" + std::to_string(next_graph_++);
    graphs_.emplace(id, std::make_shared<GraphSession>(std::move(g)));
  }
  return ok(Json{{"graph_id", id}, {"n", n}, {"m", m}}, 201);
}

Service::Response Service::graph_stats(const std::string& id) const {
  auto s = session(id);
  if (!s) return error_response(404, "not_found", "service", "unknown graph " + id);
  const auto& g = s->graph().graph;
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) max_degree = std::max(max_degree, g.degree(v));
  Json j = {{"graph_id", id},
            {"n", g.num_nodes()},
            {"m", g.num_edges()},
            {"unweighted", g.unweighted()},
            {"max_degree", max_degree},
            {"harmful", s->harmful()->size()}};
  if (s->has_eigenpair()) j["lambda"] = s->eigenpair().lambda;
  return ok(j);
}

Service::Response Service::put_harmful(const std::string& id, const Request& req) {
  auto s = session(id);
  if (!s) return error_response(404, "not_found", "service", "unknown graph " + id);
  Json body = parse_body(req.body);
  const Json& list = body.is_object() ? body.at("ids") : body;
  if (!list.is_array()) throw Error("service", "harmful set must be a JSON array of ids");
  HarmfulSet kept;
  std::size_t dropped = 0;
  for (const auto& item : list) {
    std::string nid = item.is_string() ? item.get<std::string>() : item.dump();
    if (s->graph().ids.find(nid)) {
      kept.insert(std::move(nid));
    } else {
      ++dropped;
    }
  }
  const std::size_t count = kept.size();
  s->set_harmful(std::move(kept));
  return ok(Json{{"graph_id", id}, {"harmful", count}, {"dropped", dropped}});
}

Service::Response Service::immunize(const std::string& id, const Request& req) {
  auto s = session(id);
  if (!s) return error_response(404, "not_found", "service", "unknown graph " + id);
  Json body = parse_body(req.body);
  const Algorithm algorithm = parse_algorithm(body.value("algorithm", std::string("sparseshield")));
  const std::size_t k = body.value("k", std::size_t{0});
  const auto harmful = harmful_nodes(*s);
  const auto& g = s->graph().graph;
  ImmunizationPlan plan;
  if (algorithm == Algorithm::kRandom) {
    plan = random_solver(g, k, body.value("seed", std::uint64_t{0}));
  } else if (k == 0 || g.num_nodes() == 0) {
    plan.algorithm = algorithm;
    plan.k = k;
  } else if (algorithm == Algorithm::kNetShield) {
    // size guard first; no point computing the eigenpair for a rejected call
    plan = g.num_nodes() > kDefaultDenseLimit ? netshield(g, k, harmful) : netshield(g, s->eigenpair(), k, harmful);
  } else {
    plan = sparseshield(g, s->eigenpair(), k, harmful);
  }
  return ok(plan_to_json(plan, s->graph().ids));
}

template <class Fn>
Service::Response Service::maybe_async(bool async, Fn&& compute) {
  if (!async) return ok(compute());
  auto job = std::make_shared<Job>();
  std::string job_id;
  {
    std::lock_guard lock(mu_);
    job_id = "j" + std::to_string(next_job_++);
    jobs_.emplace(job_id, job);
    workers_.emplace_back([job, compute = std::forward<Fn>(compute)]() mutable {
      try {
        job->result = compute();
        job->state = 1;
      } catch (...) {
        auto r = from_exception(std::current_exception());
        job->error_status = r.status;
        job->result = Json::parse(r.body);
        job->state = 2;
      }
    });
  }
  return ok(Json{{"job_id", job_id}, {"status", "running"}}, 202);
}

Service::Response Service::simulate(const std::string& id, const Request& req) {
  auto s = session(id);
  if (!s) return error_response(404, "not_found", "service", "unknown graph " + id);
  Json body = parse_body(req.body);
  const auto& ids = s->graph().ids;
  std::vector<NodeId> seeds = body.contains("seeds") ? ids_to_nodes(body.at("seeds"), ids, "seeds") : harmful_nodes(*s);
  std::vector<NodeId> blocked = body.contains("blocked") ? ids_to_nodes(body.at("blocked"), ids, "blocked")
                                                         : std::vector<NodeId>{};
  const SpreadConfig cfg = spread_config(body);
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw Error("simulate", "p must lie in [0, 1]");
  const auto& g = s->graph().graph;
  const double work = static_cast<double>(cfg.trials) * static_cast<double>(g.num_nodes() + g.num_edges());
  const bool async = body.value("async", work > kAsyncWork);
  return maybe_async(async, [s, seeds = std::move(seeds), blocked = std::move(blocked), cfg] {
    return outcome_to_json(simulate_spread(s->graph().graph, seeds, blocked, cfg));
  });
}

Service::Response Service::compare(const std::string& id, const Request& req) {
  auto s = session(id);
  if (!s) return error_response(404, "not_found", "service", "unknown graph " + id);
  Json body = parse_body(req.body);
  ImmunizationPlan plan = plan_from_json(body.at("plan"), s->graph().ids);
  std::vector<NodeId> seeds =
      body.contains("seeds") ? ids_to_nodes(body.at("seeds"), s->graph().ids, "seeds") : harmful_nodes(*s);
  const SpreadConfig cfg = spread_config(body);
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw Error("simulate", "p must lie in [0, 1]");
  const auto& g = s->graph().graph;
  const double work = 2.0 * static_cast<double>(cfg.trials) * static_cast<double>(g.num_nodes() + g.num_edges());
  const bool async = body.value("async", work > kAsyncWork);
  return maybe_async(async, [s, plan = std::move(plan), seeds = std::move(seeds), cfg] {
    const auto report = compare_with_plan(s->graph().graph, seeds, plan, cfg);
    Json j = report_to_json(report, plan);
    j["unblocked"] = outcome_to_json(report.unblocked, false);
    j["blocked"] = outcome_to_json(report.blocked, false);
    return j;
  });
}

Service::Response Service::view(const std::string& id, const Request& req) const {
  auto s = session(id);
  if (!s) return error_response(404, "not_found", "service", "unknown graph " + id);
  std::size_t limit = kViewLimit;
  if (auto it = req.query.find("limit"); it != req.query.end()) {
    try {
      limit = std::min<std::size_t>(kViewLimit, std::stoul(it->second));
    } catch (const std::exception&) {
      throw Error("service", "limit must be a nonnegative integer");
    }
  }
  const auto& g = s->graph().graph;
  const auto& ids = s->graph().ids;
  const auto harmful = s->harmful();
  std::vector<NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), NodeId{0});
  // degree-descending priority, index ascending among equals
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  const bool truncated = order.size() > limit;
  order.resize(std::min(order.size(), limit));
  std::vector<std::int64_t> position(g.num_nodes(), -1);
  Json nodes = Json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    position[order[i]] = static_cast<std::int64_t>(i);
    nodes.push_back(
        {{"id", ids.id(order[i])}, {"degree", g.degree(order[i])}, {"harmful", harmful->contains(ids.id(order[i]))}});
  }
  Json edges = Json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (NodeId j : g.neighbors(order[i])) {
      if (position[j] > static_cast<std::int64_t>(i)) edges.push_back({i, position[j]});
    }
  }
  return ok(Json{{"nodes", std::move(nodes)},
                 {"edges", std::move(edges)},
                 {"truncated", truncated},
                 {"total_nodes", g.num_nodes()}});
}

Service::Response Service::job(const std::string& id) const {
  std::shared_ptr<Job> j;
  {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(id);
    if (it != jobs_.end()) j = it->second;
  }
  if (!j) return error_response(404, "not_found", "service", "unknown job " + id);
  switch (j->state.load()) {
    case 0: return ok(Json{{"job_id", id}, {"status", "running"}});
    case 1: return ok(Json{{"job_id", id}, {"status", "done"}, {"result", j->result}});
    default: return ok(Json{{"job_id", id}, {"status", "failed"}, {"error", j->result}});
  }
}

void Service::bind(httplib::Server& server) {
  auto forward = [this](const httplib::Request& hreq, httplib::Response& hres) {
    Request req{hreq.method, hreq.path, hreq.body, {}};
    for (const auto& [k, v] : hreq.params) req.query.emplace(k, v);
    auto res = handle(req);
    hres.status = res.status;
    hres.set_content(res.body, "application/json; charset=utf-8");
  };
  const char* pattern = R"(/.*)";
  server.Get(pattern, forward);
  server.Post(pattern, forward);
  server.Put(pattern, forward);
  server.Delete(pattern, forward);
}

void Service::serve(const std::string& host, int port) {
  httplib::Server server;
  bind(server);
  if (!server.listen(host, port)) throw Error("service", "cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace immunet
