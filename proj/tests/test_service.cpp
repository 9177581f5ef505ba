#include <doctest.h>
#include <httplib.h>

#include <chrono>
#include <thread>

#include "immunet/service.hpp"

using namespace immunet;
using Request = Service::Request;

namespace {

Json call(Service& svc, const std::string& method, const std::string& path, const std::string& body = "",
          int expect = 200) {
  auto res = svc.handle(Request{method, path, body, {}});
  CHECK_MESSAGE(res.status == expect, method << " " << path << " -> " << res.body);
  return Json::parse(res.body);
}

// star with center "c" and leaves "l1".."l6", plus a tail l1-t
const char* kStar = "c l1\nc l2\nc l3\nc l4\nc l5\nc l6\nl1 t\n";

Json wait_job(Service& svc, const std::string& id) {
  for (int i = 0; i < 2000; ++i) {
    Json j = call(svc, "GET", "/jobs/" + id);
    if (j["status"] != "running") return j;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  FAIL("job did not finish");
  return {};
}

}  // namespace

TEST_CASE("upload formats") {
  Service svc;
  Json a = call(svc, "POST", "/graphs", kStar, 201);
  CHECK(a["graph_id"] == "g1");
  CHECK(a["n"] == 8);
  CHECK(a["m"] == 7);
  Json b = call(svc, "POST", "/graphs", Json{{"edge_list", "x,y\ny,z\n"}, {"delimiter", ","}}.dump(), 201);
  CHECK(b["graph_id"] == "g2");
  CHECK(b["m"] == 2);
  const std::string tree = "['ROOT', 'ROOT', '0.0']->['u1', 's1', '0.0']\n['u1', 's1', '0.0']->['u2', 's1', '1.5']\n";
  Json c = call(svc, "POST", "/graphs", Json{{"trees", {{"s1.txt", tree}}}}.dump(), 201);
  CHECK(c["n"] == 2);
  CHECK(c["m"] == 1);

  Json s = call(svc, "GET", "/graphs/g1");
  CHECK(s["max_degree"] == 6);
  CHECK(s["harmful"] == 0);
}

TEST_CASE("error envelope") {
  Service svc;
  Json e = call(svc, "POST", "/graphs", "a b c d\n", 400);
  CHECK(e["stage"] == "ingest");
  CHECK(e.contains("error"));
  CHECK(e.contains("detail"));
  e = call(svc, "GET", "/graphs/g9", "", 404);
  CHECK(e["error"] == "not_found");
  call(svc, "GET", "/nowhere", "", 404);
  call(svc, "POST", "/graphs", kStar, 201);
  call(svc, "DELETE", "/graphs/g1", "", 405);
  e = call(svc, "POST", "/graphs/g1/immunize", R"({"algorithm": "magic", "k": 1})", 400);
  CHECK(e["stage"] == "immunize");
  e = call(svc, "POST", "/graphs/g1/simulate", R"({"p": 2})", 400);
  CHECK(e["stage"] == "simulate");
  call(svc, "POST", "/graphs/g1/simulate", "{not json", 400);
  e = call(svc, "POST", "/graphs/g1/simulate", R"({"seeds": ["nope"]})", 400);
  CHECK(e["stage"] == "graph");
  call(svc, "GET", "/jobs/j7", "", 404);
}

TEST_CASE("harmful set, immunization and comparison") {
  Service svc;
  call(svc, "POST", "/graphs", kStar, 201);
  Json h = call(svc, "PUT", "/graphs/g1/harmful", R"(["l2", "ghost"])");
  CHECK(h["harmful"] == 1);
  CHECK(h["dropped"] == 1);
  h = call(svc, "PUT", "/graphs/g1/harmful", R"({"ids": ["l2"]})");
  CHECK(h["harmful"] == 1);

  Json plan = call(svc, "POST", "/graphs/g1/immunize", R"({"algorithm": "sparseshield", "k": 1})");
  CHECK(plan["blocked"] == Json::array({"c"}));
  Json dense = call(svc, "POST", "/graphs/g1/immunize", R"({"algorithm": "netshield", "k": 1})");
  CHECK(dense["blocked"] == plan["blocked"]);
  CHECK(dense["scores"] == plan["scores"]);
  Json rnd = call(svc, "POST", "/graphs/g1/immunize", R"({"algorithm": "random", "k": 3, "seed": 4})");
  CHECK(rnd["blocked"].size() == 3);
  CHECK(rnd["seed"] == 4);
  CHECK(call(svc, "GET", "/graphs/g1").contains("lambda"));

  // p = 1 from l2 reaches everything; blocking the center isolates l2
  Json sim = call(svc, "POST", "/graphs/g1/simulate", R"({"p": 1, "trials": 5})");
  CHECK(sim["mean_activated"] == 8.0);
  Json cmp = call(svc, "POST", "/graphs/g1/compare", Json{{"plan", plan}, {"p", 1}, {"trials", 5}}.dump());
  CHECK(cmp["saved_nodes"] == 7.0);
  CHECK(cmp["rows"][1]["activated_nodes"] == 1.0);
  CHECK(cmp["blocked"]["mean_activated"] == 1.0);
}

TEST_CASE("async jobs") {
  Service svc;
  call(svc, "POST", "/graphs", kStar, 201);
  Json started = call(svc, "POST", "/graphs/g1/simulate", R"({"seeds": ["t"], "p": 1, "trials": 50, "async": true})", 202);
  CHECK(started["status"] == "running");
  Json done = wait_job(svc, started["job_id"]);
  CHECK(done["status"] == "done");
  CHECK(done["result"]["mean_activated"] == 8.0);

  Json bad = call(svc, "POST", "/graphs/g1/compare",
                  R"({"plan": {"algorithm": "random", "k": 1, "blocked": ["c"]}, "seeds": ["t"], "trials": 0, "async": true})", 202);
  Json failed = wait_job(svc, bad["job_id"]);
  CHECK(failed["status"] == "failed");
  CHECK(failed["error"]["stage"] == "simulate");
  svc.drain_jobs();
}

TEST_CASE("view is capped and ordered by degree") {
  Service svc;
  std::string edges;
  for (int i = 1; i <= 3500; ++i) edges += "hub n" + std::to_string(i) + "\n";
  call(svc, "POST", "/graphs", edges, 201);
  call(svc, "PUT", "/graphs/g1/harmful", R"(["hub"])");
  Json v = call(svc, "GET", "/graphs/g1/view");
  CHECK(v["nodes"].size() == Service::kViewLimit);
  CHECK(v["truncated"] == true);
  CHECK(v["total_nodes"] == 3501);
  CHECK(v["nodes"][0]["id"] == "hub");
  CHECK(v["nodes"][0]["harmful"] == true);
  CHECK(v["nodes"][1]["harmful"] == false);
  CHECK(v["edges"].size() == Service::kViewLimit - 1);

  auto res = svc.handle(Request{"GET", "/graphs/g1/view", "", {{"limit", "10"}}});
  Json small = Json::parse(res.body);
  CHECK(small["nodes"].size() == 10);
  res = svc.handle(Request{"GET", "/graphs/g1/view", "", {{"limit", "x"}}});
  CHECK(res.status == 400);
}

TEST_CASE("served over a socket") {
  Service svc;
  httplib::Server server;
  svc.bind(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto r = client.Post("/graphs", kStar, "text/plain");
  REQUIRE(r);
  CHECK(r->status == 201);
  r = client.Get("/graphs/g1/view?limit=2");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(Json::parse(r->body)["nodes"].size() == 2);
  CHECK(r->get_header_value("Content-Type").find("application/json") == 0);
  server.stop();
  th.join();
}
