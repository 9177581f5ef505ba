#include "immunet/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "immunet/error.hpp"
#include "immunet/ingest.hpp"

#ifndef IMMUNET_VERSION
#define IMMUNET_VERSION "dev"
#endif

namespace immunet {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ingest", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

namespace {

// Re-labels any failure with the stage it happened in.
template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.stage() == name) throw;
    throw Error(name, e.what());
  } catch (const std::exception& e) {
    throw Error(name, e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : fs::absolute(base / path).lexically_normal();
}

Json input_entry(const fs::path& path) {
  Json files = Json::array();
  if (fs::is_directory(path)) {
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file()) entries.push_back(e.path());
    }
    std::sort(entries.begin(), entries.end());
    std::string combined;
    for (const auto& e : entries) combined += e.filename().string() + ' ' + sha256_file(e) + '\n';
    return Json{{"path", path.string()}, {"files", entries.size()}, {"sha256", sha256_hex(combined)}};
  }
  return Json{{"path", path.string()}, {"bytes", fs::file_size(path)}, {"sha256", sha256_file(path)}};
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("output", "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

PipelineResult run_pipeline(const Json& raw_config, const fs::path& base_dir) {
  const Json config = raw_config.contains("config") ? raw_config.at("config") : raw_config;

  // Resolve every path up front; the manifest stores the absolute form.
  Json resolved = config;
  auto& inputs = resolved["inputs"];
  for (const char* key : {"trees", "edges", "harmful", "labels"}) {
    if (inputs.contains(key)) inputs[key] = resolve(base_dir, inputs[key].get<std::string>()).string();
  }
  const fs::path out_dir = resolve(base_dir, resolved.value("output_dir", std::string("out")));
  resolved["output_dir"] = out_dir.string();

  PropagationForest forest;
  const auto ingest = [&] {
    const auto& in = resolved.at("inputs");
    std::vector<RawEdge> edges;
    Weighting weighting = Weighting::kAuto;
    if (in.contains("trees")) {
      forest = parse_propagation_trees(fs::path(in["trees"].get<std::string>()));
      edges = forest.edges;
      weighting = Weighting::kUnweighted;
    } else if (in.contains("edges")) {
      const std::string delim = in.value("delimiter", std::string());
      auto f = open_input(in["edges"].get<std::string>());
      edges = parse_edge_list(f, delim.empty() ? '\0' : delim[0], in["edges"].get<std::string>());
    } else {
      throw Error("ingest", "config names neither inputs.trees nor inputs.edges");
    }
    HarmfulSet harmful;
    if (in.contains("harmful")) {
      auto f = open_input(in["harmful"].get<std::string>());
      harmful = parse_node_set(f);
    } else if (in.contains("labels")) {
      auto f = open_input(in["labels"].get<std::string>());
      harmful = harmful_from_labels(parse_label_file(f, in["labels"].get<std::string>()), authors_of(forest.records));
    }
    return std::make_pair(build_graph(edges, weighting), std::move(harmful));
  };
  auto [full, harmful] = stage("ingest", ingest);

  const double fraction = resolved.value("/sample/fraction"_json_pointer, 1.0);
  const std::uint64_t sample_seed = resolved.value("/sample/seed"_json_pointer, std::uint64_t{0});
  IndexedGraph g = stage("sample", [&] {
    return fraction >= 1.0 ? full : sample_subgraph(full, fraction, sample_seed);
  });
  const RestrictedSet seeds = restrict_set(harmful, g.ids);

  const Algorithm algorithm =
      stage("immunize", [&] { return parse_algorithm(resolved.value("/immunize/algorithm"_json_pointer, std::string("sparseshield"))); });
  const std::size_t k = resolved.value("/immunize/k"_json_pointer, std::size_t{0});
  const std::uint64_t plan_seed = resolved.value("/immunize/seed"_json_pointer, std::uint64_t{0});
  ImmunizationPlan plan = stage("immunize", [&] {
    switch (algorithm) {
      case Algorithm::kNetShield: return netshield(g.graph, k, seeds.nodes);
      case Algorithm::kSparseShield: return sparseshield(g.graph, k, seeds.nodes);
      case Algorithm::kRandom: break;
    }
    return random_solver(g.graph, k, plan_seed);
  });

  SpreadConfig cfg;
  cfg.p = resolved.value("/spread/p"_json_pointer, cfg.p);
  cfg.trials = resolved.value("/spread/trials"_json_pointer, cfg.trials);
  cfg.master_seed = resolved.value("/spread/master_seed"_json_pointer, cfg.master_seed);
  cfg.max_steps = resolved.value("/spread/max_steps"_json_pointer, cfg.max_steps);
  const MitigationReport report = stage("simulate", [&] { return compare_with_plan(g.graph, seeds.nodes, plan, cfg); });

  PipelineResult result;
  result.plan = plan_to_json(plan, g.ids);
  result.report = report_to_json(report, plan);
  result.report["graph_nodes"] = g.graph.num_nodes();
  result.report["graph_edges"] = g.graph.num_edges();
  result.report["seeds"] = seeds.nodes.size();

  stage("output", [&] {
    fs::create_directories(out_dir);
    result.plan_path = out_dir / "plan.json";
    result.report_path = out_dir / "report.json";
    result.manifest_path = out_dir / "manifest.json";
    write_json(result.plan_path, result.plan);
    write_json(result.report_path, result.report);

    Json input_hashes = Json::object();
    for (auto& [key, value] : resolved.at("inputs").items()) {
      if (key == "delimiter") continue;
      input_hashes[key] = input_entry(value.get<std::string>());
    }
    result.manifest = Json{
        {"version", IMMUNET_VERSION},
        {"config", resolved},
        {"inputs", input_hashes},
        {"seeds", {{"sample", sample_seed}, {"immunize", plan_seed}, {"spread", cfg.master_seed}}},
        {"graph",
         {{"nodes", full.graph.num_nodes()},
          {"edges", full.graph.num_edges()},
          {"sample_nodes", g.graph.num_nodes()},
          {"sample_edges", g.graph.num_edges()},
          {"harmful", harmful.size()},
          {"harmful_in_sample", seeds.nodes.size()}}},
        {"outputs",
         {{"plan", {{"path", result.plan_path.string()}, {"sha256", sha256_file(result.plan_path)}}},
          {"report", {{"path", result.report_path.string()}, {"sha256", sha256_file(result.report_path)}}}}}};
    write_json(result.manifest_path, result.manifest);
    return 0;
  });
  return result;
}

PipelineResult run_pipeline(const fs::path& config_path) {
  Json config = stage("config", [&] {
    auto in = open_input(config_path);
    return Json::parse(in);
  });
  return run_pipeline(config, fs::absolute(config_path).parent_path());
}

}  // namespace immunet
