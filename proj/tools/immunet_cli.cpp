// immunet: command-line front end for ingest, immunization, cascade
// simulation, embeddings, metrics, the pipeline runner and the HTTP service.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "immunet/embed.hpp"
#include "immunet/error.hpp"
#include "immunet/pipeline.hpp"
#include "immunet/serialize.hpp"
#include "immunet/service.hpp"

namespace fs = std::filesystem;
using namespace immunet;

namespace {

struct GraphSource {
  std::string dump;
  std::string edges;
  std::string trees;
  std::string delimiter;

  void add_options(CLI::App* cmd) {
    auto* g = cmd->add_option("--graph", dump, "Graph dump prefix written by `ingest`");
    auto* e = cmd->add_option("--edges", edges, "Edge-list file");
    auto* t = cmd->add_option("--trees", trees, "Directory of propagation-tree files");
    cmd->add_option("--delimiter", delimiter, "Edge-list delimiter (default: any whitespace)");
    g->excludes(e)->excludes(t);
    e->excludes(t);
  }

  IndexedGraph load() const {
    if (!dump.empty()) return read_graph_dump(dump);
    if (!trees.empty()) return build_graph(parse_propagation_trees(fs::path(trees)).edges, Weighting::kUnweighted);
    if (!edges.empty()) {
      auto in = open_input(edges);
      return build_graph(parse_edge_list(in, delimiter.empty() ? '\0' : delimiter[0], edges));
    }
    throw Error("ingest", "one of --graph, --edges or --trees is required");
  }
};

HarmfulSet read_node_set(const std::string& path) {
  auto in = open_input(path);
  return parse_node_set(in);
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("output", "cannot write " + out_path);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network immunization toolkit: spectral node blocking and cascade simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(IMMUNET_VERSION));

  // ingest
  GraphSource ingest_src;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Parse an edge list or tree directory into a graph dump");
  ingest_src.add_options(ingest);
  ingest->add_option("--out", ingest_out, "Output prefix (<prefix>.edges/.ids/.json)")->required();

  // sample
  GraphSource sample_src;
  double sample_fraction = 0.05;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  auto* sample = app.add_subcommand("sample", "Induced subgraph on a uniform node sample");
  sample_src.add_options(sample);
  sample->add_option("--fraction", sample_fraction, "Fraction of nodes to keep, in (0, 1]");
  sample->add_option("--seed", sample_seed, "Sampling seed");
  sample->add_option("--out", sample_out, "Output prefix")->required();

  // eigen
  GraphSource eigen_src;
  PowerIterationOptions eig_opts;
  bool eigen_json = false;
  auto* eigen = app.add_subcommand("eigen", "Largest adjacency eigenvalue and top eigenvector entries");
  eigen_src.add_options(eigen);
  eigen->add_option("--tol", eig_opts.tol, "Convergence tolerance");
  eigen->add_option("--max-iter", eig_opts.max_iter, "Iteration cap");
  eigen->add_flag("--json", eigen_json, "Print JSON");

  // immunize
  GraphSource imm_src;
  std::string imm_algorithm = "sparseshield", imm_harmful, imm_out;
  std::size_t imm_k = 0;
  std::uint64_t imm_seed = 0;
  auto* immunize_cmd = app.add_subcommand("immunize", "Select k nodes to block");
  imm_src.add_options(immunize_cmd);
  immunize_cmd->add_option("--algorithm", imm_algorithm)
      ->check(CLI::IsMember({"netshield", "sparseshield", "random"}));
  immunize_cmd->add_option("--k", imm_k, "Budget")->required();
  immunize_cmd->add_option("--harmful", imm_harmful, "Harmful node ids, one per line");
  immunize_cmd->add_option("--seed", imm_seed, "Seed (random solver)");
  immunize_cmd->add_option("--out", imm_out, "Plan JSON output (default stdout)");

  // simulate / compare share cascade options
  SpreadConfig spread;
  std::string seeds_from = "harmful", sim_harmful, sim_blocked_plan, sim_out;
  GraphSource sim_src;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo independent cascade");
  sim_src.add_options(simulate_cmd);
  simulate_cmd->add_option("--p", spread.p, "Edge activation probability");
  simulate_cmd->add_option("--trials", spread.trials);
  simulate_cmd->add_option("--seed", spread.master_seed, "Master seed");
  simulate_cmd->add_option("--max-steps", spread.max_steps);
  simulate_cmd->add_option("--seeds-from", seeds_from, "'harmful' or a file of seed ids");
  simulate_cmd->add_option("--harmful", sim_harmful, "Harmful node ids (for --seeds-from harmful)");
  simulate_cmd->add_option("--blocked", sim_blocked_plan, "Plan JSON whose nodes are blocked");
  simulate_cmd->add_option("--out", sim_out);

  GraphSource cmp_src;
  std::string cmp_plan, cmp_harmful, cmp_seeds_from = "harmful", cmp_out;
  auto* compare_cmd = app.add_subcommand("compare", "Coupled unblocked vs blocked cascade for a plan");
  cmp_src.add_options(compare_cmd);
  compare_cmd->add_option("--plan", cmp_plan, "Plan JSON")->required();
  compare_cmd->add_option("--harmful", cmp_harmful, "Harmful node ids");
  compare_cmd->add_option("--seeds-from", cmp_seeds_from, "'harmful' or a file of seed ids");
  compare_cmd->add_option("--p", spread.p);
  compare_cmd->add_option("--trials", spread.trials);
  compare_cmd->add_option("--seed", spread.master_seed);
  compare_cmd->add_option("--max-steps", spread.max_steps);
  compare_cmd->add_option("--out", cmp_out);

  // embed
  GraphSource emb_src;
  WalkOptions walk;
  SkipGramOptions sg;
  std::string emb_out, emb_corpus;
  std::uint64_t emb_seed = 0;
  auto* embed_cmd = app.add_subcommand("embed", "Node2Vec walks + skip-gram node embeddings");
  emb_src.add_options(embed_cmd);
  embed_cmd->add_option("--p", walk.p, "Return parameter");
  embed_cmd->add_option("--q", walk.q, "In-out parameter");
  embed_cmd->add_option("--dim", sg.dim);
  embed_cmd->add_option("--walk-len", walk.walk_len);
  embed_cmd->add_option("--walks", walk.walks_per_node, "Walks per node");
  embed_cmd->add_option("--window", sg.window);
  embed_cmd->add_option("--negatives", sg.negatives);
  embed_cmd->add_option("--epochs", sg.epochs);
  embed_cmd->add_option("--lr", sg.learning_rate);
  embed_cmd->add_option("--seed", emb_seed);
  embed_cmd->add_option("--out", emb_out, "Embedding TSV")->required();
  embed_cmd->add_option("--corpus", emb_corpus, "Also write the walk corpus here");

  // fuse
  std::string fuse_text, fuse_node, fuse_trees, fuse_authors, fuse_out;
  auto* fuse = app.add_subcommand("fuse", "Concatenate text and author node embeddings per document");
  fuse->add_option("--text", fuse_text, "Text embedding TSV")->required();
  fuse->add_option("--node", fuse_node, "Node embedding TSV")->required();
  auto* fa = fuse->add_option("--authors", fuse_authors, "TSV of <doc_id>\\t<user_id>");
  auto* ft = fuse->add_option("--trees", fuse_trees, "Tree directory (authors from ROOT lines)");
  fa->excludes(ft);
  fuse->add_option("--out", fuse_out, "Fused TSV")->required();

  // metrics
  std::string truth_path, pred_path;
  int classes = kNumNewsClasses;
  auto* metrics_cmd = app.add_subcommand("metrics", "Score a prediction label file against ground truth");
  metrics_cmd->add_option("--truth", truth_path)->required();
  metrics_cmd->add_option("--pred", pred_path)->required();
  metrics_cmd->add_option("--classes", classes);

  // run
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the ingest-sample-immunize-simulate pipeline from a config");
  run->add_option("--config", config_path, "Config or manifest JSON")->required();

  // serve
  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Start the HTTP/JSON service");
  serve->add_option("--port", port);
  serve->add_option("--host", host);

  CLI11_PARSE(app, argc, argv);

  auto seeds_for = [](const IndexedGraph& g, const std::string& from, const std::string& harmful_path) {
    HarmfulSet set;
    if (from == "harmful") {
      if (!harmful_path.empty()) set = read_node_set(harmful_path);
    } else {
      set = read_node_set(from);
    }
    auto r = restrict_set(set, g.ids);
    if (r.dropped > 0) std::cerr << "note: " << r.dropped << " seed id(s) not in the graph were dropped\n";
    return r.nodes;
  };

  try {
    if (*ingest) {
      auto g = ingest_src.load();
      write_graph_dump(g, ingest_out);
      std::cout << Json{{"n", g.graph.num_nodes()}, {"m", g.graph.num_edges()}}.dump() << '\n';
    } else if (*sample) {
      auto g = sample_subgraph(sample_src.load(), sample_fraction, sample_seed);
      write_graph_dump(g, sample_out);
      std::cout << Json{{"n", g.graph.num_nodes()}, {"m", g.graph.num_edges()}}.dump() << '\n';
    } else if (*eigen) {
      auto g = eigen_src.load();
      auto eig = largest_eigenpair(g.graph, eig_opts);
      auto j = eigen_to_json(eig, g.ids, 10);
      if (eigen_json) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout.precision(12);
        std::cout << "lambda\t" << eig.lambda << "\n";
        for (const auto& e : j["top"]) std::cout << e["id"].get<std::string>() << '\t' << e["value"].get<double>() << '\n';
      }
    } else if (*immunize_cmd) {
      auto g = imm_src.load();
      HarmfulSet set = imm_harmful.empty() ? HarmfulSet{} : read_node_set(imm_harmful);
      auto harmful = restrict_set(set, g.ids);
      ImmunizationPlan plan;
      switch (parse_algorithm(imm_algorithm)) {
        case Algorithm::kNetShield: plan = netshield(g.graph, imm_k, harmful.nodes); break;
        case Algorithm::kSparseShield: plan = sparseshield(g.graph, imm_k, harmful.nodes); break;
        case Algorithm::kRandom: plan = random_solver(g.graph, imm_k, imm_seed); break;
      }
      emit(plan_to_json(plan, g.ids), imm_out);
    } else if (*simulate_cmd) {
      auto g = sim_src.load();
      auto seeds = seeds_for(g, seeds_from, sim_harmful);
      std::vector<NodeId> blocked;
      if (!sim_blocked_plan.empty()) {
        auto in = open_input(sim_blocked_plan);
        blocked = plan_from_json(Json::parse(in), g.ids).blocked;
      }
      emit(outcome_to_json(simulate_spread(g.graph, seeds, blocked, spread)), sim_out);
    } else if (*compare_cmd) {
      auto g = cmp_src.load();
      auto seeds = seeds_for(g, cmp_seeds_from, cmp_harmful);
      auto in = open_input(cmp_plan);
      auto plan = plan_from_json(Json::parse(in), g.ids);
      emit(report_to_json(compare_with_plan(g.graph, seeds, plan, spread), plan), cmp_out);
    } else if (*embed_cmd) {
      auto g = emb_src.load();
      walk.seed = emb_seed;
      sg.seed = emb_seed + 1;
      auto corpus = generate_walks(g.graph, walk);
      if (!emb_corpus.empty()) {
        std::ofstream out(emb_corpus);
        write_walk_corpus(out, corpus, g.ids);
      }
      auto result = train_skipgram(corpus, g.ids, sg);
      for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
        std::cerr << "epoch " << e + 1 << " loss " << result.epoch_loss[e] << '\n';
      }
      std::ofstream out(emb_out);
      if (!out) throw Error("embed", "cannot write " + emb_out);
      write_embedding_table(out, result.embeddings);
    } else if (*fuse) {
      auto tin = open_input(fuse_text);
      auto text = parse_embedding_table(tin, fuse_text);
      auto nin = open_input(fuse_node);
      auto node = parse_embedding_table(nin, fuse_node);
      std::unordered_map<std::string, std::string> author_of;
      if (!fuse_trees.empty()) {
        author_of = authors_of(parse_propagation_trees(fs::path(fuse_trees)).records);
      } else if (!fuse_authors.empty()) {
        auto ain = open_input(fuse_authors);
        std::string line;
        while (std::getline(ain, line)) {
          std::istringstream ls(line);
          std::string doc, user;
          if (ls >> doc >> user) author_of[doc] = user;
        }
      } else {
        throw Error("embed", "fuse needs --authors or --trees");
      }
      auto fused = fuse_embeddings(text, node, author_of);
      std::ofstream out(fuse_out);
      if (!out) throw Error("embed", "cannot write " + fuse_out);
      write_embedding_table(out, fused.matrix);
      std::cout << Json{{"rows", fused.matrix.rows()}, {"width", fused.matrix.dim()}}.dump() << '\n';
    } else if (*metrics_cmd) {
      auto tin = open_input(truth_path);
      auto pin = open_input(pred_path);
      auto report = classification_report(parse_label_file(tin, truth_path), parse_label_file(pin, pred_path), classes);
      std::cout << classification_to_json(report).dump(2) << '\n';
      print_confusion(std::cout, report.confusion);
    } else if (*run) {
      auto result = run_pipeline(fs::path(config_path));
      std::cout << Json{{"plan", result.plan_path.string()},
                        {"report", result.report_path.string()},
                        {"manifest", result.manifest_path.string()},
                        {"saved_nodes", result.report["saved_nodes"]}}
                       .dump(2)
                << '\n';
    } else if (*serve) {
      Service service;
      std::cerr << "listening on " << host << ':' << port << '\n';
      service.serve(host, port);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
