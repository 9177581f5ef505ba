#include "immunet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <tuple>

#include <json.hpp>

#include "immunet/error.hpp"

namespace immunet {

NodeIndexMap::NodeIndexMap(std::vector<std::string> ids) {
  for (auto& id : ids) {
    if (!index_.emplace(id, static_cast<NodeId>(ids_.size())).second) {
      throw Error("graph", "duplicate node id '" + id + "'");
    }
    ids_.push_back(std::move(id));
  }
}

const NodeId* NodeIndexMap::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &it->second;
}

NodeId NodeIndexMap::at(const std::string& id) const {
  if (auto p = find(id)) return *p;
  throw Error("graph", "unknown node id '" + id + "'");
}

NodeId NodeIndexMap::intern(const std::string& id) {
  if (auto p = find(id)) return *p;
  if (ids_.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw Error("graph", "node count exceeds 2^31");
  }
  auto idx = static_cast<NodeId>(ids_.size());
  index_.emplace(id, idx);
  ids_.push_back(id);
  return idx;
}

Graph::Graph(std::vector<std::size_t> offsets, std::vector<NodeId> neighbors, std::vector<double> weights,
             bool unweighted)
    : offsets_(std::move(offsets)),
      neighbors_(std::move(neighbors)),
      weights_(std::move(weights)),
      unweighted_(unweighted) {
  if (offsets_.empty()) offsets_.push_back(0);
  if (unweighted_) std::fill(weights_.begin(), weights_.end(), 1.0);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

double Graph::weight(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0.0;
  return weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

namespace {

struct Arc {
  NodeId src;
  NodeId dst;
  double weight;
};

Graph assemble(std::size_t n, std::vector<Arc> arcs, bool unweighted) {
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<NodeId> nbrs;
  std::vector<double> wts;
  nbrs.reserve(arcs.size());
  wts.reserve(arcs.size());
  for (std::size_t i = 0; i < arcs.size();) {
    std::size_t j = i;
    double w = arcs[i].weight;
    while (j < arcs.size() && arcs[j].src == arcs[i].src && arcs[j].dst == arcs[i].dst) {
      w = std::max(w, arcs[j].weight);
      ++j;
    }
    nbrs.push_back(arcs[i].dst);
    wts.push_back(w);
    ++offsets[arcs[i].src + 1];
    i = j;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return Graph(std::move(offsets), std::move(nbrs), std::move(wts), unweighted);
}

}  // namespace

Graph build_graph(const std::vector<RawEdge>& edges, NodeIndexMap& ids, Weighting weighting) {
  std::vector<Arc> arcs;
  arcs.reserve(2 * edges.size());
  bool all_unit = true;
  for (const auto& e : edges) {
    if (e.src.empty() || e.dst.empty()) throw Error("graph", "edge with empty endpoint id");
    if (!(e.weight >= 0.0)) throw Error("graph", "negative edge weight");
    NodeId u = ids.intern(e.src);
    NodeId v = ids.intern(e.dst);
    if (u == v || e.weight == 0.0) continue;
    all_unit = all_unit && e.weight == 1.0;
    arcs.push_back({u, v, e.weight});
    arcs.push_back({v, u, e.weight});
  }
  bool unweighted = weighting == Weighting::kUnweighted || (weighting == Weighting::kAuto && all_unit);
  return assemble(ids.size(), std::move(arcs), unweighted);
}

IndexedGraph build_graph(const std::vector<RawEdge>& edges, Weighting weighting) {
  IndexedGraph out;
  out.graph = build_graph(edges, out.ids, weighting);
  return out;
}

IndexedGraph induced_subgraph(const IndexedGraph& g, std::vector<NodeId> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const std::size_t n = g.graph.num_nodes();
  constexpr NodeId kAbsent = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> remap(n, kAbsent);
  std::vector<std::string> ids;
  ids.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= n) throw Error("graph", "subgraph node index out of range");
    remap[keep[i]] = static_cast<NodeId>(i);
    ids.push_back(g.ids.id(keep[i]));
  }
  std::vector<std::size_t> offsets(keep.size() + 1, 0);
  std::vector<NodeId> nbrs;
  std::vector<double> wts;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    auto nb = g.graph.neighbors(keep[i]);
    auto wt = g.graph.weights(keep[i]);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (remap[nb[e]] == kAbsent) continue;
      // remap is monotone, so sorted order is preserved
      nbrs.push_back(remap[nb[e]]);
      wts.push_back(wt[e]);
    }
    offsets[i + 1] = nbrs.size();
  }
  return {Graph(std::move(offsets), std::move(nbrs), std::move(wts), g.graph.unweighted()),
          NodeIndexMap(std::move(ids))};
}

IndexedGraph sample_subgraph(const IndexedGraph& g, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("graph", "sample fraction must lie in (0, 1]");
  const std::size_t n = g.graph.num_nodes();
  auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  count = std::min(count, n);
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates: the first `count` slots are a uniform sample
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return induced_subgraph(g, std::move(pool));
}

RestrictedSet restrict_set(const HarmfulSet& set, const NodeIndexMap& map) {
  RestrictedSet out;
  for (const auto& id : set) {
    if (auto p = map.find(id)) {
      out.nodes.push_back(*p);
    } else {
      ++out.dropped;
    }
  }
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

std::vector<RawEdge> edge_dump(const IndexedGraph& g) {
  std::vector<RawEdge> out;
  out.reserve(g.graph.num_edges());
  for (NodeId u = 0; u < g.graph.num_nodes(); ++u) {
    auto nb = g.graph.neighbors(u);
    auto wt = g.graph.weights(u);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      if (u < nb[e]) out.push_back({g.ids.id(u), g.ids.id(nb[e]), wt[e]});
    }
  }
  return out;
}

void write_graph_dump(const IndexedGraph& g, const std::filesystem::path& prefix) {
  auto with_ext = [&](const char* ext) {
    auto p = prefix;
    p += ext;
    return p;
  };
  const auto edges_path = with_ext(".edges");
  const auto ids_path = with_ext(".ids");
  const auto header_path = with_ext(".json");
  {
    std::ofstream out(edges_path);
    if (!out) throw Error("graph", "cannot write " + edges_path.string());
    format_edge_list(out, edge_dump(g), '\t');
  }
  {
    std::ofstream out(ids_path);
    if (!out) throw Error("graph", "cannot write " + ids_path.string());
    for (const auto& id : g.ids.ids()) out << id << '\n';
  }
  nlohmann::json header = {{"n", g.graph.num_nodes()},
                           {"m", g.graph.num_edges()},
                           {"unweighted", g.graph.unweighted()},
                           {"id_map_file", ids_path.filename().string()},
                           {"edges_file", edges_path.filename().string()}};
  std::ofstream out(header_path);
  if (!out) throw Error("graph", "cannot write " + header_path.string());
  out << header.dump(2) << '\n';
}

IndexedGraph read_graph_dump(const std::filesystem::path& prefix) {
  auto header_path = prefix;
  header_path += ".json";
  auto hin = open_input(header_path);
  nlohmann::json header;
  try {
    hin >> header;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(header_path.string(), 0, e.what());
  }
  const auto dir = header_path.parent_path();
  auto edges_file = prefix;
  edges_file += ".edges";
  if (header.contains("edges_file")) edges_file = dir / header["edges_file"].get<std::string>();
  auto ids_in = open_input(dir / header.at("id_map_file").get<std::string>());
  NodeIndexMap ids;
  std::string line;
  while (std::getline(ids_in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.intern(line);
  }
  auto ein = open_input(edges_file);
  auto edges = parse_edge_list(ein, '\t', edges_file.string());
  bool unweighted = header.value("unweighted", false);
  IndexedGraph g;
  g.graph = build_graph(edges, ids, unweighted ? Weighting::kUnweighted : Weighting::kWeighted);
  g.ids = std::move(ids);
  if (g.graph.num_nodes() != header.at("n").get<std::size_t>() ||
      g.graph.num_edges() != header.at("m").get<std::size_t>()) {
    throw ParseError(header_path.string(), 0, "header n/m disagree with the edge file");
  }
  return g;
}

}  // namespace immunet
