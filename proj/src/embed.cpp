#include "immunet/embed.hpp"

#include <algorithm>
#include <cmath>

#include "immunet/error.hpp"
#include "immunet/random.hpp"

namespace immunet {

std::vector<double> transition_weights(const Graph& g, std::optional<NodeId> prev, NodeId cur, double p, double q) {
  auto nb = g.neighbors(cur);
  auto wt = g.weights(cur);
  std::vector<double> out(nb.size());
  for (std::size_t e = 0; e < nb.size(); ++e) {
    double alpha = 1.0;
    if (prev) {
      if (nb[e] == *prev) {
        alpha = 1.0 / p;
      } else if (!g.has_edge(*prev, nb[e])) {
        alpha = 1.0 / q;
      }
    }
    out[e] = wt[e] * alpha;
  }
  return out;
}

namespace {

NodeId draw(std::span<const NodeId> nb, const std::vector<double>& weights, std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = to_unit(rng()) * total;
  double cum = 0.0;
  for (std::size_t e = 0; e < nb.size(); ++e) {
    cum += weights[e];
    if (target < cum) return nb[e];
  }
  return nb.back();
}

void walk_from(const Graph& g, NodeId start, const WalkOptions& opts, std::vector<NodeId>* out) {
  std::mt19937_64 rng(derive_seed(opts.seed, start));
  for (std::size_t r = 0; r < opts.walks_per_node; ++r) {
    auto& walk = out[r];
    walk.clear();
    walk.reserve(opts.walk_len);
    walk.push_back(start);
    if (g.degree(start) == 0) continue;
    std::optional<NodeId> prev;
    while (walk.size() < opts.walk_len) {
      const NodeId cur = walk.back();
      const NodeId next = node2vec_step(g, prev, cur, opts.p, opts.q, rng);
      prev = cur;
      walk.push_back(next);
    }
  }
}

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }
double sigmoid(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

NodeId node2vec_step(const Graph& g, std::optional<NodeId> prev, NodeId cur, double p, double q,
                     std::mt19937_64& rng) {
  return draw(g.neighbors(cur), transition_weights(g, prev, cur, p, q), rng);
}

WalkCorpus generate_walks(const Graph& g, const WalkOptions& opts) {
  if (!(opts.p > 0.0) || !(opts.q > 0.0)) throw Error("embed", "node2vec p and q must be positive");
  if (opts.walk_len < 1) throw Error("embed", "walk length must be at least 1");
  WalkCorpus corpus;
  corpus.num_nodes = g.num_nodes();
  corpus.walks.resize(g.num_nodes() * opts.walks_per_node);
  const auto n = static_cast<std::int64_t>(g.num_nodes());
  if (opts.exec == Exec::kSerial) {
    for (std::int64_t v = 0; v < n; ++v) {
      walk_from(g, static_cast<NodeId>(v), opts, corpus.walks.data() + v * opts.walks_per_node);
    }
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t v = 0; v < n; ++v) {
      walk_from(g, static_cast<NodeId>(v), opts, corpus.walks.data() + v * opts.walks_per_node);
    }
  }
  return corpus;
}

void write_walk_corpus(std::ostream& out, const WalkCorpus& corpus, const NodeIndexMap& ids) {
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) out << (i ? " " : "") << ids.id(walk[i]);
    out << '\n';
  }
}

SkipGramResult train_skipgram(const WalkCorpus& corpus, const NodeIndexMap& ids, const SkipGramOptions& opts) {
  if (opts.dim < 1) throw Error("embed", "embedding dimension must be at least 1");
  if (corpus.walks.empty() || corpus.num_nodes == 0) throw Error("embed", "empty walk corpus");
  if (ids.size() != corpus.num_nodes) throw Error("embed", "id map does not match the corpus node count");
  const std::size_t n = corpus.num_nodes;
  const std::size_t d = opts.dim;

  std::mt19937_64 rng(opts.seed);
  std::vector<double> in(n * d), out(n * d, 0.0);
  for (double& x : in) x = (to_unit(rng()) - 0.5) / static_cast<double>(d);

  std::size_t pairs_per_epoch = 0;
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const std::size_t lo = i >= opts.window ? i - opts.window : 0;
      const std::size_t hi = std::min(walk.size() - 1, i + opts.window);
      pairs_per_epoch += hi - lo;
    }
  }
  const double total_steps = static_cast<double>(pairs_per_epoch * std::max<std::size_t>(opts.epochs, 1));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> grad(d);
  std::vector<double> epoch_loss;
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    double loss = 0.0;
    for (const auto& walk : corpus.walks) {
      for (std::size_t i = 0; i < walk.size(); ++i) {
        const std::size_t lo = i >= opts.window ? i - opts.window : 0;
        const std::size_t hi = std::min(walk.size() - 1, i + opts.window);
        double* center = in.data() + walk[i] * d;
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const double lr =
              opts.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(step++) / total_steps);
          std::fill(grad.begin(), grad.end(), 0.0);
          const NodeId context = walk[j];
          for (std::size_t s = 0; s <= opts.negatives; ++s) {
            NodeId target = context;
            double label = 1.0;
            if (s > 0) {
              target = static_cast<NodeId>(pick(rng));
              if (target == context) continue;
              label = 0.0;
            }
            double* ctx = out.data() + target * d;
            double f = 0.0;
            for (std::size_t c = 0; c < d; ++c) f += center[c] * ctx[c];
            loss -= label > 0 ? log_sigmoid(f) : log_sigmoid(-f);
            const double g = (label - sigmoid(f)) * lr;
            for (std::size_t c = 0; c < d; ++c) {
              grad[c] += g * ctx[c];
              ctx[c] += g * center[c];
            }
          }
          for (std::size_t c = 0; c < d; ++c) center[c] += grad[c];
        }
      }
    }
    epoch_loss.push_back(loss);
  }

  SkipGramResult result{EmbeddingMatrix(d), std::move(epoch_loss)};
  for (std::size_t v = 0; v < n; ++v) {
    result.embeddings.add_row(ids.id(static_cast<NodeId>(v)), std::span<const double>(in.data() + v * d, d));
  }
  return result;
}

FusedEmbeddings fuse_embeddings(const EmbeddingMatrix& text, const EmbeddingMatrix& node,
                                const std::unordered_map<std::string, std::string>& author_of) {
  FusedEmbeddings fused{EmbeddingMatrix(text.dim() + node.dim()), text.dim(), node.dim()};
  std::vector<double> row(text.dim() + node.dim());
  for (std::size_t r = 0; r < text.rows(); ++r) {
    const auto& doc = text.id(r);
    auto author = author_of.find(doc);
    if (author == author_of.end()) throw Error("embed", "document " + doc + " has no author");
    const std::size_t* node_row = node.find(author->second);
    if (!node_row) throw Error("embed", "document " + doc + ": author " + author->second + " has no node embedding");
    auto t = text.row(r);
    auto s = node.row(*node_row);
    std::copy(t.begin(), t.end(), row.begin());
    std::copy(s.begin(), s.end(), row.begin() + static_cast<std::ptrdiff_t>(t.size()));
    fused.matrix.add_row(doc, row);
  }
  return fused;
}

}  // namespace immunet
