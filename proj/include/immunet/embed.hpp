#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "immunet/embedding_matrix.hpp"
#include "immunet/graph.hpp"
#include "immunet/kernels.hpp"

namespace immunet {

struct WalkOptions {
  double p = 1.0;  // return parameter
  double q = 1.0;  // in-out parameter
  std::size_t walk_len = 40;
  std::size_t walks_per_node = 10;
  std::uint64_t seed = 0;
  Exec exec = Exec::kParallel;
};

/// Walks are stored node-major: walks[v * walks_per_node + r] starts at v.
struct WalkCorpus {
  std::size_t num_nodes = 0;
  std::vector<std::vector<NodeId>> walks;
};

/// Unnormalized second-order weights over neighbors(cur): w(cur,x) times
/// 1/p when x == prev, 1 when x is adjacent to prev, 1/q otherwise.
/// Without a previous node every factor is 1.
std::vector<double> transition_weights(const Graph& g, std::optional<NodeId> prev, NodeId cur, double p, double q);

/// Draws the next node by cumulative-weight inversion. `cur` must have at
/// least one neighbor.
NodeId node2vec_step(const Graph& g, std::optional<NodeId> prev, NodeId cur, double p, double q,
                     std::mt19937_64& rng);

/// Node2Vec corpus. Walks from isolated nodes have length 1. Each start node
/// has its own stream derived from `seed`, so the result does not depend
/// on opts.exec or the thread count.
WalkCorpus generate_walks(const Graph& g, const WalkOptions& opts);

void write_walk_corpus(std::ostream& out, const WalkCorpus& corpus, const NodeIndexMap& ids);

struct SkipGramOptions {
  std::size_t dim = 64;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 0;
};

struct SkipGramResult {
  EmbeddingMatrix embeddings;     // one row per node, ids from the index map
  std::vector<double> epoch_loss; // summed negative-sampling loss per epoch
};

/// Skip-gram with uniform negative sampling, plain single-threaded SGD with
/// a linearly decaying learning rate.
SkipGramResult train_skipgram(const WalkCorpus& corpus, const NodeIndexMap& ids, const SkipGramOptions& opts);

struct FusedEmbeddings {
  EmbeddingMatrix matrix;  // |docs| x (text_dim + node_dim), in text-row order
  std::size_t text_dim = 0;
  std::size_t node_dim = 0;
};

/// Row(doc) = text(doc) followed by node(author_of(doc)).
FusedEmbeddings fuse_embeddings(const EmbeddingMatrix& text, const EmbeddingMatrix& node,
                                const std::unordered_map<std::string, std::string>& author_of);

}  // namespace immunet
