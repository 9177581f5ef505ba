#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "immunet/embedding_matrix.hpp"

namespace immunet {

struct RawEdge {
  std::string src;
  std::string dst;
  double weight = 1.0;

  friend bool operator==(const RawEdge&, const RawEdge&) = default;
};

/// One `['u','t','τ']->['u','t','τ']` line of a propagation tree file.
struct PropagationRecord {
  std::string parent_user;
  std::string parent_tweet;
  double parent_time = 0.0;
  std::string child_user;
  std::string child_tweet;
  double child_time = 0.0;

  bool is_root() const noexcept { return parent_user == "ROOT"; }
};

struct PropagationForest {
  std::vector<PropagationRecord> records;
  std::vector<RawEdge> edges;  // parent_user - child_user, deduplicated, weight 1
};

/// Veracity classes and their integer codes.
enum class NewsClass : std::uint8_t { kTrue = 0, kFalse = 1, kUnverified = 2, kNonRumor = 3 };

inline constexpr int kNumNewsClasses = 4;

const char* class_name(int code);
std::optional<int> class_code(std::string_view name);

/// tweet id -> class code. Ordered so that formatting is canonical.
using LabelSet = std::map<std::string, int>;

/// External node ids flagged by an upstream detector.
using HarmfulSet = std::unordered_set<std::string>;

/// Parses an edge list. `delimiter` of '\0' splits on any run of tabs/spaces.
std::vector<RawEdge> parse_edge_list(std::istream& in, char delimiter = '\0',
                                     const std::string& source = {});
void format_edge_list(std::ostream& out, const std::vector<RawEdge>& edges, char delimiter = '\t');

std::vector<PropagationRecord> parse_propagation_tree(std::istream& in, const std::string& source = {});

/// Reads every regular file of `dir` in lexicographic filename order.
PropagationForest parse_propagation_trees(const std::filesystem::path& dir);

/// Same, for in-memory files (name -> content); used by the HTTP upload.
PropagationForest parse_propagation_trees(const std::map<std::string, std::string>& files);

/// Source-tweet author map taken from the ROOT lines: tweet id -> user id.
std::unordered_map<std::string, std::string> authors_of(const std::vector<PropagationRecord>& records);

LabelSet parse_label_file(std::istream& in, const std::string& source = {});
void format_label_file(std::ostream& out, const LabelSet& labels);

HarmfulSet parse_node_set(std::istream& in);

/// Authors of documents labelled `harmful_class` (default: false news).
HarmfulSet harmful_from_labels(const LabelSet& labels,
                               const std::unordered_map<std::string, std::string>& author_of,
                               int harmful_class = static_cast<int>(NewsClass::kFalse));

EmbeddingMatrix parse_embedding_table(std::istream& in, const std::string& source = {});
void write_embedding_table(std::ostream& out, const EmbeddingMatrix& m);

/// Opens `path` for reading or throws ParseError.
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace immunet
