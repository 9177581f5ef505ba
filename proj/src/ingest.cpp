#include "immunet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "immunet/error.hpp"

namespace immunet {

void EmbeddingMatrix::add_row(std::string id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw std::invalid_argument("row '" + id + "' has " + std::to_string(values.size()) +
                                " columns, expected " + std::to_string(dim_));
  }
  if (index_.contains(id)) throw std::invalid_argument("duplicate row id '" + id + "'");
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), values.begin(), values.end());
}

const std::size_t* EmbeddingMatrix::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  if (delimiter == '\0') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i == line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delimiter, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Cursor over one tree line: `['u', 't', 'τ']->['u', 't', 'τ']`.
class TreeLineParser {
 public:
  explicit TreeLineParser(std::string_view s) : s_(s) {}

  bool triple(std::string& user, std::string& tweet, std::string& time) {
    skip_ws();
    if (!eat('[')) return false;
    if (!quoted(user) || !comma() || !quoted(tweet) || !comma() || !quoted(time)) return false;
    skip_ws();
    return eat(']');
  }
  bool arrow() {
    skip_ws();
    if (s_.substr(pos_, 2) != "->") return false;
    pos_ += 2;
    return true;
  }
  bool at_end() {
    skip_ws();
    return pos_ == s_.size();
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool comma() {
    skip_ws();
    return eat(',');
  }
  bool quoted(std::string& out) {
    skip_ws();
    if (pos_ >= s_.size() || (s_[pos_] != '\'' && s_[pos_] != '"')) return false;
    const char q = s_[pos_++];
    auto end = s_.find(q, pos_);
    if (end == std::string_view::npos) return false;
    out.assign(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return true;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void merge_tree_edges(const std::vector<PropagationRecord>& records, std::set<std::pair<std::string, std::string>>& seen,
                      std::vector<RawEdge>& edges) {
  for (const auto& r : records) {
    if (r.is_root()) continue;
    if (seen.emplace(r.parent_user, r.child_user).second) edges.push_back({r.parent_user, r.child_user, 1.0});
  }
}

}  // namespace

const char* class_name(int code) {
  switch (code) {
    case 0: return "true";
    case 1: return "false";
    case 2: return "unverified";
    case 3: return "non-rumor";
    default: return nullptr;
  }
}

std::optional<int> class_code(std::string_view name) {
  for (int c = 0; c < kNumNewsClasses; ++c) {
    if (name == class_name(c)) return c;
  }
  return std::nullopt;
}

std::vector<RawEdge> parse_edge_list(std::istream& in, char delimiter, const std::string& source) {
  std::vector<RawEdge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split(line, delimiter);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(source, lineno, "expected '<src> <dst> [weight]'");
    }
    RawEdge e{std::string(fields[0]), std::string(fields[1]), 1.0};
    if (fields.size() >= 3 && !fields[2].empty()) {
      auto w = to_double(fields[2]);
      if (!w || !std::isfinite(*w)) throw ParseError(source, lineno, "bad weight '" + std::string(fields[2]) + "'");
      if (*w < 0.0) throw ParseError(source, lineno, "negative weight");
      e.weight = *w;
    }
    edges.push_back(std::move(e));
  }
  return edges;
}

void format_edge_list(std::ostream& out, const std::vector<RawEdge>& edges, char delimiter) {
  auto old = out.precision(17);
  for (const auto& e : edges) out << e.src << delimiter << e.dst << delimiter << e.weight << '\n';
  out.precision(old);
}

std::vector<PropagationRecord> parse_propagation_tree(std::istream& in, const std::string& source) {
  std::vector<PropagationRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (trim(line).empty()) continue;
    TreeLineParser p(line);
    PropagationRecord r;
    std::string pt, ct;
    if (!p.triple(r.parent_user, r.parent_tweet, pt) || !p.arrow() ||
        !p.triple(r.child_user, r.child_tweet, ct) || !p.at_end()) {
      throw ParseError(source, lineno, "line does not match ['user','tweet','time']->['user','tweet','time']");
    }
    auto ptime = to_double(pt);
    auto ctime = to_double(ct);
    if (!ctime) throw ParseError(source, lineno, "unparsable time '" + ct + "'");
    // ROOT lines carry a placeholder parent; only the child is real.
    if (!ptime) {
      if (!r.is_root()) throw ParseError(source, lineno, "unparsable time '" + pt + "'");
      ptime = 0.0;
    }
    if (*ctime < 0.0) throw ParseError(source, lineno, "negative child time");
    if (r.child_user.empty() || r.child_tweet.empty() || r.parent_user.empty() || r.parent_tweet.empty()) {
      throw ParseError(source, lineno, "empty user or tweet id");
    }
    r.parent_time = *ptime;
    r.child_time = *ctime;
    records.push_back(std::move(r));
  }
  return records;
}

PropagationForest parse_propagation_trees(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ParseError(dir.string(), 0, "not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  PropagationForest forest;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& f : files) {
    auto in = open_input(f);
    auto recs = parse_propagation_tree(in, f.filename().string());
    merge_tree_edges(recs, seen, forest.edges);
    forest.records.insert(forest.records.end(), std::make_move_iterator(recs.begin()),
                          std::make_move_iterator(recs.end()));
  }
  return forest;
}

PropagationForest parse_propagation_trees(const std::map<std::string, std::string>& files) {
  PropagationForest forest;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [name, content] : files) {
    std::istringstream in(content);
    auto recs = parse_propagation_tree(in, name);
    merge_tree_edges(recs, seen, forest.edges);
    forest.records.insert(forest.records.end(), std::make_move_iterator(recs.begin()),
                          std::make_move_iterator(recs.end()));
  }
  return forest;
}

std::unordered_map<std::string, std::string> authors_of(const std::vector<PropagationRecord>& records) {
  std::unordered_map<std::string, std::string> out;
  for (const auto& r : records) {
    if (r.is_root()) out.emplace(r.child_tweet, r.child_user);
  }
  return out;
}

LabelSet parse_label_file(std::istream& in, const std::string& source) {
  LabelSet labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    auto body = trim(line);
    if (body.empty()) continue;
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError(source, lineno, "expected '<class>:<tweet_id>'");
    auto name = trim(body.substr(0, colon));
    auto id = std::string(trim(body.substr(colon + 1)));
    auto code = class_code(name);
    if (!code) throw ParseError(source, lineno, "unknown class '" + std::string(name) + "'");
    if (id.empty()) throw ParseError(source, lineno, "empty tweet id");
    auto [it, inserted] = labels.emplace(id, *code);
    if (!inserted && it->second != *code) {
      throw ParseError(source, lineno, "conflicting labels for tweet " + id);
    }
  }
  return labels;
}

void format_label_file(std::ostream& out, const LabelSet& labels) {
  for (const auto& [id, code] : labels) out << class_name(code) << ':' << id << '\n';
}

HarmfulSet parse_node_set(std::istream& in) {
  HarmfulSet set;
  std::string line;
  while (std::getline(in, line)) {
    auto body = trim(line);
    if (!body.empty()) set.emplace(body);
  }
  return set;
}

HarmfulSet harmful_from_labels(const LabelSet& labels, const std::unordered_map<std::string, std::string>& author_of,
                               int harmful_class) {
  HarmfulSet out;
  for (const auto& [tweet, code] : labels) {
    if (code != harmful_class) continue;
    if (auto it = author_of.find(tweet); it != author_of.end()) out.insert(it->second);
  }
  return out;
}

EmbeddingMatrix parse_embedding_table(std::istream& in, const std::string& source) {
  std::optional<EmbeddingMatrix> m;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2 || fields[0].empty()) throw ParseError(source, lineno, "expected '<id>\\t<f1>...'");
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = to_double(fields[i]);
      if (!v) throw ParseError(source, lineno, "non-numeric field '" + std::string(fields[i]) + "'");
      values.push_back(*v);
    }
    if (!m) m.emplace(values.size());
    if (values.size() != m->dim()) {
      throw ParseError(source, lineno,
                       "ragged row: " + std::to_string(values.size()) + " columns, expected " + std::to_string(m->dim()));
    }
    if (m->find(std::string(fields[0]))) throw ParseError(source, lineno, "duplicate id '" + std::string(fields[0]) + "'");
    m->add_row(std::string(fields[0]), values);
  }
  return m ? std::move(*m) : EmbeddingMatrix{};
}

void write_embedding_table(std::ostream& out, const EmbeddingMatrix& m) {
  auto old = out.precision(9);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << m.id(r);
    for (double v : m.row(r)) out << '\t' << v;
    out << '\n';
  }
  out.precision(old);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

}  // namespace immunet
