#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "immunet/error.hpp"
#include "immunet/ingest.hpp"

using namespace immunet;

namespace {
std::vector<RawEdge> edges_of(const std::string& text, char delim = '\0') {
  std::istringstream in(text);
  return parse_edge_list(in, delim);
}
}  // namespace

TEST_CASE("edge list: default weight, comments, delimiters") {
  CHECK(edges_of("a\tb\n", '\t') == std::vector<RawEdge>{{"a", "b", 1.0}});

  auto e = edges_of("a b 0.5\n# c\nb c 2", ' ');
  REQUIRE(e.size() == 2);
  CHECK(e[0] == RawEdge{"a", "b", 0.5});
  CHECK(e[1] == RawEdge{"b", "c", 2.0});

  // self-loops survive parsing
  CHECK(edges_of("x x\n").size() == 1);
  // ids are opaque strings, not numbers
  CHECK(edges_of("656955120626880512 0001\n")[0].dst == "0001");
}

TEST_CASE("edge list errors carry the line number") {
  try {
    edges_of("a\t\n", '\t');
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    edges_of("a b\n\nc d -1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("negative") != std::string::npos);
  }
  CHECK_THROWS_AS(edges_of("a b zz\n"), ParseError);
}

TEST_CASE("edge list round trip preserves the multiset") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<RawEdge> edges;
    std::uniform_int_distribution<int> node(0, 30);
    std::uniform_real_distribution<double> w(0.0, 10.0);
    for (int i = 0; i < 50; ++i) {
      edges.push_back({"n" + std::to_string(node(rng)), "n" + std::to_string(node(rng)), w(rng)});
    }
    std::ostringstream out;
    format_edge_list(out, edges);
    std::istringstream in(out.str());
    CHECK(parse_edge_list(in, '\t') == edges);
  }
}

TEST_CASE("propagation tree lines") {
  std::istringstream root("['ROOT','r','0.0']->['u1','t1','0.0']\n");
  auto recs = parse_propagation_tree(root);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].is_root());

  // layout of the public Twitter15 release: spaces after commas
  std::istringstream real(
      "['ROOT', 'ROOT', '0.0']->['972651', '80080680482123777', '0.0']\n"
      "['972651', '80080680482123777', '0.0']->['189397006', '80080680482123777', '1.73']\n");
  recs = parse_propagation_tree(real);
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].parent_user == "972651");
  CHECK(recs[1].child_user == "189397006");
  CHECK(recs[1].child_time == doctest::Approx(1.73));

  std::istringstream bad("['u1','t1','0.0']=>['u2','t2','1.5']\n");
  CHECK_THROWS_AS(parse_propagation_tree(bad), ParseError);
  std::istringstream bad_time("['u1','t1','0.0']->['u2','t2','soon']\n");
  CHECK_THROWS_AS(parse_propagation_tree(bad_time), ParseError);
}

TEST_CASE("tree directory: derived edges, dedup, N lines -> N records") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "immunet_trees_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "t1.txt");
    f << "['ROOT','ROOT','0.0']->['u1','t1','0.0']\n"
      << "['u1','t1','0.0']->['u2','t1','1.5']\n"
      << "['u1','t1','0.0']->['u2','t1','2.5']\n";
  }
  {
    std::ofstream f(dir / "t2.txt");
    f << "['ROOT','ROOT','0.0']->['u3','t2','0.0']\n"
      << "['u3','t2','0.0']->['u1','t2','3.0']\n";
  }
  auto forest = parse_propagation_trees(dir);
  CHECK(forest.records.size() == 5);
  REQUIRE(forest.edges.size() == 2);
  CHECK(forest.edges[0] == RawEdge{"u1", "u2", 1.0});
  CHECK(forest.edges[1] == RawEdge{"u3", "u1", 1.0});
  auto authors = authors_of(forest.records);
  CHECK(authors.at("t1") == "u1");
  CHECK(authors.at("t2") == "u3");

  {
    std::ofstream f(dir / "t3.txt");
    f << "['u1','t3','0.0']->['u2','t3']\n";
  }
  try {
    parse_propagation_trees(dir);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.source() == "t3.txt");
    CHECK(e.line() == 1);
  }
  fs::remove_all(dir);
  CHECK_THROWS_AS(parse_propagation_trees(dir), ParseError);
}

TEST_CASE("label file encodings") {
  std::istringstream in("false:656955120626880512\nnon-rumor:1\ntrue:2\nunverified:3\n");
  auto labels = parse_label_file(in);
  CHECK(labels.at("656955120626880512") == 1);
  CHECK(labels.at("1") == 3);
  CHECK(labels.at("2") == 0);
  CHECK(labels.at("3") == 2);

  std::istringstream bogus("bogus:9\n");
  try {
    parse_label_file(bogus);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  std::istringstream conflict("true:5\nfalse:5\n");
  CHECK_THROWS_AS(parse_label_file(conflict), ParseError);
  std::istringstream repeat("true:5\ntrue:5\n");
  CHECK(parse_label_file(repeat).size() == 1);
}

TEST_CASE("label file format/parse is identity") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cls(0, 3);
  for (int rep = 0; rep < 10; ++rep) {
    LabelSet labels;
    for (int i = 0; i < 40; ++i) labels["id" + std::to_string(rng() % 1000)] = cls(rng);
    std::ostringstream out;
    format_label_file(out, labels);
    std::istringstream in(out.str());
    CHECK(parse_label_file(in) == labels);
  }
}

TEST_CASE("node sets") {
  std::istringstream a("u1\nu2\nu1\n");
  CHECK(parse_node_set(a) == HarmfulSet{"u1", "u2"});
  std::istringstream b("");
  CHECK(parse_node_set(b).empty());
  std::istringstream c("u1\n\nu3");
  CHECK(parse_node_set(c) == HarmfulSet{"u1", "u3"});

  LabelSet labels{{"t1", 1}, {"t2", 0}, {"t3", 1}};
  std::unordered_map<std::string, std::string> authors{{"t1", "alice"}, {"t2", "bob"}, {"t3", "alice"}};
  CHECK(harmful_from_labels(labels, authors) == HarmfulSet{"alice"});
}

TEST_CASE("embedding table") {
  std::istringstream two("a\t1\t2\t3\nb\t4\t5\t6\n");
  auto m = parse_embedding_table(two);
  CHECK(m.rows() == 2);
  CHECK(m.dim() == 3);
  CHECK(m.row(*m.find("b"))[2] == 6.0);

  std::istringstream ragged("a\t1\t2\t3\nb\t4\t5\t6\t7\n");
  try {
    parse_embedding_table(ragged);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream one("t1\t1.0\t0.0");
  m = parse_embedding_table(one);
  REQUIRE(m.rows() == 1);
  CHECK(m.id(0) == "t1");
  CHECK(m.row(0)[0] == 1.0);
  CHECK(m.row(0)[1] == 0.0);

  std::istringstream nonnum("a\t1\tx\n");
  CHECK_THROWS_AS(parse_embedding_table(nonnum), ParseError);
}
