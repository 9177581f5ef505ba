#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "immunet/error.hpp"
#include "immunet/metrics.hpp"
#include "immunet/serialize.hpp"

using namespace immunet;

TEST_CASE("perfect prediction") {
  LabelSet truth{{"a", 0}, {"b", 1}, {"c", 2}, {"d", 3}, {"e", 1}};
  auto r = classification_report(truth, truth, 4);
  CHECK(r.accuracy == 1.0);
  for (const auto& c : r.per_class) {
    CHECK(c.precision == 1.0);
    CHECK(c.recall == 1.0);
    CHECK(c.f1 == 1.0);
  }
  CHECK(r.macro.f1 == doctest::Approx(1.0));
  CHECK(r.weighted.f1 == doctest::Approx(1.0));
}

TEST_CASE("hand-computed four-item example") {
  LabelSet truth{{"i1", 0}, {"i2", 0}, {"i3", 1}, {"i4", 1}};
  LabelSet pred{{"i1", 0}, {"i2", 1}, {"i3", 1}, {"i4", 1}};
  auto r = classification_report(truth, pred, 2);
  CHECK(r.confusion.counts == std::vector<std::vector<std::uint64_t>>{{1, 1}, {0, 2}});
  CHECK(r.accuracy == 0.75);
  CHECK(r.per_class[0].precision == 1.0);
  CHECK(r.per_class[0].recall == 0.5);
  CHECK(r.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[1].precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[1].recall == 1.0);
  CHECK(r.per_class[1].f1 == doctest::Approx(0.8));
  CHECK(r.weighted.f1 == doctest::Approx(0.5 * 2.0 / 3.0 + 0.5 * 0.8));
}

TEST_CASE("0/0 is reported as 0") {
  LabelSet truth{{"a", 0}, {"b", 0}};
  LabelSet pred{{"a", 0}, {"b", 0}};
  auto r = classification_report(truth, pred, 3);
  CHECK(r.per_class[1].precision == 0.0);
  CHECK(r.per_class[1].recall == 0.0);
  CHECK(r.per_class[1].f1 == 0.0);
  CHECK(classification_report({}, {}, 2).accuracy == 0.0);
}

TEST_CASE("errors") {
  LabelSet truth{{"a", 0}};
  LabelSet pred{{"a", 0}, {"zz", 1}};
  try {
    classification_report(truth, pred, 2);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
  CHECK_THROWS_AS(classification_report(truth, truth, 1), Error);
  CHECK_THROWS_AS(classification_report({{"a", 3}}, {{"a", 3}}, 2), Error);
}

TEST_CASE("report properties on random labelings") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> cls(0, 3);
  for (int rep = 0; rep < 30; ++rep) {
    LabelSet truth, pred;
    for (int i = 0; i < 60; ++i) {
      truth["t" + std::to_string(i)] = cls(rng);
      pred["t" + std::to_string(i)] = cls(rng) == 0 ? truth["t" + std::to_string(i)] : cls(rng);
    }
    auto r = classification_report(truth, pred, 4);
    CHECK(r.accuracy == doctest::Approx(static_cast<double>(r.confusion.trace()) / r.confusion.total()));
    double lo = 1, hi = 0;
    for (const auto& c : r.per_class) {
      lo = std::min(lo, c.f1);
      hi = std::max(hi, c.f1);
    }
    CHECK(r.macro.f1 <= hi + 1e-12);
    CHECK(r.macro.f1 >= lo - 1e-12);
  }
}

TEST_CASE("confusion printout and JSON") {
  LabelSet truth{{"a", 0}, {"b", 1}};
  LabelSet pred{{"a", 1}, {"b", 1}};
  auto r = classification_report(truth, pred, 2);
  std::ostringstream out;
  print_confusion(out, r.confusion);
  CHECK(out.str() == "true\\pred\t0\t1\n0\t0\t1\n1\t0\t1\n");
  auto j = classification_to_json(r);
  CHECK(j["per_class"][1]["name"] == "false");
  CHECK(j["accuracy"] == 0.5);
}
