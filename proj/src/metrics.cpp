#include "immunet/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "immunet/error.hpp"

namespace immunet {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = 0;
  for (const auto& row : counts) {
    for (auto c : row) s += c;
  }
  return s;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += counts[i][i];
  return s;
}

namespace {
double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }
}  // namespace

ClassificationReport classification_report(const LabelSet& truth, const LabelSet& pred, int classes) {
  if (classes < 2) throw Error("metrics", "need at least two classes");
  const auto c = static_cast<std::size_t>(classes);
  std::vector<std::string> missing;
  ClassificationReport rep;
  rep.confusion.counts.assign(c, std::vector<std::uint64_t>(c, 0));
  for (const auto& [id, p] : pred) {
    auto it = truth.find(id);
    if (it == truth.end()) {
      missing.push_back(id);
      continue;
    }
    const int t = it->second;
    if (t < 0 || t >= classes || p < 0 || p >= classes) {
      throw Error("metrics", "label of " + id + " outside 0.." + std::to_string(classes - 1));
    }
    ++rep.confusion.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << missing.size() << " predicted id(s) missing from truth:";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) os << ' ' << missing[i];
    if (missing.size() > 20) os << " ...";
    throw Error("metrics", os.str());
  }

  const auto& cm = rep.confusion.counts;
  const double total = static_cast<double>(rep.confusion.total());
  rep.accuracy = ratio(static_cast<double>(rep.confusion.trace()), total);
  rep.per_class.resize(c);
  for (std::size_t k = 0; k < c; ++k) {
    std::uint64_t predicted = 0, actual = 0;
    for (std::size_t j = 0; j < c; ++j) {
      predicted += cm[j][k];
      actual += cm[k][j];
    }
    const double tp = static_cast<double>(cm[k][k]);
    auto& s = rep.per_class[k];
    s.precision = ratio(tp, static_cast<double>(predicted));
    s.recall = ratio(tp, static_cast<double>(actual));
    s.f1 = ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
    s.support = actual;

    rep.macro.precision += s.precision / static_cast<double>(c);
    rep.macro.recall += s.recall / static_cast<double>(c);
    rep.macro.f1 += s.f1 / static_cast<double>(c);
    const double w = ratio(static_cast<double>(actual), total);
    rep.weighted.precision += w * s.precision;
    rep.weighted.recall += w * s.recall;
    rep.weighted.f1 += w * s.f1;
  }
  return rep;
}

void print_confusion(std::ostream& out, const ConfusionMatrix& cm) {
  out << "true\\pred";
  for (std::size_t j = 0; j < cm.classes(); ++j) out << '\t' << j;
  out << '\n';
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    out << i;
    for (auto v : cm.counts[i]) out << '\t' << v;
    out << '\n';
  }
}

}  // namespace immunet
