#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "immunet/ingest.hpp"

namespace immunet {

/// counts[t][p]: items of true class t predicted as p.
struct ConfusionMatrix {
  std::vector<std::vector<std::uint64_t>> counts;

  std::size_t classes() const noexcept { return counts.size(); }
  std::uint64_t total() const;
  std::uint64_t trace() const;
};

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;  // items whose true class is this one
};

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassificationReport {
  double accuracy = 0.0;
  std::vector<ClassScores> per_class;
  Averages macro;
  Averages weighted;  // weighted by class support
  ConfusionMatrix confusion;
};

/// Scores every id of `pred` against `truth`, one-vs-rest per class.
/// Undefined ratios (0/0) are reported as 0.
ClassificationReport classification_report(const LabelSet& truth, const LabelSet& pred, int classes);

/// Row-major matrix with class headers 0..c-1.
void print_confusion(std::ostream& out, const ConfusionMatrix& cm);

}  // namespace immunet
