#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace immunet {

/// Row-major table of fixed-width real vectors keyed by an external id
/// (node id or document id). Shared by the TSV reader, the skip-gram trainer
/// and the fusion step.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(std::size_t dim) : dim_(dim) {}

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  /// Appends a row; throws std::invalid_argument on width mismatch or a
  /// repeated id.
  void add_row(std::string id, std::span<const double> values);

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * dim_, dim_}; }

  const std::string& id(std::size_t r) const { return ids_[r]; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Row index of `id` or nullptr.
  const std::size_t* find(const std::string& id) const;

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace immunet
