#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgtd/corpus.hpp"

namespace mgtd {

struct SparseVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;
  bool all_out_of_vocabulary = false;

  std::size_t nnz() const { return indices.size(); }
};

/// Row-major sparse feature matrix with named columns and binary labels.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::vector<std::string> column_names);

  void add_row(const SparseVector& row, Label label);
  // Dense row; zeros are not stored.
  void add_dense_row(std::span<const double> row, Label label);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& column_names() const { return names_; }
  const std::vector<Label>& labels() const { return labels_; }
  void set_labels(std::vector<Label> labels);

  std::span<const std::uint32_t> row_indices(std::size_t r) const;
  std::span<const double> row_values(std::size_t r) const;
  double dot(std::size_t r, std::span<const double> w) const;
  std::vector<double> dense_row(std::size_t r) const;

  // Keeps only the listed rows, in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
  // Keeps the listed columns (ascending), renumbering them.
  FeatureMatrix select_columns(std::span<const std::uint32_t> cols) const;
  // Side-by-side concatenation; both must have the same rows and labels.
  static FeatureMatrix hstack(const FeatureMatrix& left, const FeatureMatrix& right);

  // FNV-1a over the column names.
  std::string fingerprint() const;
  bool all_finite() const;
  bool all_nonnegative() const;

 private:
  std::vector<std::string> names_;
  std::vector<Label> labels_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

std::string fingerprint_of(const std::vector<std::string>& names);

}  // namespace mgtd
