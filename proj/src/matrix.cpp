#include "mgtd/matrix.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "mgtd/error.hpp"

namespace mgtd {

FeatureMatrix::FeatureMatrix(std::vector<std::string> column_names) : names_(std::move(column_names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw InputError("duplicate feature name: " + n);
  }
}

void FeatureMatrix::add_row(const SparseVector& row, Label label) {
  for (std::size_t k = 0; k < row.indices.size(); ++k) {
    if (row.indices[k] >= names_.size()) throw InputError("feature index out of range");
    if (row.values[k] == 0.0) continue;
    col_idx_.push_back(row.indices[k]);
    values_.push_back(row.values[k]);
  }
  row_ptr_.push_back(col_idx_.size());
  labels_.push_back(label);
}

void FeatureMatrix::add_dense_row(std::span<const double> row, Label label) {
  if (row.size() != names_.size()) throw InputError("dense row width does not match column count");
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == 0.0) continue;
    col_idx_.push_back(static_cast<std::uint32_t>(j));
    values_.push_back(row[j]);
  }
  row_ptr_.push_back(col_idx_.size());
  labels_.push_back(label);
}

void FeatureMatrix::set_labels(std::vector<Label> labels) {
  if (labels.size() != labels_.size()) throw InputError("label count does not match row count");
  labels_ = std::move(labels);
}

std::span<const std::uint32_t> FeatureMatrix::row_indices(std::size_t r) const {
  return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
}

std::span<const double> FeatureMatrix::row_values(std::size_t r) const {
  return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
}

double FeatureMatrix::dot(std::size_t r, std::span<const double> w) const {
  double s = 0.0;
  for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * w[col_idx_[k]];
  return s;
}

std::vector<double> FeatureMatrix::dense_row(std::size_t r) const {
  std::vector<double> out(cols(), 0.0);
  for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out[col_idx_[k]] = values_[k];
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out;
  out.names_ = names_;
  for (std::size_t r : rows) {
    out.col_idx_.insert(out.col_idx_.end(), col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]),
                        col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]));
    out.values_.insert(out.values_.end(), values_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]),
                       values_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]));
    out.row_ptr_.push_back(out.col_idx_.size());
    out.labels_.push_back(labels_[r]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::uint32_t> cols) const {
  std::vector<std::int64_t> remap(names_.size(), -1);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    remap[cols[k]] = static_cast<std::int64_t>(k);
    names.push_back(names_[cols[k]]);
  }
  FeatureMatrix out(std::move(names));
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (remap[col_idx_[k]] < 0) continue;
      out.col_idx_.push_back(static_cast<std::uint32_t>(remap[col_idx_[k]]));
      out.values_.push_back(values_[k]);
    }
    out.row_ptr_.push_back(out.col_idx_.size());
    out.labels_.push_back(labels_[r]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::hstack(const FeatureMatrix& left, const FeatureMatrix& right) {
  if (left.rows() != right.rows()) throw InputError("hstack: row counts differ");
  std::vector<std::string> names = left.names_;
  names.insert(names.end(), right.names_.begin(), right.names_.end());
  FeatureMatrix out(std::move(names));
  const auto offset = static_cast<std::uint32_t>(left.cols());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    for (std::size_t k = left.row_ptr_[r]; k < left.row_ptr_[r + 1]; ++k) {
      out.col_idx_.push_back(left.col_idx_[k]);
      out.values_.push_back(left.values_[k]);
    }
    for (std::size_t k = right.row_ptr_[r]; k < right.row_ptr_[r + 1]; ++k) {
      out.col_idx_.push_back(right.col_idx_[k] + offset);
      out.values_.push_back(right.values_[k]);
    }
    out.row_ptr_.push_back(out.col_idx_.size());
    out.labels_.push_back(left.labels_[r]);
  }
  return out;
}

std::string fingerprint_of(const std::vector<std::string>& names) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& n : names) {
    for (unsigned char c : n) mix(c);
    mix(0);
  }
  return fmt::format("{:016x}-{}", h, names.size());
}

std::string FeatureMatrix::fingerprint() const { return fingerprint_of(names_); }

bool FeatureMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool FeatureMatrix::all_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

}  // namespace mgtd
