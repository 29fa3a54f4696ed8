// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pabsa/error.hpp"

namespace pabsa {

struct SparseEntry {
  std::size_t index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse vector with strictly increasing indices and nonzero finite values.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<SparseEntry> entries;

  double value(std::size_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const SparseEntry& e, std::size_t i) { return e.index < i; });
    return (it != entries.end() && it->index == index) ? it->value : 0.0;
  }

  double l2_norm() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.value * e.value;
    return std::sqrt(sum);
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Read-only view of one matrix row.
struct RowView {
  std::span<const SparseEntry> entries;
  std::size_t dimension = 0;

  double value(std::size_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const SparseEntry& e, std::size_t i) { return e.index < i; });
    return (it != entries.end() && it->index == index) ? it->value : 0.0;
  }
};

/// Row-compressed feature matrix. Zeros are implicit.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}

  static FeatureMatrix from_dense(const std::vector<std::vector<double>>& rows, std::size_t cols) {
    FeatureMatrix m(cols);
    for (const auto& r : rows) m.add_dense_row(r);
    return m;
  }

  static FeatureMatrix from_dense(const std::vector<std::vector<double>>& rows) {
    return from_dense(rows, rows.empty() ? 0 : rows.front().size());
  }

  void add_dense_row(std::span<const double> row) {
    if (row.size() != cols_) {
      throw InvalidArgument("row has " + std::to_string(row.size()) + " columns, matrix has " +
                            std::to_string(cols_));
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0) entries_.push_back({j, row[j]});
    }
    row_ptr_.push_back(entries_.size());
  }

  /// Entries must be sorted by index.
  void add_sparse_row(std::span<const SparseEntry> row) {
    std::size_t prev = 0;
    bool first = true;
    for (const auto& e : row) {
      if (e.index >= cols_ || (!first && e.index <= prev)) {
        throw InvalidArgument("sparse row indices must be increasing and below the column count");
      }
      prev = e.index;
      first = false;
      if (e.value != 0.0) entries_.push_back(e);
    }
    row_ptr_.push_back(entries_.size());
  }

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }

  RowView row(std::size_t i) const {
    return {std::span<const SparseEntry>(entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]), cols_};
  }

  double value(std::size_t i, std::size_t j) const { return row(i).value(j); }

  std::vector<double> dense_row(std::size_t i) const {
    std::vector<double> out(cols_, 0.0);
    for (const auto& e : row(i).entries) out[e.index] = e.value;
    return out;
  }

  bool all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const SparseEntry& e) { return std::isfinite(e.value); });
  }

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<SparseEntry> entries_;
};

}  // namespace pabsa
