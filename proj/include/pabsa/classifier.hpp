// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pabsa/corpus.hpp"
#include "pabsa/error.hpp"
#include "pabsa/features.hpp"
#include "pabsa/matrix.hpp"

namespace pabsa {

using ClassCounts = std::array<std::size_t, kNumClasses>;

inline std::size_t total(const ClassCounts& c) noexcept { return c[0] + c[1] + c[2]; }

/// Majority class; ties go to the lowest encoding.
inline Polarity majority(const ClassCounts& c) noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumClasses; ++k) {
    if (c[k] > c[best]) best = k;
  }
  return static_cast<Polarity>(best);
}

/// Gini impurity 1 - sum p_i^2.
inline double gini(const ClassCounts& counts) {
  const std::size_t n = total(counts);
  if (n == 0) throw InvalidArgument("gini: all class counts are zero");
  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / dn;
    sum += p * p;
  }
  return 1.0 - sum;
}

struct TreeParams {
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  double min_impurity_decrease = 0.0;

  void validate() const {
    if (max_depth && *max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
    if (min_samples_split < 2) throw InvalidArgument("min_samples_split must be >= 2");
    if (min_samples_leaf < 1) throw InvalidArgument("min_samples_leaf must be >= 1");
    if (!(min_impurity_decrease >= 0.0)) throw InvalidArgument("min_impurity_decrease must be >= 0");
  }

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

namespace detail {

__extension__ typedef unsigned __int128 Wide;

inline std::uint64_t sum_squares(const ClassCounts& c) noexcept {
  std::uint64_t s = 0;
  for (std::size_t v : c) s += static_cast<std::uint64_t>(v) * v;
  return s;
}

// Split quality as the exact fraction
//   sum cL^2 / nL + sum cR^2 / nR  =  num / den,
// which orders candidates the same way as the weighted impurity decrease.
struct SplitScore {
  Wide num = 0;
  Wide den = 1;

  bool better_than(const SplitScore& o) const noexcept { return num * o.den > o.num * den; }
};

inline SplitScore split_score(const ClassCounts& left, const ClassCounts& right) noexcept {
  const Wide nl = total(left), nr = total(right);
  return {Wide{sum_squares(left)} * nr + Wide{sum_squares(right)} * nl, nl * nr};
}

// Impurity decrease gini(parent) - (nL gini(L) + nR gini(R)) / n.
inline double impurity_decrease(const SplitScore& s, const ClassCounts& parent) noexcept {
  const long double n = static_cast<long double>(total(parent));
  const long double score = static_cast<long double>(s.num) / static_cast<long double>(s.den);
  return static_cast<double>((score - static_cast<long double>(sum_squares(parent)) / n) / n);
}

inline bool admissible(const SplitScore& s, const ClassCounts& parent, double min_decrease) noexcept {
  if (min_decrease == 0.0) {
    // Exact: score > sum c^2 / n.
    return s.num * Wide{total(parent)} > Wide{sum_squares(parent)} * s.den;
  }
  return impurity_decrease(s, parent) > min_decrease;
}

// Threshold strictly between a < b; left receives values <= threshold.
inline double midpoint_threshold(double a, double b) noexcept {
  const double mid = std::midpoint(a, b);
  return mid < b ? mid : a;
}

// Per-node exhaustive split search. Works row-wise over the sparse matrix so
// a node only touches the features its samples actually use; all-zero
// features are constant within the node and cannot split it.
class SplitSearcher {
 public:
  SplitSearcher(const FeatureMatrix& x, std::span<const Polarity> y, std::span<const std::size_t> features)
      : x_(x), y_(y), buckets_(x.cols()), allowed_(x.cols(), features.empty()) {
    for (std::size_t f : features) {
      if (f >= x.cols()) throw InvalidArgument("feature index out of range");
      allowed_[f] = true;
    }
  }

  std::optional<SplitCandidate> find(std::span<const std::size_t> samples, const ClassCounts& node,
                                     const TreeParams& params) {
    touched_.clear();
    for (std::size_t s : samples) {
      for (const auto& e : x_.row(s).entries) {
        if (!allowed_[e.index]) continue;
        auto& b = buckets_[e.index];
        if (b.empty()) touched_.push_back(e.index);
        b.push_back({e.value, index_of(y_[s])});
      }
    }
    std::sort(touched_.begin(), touched_.end());

    const std::size_t n = samples.size();
    bool found = false;
    SplitScore best;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;

    for (std::size_t f : touched_) {
      auto& vals = buckets_[f];
      std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

      // Distinct values with their class counts; implicit zeros merged in.
      groups_.clear();
      ClassCounts nonzero{};
      for (const auto& [v, c] : vals) {
        ++nonzero[c];
        if (groups_.empty() || groups_.back().first != v) groups_.push_back({v, ClassCounts{}});
        ++groups_.back().second[c];
      }
      if (vals.size() < n) {
        ClassCounts zeros{};
        for (std::size_t k = 0; k < kNumClasses; ++k) zeros[k] = node[k] - nonzero[k];
        auto pos = std::lower_bound(groups_.begin(), groups_.end(), 0.0,
                                    [](const auto& g, double v) { return g.first < v; });
        groups_.insert(pos, {0.0, zeros});
      }
      vals.clear();
      if (groups_.size() < 2) continue;

      ClassCounts left{};
      for (std::size_t g = 0; g + 1 < groups_.size(); ++g) {
        for (std::size_t k = 0; k < kNumClasses; ++k) left[k] += groups_[g].second[k];
        const std::size_t nl = total(left);
        if (nl < params.min_samples_leaf) continue;
        if (n - nl < params.min_samples_leaf) break;
        ClassCounts right{};
        for (std::size_t k = 0; k < kNumClasses; ++k) right[k] = node[k] - left[k];
        const auto score = split_score(left, right);
        if (!found || score.better_than(best)) {
          found = true;
          best = score;
          best_feature = f;
          best_threshold = midpoint_threshold(groups_[g].first, groups_[g + 1].first);
        }
      }
    }
    if (!found || !admissible(best, node, params.min_impurity_decrease)) return std::nullopt;
    return SplitCandidate{best_feature, best_threshold, impurity_decrease(best, node)};
  }

 private:
  const FeatureMatrix& x_;
  std::span<const Polarity> y_;
  std::vector<std::vector<std::pair<double, std::size_t>>> buckets_;
  std::vector<bool> allowed_;
  std::vector<std::size_t> touched_;
  std::vector<std::pair<double, ClassCounts>> groups_;
};

inline ClassCounts count_classes(std::span<const Polarity> y, std::span<const std::size_t> samples) {
  ClassCounts c{};
  for (std::size_t s : samples) ++c[index_of(y[s])];
  return c;
}

inline void check_training_input(const FeatureMatrix& x, std::span<const Polarity> y) {
  if (x.rows() == 0) throw InvalidArgument("empty training set");
  if (x.rows() != y.size()) {
    throw InvalidArgument("feature matrix has " + std::to_string(x.rows()) + " rows but " +
                          std::to_string(y.size()) + " labels");
  }
  if (!x.all_finite()) throw InvalidArgument("non-finite feature value");
}

}  // namespace detail

/// Best CART split of the given samples over `features` (empty: all). Ties
/// go to the lower feature index, then the lower threshold. Absent when no
/// split decreases impurity by more than params.min_impurity_decrease.
inline std::optional<SplitCandidate> best_split(const FeatureMatrix& x, std::span<const Polarity> y,
                                                std::span<const std::size_t> samples,
                                                std::span<const std::size_t> features,
                                                const TreeParams& params = {}) {
  if (samples.size() < 2) return std::nullopt;
  detail::SplitSearcher searcher(x, y, features);
  return searcher.find(samples, detail::count_classes(y, samples), params);
}

inline std::optional<SplitCandidate> best_split(const FeatureMatrix& x, std::span<const Polarity> y,
                                                const TreeParams& params = {}) {
  detail::check_training_input(x, y);
  std::vector<std::size_t> all(x.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return best_split(x, y, all, {}, params);
}

struct TreeNode {
  bool is_leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  ClassCounts counts{};
  Polarity label = Polarity::positive;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Fitted CART classifier. Node 0 is the root; children always have larger
/// indices than their parent.
class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, TreeParams params, std::size_t dimension)
      : nodes_(std::move(nodes)), params_(params), dimension_(dimension) {
    validate();
  }

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  const TreeParams& params() const noexcept { return params_; }
  std::size_t dimension() const noexcept { return dimension_; }

  std::size_t depth() const { return depth_from(0); }
  std::size_t leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf; }));
  }

  template <typename Lookup>
  Polarity descend(Lookup&& value_at) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf) {
      const auto& node = nodes_[i];
      i = value_at(node.feature) <= node.threshold ? node.left : node.right;
    }
    return nodes_[i].label;
  }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  void validate() const {
    if (nodes_.empty()) throw InvalidArgument("decision tree has no nodes");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      if (n.is_leaf) {
        if (total(n.counts) == 0) throw InvalidArgument("leaf " + std::to_string(i) + " has no samples");
        continue;
      }
      if (n.left <= i || n.right <= i || n.left >= nodes_.size() || n.right >= nodes_.size()) {
        throw InvalidArgument("node " + std::to_string(i) + " has invalid children");
      }
      if (n.feature >= dimension_) throw InvalidArgument("node " + std::to_string(i) + " splits on unknown feature");
    }
  }

  std::size_t depth_from(std::size_t i) const {
    const auto& n = nodes_[i];
    return n.is_leaf ? 0 : 1 + std::max(depth_from(n.left), depth_from(n.right));
  }

  std::vector<TreeNode> nodes_;
  TreeParams params_;
  std::size_t dimension_ = 0;
};

/// Greedy CART induction with Gini impurity. Deterministic: the result does
/// not depend on sample order.
inline DecisionTree fit_tree(const FeatureMatrix& x, std::span<const Polarity> y, const TreeParams& params = {}) {
  params.validate();
  detail::check_training_input(x, y);

  struct Task {
    std::size_t node;
    std::vector<std::size_t> samples;
    std::size_t depth;
  };
  std::vector<TreeNode> nodes(1);
  std::vector<Task> stack;
  {
    std::vector<std::size_t> all(x.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    stack.push_back({0, std::move(all), 0});
  }
  detail::SplitSearcher searcher(x, y, {});
  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    const auto counts = detail::count_classes(y, task.samples);
    nodes[task.node].counts = counts;
    nodes[task.node].label = majority(counts);

    const std::size_t n = task.samples.size();
    const bool pure = std::count(counts.begin(), counts.end(), std::size_t{0}) == kNumClasses - 1;
    if (pure || (params.max_depth && task.depth >= *params.max_depth) || n < params.min_samples_split ||
        n < 2 * params.min_samples_leaf) {
      continue;
    }
    auto split = searcher.find(task.samples, counts, params);
    if (!split) continue;

    std::vector<std::size_t> left, right;
    for (std::size_t s : task.samples) {
      (x.value(s, split->feature) <= split->threshold ? left : right).push_back(s);
    }
    const std::size_t l = nodes.size();
    nodes.resize(nodes.size() + 2);
    auto& node = nodes[task.node];
    node.is_leaf = false;
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.left = l;
    node.right = l + 1;
    stack.push_back({l + 1, std::move(right), task.depth + 1});
    stack.push_back({l, std::move(left), task.depth + 1});
  }
  return DecisionTree(std::move(nodes), params, x.cols());
}

namespace detail {

inline void check_dimension(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw InvalidArgument("feature dimension mismatch: model expects " + std::to_string(expected) + ", got " +
                          std::to_string(got));
  }
}

}  // namespace detail

inline Polarity predict(const DecisionTree& tree, const RowView& row) {
  detail::check_dimension(tree.dimension(), row.dimension);
  return tree.descend([&](std::size_t f) { return row.value(f); });
}

inline Polarity predict(const DecisionTree& tree, std::span<const double> x) {
  detail::check_dimension(tree.dimension(), x.size());
  return tree.descend([&](std::size_t f) { return x[f]; });
}

inline Polarity predict(const DecisionTree& tree, const FeatureVector& fv) {
  const auto entries = fv.entries();
  return predict(tree, RowView{entries, fv.dimension()});
}

inline std::vector<Polarity> predict_batch(const DecisionTree& tree, const FeatureMatrix& x) {
  detail::check_dimension(tree.dimension(), x.cols());
  std::vector<Polarity> out;
  out.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(predict(tree, x.row(i)));
  return out;
}

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes baseline (Laplace smoothing, alpha = 1).

struct NaiveBayesModel {
  std::array<double, kNumClasses> log_prior{};  // -inf for classes absent from training
  std::array<std::vector<double>, kNumClasses> log_likelihood;
  std::size_t dimension = 0;

  friend bool operator==(const NaiveBayesModel&, const NaiveBayesModel&) = default;
};

inline NaiveBayesModel fit_nb(const FeatureMatrix& x, std::span<const Polarity> y) {
  detail::check_training_input(x, y);
  const std::size_t d = x.cols();
  std::array<std::vector<double>, kNumClasses> counts;
  for (auto& c : counts) c.assign(d, 0.0);
  std::array<double, kNumClasses> totals{};
  ClassCounts class_n{};
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const std::size_t c = index_of(y[i]);
    ++class_n[c];
    for (const auto& e : x.row(i).entries) {
      if (e.value < 0.0) throw InvalidArgument("naive bayes: negative feature value in row " + std::to_string(i));
      counts[c][e.index] += e.value;
      totals[c] += e.value;
    }
  }
  NaiveBayesModel m;
  m.dimension = d;
  const double n = static_cast<double>(x.rows());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.log_prior[c] = class_n[c] == 0 ? -std::numeric_limits<double>::infinity()
                                     : std::log(static_cast<double>(class_n[c]) / n);
    m.log_likelihood[c].resize(d);
    const double denom = totals[c] + static_cast<double>(d);
    for (std::size_t f = 0; f < d; ++f) m.log_likelihood[c][f] = std::log((counts[c][f] + 1.0) / denom);
  }
  return m;
}

/// Per-class log posterior up to a shared constant.
inline std::array<double, kNumClasses> nb_log_scores(const NaiveBayesModel& m, const RowView& row) {
  detail::check_dimension(m.dimension, row.dimension);
  std::array<double, kNumClasses> s = m.log_prior;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (std::isinf(s[c])) continue;
    for (const auto& e : row.entries) s[c] += e.value * m.log_likelihood[c][e.index];
  }
  return s;
}

inline Polarity predict_nb(const NaiveBayesModel& m, const RowView& row) {
  const auto s = nb_log_scores(m, row);
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (s[c] > s[best]) best = c;
  }
  return static_cast<Polarity>(best);
}

inline Polarity predict_nb(const NaiveBayesModel& m, std::span<const double> x) {
  std::vector<SparseEntry> entries;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) entries.push_back({j, x[j]});
  }
  return predict_nb(m, RowView{entries, x.size()});
}

inline std::vector<Polarity> predict_batch(const NaiveBayesModel& m, const FeatureMatrix& x) {
  detail::check_dimension(m.dimension, x.cols());
  std::vector<Polarity> out;
  out.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(predict_nb(m, x.row(i)));
  return out;
}

}  // namespace pabsa
