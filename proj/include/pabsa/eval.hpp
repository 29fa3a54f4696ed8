// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include <json.hpp>

#include "pabsa/corpus.hpp"
#include "pabsa/error.hpp"

namespace pabsa {

/// Rows are true labels, columns predicted labels, both in Polarity order.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const noexcept {
    std::size_t n = 0;
    for (const auto& row : counts) {
      for (std::size_t c : row) n += c;
    }
    return n;
  }

  std::size_t trace() const noexcept { return counts[0][0] + counts[1][1] + counts[2][2]; }

  std::size_t row_sum(std::size_t r) const noexcept { return counts[r][0] + counts[r][1] + counts[r][2]; }
  std::size_t col_sum(std::size_t c) const noexcept { return counts[0][c] + counts[1][c] + counts[2][c]; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion_matrix(std::span<const Polarity> y_true, std::span<const Polarity> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw InvalidArgument("confusion_matrix: " + std::to_string(y_true.size()) + " true labels vs " +
                          std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw InvalidArgument("confusion_matrix: empty input");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < y_true.size(); ++i) ++m.counts[index_of(y_true[i])][index_of(y_pred[i])];
  return m;
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct Metrics {
  std::array<ClassMetrics, kNumClasses> per_class{};
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  ConfusionMatrix confusion;
};

namespace detail {

// 0/0 is defined as 0.
inline double ratio(double num, double den) noexcept { return den == 0.0 ? 0.0 : num / den; }

}  // namespace detail

/// Per-class precision/recall/F1, macro and support-weighted averages, and
/// accuracy. Any 0/0 is taken as 0.
inline Metrics metrics(const ConfusionMatrix& m) {
  const std::size_t n = m.total();
  if (n == 0) throw InvalidArgument("metrics: empty confusion matrix");
  Metrics r;
  r.confusion = m;
  const double dn = static_cast<double>(n);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& k = r.per_class[c];
    const double tp = static_cast<double>(m.counts[c][c]);
    k.support = m.row_sum(c);
    k.precision = detail::ratio(tp, static_cast<double>(m.col_sum(c)));
    k.recall = detail::ratio(tp, static_cast<double>(k.support));
    k.f1 = detail::ratio(2.0 * k.precision * k.recall, k.precision + k.recall);
    r.macro_precision += k.precision / kNumClasses;
    r.macro_recall += k.recall / kNumClasses;
    r.macro_f1 += k.f1 / kNumClasses;
    const double w = static_cast<double>(k.support) / dn;
    r.weighted_precision += w * k.precision;
    r.weighted_recall += w * k.recall;
    r.weighted_f1 += w * k.f1;
  }
  r.accuracy = static_cast<double>(m.trace()) / dn;
  return r;
}

inline nlohmann::ordered_json to_json(const Metrics& r) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  j["macro"] = {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f1", r.macro_f1}};
  j["weighted"] = {{"precision", r.weighted_precision}, {"recall", r.weighted_recall}, {"f1", r.weighted_f1}};
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (Polarity p : kAllPolarities) {
    const auto& k = r.per_class[index_of(p)];
    per[std::string(to_string(p))] = {
        {"precision", k.precision}, {"recall", k.recall}, {"f1", k.f1}, {"support", k.support}};
  }
  j["per_class"] = std::move(per);
  j["confusion_matrix"] = r.confusion.counts;
  return j;
}

inline Metrics metrics_from_json(const nlohmann::json& j) {
  Metrics r;
  r.accuracy = j.at("accuracy").get<double>();
  r.macro_precision = j.at("macro").at("precision").get<double>();
  r.macro_recall = j.at("macro").at("recall").get<double>();
  r.macro_f1 = j.at("macro").at("f1").get<double>();
  r.weighted_precision = j.at("weighted").at("precision").get<double>();
  r.weighted_recall = j.at("weighted").at("recall").get<double>();
  r.weighted_f1 = j.at("weighted").at("f1").get<double>();
  for (Polarity p : kAllPolarities) {
    const auto& k = j.at("per_class").at(std::string(to_string(p)));
    auto& dst = r.per_class[index_of(p)];
    dst.precision = k.at("precision").get<double>();
    dst.recall = k.at("recall").get<double>();
    dst.f1 = k.at("f1").get<double>();
    dst.support = k.at("support").get<std::size_t>();
  }
  r.confusion.counts = j.at("confusion_matrix").get<decltype(r.confusion.counts)>();
  return r;
}

}  // namespace pabsa
