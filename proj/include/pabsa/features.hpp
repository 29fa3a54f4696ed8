// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pabsa/corpus.hpp"
#include "pabsa/error.hpp"
#include "pabsa/hash.hpp"
#include "pabsa/matrix.hpp"
#include "pabsa/preprocess.hpp"

namespace pabsa {

// ---------------------------------------------------------------------------
// Vocabulary and bag-of-words weighting.

struct VocabularyConfig {
  std::size_t min_df = 2;
  std::optional<std::size_t> max_features = 20000;
  bool use_stemming = false;
};

/// Term -> column index, with document frequencies. Indices follow the
/// lexicographic (byte) order of the retained terms.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary fit(std::span<const std::vector<std::string>> docs, const VocabularyConfig& cfg) {
    if (docs.empty()) throw InvalidArgument("fit_vocabulary: no documents");
    if (cfg.min_df < 1) throw InvalidArgument("fit_vocabulary: min_df must be >= 1");
    std::unordered_map<std::string_view, std::size_t> df;
    for (const auto& doc : docs) {
      std::unordered_set<std::string_view> seen(doc.begin(), doc.end());
      for (auto t : seen) ++df[t];
    }
    std::vector<std::pair<std::string_view, std::size_t>> kept;
    for (const auto& [t, n] : df) {
      if (n >= cfg.min_df) kept.emplace_back(t, n);
    }
    if (cfg.max_features && kept.size() > *cfg.max_features) {
      std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
      });
      kept.resize(*cfg.max_features);
    }
    if (kept.empty()) throw InvalidArgument("fit_vocabulary: no term reaches min_df");
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    Vocabulary v;
    v.cfg_ = cfg;
    v.n_documents_ = docs.size();
    for (const auto& [t, n] : kept) {
      v.index_.emplace(std::string(t), v.terms_.size());
      v.terms_.emplace_back(t);
      v.df_.push_back(n);
    }
    return v;
  }

  std::optional<std::size_t> index_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t n_documents() const noexcept { return n_documents_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::size_t>& document_frequencies() const noexcept { return df_; }
  std::size_t df(std::size_t index) const { return df_.at(index); }
  const VocabularyConfig& config() const noexcept { return cfg_; }

  /// Smoothed inverse document frequency ln((1 + n) / (1 + df)) + 1.
  double idf(std::size_t index) const {
    return std::log((1.0 + static_cast<double>(n_documents_)) / (1.0 + static_cast<double>(df_[index]))) + 1.0;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["n_documents"] = n_documents_;
    j["min_df"] = cfg_.min_df;
    j["max_features"] = cfg_.max_features ? nlohmann::json(*cfg_.max_features) : nlohmann::json();
    j["use_stemming"] = cfg_.use_stemming;
    j["terms"] = terms_;
    j["df"] = df_;
    return j;
  }

  static Vocabulary from_json(const nlohmann::json& j) {
    Vocabulary v;
    v.n_documents_ = j.at("n_documents").get<std::size_t>();
    v.cfg_.min_df = j.at("min_df").get<std::size_t>();
    if (j.at("max_features").is_null()) {
      v.cfg_.max_features.reset();
    } else {
      v.cfg_.max_features = j.at("max_features").get<std::size_t>();
    }
    v.cfg_.use_stemming = j.at("use_stemming").get<bool>();
    v.terms_ = j.at("terms").get<std::vector<std::string>>();
    v.df_ = j.at("df").get<std::vector<std::size_t>>();
    if (v.terms_.size() != v.df_.size()) throw InvalidArgument("vocabulary: terms/df length mismatch");
    for (std::size_t i = 0; i < v.terms_.size(); ++i) {
      if (i > 0 && !(v.terms_[i - 1] < v.terms_[i])) throw InvalidArgument("vocabulary: terms not sorted");
      v.index_.emplace(v.terms_[i], i);
    }
    return v;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.df_ == b.df_ && a.n_documents_ == b.n_documents_;
  }

 private:
  VocabularyConfig cfg_;
  std::size_t n_documents_ = 0;
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Vocabulary fit_vocabulary(std::span<const std::vector<std::string>> docs, std::size_t min_df,
                                 std::optional<std::size_t> max_features) {
  return Vocabulary::fit(docs, {min_df, max_features, false});
}

/// Occurrence counts of in-vocabulary tokens.
inline SparseVector count_vector(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::map<std::size_t, double> counts;
  for (const auto& t : tokens) {
    if (auto idx = vocab.index_of(t)) counts[*idx] += 1.0;
  }
  SparseVector v{vocab.size(), {}};
  v.entries.reserve(counts.size());
  for (const auto& [i, c] : counts) v.entries.push_back({i, c});
  return v;
}

/// count * idf, then L2-normalized. The zero vector stays zero.
inline SparseVector tfidf_transform(const SparseVector& counts, const Vocabulary& vocab) {
  if (counts.dimension != vocab.size()) {
    throw InvalidArgument("tfidf_transform: vector dimension " + std::to_string(counts.dimension) +
                          " != vocabulary size " + std::to_string(vocab.size()));
  }
  SparseVector out{counts.dimension, {}};
  out.entries.reserve(counts.entries.size());
  for (const auto& e : counts.entries) out.entries.push_back({e.index, e.value * vocab.idf(e.index)});
  const double norm = out.l2_norm();
  if (norm > 0.0) {
    for (auto& e : out.entries) e.value /= norm;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polarity scores.

inline constexpr double kScoreSumTolerance = 1e-6;

/// (positive, neutral, negative) probabilities from one provider.
struct PolarityScores {
  std::string provider_id;
  std::array<double, 3> scores{};

  /// Empty when the invariants hold, otherwise a description.
  std::optional<std::string> violation() const {
    double sum = 0.0;
    for (double s : scores) {
      if (!std::isfinite(s) || s < 0.0 || s > 1.0) return "score outside [0, 1]";
      sum += s;
    }
    if (std::abs(sum - 1.0) > kScoreSumTolerance) return "scores sum to " + std::to_string(sum) + ", not 1";
    return std::nullopt;
  }

  friend bool operator==(const PolarityScores&, const PolarityScores&) = default;
};

/// Source of polarity scores for aspect instances (a transformer model,
/// its precomputed cache, ...). Implementations must be deterministic and
/// safe to call concurrently.
class PolarityProvider {
 public:
  virtual ~PolarityProvider() = default;

  virtual const std::string& id() const = 0;

  /// Throws ProviderError when no scores can be produced.
  virtual PolarityScores score(const AspectInstance& inst) const = 0;

  virtual std::vector<PolarityScores> score_batch(std::span<const AspectInstance> batch) const {
    std::vector<PolarityScores> out;
    out.reserve(batch.size());
    for (const auto& inst : batch) out.push_back(score(inst));
    return out;
  }
};

using ProviderList = std::vector<std::shared_ptr<const PolarityProvider>>;

namespace detail {

inline void check_provider_ids(const ProviderList& providers) {
  std::unordered_set<std::string> ids;
  for (const auto& p : providers) {
    if (!p) throw InvalidArgument("null polarity provider");
    if (!ids.insert(p->id()).second) throw InvalidArgument("duplicate provider id: " + p->id());
  }
}

inline const PolarityScores& checked(const PolarityScores& s, const PolarityProvider& p,
                                     const AspectInstance& inst) {
  if (auto bad = s.violation()) {
    throw ProviderError("provider '" + p.id() + "' returned invalid scores for instance '" + inst.id +
                        "': " + *bad);
  }
  return s;
}

}  // namespace detail

/// Concatenated scores of every provider, in list order.
inline std::vector<double> polarity_features(const AspectInstance& inst, const ProviderList& providers) {
  if (providers.empty()) throw InvalidArgument("polarity_features: no providers");
  detail::check_provider_ids(providers);
  std::vector<double> block;
  block.reserve(3 * providers.size());
  for (const auto& p : providers) {
    PolarityScores s;
    try {
      s = p->score(inst);
    } catch (const Error& e) {
      throw ProviderError("provider '" + p->id() + "' failed for instance '" + inst.id + "': " + e.what());
    }
    detail::checked(s, *p, inst);
    block.insert(block.end(), s.scores.begin(), s.scores.end());
  }
  return block;
}

// ---------------------------------------------------------------------------
// Hybrid feature assembly.

struct FeatureBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t width = 0;

  friend bool operator==(const FeatureBlock&, const FeatureBlock&) = default;
};

/// Column layout of a feature vector: named blocks in order.
class FeatureLayout {
 public:
  void add(std::string name, std::size_t width) {
    blocks_.push_back({std::move(name), dimension_, width});
    dimension_ += width;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<FeatureBlock>& blocks() const noexcept { return blocks_; }

  std::string descriptor() const {
    std::string s;
    for (const auto& b : blocks_) {
      if (!s.empty()) s += ';';
      s += b.name + "@" + std::to_string(b.offset) + "+" + std::to_string(b.width);
    }
    return s;
  }

  std::string hash() const { return to_hex(fnv1a64(descriptor())); }

  friend bool operator==(const FeatureLayout&, const FeatureLayout&) = default;

 private:
  std::vector<FeatureBlock> blocks_;
  std::size_t dimension_ = 0;
};

struct FeatureConfig {
  bool text_bag = true;
  bool aspect_bag = true;
  preprocess::Analyzer analyzer;
};

/// Sparse bag blocks followed by the dense polarity block.
struct FeatureVector {
  SparseVector sparse;
  std::vector<double> dense;

  std::size_t dimension() const noexcept { return sparse.dimension + dense.size(); }

  /// Nonzero entries over the whole layout, sorted by index.
  std::vector<SparseEntry> entries() const {
    std::vector<SparseEntry> out = sparse.entries;
    for (std::size_t k = 0; k < dense.size(); ++k) {
      if (dense[k] != 0.0) out.push_back({sparse.dimension + k, dense[k]});
    }
    return out;
  }

  std::vector<double> to_dense() const {
    std::vector<double> out(dimension(), 0.0);
    for (const auto& e : entries()) out[e.index] = e.value;
    return out;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Layout: [text TF-IDF | aspect TF-IDF | one 3-wide block per provider],
/// with disabled blocks omitted.
inline FeatureLayout feature_layout(const Vocabulary& vocab, const ProviderList& providers,
                                    const FeatureConfig& cfg) {
  FeatureLayout layout;
  if (cfg.text_bag) layout.add("text_tfidf", vocab.size());
  if (cfg.aspect_bag) layout.add("aspect_tfidf", vocab.size());
  for (const auto& p : providers) layout.add("polarity:" + p->id(), 3);
  return layout;
}

namespace detail {

inline FeatureVector assemble_bags(const AspectInstance& inst, const Vocabulary& vocab,
                                   const FeatureConfig& cfg) {
  FeatureVector fv;
  std::size_t offset = 0;
  auto add_block = [&](std::string_view text) {
    const auto terms = cfg.analyzer.terms(text);
    const auto block = tfidf_transform(count_vector(terms, vocab), vocab);
    for (const auto& e : block.entries) fv.sparse.entries.push_back({offset + e.index, e.value});
    offset += vocab.size();
  };
  if (cfg.text_bag) add_block(inst.text);
  if (cfg.aspect_bag) add_block(inst.aspect_term);
  fv.sparse.dimension = offset;
  return fv;
}

}  // namespace detail

inline FeatureVector assemble_features(const AspectInstance& inst, const Vocabulary& vocab,
                                       const ProviderList& providers, const FeatureConfig& cfg) {
  auto fv = detail::assemble_bags(inst, vocab, cfg);
  if (!providers.empty()) fv.dense = polarity_features(inst, providers);
  return fv;
}

/// Feature rows for a whole dataset. Providers are queried through
/// score_batch so remote providers can batch requests.
inline FeatureMatrix build_feature_matrix(const Dataset& d, const Vocabulary& vocab,
                                          const ProviderList& providers, const FeatureConfig& cfg) {
  detail::check_provider_ids(providers);
  const auto layout = feature_layout(vocab, providers, cfg);
  std::vector<std::vector<PolarityScores>> scores;
  for (const auto& p : providers) {
    try {
      scores.push_back(p->score_batch(d.instances()));
    } catch (const ProviderError&) {
      throw;
    } catch (const Error& e) {
      throw ProviderError("provider '" + p->id() + "' failed: " + e.what());
    }
    if (scores.back().size() != d.size()) {
      throw ProviderError("provider '" + p->id() + "' returned " + std::to_string(scores.back().size()) +
                          " results for " + std::to_string(d.size()) + " instances");
    }
  }
  FeatureMatrix m(layout.dimension());
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto fv = detail::assemble_bags(d[i], vocab, cfg);
    for (std::size_t k = 0; k < providers.size(); ++k) {
      const auto& s = detail::checked(scores[k][i], *providers[k], d[i]);
      fv.dense.insert(fv.dense.end(), s.scores.begin(), s.scores.end());
    }
    m.add_sparse_row(fv.entries());
  }
  return m;
}

}  // namespace pabsa
