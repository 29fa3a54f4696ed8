// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pabsa/error.hpp"
#include "pabsa/preprocess.hpp"
#include "pabsa/random.hpp"
#include "pabsa/utf8.hpp"

namespace pabsa {

/// Sentiment class. The integer encoding is part of every file format.
enum class Polarity : std::uint8_t { positive = 0, neutral = 1, negative = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Polarity, kNumClasses> kAllPolarities = {
    Polarity::positive, Polarity::neutral, Polarity::negative};

constexpr std::size_t index_of(Polarity p) noexcept { return static_cast<std::size_t>(p); }

constexpr std::string_view to_string(Polarity p) noexcept {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::neutral: return "neutral";
    case Polarity::negative: return "negative";
  }
  return "?";
}

inline std::optional<Polarity> parse_polarity(std::string_view s) noexcept {
  for (Polarity p : kAllPolarities) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

/// One labelled sentiment target inside a comment. Offsets count code
/// points and are half-open.
struct AspectInstance {
  std::string id;
  std::string text;
  std::string aspect_term;
  std::size_t aspect_start = 0;
  std::size_t aspect_end = 0;
  Polarity label = Polarity::positive;

  friend bool operator==(const AspectInstance&, const AspectInstance&) = default;
};

/// Returns a description of the first violated invariant, if any.
inline std::optional<std::string> check_instance(const AspectInstance& inst) {
  if (inst.id.empty()) return "empty id";
  const std::size_t len = utf8::length(inst.text);
  if (!(inst.aspect_start < inst.aspect_end && inst.aspect_end <= len)) {
    return "aspect offsets [" + std::to_string(inst.aspect_start) + ", " +
           std::to_string(inst.aspect_end) + ") out of range for text of length " +
           std::to_string(len);
  }
  const auto slice = utf8::substr(inst.text, inst.aspect_start, inst.aspect_end);
  if (slice != inst.aspect_term) {
    return "text slice \"" + slice + "\" does not match aspect_term \"" + inst.aspect_term + "\"";
  }
  return std::nullopt;
}

/// Ordered, id-unique collection of aspect instances.
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::vector<AspectInstance> instances) : instances_(std::move(instances)) {
    std::unordered_set<std::string_view> seen;
    for (const auto& inst : instances_) {
      if (auto err = check_instance(inst)) throw InvalidArgument("instance " + inst.id + ": " + *err);
      if (!seen.insert(inst.id).second) throw InvalidArgument("duplicate instance id: " + inst.id);
    }
  }

  const std::vector<AspectInstance>& instances() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  const AspectInstance& operator[](std::size_t i) const { return instances_[i]; }
  auto begin() const noexcept { return instances_.begin(); }
  auto end() const noexcept { return instances_.end(); }

  /// Instances grouped by identical text, groups ordered by first appearance.
  std::vector<std::vector<std::size_t>> comments() const {
    std::vector<std::vector<std::size_t>> groups;
    std::unordered_map<std::string_view, std::size_t> group_of;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      auto [it, inserted] = group_of.try_emplace(instances_[i].text, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(i);
    }
    return groups;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(instances_.size());
    for (const auto& inst : instances_) out.push_back(inst.id);
    return out;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<AspectInstance> instances_;
};

// ---------------------------------------------------------------------------
// Line-delimited JSON records.

inline nlohmann::ordered_json to_json(const AspectInstance& inst) {
  nlohmann::ordered_json j;
  j["id"] = inst.id;
  j["text"] = inst.text;
  j["aspect_term"] = inst.aspect_term;
  j["aspect_start"] = inst.aspect_start;
  j["aspect_end"] = inst.aspect_end;
  j["label"] = to_string(inst.label);
  return j;
}

inline std::string to_jsonl(const AspectInstance& inst) {
  return to_json(inst).dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

namespace detail {

inline AspectInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("record is not an object");
  auto field = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidArgument(std::string("missing field \"") + key + "\"");
    return *it;
  };
  auto str = [&](const char* key) {
    const auto& v = field(key);
    if (!v.is_string()) throw InvalidArgument(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
  };
  auto offset = [&](const char* key) {
    const auto& v = field(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw InvalidArgument(std::string("field \"") + key + "\" must be a non-negative integer");
    }
    return v.get<std::size_t>();
  };
  AspectInstance inst;
  inst.id = str("id");
  inst.text = str("text");
  inst.aspect_term = str("aspect_term");
  inst.aspect_start = offset("aspect_start");
  inst.aspect_end = offset("aspect_end");
  const auto label = str("label");
  auto pol = parse_polarity(label);
  if (!pol) throw InvalidArgument("unknown label \"" + label + "\"");
  inst.label = *pol;
  return inst;
}

inline bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace detail

/// Parses a dataset from a stream of JSON lines; `source` names it in errors.
inline Dataset read_dataset(std::istream& in, const std::string& source) {
  std::vector<AspectInstance> instances;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::is_blank(line)) continue;
    AspectInstance inst;
    try {
      inst = detail::instance_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line_no, std::string("malformed record: ") + e.what());
    } catch (const InvalidArgument& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (auto err = check_instance(inst)) throw ParseError(source, line_no, *err);
    if (!seen.insert(inst.id).second) throw ParseError(source, line_no, "duplicate id \"" + inst.id + "\"");
    instances.push_back(std::move(inst));
  }
  return Dataset(std::move(instances));
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path);
  return read_dataset(in, path);
}

inline void write_dataset(std::ostream& out, const Dataset& d) {
  for (const auto& inst : d) out << to_jsonl(inst) << '\n';
}

inline void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset file: " + path);
  write_dataset(out, d);
}

// ---------------------------------------------------------------------------
// Corpus statistics.

struct CorpusStats {
  std::size_t n_targets = 0;
  std::size_t n_positive = 0;
  std::size_t n_neutral = 0;
  std::size_t n_negative = 0;
  std::size_t n_tokens = 0;
  std::size_t n_unique_words = 0;
  std::size_t n_comments = 0;
  double avg_words_per_comment = 0.0;
  double text_len_avg = 0.0;
  std::size_t text_len_max = 0;
  std::size_t text_len_min = 0;
};

/// Token counts use preprocess::tokenize over the normalized text of each
/// distinct comment; every token counts toward n_tokens, only non-punctuation
/// surfaces count as words. Text lengths are code points of the raw text.
inline CorpusStats dataset_stats(const Dataset& d) {
  if (d.empty()) throw InvalidArgument("dataset_stats: empty dataset (averages undefined)");
  CorpusStats s;
  s.n_targets = d.size();
  for (const auto& inst : d) {
    switch (inst.label) {
      case Polarity::positive: ++s.n_positive; break;
      case Polarity::neutral: ++s.n_neutral; break;
      case Polarity::negative: ++s.n_negative; break;
    }
  }
  std::unordered_set<std::string> vocabulary;
  std::size_t total_len = 0;
  s.text_len_min = static_cast<std::size_t>(-1);
  const auto groups = d.comments();
  for (const auto& group : groups) {
    const auto& text = d[group.front()].text;
    for (auto& tok : preprocess::tokenize(preprocess::normalize(text))) {
      ++s.n_tokens;
      if (!tok.is_punct) vocabulary.insert(std::move(tok.surface));
    }
    const std::size_t len = utf8::length(text);
    total_len += len;
    s.text_len_max = std::max(s.text_len_max, len);
    s.text_len_min = std::min(s.text_len_min, len);
  }
  s.n_comments = groups.size();
  s.n_unique_words = vocabulary.size();
  s.avg_words_per_comment = static_cast<double>(s.n_tokens) / static_cast<double>(s.n_comments);
  s.text_len_avg = static_cast<double>(total_len) / static_cast<double>(s.n_comments);
  return s;
}

/// Two tables: dataset properties and class/length statistics.
inline std::string render_stats(const CorpusStats& s) {
  auto pct = [&](std::size_t n) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(1) << 100.0 * static_cast<double>(n) / static_cast<double>(s.n_targets);
    return o.str();
  };
  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "Property                        Value\n"
    << "Number of sentiment targets     " << s.n_targets << '\n'
    << "Positive polarity targets       " << s.n_positive << '\n'
    << "Negative polarity targets       " << s.n_negative << '\n'
    << "Neutral polarity targets        " << s.n_neutral << '\n'
    << "Total number of tokens          " << s.n_tokens << '\n'
    << "Unique words                    " << s.n_unique_words << '\n'
    << "Total number of comments        " << s.n_comments << '\n'
    << "Average words per comment       " << s.avg_words_per_comment << '\n'
    << '\n'
    << "Statistics                      Information\n"
    << "Total Samples                   " << s.n_comments << '\n'
    << "Total Aspects                   " << s.n_targets << '\n'
    << "Positive                        " << s.n_positive << " (" << pct(s.n_positive) << "%)\n"
    << "Neutral                         " << s.n_neutral << " (" << pct(s.n_neutral) << "%)\n"
    << "Negative                        " << s.n_negative << " (" << pct(s.n_negative) << "%)\n"
    << "Text Length                     Avg: " << s.text_len_avg << ", Max: " << s.text_len_max
    << ", Min: " << s.text_len_min << '\n';
  return o.str();
}

// ---------------------------------------------------------------------------
// Train/test split.

enum class Granularity { target, comment };

constexpr std::string_view to_string(Granularity g) noexcept {
  return g == Granularity::target ? "target" : "comment";
}

inline std::optional<Granularity> parse_granularity(std::string_view s) noexcept {
  if (s == "target") return Granularity::target;
  if (s == "comment") return Granularity::comment;
  return std::nullopt;
}

/// floor(ratio * units). A 1e-9 guard keeps decimal ratios such as 0.29 from
/// flooring one unit short because of binary rounding.
inline std::size_t train_size(std::size_t units, double ratio) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(units) + 1e-9));
}

struct Split {
  Dataset train;
  Dataset test;
};

/// Seeded split: units (instances, or comment groups) are shuffled with
/// Fisher-Yates over SplitMix64(seed); the first floor(ratio * units) go to
/// train. Each side keeps the original dataset order.
inline Split split(const Dataset& d, double train_ratio, std::uint64_t seed,
                   Granularity granularity = Granularity::target) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw InvalidArgument("split: train_ratio must lie in (0, 1)");
  }
  if (d.empty()) throw InvalidArgument("split: empty dataset");

  std::vector<std::vector<std::size_t>> units;
  if (granularity == Granularity::comment) {
    units = d.comments();
  } else {
    units.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) units.push_back({i});
  }
  const std::size_t n_train = train_size(units.size(), train_ratio);
  if (n_train == 0 || n_train == units.size()) {
    throw InvalidArgument("split: " + std::to_string(units.size()) + " " +
                          std::string(to_string(granularity)) +
                          " units leave an empty side at ratio " + std::to_string(train_ratio));
  }

  std::vector<std::size_t> order(units.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 rng(seed);
  fisher_yates(order, rng);

  std::vector<bool> in_train(d.size(), false);
  for (std::size_t k = 0; k < n_train; ++k) {
    for (std::size_t idx : units[order[k]]) in_train[idx] = true;
  }
  std::vector<AspectInstance> train, test;
  for (std::size_t i = 0; i < d.size(); ++i) {
    (in_train[i] ? train : test).push_back(d[i]);
  }
  return {Dataset(std::move(train)), Dataset(std::move(test))};
}

}  // namespace pabsa
