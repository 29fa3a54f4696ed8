// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pabsa/corpus.hpp"
#include "pabsa/error.hpp"
#include "pabsa/lexicon.hpp"
#include "pabsa/preprocess.hpp"
#include "pabsa/random.hpp"
#include "pabsa/utf8.hpp"

namespace pabsa {

enum class ReplacementKind { synonym, entity };

constexpr std::string_view to_string(ReplacementKind k) noexcept {
  return k == ReplacementKind::synonym ? "synonym" : "entity";
}

/// One substitution, with [start, end) in code points of the source text.
struct Replacement {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string original;
  std::string replacement;
  ReplacementKind kind = ReplacementKind::synonym;

  friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct AugmentAudit {
  std::string instance_id;  // id of the augmented instance
  std::string source_id;
  std::vector<Replacement> replacements;  // sorted by start, non-overlapping

  friend bool operator==(const AugmentAudit&, const AugmentAudit&) = default;
};

struct AugmentConfig {
  double synonym_rate = 0.1;
  double entity_rate = 0.1;
  std::uint64_t seed = 42;
  bool protect_aspect = true;
  std::size_t copies = 1;

  void validate() const {
    if (!(synonym_rate >= 0.0 && synonym_rate <= 1.0)) throw InvalidArgument("synonym_rate must lie in [0, 1]");
    if (!(entity_rate >= 0.0 && entity_rate <= 1.0)) throw InvalidArgument("entity_rate must lie in [0, 1]");
    if (copies < 1) throw InvalidArgument("copies must be >= 1");
  }
};

struct Augmented {
  AspectInstance instance;
  AugmentAudit audit;
};

/// Applies sorted, non-overlapping replacements to the source text and
/// carries the aspect span along. The id is left unchanged.
inline AspectInstance apply_replacements(const AspectInstance& source,
                                         std::span<const Replacement> replacements) {
  const auto cps = utf8::decode(source.text);
  std::u32string out;
  out.reserve(cps.size());
  std::size_t cursor = 0;
  for (const auto& r : replacements) {
    if (r.start < cursor || r.end > cps.size() || r.start >= r.end) {
      throw InvalidArgument("replacements must be sorted, in range and non-overlapping");
    }
    out.append(cps, cursor, r.start - cursor);
    out += utf8::decode(r.replacement);
    cursor = r.end;
  }
  out.append(cps, cursor, cps.size() - cursor);

  // Position p in the source maps through every replacement ending at or
  // before it; a position strictly inside a replacement snaps to its edge.
  auto map_position = [&](std::size_t p, bool is_end) {
    std::ptrdiff_t shift = 0;
    for (const auto& r : replacements) {
      const auto new_len = static_cast<std::ptrdiff_t>(utf8::length(r.replacement));
      const auto old_len = static_cast<std::ptrdiff_t>(r.end - r.start);
      if (r.end <= p) {
        shift += new_len - old_len;
      } else if (r.start < p) {
        const auto start = static_cast<std::ptrdiff_t>(r.start) + shift;
        return static_cast<std::size_t>(is_end ? start + new_len : start);
      } else {
        break;
      }
    }
    return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + shift);
  };

  AspectInstance result = source;
  result.text = utf8::encode(out);
  result.aspect_start = map_position(source.aspect_start, false);
  result.aspect_end = map_position(source.aspect_end, true);
  result.aspect_term = utf8::substr(result.text, result.aspect_start, result.aspect_end);
  return result;
}

namespace detail {

class ReplacementPlanner {
 public:
  ReplacementPlanner(const AspectInstance& inst, bool protect_aspect)
      : inst_(inst), cps_(utf8::decode(inst.text)), tokens_(preprocess::tokenize(inst.text)),
        used_(tokens_.size(), false), protect_(protect_aspect) {}

  void plan_synonyms(const SynonymLexicon& lex, double rate, SplitMix64& rng) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const auto& tok = tokens_[i];
      if (tok.is_punct || used_[i] || protected_span(tok.start, tok.end)) continue;
      const auto& syns = lex.synonyms_of(tok.surface);
      if (syns.empty()) continue;
      if (rng.uniform() < rate) {
        const auto& pick = syns[static_cast<std::size_t>(rng.below(syns.size()))];
        plan_.push_back({tok.start, tok.end, tok.surface, pick, ReplacementKind::synonym});
        used_[i] = true;
      }
    }
  }

  // Longest match over token n-grams, left to right. Tokens already
  // replaced by an earlier pass cannot take part in a match.
  void plan_entities(const EntityDictionary& dict, double rate, SplitMix64& rng) {
    const std::size_t n = tokens_.size();
    std::size_t i = 0;
    while (i < n) {
      std::size_t match_len = 0;
      std::string type;
      if (!used_[i]) {
        const std::size_t longest = std::min(dict.max_tokens(), n - i);
        for (std::size_t len = longest; len >= 1; --len) {
          if (std::any_of(used_.begin() + static_cast<std::ptrdiff_t>(i),
                          used_.begin() + static_cast<std::ptrdiff_t>(i + len),
                          [](bool u) { return u; })) {
            continue;
          }
          if (auto t = dict.entity_type(slice(tokens_[i].start, tokens_[i + len - 1].end))) {
            match_len = len;
            type = std::move(*t);
            break;
          }
        }
      }
      if (match_len == 0) {
        ++i;
        continue;
      }
      const std::size_t start = tokens_[i].start;
      const std::size_t end = tokens_[i + match_len - 1].end;
      const std::size_t first = i;
      i += match_len;
      if (protected_span(start, end)) continue;

      const auto original = slice(start, end);
      const auto key = preprocess::normalize(original);
      std::vector<const std::string*> candidates;
      for (const auto& s : dict.entities_of_type(type)) {
        if (s != key) candidates.push_back(&s);
      }
      if (candidates.empty()) continue;
      if (rng.uniform() < rate) {
        const auto* pick = candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
        plan_.push_back({start, end, original, *pick, ReplacementKind::entity});
        std::fill(used_.begin() + static_cast<std::ptrdiff_t>(first),
                  used_.begin() + static_cast<std::ptrdiff_t>(first + match_len), true);
      }
    }
  }

  Augmented finish(std::string new_id) {
    std::sort(plan_.begin(), plan_.end(),
              [](const Replacement& a, const Replacement& b) { return a.start < b.start; });
    Augmented out{apply_replacements(inst_, plan_), {}};
    out.instance.id = new_id;
    out.audit = {std::move(new_id), inst_.id, std::move(plan_)};
    return out;
  }

 private:
  bool protected_span(std::size_t start, std::size_t end) const {
    return protect_ && start < inst_.aspect_end && inst_.aspect_start < end;
  }

  std::string slice(std::size_t start, std::size_t end) const {
    return utf8::encode(std::u32string_view(cps_).substr(start, end - start));
  }

  const AspectInstance& inst_;
  std::u32string cps_;
  std::vector<preprocess::Token> tokens_;
  std::vector<bool> used_;
  bool protect_;
  std::vector<Replacement> plan_;
};

inline void check_rate(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidArgument("replacement rate must lie in [0, 1]");
}

}  // namespace detail

/// Replaces each eligible word that has synonyms with probability `rate`,
/// drawing the synonym uniformly. Eligible: not punctuation and, when
/// protect_aspect is set, not overlapping the aspect span.
inline Augmented synonym_replace(const AspectInstance& inst, const SynonymLexicon& lex, double rate,
                                 std::uint64_t seed, bool protect_aspect = true) {
  detail::check_rate(rate);
  SplitMix64 rng(seed);
  detail::ReplacementPlanner planner(inst, protect_aspect);
  planner.plan_synonyms(lex, rate, rng);
  return planner.finish(inst.id + "#syn");
}

/// Replaces each matched entity with probability `rate` by a different
/// surface of the same type. Types with a single surface are never replaced.
inline Augmented entity_replace(const AspectInstance& inst, const EntityDictionary& dict, double rate,
                                std::uint64_t seed, bool protect_aspect = true) {
  detail::check_rate(rate);
  SplitMix64 rng(seed);
  detail::ReplacementPlanner planner(inst, protect_aspect);
  planner.plan_entities(dict, rate, rng);
  return planner.finish(inst.id + "#ent");
}

struct AugmentedDataset {
  Dataset dataset;
  std::vector<AugmentAudit> audits;  // one per augmented variant, in output order
};

/// Originals first, then `copies` variants per instance (synonym pass then
/// entity pass, one generator seeded with derive_seed(seed, index, copy)).
/// Variant ids are "<id>#aug<k>" with k starting at 1.
inline AugmentedDataset augment_dataset(const Dataset& d, const SynonymLexicon& lex,
                                        const EntityDictionary& dict, const AugmentConfig& cfg) {
  cfg.validate();
  std::vector<AspectInstance> out(d.begin(), d.end());
  out.reserve(d.size() * (1 + cfg.copies));
  std::vector<AugmentAudit> audits;
  audits.reserve(d.size() * cfg.copies);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t c = 0; c < cfg.copies; ++c) {
      SplitMix64 rng(derive_seed(cfg.seed, i, c));
      detail::ReplacementPlanner planner(d[i], cfg.protect_aspect);
      planner.plan_synonyms(lex, cfg.synonym_rate, rng);
      planner.plan_entities(dict, cfg.entity_rate, rng);
      auto aug = planner.finish(d[i].id + "#aug" + std::to_string(c + 1));
      out.push_back(std::move(aug.instance));
      audits.push_back(std::move(aug.audit));
    }
  }
  return {Dataset(std::move(out)), std::move(audits)};
}

/// One line per replacement; variants without replacements emit nothing.
inline void write_audit(std::ostream& os, std::span<const AugmentAudit> audits) {
  for (const auto& a : audits) {
    for (const auto& r : a.replacements) {
      nlohmann::ordered_json j;
      j["id"] = a.instance_id;
      j["source_id"] = a.source_id;
      j["start"] = r.start;
      j["end"] = r.end;
      j["original"] = r.original;
      j["replacement"] = r.replacement;
      j["kind"] = to_string(r.kind);
      os << j.dump() << '\n';
    }
  }
}

}  // namespace pabsa
