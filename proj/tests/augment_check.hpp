// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <string>
#include <vector>

#include "support.hpp"

namespace pabsa::test {

struct AugmentCase {
  AspectInstance source;
  AugmentConfig cfg;
};

inline const SynonymLexicon& shipped_synonyms() {
  static const auto lex = SynonymLexicon::load(source_path("data/synonyms_fa.tsv"));
  return lex;
}

inline const EntityDictionary& shipped_entities() {
  static const auto dict = EntityDictionary::load(source_path("data/entities_fa.tsv"));
  return dict;
}

/// Text mixing lexicon headwords, entity surfaces (some multi-word), filler
/// words and punctuation; the aspect is a random word token.
inline AugmentCase random_augment_case(SplitMix64& rng, std::size_t index) {
  static const std::vector<std::string> pool = {
      "خوب", "عالی", "بد", "ضعیف", "سریع", "گران", "زیبا", "قشنگ", "کند", "معمولی", "متوسط",
      "تهران", "سامسونگ", "گلکسی اس ۲۱", "آیفون ۱۳", "دیجی‌کالا", "اسنپ",
      "گوشی", "باتری", "دوربین", "قیمت", "است", "بود", "و", "،", "!", "phone", "۱۲"};
  AugmentCase c;
  std::string text;
  const std::size_t len = 1 + rng.below(12);
  for (std::size_t k = 0; k < len; ++k) text += (k ? " " : "") + pool[rng.below(pool.size())];
  const auto toks = preprocess::tokenize(text);
  std::vector<preprocess::Token> words;
  for (const auto& t : toks) {
    if (!t.is_punct) words.push_back(t);
  }
  if (words.empty()) return random_augment_case(rng, index);
  const auto& t = words[rng.below(words.size())];
  c.source = AspectInstance{"a" + std::to_string(index), text, t.surface, t.start, t.end,
                            static_cast<Polarity>(rng.below(3))};
  static const double rates[] = {0.0, 0.1, 0.5, 1.0};
  c.cfg.synonym_rate = rates[rng.below(4)];
  c.cfg.entity_rate = rates[rng.below(4)];
  c.cfg.seed = rng.next();
  c.cfg.protect_aspect = rng.below(4) != 0;
  c.cfg.copies = 1 + rng.below(3);
  return c;
}

/// Empty when every variant satisfies the augmentation invariants.
inline std::string check_augment_case(const AugmentCase& c) {
  const Dataset d({c.source});
  const auto out = augment_dataset(d, shipped_synonyms(), shipped_entities(), c.cfg);
  if (out.dataset.size() != 1 + c.cfg.copies) return "output size";
  if (out.audits.size() != c.cfg.copies) return "audit count";
  if (!(out.dataset[0] == c.source)) return "original not kept first";
  const auto src_len = utf8::length(c.source.text);
  for (std::size_t k = 0; k < c.cfg.copies; ++k) {
    const auto& v = out.dataset[1 + k];
    const auto& audit = out.audits[k];
    const std::string where = c.source.id + " copy " + std::to_string(k + 1) + ": ";
    if (v.id != c.source.id + "#aug" + std::to_string(k + 1)) return where + "id " + v.id;
    if (audit.instance_id != v.id || audit.source_id != c.source.id) return where + "audit ids";
    if (v.label != c.source.label) return where + "label changed";
    if (auto err = check_instance(v)) return where + *err;
    if (c.cfg.protect_aspect && v.aspect_term != c.source.aspect_term) return where + "aspect term changed";
    std::size_t prev_end = 0;
    for (const auto& r : audit.replacements) {
      if (r.start >= r.end || r.start < prev_end || r.end > src_len) return where + "bad replacement span";
      if (utf8::substr(c.source.text, r.start, r.end) != r.original) return where + "original mismatch";
      if (c.cfg.protect_aspect && r.start < c.source.aspect_end && c.source.aspect_start < r.end) {
        return where + "replacement inside aspect";
      }
      prev_end = r.end;
    }
    auto replay = apply_replacements(c.source, audit.replacements);
    replay.id = v.id;
    if (!(replay == v)) return where + "audit does not reproduce variant";
    if (c.cfg.synonym_rate == 0.0 && c.cfg.entity_rate == 0.0 && v.text != c.source.text) {
      return where + "zero rates changed text";
    }
  }
  const auto again = augment_dataset(d, shipped_synonyms(), shipped_entities(), c.cfg);
  if (!(again.dataset == out.dataset) || !(again.audits == out.audits)) return c.source.id + ": not deterministic";
  return {};
}

}  // namespace pabsa::test
