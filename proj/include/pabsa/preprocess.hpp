// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <array>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "pabsa/error.hpp"
#include "pabsa/utf8.hpp"

namespace pabsa::preprocess {

inline constexpr char32_t kZwnj = 0x200C;

// Persian comma, semicolon and question mark.
inline constexpr std::array<char32_t, 3> kPersianPunct = {0x060C, 0x061B, 0x061F};

inline bool is_separator(char32_t c) noexcept {
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

/// Unicode general categories P* and S*, plus the Persian punctuation marks.
inline bool is_punctuation(char32_t c) noexcept {
  for (char32_t p : kPersianPunct) {
    if (c == p) return true;
  }
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

namespace detail {

inline std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<std::int32_t>(s.size())));
  icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

// Letter unification, diacritic/tatweel removal and digit canonicalization.
// Returns false when the code point is dropped.
inline bool map_char(char32_t& c) noexcept {
  if (c == 0x064A) {
    c = 0x06CC;  // ARABIC YEH -> FARSI YEH
  } else if (c == 0x0643) {
    c = 0x06A9;  // ARABIC KAF -> KEHEH
  } else if ((c >= 0x064B && c <= 0x065F) || c == 0x0640) {
    return false;
  } else if (c >= 0x0660 && c <= 0x0669) {
    c = 0x06F0 + (c - 0x0660);
  }
  return true;
}

}  // namespace detail

/// Canonical form used everywhere text is compared: NFC, Persian letter
/// forms, no Arabic diacritics or tatweel, Persian digits, single spaces
/// between words with no leading or trailing whitespace, and ZWNJ kept only
/// inside words.
inline std::string normalize(std::string_view text) {
  std::u32string mapped;
  for (char32_t c : utf8::decode(detail::nfc(text))) {
    if (detail::map_char(c)) mapped.push_back(c);
  }
  const std::u32string cps = utf8::decode(detail::nfc(utf8::encode(mapped)));

  std::u32string out;
  out.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_separator(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_separator(cps[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && cps[b] == kZwnj) ++b;
    while (e > b && cps[e - 1] == kZwnj) --e;
    if (b < e) {
      if (!out.empty()) out.push_back(U' ');
      out.append(cps, b, e - b);
    }
    i = j;
  }
  return utf8::encode(out);
}

struct Token {
  std::string surface;
  std::size_t start = 0;  // code-point offsets, half-open
  std::size_t end = 0;
  bool is_punct = false;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits on whitespace; every punctuation or symbol character becomes its
/// own token. ZWNJ is treated as part of a word.
inline std::vector<Token> tokenize(std::string_view text) {
  const auto cps = utf8::decode(text);
  std::vector<Token> tokens;
  std::size_t word_start = 0;
  bool in_word = false;
  auto flush = [&](std::size_t end) {
    if (in_word) {
      tokens.push_back({utf8::encode(std::u32string_view(cps).substr(word_start, end - word_start)),
                        word_start, end, false});
      in_word = false;
    }
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (is_separator(c)) {
      flush(i);
    } else if (is_punctuation(c)) {
      flush(i);
      std::string s;
      utf8::append(s, c);
      tokens.push_back({std::move(s), i, i + 1, true});
    } else if (!in_word) {
      word_start = i;
      in_word = true;
    }
  }
  flush(cps.size());
  return tokens;
}

/// Set of normalized stopwords.
class Stoplist {
 public:
  Stoplist() = default;

  Stoplist(std::initializer_list<std::string_view> words) {
    for (auto w : words) insert(w);
  }

  template <typename Range>
  static Stoplist from_words(const Range& words) {
    Stoplist s;
    for (const auto& w : words) s.insert(w);
    return s;
  }

  /// One entry per line; blank lines and lines starting with '#' are skipped.
  static Stoplist load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stoplist file: " + path);
    Stoplist s;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      s.insert(line);
    }
    return s;
  }

  void insert(std::string_view word) {
    auto w = normalize(word);
    if (!w.empty()) words_.insert(std::move(w));
  }

  bool contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
  }

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::unordered_set<std::string>& words() const noexcept { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

inline std::vector<Token> remove_stopwords(std::span<const Token> tokens, const Stoplist& stoplist) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t.surface)) out.push_back(t);
  }
  return out;
}

namespace detail {

// Plural markers, comparative/superlative and pronominal clitics.
inline const std::array<std::u32string, 10>& suffix_table() {
  static const std::array<std::u32string, 10> table = {
      U"ترین", U"شان", U"تان", U"مان", U"تر", U"ها", U"ان", U"ام", U"ات", U"اش",
  };
  return table;
}

}  // namespace detail

inline constexpr std::size_t kMinStemLength = 2;

/// Strips the longest listed suffix (optionally preceded by ZWNJ) whose
/// removal leaves at least two characters. Single pass.
inline std::string stem(std::string_view token) {
  const auto word = utf8::decode(token);
  const std::u32string* best = nullptr;
  std::size_t best_keep = 0;
  for (const auto& suffix : detail::suffix_table()) {
    if (word.size() <= suffix.size()) continue;
    if (word.compare(word.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
    std::size_t keep = word.size() - suffix.size();
    if (word[keep - 1] == kZwnj) --keep;
    if (keep < kMinStemLength) continue;
    if (best == nullptr || suffix.size() > best->size()) {
      best = &suffix;
      best_keep = keep;
    }
  }
  if (best == nullptr) return std::string(token);
  return utf8::encode(std::u32string_view(word).substr(0, best_keep));
}

/// normalize -> tokenize -> drop punctuation -> remove stopwords -> stem.
/// Produces the terms that feed the bag-of-words features.
class Analyzer {
 public:
  Analyzer() = default;
  Analyzer(std::shared_ptr<const Stoplist> stoplist, bool stemming)
      : stoplist_(std::move(stoplist)), stemming_(stemming) {}

  std::vector<std::string> terms(std::string_view text) const {
    std::vector<std::string> out;
    for (auto& tok : tokenize(normalize(text))) {
      if (tok.is_punct) continue;
      if (stoplist_ && stoplist_->contains(tok.surface)) continue;
      out.push_back(stemming_ ? stem(tok.surface) : std::move(tok.surface));
    }
    return out;
  }

  bool stemming() const noexcept { return stemming_; }
  const Stoplist* stoplist() const noexcept { return stoplist_.get(); }

 private:
  std::shared_ptr<const Stoplist> stoplist_;
  bool stemming_ = false;
};

}  // namespace pabsa::preprocess
