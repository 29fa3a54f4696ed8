// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pabsa/error.hpp"
#include "pabsa/preprocess.hpp"

namespace pabsa {

namespace detail {

// Reads "#"-commented TSV lines and hands (line number, left, right) to fn.
template <typename Fn>
void for_each_tsv_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return c == ' ' || c == '\t'; })) {
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(source, line_no, "expected <key><TAB><value>");
    fn(line_no, std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1));
  }
}

inline const std::vector<std::string>& empty_list() {
  static const std::vector<std::string> empty;
  return empty;
}

}  // namespace detail

/// Directed synonym relation: normalized headword -> ordered, duplicate-free
/// synonyms, none equal to the headword.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  /// "headword<TAB>syn1|syn2|..." per line; repeated headwords are merged.
  static SynonymLexicon read(std::istream& in, const std::string& source) {
    SynonymLexicon lex;
    detail::for_each_tsv_line(in, source, [&](std::size_t line_no, std::string_view head,
                                               std::string_view rest) {
      auto headword = preprocess::normalize(head);
      if (headword.empty()) throw ParseError(source, line_no, "empty headword");
      std::vector<std::string> syns;
      std::size_t pos = 0;
      while (pos <= rest.size()) {
        const auto bar = std::min(rest.find('|', pos), rest.size());
        auto syn = preprocess::normalize(rest.substr(pos, bar - pos));
        pos = bar + 1;
        if (syn.empty()) {
          if (rest.find_first_not_of(" \t") == std::string_view::npos) break;
          throw ParseError(source, line_no, "empty synonym entry");
        }
        if (syn == headword) throw ParseError(source, line_no, "\"" + headword + "\" lists itself as a synonym");
        syns.push_back(std::move(syn));
      }
      if (syns.empty()) throw ParseError(source, line_no, "empty synonym list for \"" + headword + "\"");
      lex.add(headword, syns);
    });
    return lex;
  }

  static SynonymLexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open synonym file: " + path);
    return read(in, path);
  }

  /// Stored list for the normalized word, or an empty list.
  const std::vector<std::string>& synonyms_of(std::string_view word) const {
    auto it = entries_.find(preprocess::normalize(word));
    return it == entries_.end() ? detail::empty_list() : it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::unordered_map<std::string, std::vector<std::string>>& entries() const noexcept {
    return entries_;
  }

 private:
  void add(const std::string& headword, const std::vector<std::string>& syns) {
    auto& list = entries_[headword];
    for (const auto& s : syns) {
      if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
    }
  }

  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

/// Gazetteer of normalized entity surfaces, each under exactly one type tag.
class EntityDictionary {
 public:
  EntityDictionary() = default;

  /// "surface<TAB>TypeTag" per line. A surface listed under two different
  /// types is an error; exact repeats are ignored.
  static EntityDictionary read(std::istream& in, const std::string& source) {
    EntityDictionary dict;
    detail::for_each_tsv_line(in, source, [&](std::size_t line_no, std::string_view surf,
                                               std::string_view tag) {
      auto surface = preprocess::normalize(surf);
      auto type = preprocess::normalize(tag);
      if (surface.empty()) throw ParseError(source, line_no, "empty entity surface");
      if (type.empty()) throw ParseError(source, line_no, "empty type tag for \"" + surface + "\"");
      auto [it, inserted] = dict.type_of_.try_emplace(surface, type);
      if (!inserted) {
        if (it->second != type) {
          throw ParseError(source, line_no, "\"" + surface + "\" listed under both " + it->second +
                                                " and " + type);
        }
        return;
      }
      dict.by_type_[type].push_back(surface);
      dict.max_tokens_ = std::max(dict.max_tokens_, preprocess::tokenize(surface).size());
    });
    return dict;
  }

  static EntityDictionary load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open entity file: " + path);
    return read(in, path);
  }

  std::optional<std::string> entity_type(std::string_view phrase) const {
    auto it = type_of_.find(preprocess::normalize(phrase));
    if (it == type_of_.end()) return std::nullopt;
    return it->second;
  }

  /// Surfaces of the given type in file order.
  const std::vector<std::string>& entities_of_type(std::string_view tag) const {
    auto it = by_type_.find(std::string(tag));
    return it == by_type_.end() ? detail::empty_list() : it->second;
  }

  std::vector<std::string> types() const {
    std::vector<std::string> out;
    for (const auto& [t, _] : by_type_) out.push_back(t);
    return out;
  }

  std::size_t size() const noexcept { return type_of_.size(); }

  /// Longest surface measured in tokens; bounds the n-gram scan.
  std::size_t max_tokens() const noexcept { return max_tokens_; }

 private:
  std::unordered_map<std::string, std::string> type_of_;
  std::map<std::string, std::vector<std::string>> by_type_;
  std::size_t max_tokens_ = 0;
};

}  // namespace pabsa
