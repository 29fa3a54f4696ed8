// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#include <gtest/gtest.h>

#include <functional>

#include "support.hpp"

namespace pabsa {
namespace {

SynonymLexicon synonyms(const std::string& s) {
  std::istringstream in(s);
  return SynonymLexicon::read(in, "syn.tsv");
}

EntityDictionary entities(const std::string& s) {
  std::istringstream in(s);
  return EntityDictionary::read(in, "ent.tsv");
}

std::size_t error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(Synonyms, ParsesList) {
  const auto lex = synonyms("big\tlarge|huge\n");
  EXPECT_EQ(lex.synonyms_of("big"), (std::vector<std::string>{"large", "huge"}));
}

TEST(Synonyms, MergesRepeatedHeadwords) {
  const auto lex = synonyms("# comment\nbig\tlarge|huge\n\nbig\thuge|vast\n");
  EXPECT_EQ(lex.synonyms_of("big"), (std::vector<std::string>{"large", "huge", "vast"}));
  EXPECT_EQ(lex.size(), 1u);
}

TEST(Synonyms, Errors) {
  EXPECT_EQ(error_line([] { synonyms("big\tbig\n"); }), 1u);
  EXPECT_EQ(error_line([] { synonyms("x\ty\nbig\tlarge|big\n"); }), 2u);
  EXPECT_EQ(error_line([] { synonyms("big\t\n"); }), 1u);
  EXPECT_EQ(error_line([] { synonyms("big\tlarge||huge\n"); }), 1u);
  EXPECT_EQ(error_line([] { synonyms("big large\n"); }), 1u);
}

TEST(Synonyms, UnknownWordGivesEmptyList) {
  const auto lex = synonyms("big\tlarge\n");
  EXPECT_TRUE(lex.synonyms_of("small").empty());
}

TEST(Synonyms, LookupNormalizesQuery) {
  const auto lex = synonyms("عالی\tخوب|ممتاز\n");
  // Arabic yeh in the query.
  EXPECT_EQ(lex.synonyms_of("عالي"), lex.synonyms_of("عالی"));
  EXPECT_EQ(lex.synonyms_of("عالي").size(), 2u);
}

TEST(Synonyms, EntriesStoredNormalized) {
  const auto lex = synonyms("عالي\tكامل\n");
  EXPECT_EQ(lex.synonyms_of("عالی"), (std::vector<std::string>{"کامل"}));
}

TEST(Synonyms, NeverContainsQuery) {
  const auto lex = SynonymLexicon::load(test::source_path("data/synonyms_fa.tsv"));
  EXPECT_GT(lex.size(), 0u);
  for (const auto& [head, syns] : lex.entries()) {
    EXPECT_FALSE(syns.empty());
    for (const auto& s : syns) {
      EXPECT_NE(s, head);
      EXPECT_EQ(preprocess::normalize(s), s);
    }
  }
}

TEST(Entities, TypeLookup) {
  const auto d = entities("Tehran\tCity\nShiraz\tCity\nTabriz\tCity\nSamsung\tBrand\n");
  EXPECT_EQ(d.entity_type("Tehran"), "City");
  EXPECT_EQ(d.entity_type("Samsung"), "Brand");
  EXPECT_EQ(d.entities_of_type("City"), (std::vector<std::string>{"Tehran", "Shiraz", "Tabriz"}));
  EXPECT_FALSE(d.entity_type("Paris").has_value());
  EXPECT_TRUE(d.entities_of_type("Planet").empty());
}

TEST(Entities, MultiWordSurfaces) {
  const auto d = entities("Xiaomi  Redmi\tPhone\nGalaxy S21\tPhone\n");
  EXPECT_EQ(d.entity_type("Xiaomi Redmi"), "Phone");
  EXPECT_EQ(d.max_tokens(), 2u);
}

TEST(Entities, ConflictingTypeIsError) {
  EXPECT_EQ(error_line([] { entities("Tehran\tCity\nTehran\tBrand\n"); }), 2u);
  EXPECT_EQ(entities("Tehran\tCity\nTehran\tCity\n").entities_of_type("City").size(), 1u);
  EXPECT_EQ(error_line([] { entities("Tehran City\n"); }), 1u);
}

TEST(Entities, InverseIndexConsistent) {
  const auto d = EntityDictionary::load(test::source_path("data/entities_fa.tsv"));
  std::size_t total = 0;
  for (const auto& t : d.types()) {
    for (const auto& s : d.entities_of_type(t)) {
      EXPECT_EQ(d.entity_type(s), t);
      ++total;
    }
  }
  EXPECT_EQ(total, d.size());
}

TEST(Lexicon, MissingFilesNamePath) {
  try {
    SynonymLexicon::load("/nonexistent/syn.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/syn.tsv"), std::string::npos);
  }
  EXPECT_THROW(EntityDictionary::load("/nonexistent/ent.tsv"), Error);
}

}  // namespace
}  // namespace pabsa
