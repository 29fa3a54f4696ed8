// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace pabsa {
namespace {

using test::instance;
using test::TempDir;

const char* kThree =
    R"({"id":"a","text":"good phone","aspect_term":"phone","aspect_start":5,"aspect_end":10,"label":"positive"})"
    "\n"
    R"({"id":"b","text":"bad battery","aspect_term":"battery","aspect_start":4,"aspect_end":11,"label":"negative"})"
    "\n"
    R"({"id":"c","text":"گوشی معمولی","aspect_term":"گوشی","aspect_start":0,"aspect_end":4,"label":"neutral"})"
    "\n";

Dataset read(const std::string& s) {
  std::istringstream in(s);
  return read_dataset(in, "mem");
}

TEST(Polarity, FixedEncodingAndNames) {
  EXPECT_EQ(index_of(Polarity::positive), 0u);
  EXPECT_EQ(index_of(Polarity::neutral), 1u);
  EXPECT_EQ(index_of(Polarity::negative), 2u);
  for (Polarity p : kAllPolarities) EXPECT_EQ(parse_polarity(to_string(p)), p);
  EXPECT_FALSE(parse_polarity("Positive").has_value());
}

TEST(LoadDataset, ReadsRecordsInOrder) {
  const auto d = read(kThree);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.ids(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(d[2].aspect_term, "گوشی");
  EXPECT_EQ(d[2].label, Polarity::neutral);
}

TEST(LoadDataset, EmptyFileGivesEmptyDataset) {
  EXPECT_TRUE(read("").empty());
  EXPECT_TRUE(read("\n  \n").empty());
}

TEST(LoadDataset, SliceMismatchNamesLine) {
  const std::string bad =
      std::string(kThree) +
      R"({"id":"d","text":"good phone","aspect_term":"phone","aspect_start":4,"aspect_end":9,"label":"positive"})";
  try {
    read(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("mem:4"), std::string::npos);
  }
}

TEST(LoadDataset, RejectsMalformedUnknownLabelAndDuplicates) {
  auto line_of = [](const std::string& s) {
    try {
      read(s);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of(std::string(kThree) + "{not json"), 4u);
  EXPECT_EQ(line_of(R"({"id":"x","text":"ab","aspect_term":"a","aspect_start":0,"aspect_end":1,"label":"happy"})"), 1u);
  EXPECT_EQ(line_of(R"({"id":"x","text":"ab","aspect_term":"a","aspect_start":0,"aspect_end":1})"), 1u);
  EXPECT_EQ(line_of(R"({"id":"x","text":"ab","aspect_term":"a","aspect_start":0,"aspect_end":3,"label":"neutral"})"), 1u);
  EXPECT_EQ(line_of(std::string(kThree) + "\n" +
                    R"({"id":"a","text":"ab","aspect_term":"a","aspect_start":0,"aspect_end":1,"label":"neutral"})"),
            5u);
}

TEST(LoadDataset, MissingFileNamesPath) {
  try {
    load_dataset("/nonexistent/data.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/data.jsonl"), std::string::npos);
  }
}

TEST(LoadDataset, WriteReadRoundTrip) {
  TempDir dir;
  const auto d = read(kThree);
  save_dataset(d, dir / "d.jsonl");
  EXPECT_EQ(load_dataset(dir / "d.jsonl"), d);
  EXPECT_EQ(test::read_file(dir / "d.jsonl"), kThree);
}

TEST(Dataset, ValidatesInvariants) {
  auto a = instance("a", "good phone", "phone");
  auto bad = a;
  bad.aspect_start = 6;
  EXPECT_THROW(Dataset({bad}), InvalidArgument);
  bad = a;
  bad.aspect_end = bad.aspect_start;
  EXPECT_THROW(Dataset({bad}), InvalidArgument);
  EXPECT_THROW(Dataset({a, a}), InvalidArgument);
}

TEST(Dataset, CommentsPartitionInstances) {
  const Dataset d({instance("1", "a b c", "a"), instance("2", "d e", "e"), instance("3", "a b c", "c")});
  const auto groups = d.comments();
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(groups[1], (std::vector<std::size_t>{1}));
}

TEST(DatasetStats, TinyExample) {
  const Dataset d({instance("1", "a b c", "a"), instance("2", "a b c", "b", Polarity::negative),
                   instance("3", "d e", "d", Polarity::neutral)});
  const auto s = dataset_stats(d);
  EXPECT_EQ(s.n_comments, 2u);
  EXPECT_EQ(s.n_targets, 3u);
  EXPECT_EQ(s.n_positive, 1u);
  EXPECT_EQ(s.n_neutral, 1u);
  EXPECT_EQ(s.n_negative, 1u);
  EXPECT_EQ(s.n_tokens, 5u);
  EXPECT_EQ(s.n_unique_words, 5u);
  EXPECT_DOUBLE_EQ(s.avg_words_per_comment, 2.5);
  EXPECT_EQ(s.text_len_min, 3u);
  EXPECT_EQ(s.text_len_max, 5u);
  EXPECT_DOUBLE_EQ(s.text_len_avg, 4.0);
}

TEST(DatasetStats, EmptyDatasetThrows) { EXPECT_THROW(dataset_stats(Dataset{}), InvalidArgument); }

// Hand-counted (and cross-checked by tests/oracles/oracles.py).
TEST(DatasetStats, BundledFixtureGolden) {
  const auto s = dataset_stats(load_dataset(test::source_path("data/fixtures/stats/dataset.jsonl")));
  EXPECT_EQ(s.n_targets, 10u);
  EXPECT_EQ(s.n_positive, 5u);
  EXPECT_EQ(s.n_neutral, 2u);
  EXPECT_EQ(s.n_negative, 3u);
  EXPECT_EQ(s.n_tokens, 41u);
  EXPECT_EQ(s.n_unique_words, 27u);
  EXPECT_EQ(s.n_comments, 6u);
  EXPECT_DOUBLE_EQ(s.avg_words_per_comment, 41.0 / 6.0);
  EXPECT_DOUBLE_EQ(s.text_len_avg, 89.0 / 3.0);
  EXPECT_EQ(s.text_len_max, 45u);
  EXPECT_EQ(s.text_len_min, 15u);
}

TEST(DatasetStats, RenderedLayout) {
  const auto s = dataset_stats(load_dataset(test::source_path("data/fixtures/stats/dataset.jsonl")));
  const auto text = render_stats(s);
  EXPECT_NE(text.find("Number of sentiment targets     10\n"), std::string::npos);
  EXPECT_NE(text.find("Average words per comment       6.83\n"), std::string::npos);
  EXPECT_NE(text.find("Positive                        5 (50.0%)\n"), std::string::npos);
  EXPECT_NE(text.find("Text Length                     Avg: 29.67, Max: 45, Min: 15\n"), std::string::npos);
}

Dataset ten_targets() {
  std::vector<AspectInstance> v;
  for (int i = 0; i < 10; ++i) v.push_back(instance("t" + std::to_string(i), "text " + std::to_string(i), "text"));
  return Dataset(std::move(v));
}

TEST(Split, TenTargetsEightTwo) {
  const auto d = ten_targets();
  const auto s = split(d, 0.8, 42);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  std::multiset<std::string> all;
  for (const auto& x : s.train) all.insert(x.id);
  for (const auto& x : s.test) all.insert(x.id);
  const auto ids = d.ids();
  EXPECT_EQ(all, std::multiset<std::string>(ids.begin(), ids.end()));
}

TEST(Split, ReferencePartitionForSeed42) {
  // Fisher-Yates order for n=10, seed 42 is [0,9,5,8,6,4,7,2,1,3]; the last
  // two units (1 and 3) form the test side.
  const auto s = split(ten_targets(), 0.8, 42);
  EXPECT_EQ(s.test.ids(), (std::vector<std::string>{"t1", "t3"}));
}

TEST(Split, TrainSizeFloors) {
  EXPECT_EQ(train_size(10002, 0.8), 8001u);
  EXPECT_EQ(train_size(10, 0.8), 8u);
  EXPECT_EQ(train_size(100, 0.29), 29u);
  EXPECT_EQ(train_size(7, 0.5), 3u);
}

TEST(Split, LargeDatasetSizes) {
  std::vector<AspectInstance> v;
  for (int i = 0; i < 10002; ++i) v.push_back(instance(std::to_string(i), "x", "x"));
  const auto s = split(Dataset(std::move(v)), 0.8, 42);
  EXPECT_EQ(s.train.size(), 8001u);
  EXPECT_EQ(s.test.size(), 2001u);
}

TEST(Split, Deterministic) {
  const auto d = ten_targets();
  const auto a = split(d, 0.8, 42);
  const auto b = split(d, 0.8, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(split(d, 0.8, 7).test, a.test);
}

TEST(Split, CommentGranularityKeepsCommentsTogether) {
  std::vector<AspectInstance> v;
  for (int c = 0; c < 6; ++c) {
    const std::string text = "alpha beta comment" + std::to_string(c);
    v.push_back(instance("c" + std::to_string(c) + "a", text, "alpha"));
    v.push_back(instance("c" + std::to_string(c) + "b", text, "beta"));
  }
  const auto s = split(Dataset(std::move(v)), 0.5, 42, Granularity::comment);
  EXPECT_EQ(s.train.size(), 6u);
  std::set<std::string> train_texts;
  for (const auto& x : s.train) train_texts.insert(x.text);
  for (const auto& x : s.test) EXPECT_FALSE(train_texts.count(x.text));
}

TEST(Split, Errors) {
  const auto d = ten_targets();
  EXPECT_THROW(split(d, 0.0, 42), InvalidArgument);
  EXPECT_THROW(split(d, 1.0, 42), InvalidArgument);
  EXPECT_THROW(split(d, -0.5, 42), InvalidArgument);
  EXPECT_THROW(split(Dataset{}, 0.8, 42), InvalidArgument);
  EXPECT_THROW(split(d, 0.05, 42), InvalidArgument);
  EXPECT_EQ(split(d, 0.99, 42).test.size(), 1u);
  EXPECT_THROW(split(d, 0.99999999999, 42), InvalidArgument);
}

TEST(Granularity, Parse) {
  EXPECT_EQ(parse_granularity("comment"), Granularity::comment);
  EXPECT_EQ(parse_granularity("target"), Granularity::target);
  EXPECT_FALSE(parse_granularity("sentence"));
}

}  // namespace
}  // namespace pabsa
