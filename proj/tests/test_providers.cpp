// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#include <gtest/gtest.h>

#include <thread>

#include "mock_service.hpp"
#include "support.hpp"

namespace pabsa {
namespace {

using test::instance;
using test::TempDir;

FilePolarityProvider read_cache(const std::string& s, std::optional<std::string> id = std::nullopt) {
  std::istringstream in(s);
  return FilePolarityProvider::read(in, "cache", std::move(id));
}

TEST(FileProvider, LooksUpById) {
  const auto p = read_cache(R"({"id":"x","provider_id":"m","scores":[0.5,0.3,0.2]})" "\n");
  EXPECT_EQ(p.id(), "m");
  const auto s = p.score(instance("x", "good phone", "phone"));
  EXPECT_EQ(s.scores, (std::array<double, 3>{0.5, 0.3, 0.2}));
  EXPECT_EQ(s.provider_id, "m");
}

TEST(FileProvider, CacheMissNamesProviderAndInstance) {
  const auto p = read_cache(R"({"id":"x","provider_id":"m","scores":[0.5,0.3,0.2]})");
  try {
    p.score(instance("missing-id", "good phone", "phone"));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_NE(std::string(e.what()).find("'m'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("missing-id"), std::string::npos);
  }
}

TEST(FileProvider, MalformedLines) {
  auto line_of = [](const std::string& s) {
    try {
      read_cache(s);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  const std::string ok = R"({"id":"x","provider_id":"m","scores":[0.5,0.3,0.2]})" "\n";
  EXPECT_EQ(line_of(ok + "{oops"), 2u);
  EXPECT_EQ(line_of(ok + R"({"id":"y","provider_id":"m","scores":[0.5,0.3]})"), 2u);
  EXPECT_EQ(line_of(ok + R"({"id":"y","provider_id":"m","scores":[0.5,0.2,0.1]})"), 2u);
  EXPECT_EQ(line_of(ok + ok), 2u);
  EXPECT_EQ(line_of(ok + R"({"id":"y","provider_id":"n","scores":[0.5,0.3,0.2]})"), 2u);
}

TEST(FileProvider, SelectsProviderFromSharedCache) {
  const std::string cache = R"({"id":"x","provider_id":"m","scores":[0.5,0.3,0.2]})" "\n"
                            R"({"id":"x","provider_id":"n","scores":[0.1,0.1,0.8]})" "\n";
  const auto n = read_cache(cache, "n");
  EXPECT_EQ(n.score(instance("x", "a", "a")).scores[2], 0.8);
  EXPECT_EQ(n.size(), 1u);
}

TEST(FileProvider, EmptyCacheNeedsId) {
  EXPECT_THROW(read_cache(""), ParseError);
  EXPECT_EQ(read_cache("", "m").size(), 0u);
}

TEST(FileProvider, RoundTripsCacheLines) {
  TempDir dir;
  const PolarityScores s{"m", {0.25, 0.25, 0.5}};
  test::write_file(dir / "c.jsonl", to_cache_line("x", s) + "\n");
  const auto p = file_provider(dir / "c.jsonl");
  EXPECT_EQ(p->score(instance("x", "a", "a")), s);
  EXPECT_THROW(file_provider("/nonexistent/cache.jsonl"), Error);
}

Dataset many_instances(std::size_t n) {
  std::vector<AspectInstance> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(instance("id" + std::to_string(i), "good phone " + std::to_string(i), "phone"));
  return Dataset(std::move(v));
}

TEST(RemoteProvider, HealthCheckAdoptsModelId) {
  test::MockService svc;
  const auto p = remote_provider(svc.url(), "");
  EXPECT_EQ(p->id(), "mock-model");
  EXPECT_THROW(remote_provider(svc.url(), "other-model"), ProviderError);
}

TEST(RemoteProvider, NotReadyOrUnreachable) {
  {
    test::MockService svc;
    svc.ready = false;
    EXPECT_THROW(remote_provider(svc.url(), ""), ProviderError);
  }
  EXPECT_THROW(remote_provider("http://127.0.0.1:1", "", std::chrono::milliseconds(500)), ProviderError);
}

TEST(RemoteProvider, SingleScore) {
  test::MockService svc;
  const auto p = remote_provider(svc.url(), "mock-model");
  const auto s = p->score(instance("id1", "good phone", "phone"));
  EXPECT_EQ(s.scores, test::MockService::default_scores("id1"));
  EXPECT_EQ(s.provider_id, "mock-model");
  EXPECT_EQ(svc.single_calls.load(), 1);
}

TEST(RemoteProvider, RejectsScoresNotSummingToOne) {
  test::MockService svc;
  const auto p = remote_provider(svc.url(), "");
  try {
    p->score(instance("bad-1", "good phone", "phone"));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_NE(std::string(e.what()).find("bad-1"), std::string::npos);
  }
  const Dataset d({instance("ok", "a", "a"), instance("bad-2", "b", "b")});
  EXPECT_THROW(p->score_batch(d.instances()), ProviderError);
}

TEST(RemoteProvider, BatchPreservesOrderAndChunks) {
  test::MockService svc;
  const auto p = remote_provider(svc.url(), "");
  const auto d = many_instances(150);
  const auto out = p->score_batch(d.instances());
  ASSERT_EQ(out.size(), 150u);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(out[i].scores, test::MockService::default_scores(d[i].id));
  EXPECT_EQ(svc.batch_calls.load(), 3);
  EXPECT_EQ(svc.single_calls.load(), 0);
}

TEST(RemoteProvider, BatchItemErrorIsPositional) {
  test::MockService svc;
  const auto p = remote_provider(svc.url(), "");
  const Dataset d({instance("ok", "a", "a"), instance("err-9", "b", "b")});
  try {
    p->score_batch(d.instances());
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_NE(std::string(e.what()).find("err-9"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
}

TEST(RemoteProvider, FallsBackToSingleRequests) {
  test::MockService svc;
  svc.batch_enabled = false;
  const auto p = remote_provider(svc.url(), "");
  const auto d = many_instances(5);
  const auto out = p->score_batch(d.instances());
  ASSERT_EQ(out.size(), 5u);
  EXPECT_EQ(out[4].scores, test::MockService::default_scores("id4"));
  EXPECT_EQ(svc.single_calls.load(), 5);
}

TEST(RemoteProvider, MatchesFileProviderOverExportedCache) {
  test::MockService svc;
  const auto remote = remote_provider(svc.url(), "");
  const auto d = many_instances(100);
  TempDir dir;
  {
    std::ofstream out(dir / "cache.jsonl");
    for (const auto& inst : d) out << to_cache_line(inst.id, remote->score(inst)) << '\n';
  }
  const auto file = file_provider(dir / "cache.jsonl");
  EXPECT_EQ(file->id(), remote->id());

  std::vector<std::vector<std::string>> docs;
  const preprocess::Analyzer analyzer(nullptr, false);
  for (const auto& inst : d) docs.push_back(analyzer.terms(inst.text));
  const auto vocab = fit_vocabulary(docs, 1, std::nullopt);
  const FeatureConfig cfg{true, true, analyzer};
  const auto a = build_feature_matrix(d, vocab, {remote}, cfg);
  const auto b = build_feature_matrix(d, vocab, {file}, cfg);
  ASSERT_EQ(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) EXPECT_EQ(a.dense_row(i), b.dense_row(i));
}

TEST(RemoteProvider, ConcurrentCallsAreDeterministic) {
  test::MockService svc;
  const auto p = remote_provider(svc.url(), "");
  const auto d = many_instances(16);
  std::vector<PolarityScores> out(d.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < d.size(); ++i) threads.emplace_back([&, i] { out[i] = p->score(d[i]); });
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(out[i].scores, test::MockService::default_scores(d[i].id));
}

}  // namespace
}  // namespace pabsa
