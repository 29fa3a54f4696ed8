// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "pabsa/corpus.hpp"
#include "pabsa/error.hpp"
#include "pabsa/features.hpp"

namespace pabsa {

/// Cache record: {"id": ..., "provider_id": ..., "scores": [pos, neu, neg]}.
inline std::string to_cache_line(const std::string& instance_id, const PolarityScores& s) {
  nlohmann::ordered_json j;
  j["id"] = instance_id;
  j["provider_id"] = s.provider_id;
  j["scores"] = s.scores;
  return j.dump();
}

/// Answers from a precomputed polarity cache keyed by instance id.
class FilePolarityProvider final : public PolarityProvider {
 public:
  /// Reads the records of `provider_id`, or of the single provider present
  /// in the cache when no id is given.
  static FilePolarityProvider read(std::istream& in, const std::string& source,
                                   std::optional<std::string> provider_id = std::nullopt) {
    FilePolarityProvider p;
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::string> seen_provider;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (detail::is_blank(line)) continue;
      PolarityScores s;
      std::string id;
      try {
        const auto j = nlohmann::json::parse(line);
        id = j.at("id").get<std::string>();
        s.provider_id = j.at("provider_id").get<std::string>();
        const auto& arr = j.at("scores");
        if (!arr.is_array() || arr.size() != 3) throw InvalidArgument("\"scores\" must hold 3 numbers");
        for (std::size_t k = 0; k < 3; ++k) s.scores[k] = arr[k].get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(source, line_no, std::string("malformed cache record: ") + e.what());
      } catch (const InvalidArgument& e) {
        throw ParseError(source, line_no, e.what());
      }
      if (provider_id) {
        if (s.provider_id != *provider_id) continue;
      } else if (seen_provider && *seen_provider != s.provider_id) {
        throw ParseError(source, line_no,
                         "cache holds several providers (" + *seen_provider + ", " + s.provider_id +
                             "); select one by id");
      }
      seen_provider = s.provider_id;
      if (auto bad = s.violation()) throw ParseError(source, line_no, *bad);
      if (!p.cache_.emplace(id, s).second) {
        throw ParseError(source, line_no, "duplicate cache entry for \"" + id + "\"");
      }
    }
    if (provider_id) {
      p.id_ = *provider_id;
    } else if (seen_provider) {
      p.id_ = *seen_provider;
    } else {
      throw ParseError(source, line_no, "empty polarity cache and no provider id given");
    }
    return p;
  }

  static FilePolarityProvider load(const std::string& path,
                                   std::optional<std::string> provider_id = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open polarity cache: " + path);
    return read(in, path, std::move(provider_id));
  }

  const std::string& id() const override { return id_; }

  PolarityScores score(const AspectInstance& inst) const override {
    auto it = cache_.find(inst.id);
    if (it == cache_.end()) {
      throw ProviderError("provider '" + id_ + "' has no cached scores for instance '" + inst.id + "'");
    }
    return it->second;
  }

  std::size_t size() const noexcept { return cache_.size(); }

 private:
  FilePolarityProvider() = default;

  std::string id_;
  std::unordered_map<std::string, PolarityScores> cache_;
};

inline std::shared_ptr<const PolarityProvider> file_provider(
    const std::string& path, std::optional<std::string> provider_id = std::nullopt) {
  return std::make_shared<FilePolarityProvider>(FilePolarityProvider::load(path, std::move(provider_id)));
}

/// Client of the polarity scoring service:
///   GET  /v1/health          -> {"status": "ok", "model_id": ...}
///   POST /v1/polarity        ScoreRequest -> ScoreResponse
///   POST /v1/polarity:batch  [ScoreRequest] -> [ScoreResponse | {"error": ...}]
/// ScoreRequest is {id, text, aspect_term, aspect_start, aspect_end};
/// ScoreResponse is {model_id, scores: {positive, neutral, negative}}.
class RemotePolarityProvider final : public PolarityProvider {
 public:
  static constexpr std::size_t kBatchSize = 64;

  /// Health-checks the service; an empty model_id adopts the one it reports.
  RemotePolarityProvider(std::string base_url, std::string model_id, std::chrono::milliseconds timeout)
      : base_url_(std::move(base_url)), id_(std::move(model_id)), timeout_(timeout) {
    auto cli = client();
    auto res = cli->Get("/v1/health");
    if (!res) {
      throw ProviderError("polarity service at " + base_url_ + " unreachable: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw ProviderError("polarity service at " + base_url_ + " not ready (HTTP " +
                          std::to_string(res->status) + ")");
    }
    std::string reported;
    try {
      reported = nlohmann::json::parse(res->body).at("model_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError("malformed health response from " + base_url_ + ": " + e.what());
    }
    if (id_.empty()) {
      id_ = reported;
    } else if (reported != id_) {
      throw ProviderError("polarity service at " + base_url_ + " serves model '" + reported + "', expected '" +
                          id_ + "'");
    }
  }

  const std::string& id() const override { return id_; }

  PolarityScores score(const AspectInstance& inst) const override {
    auto cli = client();
    auto res = cli->Post("/v1/polarity", request_json(inst).dump(), "application/json");
    if (!res) throw ProviderError(failure(inst, "transport error: " + httplib::to_string(res.error())));
    if (res->status != 200) {
      throw ProviderError(failure(inst, "HTTP " + std::to_string(res->status) + ": " + res->body));
    }
    try {
      return parse_response(nlohmann::json::parse(res->body), inst);
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(failure(inst, std::string("malformed response: ") + e.what()));
    }
  }

  /// Batches of kBatchSize through the batch endpoint; falls back to single
  /// requests when the service does not offer it.
  std::vector<PolarityScores> score_batch(std::span<const AspectInstance> batch) const override {
    std::vector<PolarityScores> out;
    out.reserve(batch.size());
    auto cli = client();
    for (std::size_t begin = 0; begin < batch.size(); begin += kBatchSize) {
      const auto chunk = batch.subspan(begin, std::min(kBatchSize, batch.size() - begin));
      nlohmann::json body = nlohmann::json::array();
      for (const auto& inst : chunk) body.push_back(request_json(inst));
      auto res = cli->Post("/v1/polarity:batch", body.dump(), "application/json");
      if (res && (res->status == 404 || res->status == 405)) {
        for (const auto& inst : chunk) out.push_back(score(inst));
        continue;
      }
      if (!res) throw ProviderError(failure(chunk.front(), "transport error: " + httplib::to_string(res.error())));
      if (res->status != 200) {
        throw ProviderError(failure(chunk.front(), "batch HTTP " + std::to_string(res->status) + ": " + res->body));
      }
      nlohmann::json items;
      try {
        items = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw ProviderError(failure(chunk.front(), std::string("malformed batch response: ") + e.what()));
      }
      if (!items.is_array() || items.size() != chunk.size()) {
        throw ProviderError(failure(chunk.front(), "batch response size does not match request"));
      }
      for (std::size_t k = 0; k < chunk.size(); ++k) {
        if (items[k].contains("error")) {
          throw ProviderError(failure(chunk[k], "service error: " + items[k]["error"].dump()));
        }
        try {
          out.push_back(parse_response(items[k], chunk[k]));
        } catch (const nlohmann::json::exception& e) {
          throw ProviderError(failure(chunk[k], std::string("malformed response: ") + e.what()));
        }
      }
    }
    return out;
  }

  const std::string& base_url() const noexcept { return base_url_; }

 private:
  std::unique_ptr<httplib::Client> client() const {
    auto cli = std::make_unique<httplib::Client>(base_url_);
    const auto secs = static_cast<time_t>(timeout_.count() / 1000);
    const auto usecs = static_cast<time_t>((timeout_.count() % 1000) * 1000);
    cli->set_connection_timeout(secs, usecs);
    cli->set_read_timeout(secs, usecs);
    cli->set_write_timeout(secs, usecs);
    return cli;
  }

  static nlohmann::json request_json(const AspectInstance& inst) {
    return {{"id", inst.id},
            {"text", inst.text},
            {"aspect_term", inst.aspect_term},
            {"aspect_start", inst.aspect_start},
            {"aspect_end", inst.aspect_end}};
  }

  std::string failure(const AspectInstance& inst, const std::string& what) const {
    return "provider '" + id_ + "' failed for instance '" + inst.id + "': " + what;
  }

  PolarityScores parse_response(const nlohmann::json& j, const AspectInstance& inst) const {
    const auto model = j.at("model_id").get<std::string>();
    if (model != id_) throw ProviderError(failure(inst, "response from unexpected model '" + model + "'"));
    const auto& sc = j.at("scores");
    PolarityScores s{id_, {sc.at("positive").get<double>(), sc.at("neutral").get<double>(),
                           sc.at("negative").get<double>()}};
    if (auto bad = s.violation()) throw ProviderError(failure(inst, *bad));
    return s;
  }

  std::string base_url_;
  std::string id_;
  std::chrono::milliseconds timeout_;
};

inline std::shared_ptr<const PolarityProvider> remote_provider(
    std::string base_url, std::string model_id,
    std::chrono::milliseconds timeout = std::chrono::milliseconds(30000)) {
  return std::make_shared<RemotePolarityProvider>(std::move(base_url), std::move(model_id), timeout);
}

}  // namespace pabsa
