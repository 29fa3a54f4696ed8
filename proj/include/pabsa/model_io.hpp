// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "pabsa/classifier.hpp"
#include "pabsa/error.hpp"

namespace pabsa {

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kModelFormatName = "pabsa-model";

using Model = std::variant<DecisionTree, NaiveBayesModel>;

/// A fitted classifier plus what is needed to rebuild its inputs.
struct ModelFile {
  Model model;
  std::string layout_hash;
  std::string layout_descriptor;
  nlohmann::json pipeline;  // opaque to this module; written by the experiment runner
};

inline std::size_t model_dimension(const Model& m) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, DecisionTree>) {
          return v.dimension();
        } else {
          return v.dimension;
        }
      },
      m);
}

inline std::vector<Polarity> predict_batch(const Model& m, const FeatureMatrix& x) {
  return std::visit([&](const auto& v) { return predict_batch(v, x); }, m);
}

namespace detail {

inline nlohmann::json params_to_json(const TreeParams& p) {
  return {{"max_depth", p.max_depth ? nlohmann::json(*p.max_depth) : nlohmann::json()},
          {"min_samples_split", p.min_samples_split},
          {"min_samples_leaf", p.min_samples_leaf},
          {"min_impurity_decrease", p.min_impurity_decrease}};
}

inline TreeParams params_from_json(const nlohmann::json& j) {
  TreeParams p;
  if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<std::size_t>();
  p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  p.min_impurity_decrease = j.at("min_impurity_decrease").get<double>();
  return p;
}

inline nlohmann::json model_to_json(const DecisionTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : t.nodes()) {
    nlohmann::json jn{{"counts", n.counts}, {"label", index_of(n.label)}};
    if (!n.is_leaf) {
      jn["feature"] = n.feature;
      jn["threshold"] = n.threshold;
      jn["left"] = n.left;
      jn["right"] = n.right;
    }
    nodes.push_back(std::move(jn));
  }
  return {{"kind", "decision_tree"},
          {"feature_dimension", t.dimension()},
          {"params", params_to_json(t.params())},
          {"nodes", std::move(nodes)}};
}

inline nlohmann::json model_to_json(const NaiveBayesModel& m) {
  nlohmann::json prior = nlohmann::json::array();
  for (double p : m.log_prior) prior.push_back(std::isinf(p) ? nlohmann::json() : nlohmann::json(p));
  return {{"kind", "naive_bayes"},
          {"feature_dimension", m.dimension},
          {"log_prior", std::move(prior)},
          {"log_likelihood", m.log_likelihood}};
}

inline Polarity label_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::size_t>();
  if (v >= kNumClasses) throw ModelFormatError("label encoding out of range");
  return static_cast<Polarity>(v);
}

inline Model model_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto dim = j.at("feature_dimension").get<std::size_t>();
  if (kind == "decision_tree") {
    std::vector<TreeNode> nodes;
    for (const auto& jn : j.at("nodes")) {
      TreeNode n;
      n.counts = jn.at("counts").get<ClassCounts>();
      n.label = label_from_json(jn.at("label"));
      if (jn.contains("feature")) {
        n.is_leaf = false;
        n.feature = jn.at("feature").get<std::size_t>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<std::size_t>();
        n.right = jn.at("right").get<std::size_t>();
      }
      nodes.push_back(n);
    }
    try {
      return DecisionTree(std::move(nodes), params_from_json(j.at("params")), dim);
    } catch (const InvalidArgument& e) {
      throw ModelFormatError(std::string("corrupt model file: ") + e.what());
    }
  }
  if (kind == "naive_bayes") {
    NaiveBayesModel m;
    m.dimension = dim;
    const auto& prior = j.at("log_prior");
    if (prior.size() != kNumClasses) throw ModelFormatError("log_prior must hold 3 values");
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      m.log_prior[c] = prior[c].is_null() ? -std::numeric_limits<double>::infinity() : prior[c].get<double>();
    }
    m.log_likelihood = j.at("log_likelihood").get<std::array<std::vector<double>, kNumClasses>>();
    for (const auto& row : m.log_likelihood) {
      if (row.size() != dim) throw ModelFormatError("log_likelihood width does not match feature_dimension");
    }
    return m;
  }
  throw ModelFormatError("unknown model kind \"" + kind + "\"");
}

}  // namespace detail

inline std::string serialize_model(const ModelFile& file) {
  nlohmann::json j{{"format", kModelFormatName}, {"version", kModelFormatVersion}};
  j["model"] = std::visit([](const auto& m) { return detail::model_to_json(m); }, file.model);
  j["layout_hash"] = file.layout_hash;
  j["layout"] = file.layout_descriptor;
  j["pipeline"] = file.pipeline;
  return j.dump(1) + "\n";
}

inline ModelFile deserialize_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("corrupt model file: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kModelFormatName) {
      throw ModelFormatError("not a model file (missing format tag)");
    }
    const int version = j.at("version").get<int>();
    if (version > kModelFormatVersion) {
      throw ModelVersionError("model format version " + std::to_string(version) + " is newer than supported version " +
                              std::to_string(kModelFormatVersion));
    }
    if (version < 1) throw ModelVersionError("invalid model format version " + std::to_string(version));
    ModelFile f{detail::model_from_json(j.at("model")), j.at("layout_hash").get<std::string>(),
                j.value("layout", ""), j.value("pipeline", nlohmann::json())};
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("corrupt model file: ") + e.what());
  }
}

inline void save_model(const ModelFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path);
  out << serialize_model(file);
  if (!out) throw Error("failed writing model file: " + path);
}

inline ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace pabsa
