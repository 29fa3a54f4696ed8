// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pabsa/augment.hpp"
#include "pabsa/classifier.hpp"
#include "pabsa/corpus.hpp"
#include "pabsa/error.hpp"
#include "pabsa/eval.hpp"
#include "pabsa/features.hpp"
#include "pabsa/hash.hpp"
#include "pabsa/lexicon.hpp"
#include "pabsa/model_io.hpp"
#include "pabsa/preprocess.hpp"
#include "pabsa/providers.hpp"

namespace pabsa {

inline constexpr const char* kPolarityUrlEnv = "PABSA_POLARITY_URL";

struct ProviderSpec {
  std::string kind = "file";  // "file" | "remote"
  std::string id;             // cache provider id / remote model id; may be empty
  std::string path;           // file providers
  std::string url;            // remote providers; empty falls back to $PABSA_POLARITY_URL
  std::int64_t timeout_ms = 30000;

  friend bool operator==(const ProviderSpec&, const ProviderSpec&) = default;
};

enum class ClassifierKind { tree, naive_bayes };

struct ExperimentConfig {
  std::string name;
  std::string dataset;

  double train_ratio = 0.8;
  std::uint64_t seed = 42;
  Granularity granularity = Granularity::target;

  std::string stopwords;  // empty: no stopword removal
  bool stemming = true;

  bool augment = false;
  bool augment_train_only = true;
  std::string synonyms;
  std::string entities;
  AugmentConfig augment_cfg;  // seed is taken from `seed`

  std::size_t min_df = 2;
  std::optional<std::size_t> max_features = 20000;
  bool text_bag = true;
  bool aspect_bag = true;
  bool polarity = true;
  std::vector<ProviderSpec> providers;

  ClassifierKind classifier = ClassifierKind::tree;
  TreeParams tree;

  std::string output_dir;  // empty: nothing written

  void validate() const {
    if (dataset.empty()) throw InvalidArgument("config: dataset path is required");
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw InvalidArgument("config: split.ratio must lie in (0, 1)");
    if (min_df < 1) throw InvalidArgument("config: features.min_df must be >= 1");
    if (augment) {
      augment_cfg.validate();
      if (synonyms.empty() && entities.empty()) {
        throw InvalidArgument("config: augmentation needs a synonym or entity file");
      }
    }
    std::vector<std::string> ids;
    for (const auto& p : providers) {
      if (p.kind != "file" && p.kind != "remote") throw InvalidArgument("config: unknown provider kind " + p.kind);
      if (p.kind == "file" && p.path.empty()) throw InvalidArgument("config: file provider needs a path");
      if (!p.id.empty()) {
        if (std::find(ids.begin(), ids.end(), p.id) != ids.end()) {
          throw InvalidArgument("config: duplicate provider id " + p.id);
        }
        ids.push_back(p.id);
      }
    }
    tree.validate();
    if (!text_bag && !aspect_bag && (!polarity || providers.empty())) {
      throw InvalidArgument("config: every feature block is disabled");
    }
  }
};

// ---------------------------------------------------------------------------
// Config (de)serialization. Relative paths resolve against the config file.

namespace detail {

inline std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return p;
  return (base / path).lexically_normal().string();
}

inline nlohmann::ordered_json optional_size(const std::optional<std::size_t>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ProviderSpec& p) {
  nlohmann::ordered_json j{{"kind", p.kind}, {"id", p.id}};
  if (p.kind == "file") {
    j["path"] = p.path;
  } else {
    j["url"] = p.url;
    j["timeout_ms"] = p.timeout_ms;
  }
  return j;
}

inline ProviderSpec provider_spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  ProviderSpec p;
  p.kind = j.value("kind", p.kind);
  p.id = j.value("id", "");
  if (j.contains("path") && !j.at("path").is_null()) p.path = detail::resolve_path(j.at("path").get<std::string>(), base_dir);
  p.url = j.value("url", "");
  p.timeout_ms = j.value("timeout_ms", p.timeout_ms);
  return p;
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["dataset"] = c.dataset;
  j["seed"] = c.seed;
  j["split"] = {{"ratio", c.train_ratio}, {"granularity", to_string(c.granularity)}};
  j["preprocess"] = {{"stopwords", c.stopwords}, {"stemming", c.stemming}};
  j["augment"] = {{"enabled", c.augment},
                  {"train_only", c.augment_train_only},
                  {"synonyms", c.synonyms},
                  {"entities", c.entities},
                  {"synonym_rate", c.augment_cfg.synonym_rate},
                  {"entity_rate", c.augment_cfg.entity_rate},
                  {"copies", c.augment_cfg.copies},
                  {"protect_aspect", c.augment_cfg.protect_aspect}};
  nlohmann::ordered_json providers = nlohmann::ordered_json::array();
  for (const auto& p : c.providers) providers.push_back(to_json(p));
  j["features"] = {{"min_df", c.min_df},
                   {"max_features", detail::optional_size(c.max_features)},
                   {"text_bag", c.text_bag},
                   {"aspect_bag", c.aspect_bag},
                   {"polarity", c.polarity},
                   {"providers", std::move(providers)}};
  j["classifier"] = {{"kind", c.classifier == ClassifierKind::tree ? "tree" : "nb"},
                     {"max_depth", detail::optional_size(c.tree.max_depth)},
                     {"min_samples_split", c.tree.min_samples_split},
                     {"min_samples_leaf", c.tree.min_samples_leaf},
                     {"min_impurity_decrease", c.tree.min_impurity_decrease}};
  return j;
}

/// Missing keys keep their defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  ExperimentConfig c;
  try {
    auto path = [&](const nlohmann::json& obj, const char* key, std::string& dst) {
      if (obj.contains(key) && !obj.at(key).is_null()) dst = detail::resolve_path(obj.at(key).get<std::string>(), base_dir);
    };
    c.name = j.value("name", "");
    path(j, "dataset", c.dataset);
    c.seed = j.value("seed", c.seed);
    if (auto it = j.find("split"); it != j.end()) {
      c.train_ratio = it->value("ratio", c.train_ratio);
      if (it->contains("seed")) c.seed = it->at("seed").get<std::uint64_t>();
      const auto g = it->value("granularity", std::string(to_string(c.granularity)));
      auto pg = parse_granularity(g);
      if (!pg) throw InvalidArgument("config: unknown split granularity " + g);
      c.granularity = *pg;
    }
    if (auto it = j.find("preprocess"); it != j.end()) {
      path(*it, "stopwords", c.stopwords);
      c.stemming = it->value("stemming", c.stemming);
    }
    if (auto it = j.find("augment"); it != j.end()) {
      c.augment = it->value("enabled", c.augment);
      c.augment_train_only = it->value("train_only", c.augment_train_only);
      path(*it, "synonyms", c.synonyms);
      path(*it, "entities", c.entities);
      c.augment_cfg.synonym_rate = it->value("synonym_rate", c.augment_cfg.synonym_rate);
      c.augment_cfg.entity_rate = it->value("entity_rate", c.augment_cfg.entity_rate);
      c.augment_cfg.copies = it->value("copies", c.augment_cfg.copies);
      c.augment_cfg.protect_aspect = it->value("protect_aspect", c.augment_cfg.protect_aspect);
    }
    if (auto it = j.find("features"); it != j.end()) {
      c.min_df = it->value("min_df", c.min_df);
      if (it->contains("max_features")) {
        const auto& mf = it->at("max_features");
        c.max_features = mf.is_null() ? std::nullopt : std::optional<std::size_t>(mf.get<std::size_t>());
      }
      c.text_bag = it->value("text_bag", c.text_bag);
      c.aspect_bag = it->value("aspect_bag", c.aspect_bag);
      c.polarity = it->value("polarity", c.polarity);
      for (const auto& jp : it->value("providers", nlohmann::json::array())) {
        c.providers.push_back(provider_spec_from_json(jp, base_dir));
      }
    }
    if (auto it = j.find("classifier"); it != j.end()) {
      const auto kind = it->value("kind", std::string("tree"));
      if (kind == "tree") {
        c.classifier = ClassifierKind::tree;
      } else if (kind == "nb" || kind == "naive_bayes") {
        c.classifier = ClassifierKind::naive_bayes;
      } else {
        throw InvalidArgument("config: unknown classifier kind " + kind);
      }
      if (it->contains("max_depth")) {
        const auto& md = it->at("max_depth");
        c.tree.max_depth = md.is_null() ? std::nullopt : std::optional<std::size_t>(md.get<std::size_t>());
      }
      c.tree.min_samples_split = it->value("min_samples_split", c.tree.min_samples_split);
      c.tree.min_samples_leaf = it->value("min_samples_leaf", c.tree.min_samples_leaf);
      c.tree.min_impurity_decrease = it->value("min_impurity_decrease", c.tree.min_impurity_decrease);
    }
    path(j, "output", c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config " + path + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Pipeline pieces shared by `run` and `predict`.

inline std::shared_ptr<const PolarityProvider> make_provider(const ProviderSpec& spec) {
  if (spec.kind == "file") {
    return file_provider(spec.path, spec.id.empty() ? std::nullopt : std::optional<std::string>(spec.id));
  }
  std::string url = spec.url;
  if (url.empty()) {
    if (const char* env = std::getenv(kPolarityUrlEnv)) url = env;
  }
  if (url.empty()) throw InvalidArgument("remote provider needs a url or $" + std::string(kPolarityUrlEnv));
  return remote_provider(url, spec.id, std::chrono::milliseconds(spec.timeout_ms));
}

inline ProviderList make_providers(const std::vector<ProviderSpec>& specs) {
  ProviderList out;
  for (const auto& s : specs) out.push_back(make_provider(s));
  detail::check_provider_ids(out);
  return out;
}

/// Everything needed to turn instances into feature rows.
struct FeaturePipeline {
  FeatureConfig config;
  Vocabulary vocabulary;
  ProviderList providers;

  FeatureLayout layout() const { return feature_layout(vocabulary, providers, config); }

  FeatureMatrix transform(const Dataset& d) const {
    return build_feature_matrix(d, vocabulary, providers, config);
  }

  /// Serializable part (providers are described by their specs separately).
  nlohmann::json to_json() const {
    std::vector<std::string> stop;
    if (const auto* s = config.analyzer.stoplist()) {
      stop.assign(s->words().begin(), s->words().end());
      std::sort(stop.begin(), stop.end());
    }
    return {{"text_bag", config.text_bag},
            {"aspect_bag", config.aspect_bag},
            {"stemming", config.analyzer.stemming()},
            {"stopwords", stop},
            {"vocabulary", vocabulary.to_json()}};
  }

  static FeaturePipeline from_json(const nlohmann::json& j, ProviderList providers) {
    FeaturePipeline p;
    auto stop = std::make_shared<preprocess::Stoplist>(
        preprocess::Stoplist::from_words(j.at("stopwords").get<std::vector<std::string>>()));
    p.config.text_bag = j.at("text_bag").get<bool>();
    p.config.aspect_bag = j.at("aspect_bag").get<bool>();
    p.config.analyzer = preprocess::Analyzer(stop->empty() ? nullptr : stop, j.at("stemming").get<bool>());
    p.vocabulary = Vocabulary::from_json(j.at("vocabulary"));
    p.providers = std::move(providers);
    return p;
  }
};

// ---------------------------------------------------------------------------
// Experiment runner.

struct ExperimentResult {
  Metrics metrics;
  nlohmann::ordered_json report;
  ModelFile model;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::string split_fingerprint;
  std::vector<Polarity> test_predictions;
};

inline std::string split_fingerprint(const std::vector<std::string>& train, const std::vector<std::string>& test) {
  std::uint64_t h = fnv1a64("train");
  for (const auto& id : train) h = fnv1a64(id + "\n", h);
  h = fnv1a64("test", h);
  for (const auto& id : test) h = fnv1a64(id + "\n", h);
  return to_hex(h);
}

namespace detail {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

inline std::string features_label(const nlohmann::json& features) {
  std::string s;
  auto add = [&](const std::string& part) { s += (s.empty() ? "" : "+") + part; };
  if (features.value("text_bag", false)) add("text");
  if (features.value("aspect_bag", false)) add("aspect");
  if (features.value("polarity", false)) {
    for (const auto& p : features.value("providers", nlohmann::json::array())) {
      add("pol:" + p.value("id", p.value("kind", std::string("?"))));
    }
  }
  return s.empty() ? "-" : s;
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
  if (!out) throw Error("failed writing " + p.string());
}

}  // namespace detail

/// Human-readable metrics table.
inline std::string render_report(const Metrics& m, const std::string& title) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(4);
  o << title << "\n\n";
  o << "class       precision  recall     f1         support\n";
  for (Polarity p : kAllPolarities) {
    const auto& k = m.per_class[index_of(p)];
    o << std::left << std::setw(12) << to_string(p) << std::setw(11) << k.precision << std::setw(11) << k.recall
      << std::setw(11) << k.f1 << k.support << '\n';
  }
  o << std::left << std::setw(12) << "macro" << std::setw(11) << m.macro_precision << std::setw(11)
    << m.macro_recall << std::setw(11) << m.macro_f1 << m.confusion.total() << '\n';
  o << std::left << std::setw(12) << "weighted" << std::setw(11) << m.weighted_precision << std::setw(11)
    << m.weighted_recall << std::setw(11) << m.weighted_f1 << m.confusion.total() << '\n';
  o << "\naccuracy    " << m.accuracy << "\n\nconfusion (rows = true, cols = predicted: pos neu neg)\n";
  for (Polarity p : kAllPolarities) {
    const auto& row = m.confusion.counts[index_of(p)];
    o << std::left << std::setw(12) << to_string(p) << row[0] << ' ' << row[1] << ' ' << row[2] << '\n';
  }
  return o.str();
}

/// load -> split -> (augment) -> vocabulary on train -> features ->
/// classifier -> evaluation on test. When config.output_dir is set, writes
/// report.json, report.txt, config.json, model.json and predictions.jsonl.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  detail::stage("config", [&] { cfg.validate(); });

  const Dataset data = detail::stage("load", [&] { return load_dataset(cfg.dataset); });
  auto parts = detail::stage("split", [&] { return split(data, cfg.train_ratio, cfg.seed, cfg.granularity); });

  ExperimentResult result;
  result.train_ids = parts.train.ids();
  result.test_ids = parts.test.ids();
  result.split_fingerprint = split_fingerprint(result.train_ids, result.test_ids);

  Dataset train = std::move(parts.train);
  Dataset test = std::move(parts.test);
  if (cfg.augment) {
    detail::stage("augment", [&] {
      const auto lex = cfg.synonyms.empty() ? SynonymLexicon{} : SynonymLexicon::load(cfg.synonyms);
      const auto ents = cfg.entities.empty() ? EntityDictionary{} : EntityDictionary::load(cfg.entities);
      AugmentConfig acfg = cfg.augment_cfg;
      acfg.seed = cfg.seed;
      train = augment_dataset(train, lex, ents, acfg).dataset;
      if (!cfg.augment_train_only) test = augment_dataset(test, lex, ents, acfg).dataset;
    });
  }

  FeaturePipeline pipeline = detail::stage("preprocess", [&] {
    FeaturePipeline p;
    std::shared_ptr<const preprocess::Stoplist> stop;
    if (!cfg.stopwords.empty()) stop = std::make_shared<preprocess::Stoplist>(preprocess::Stoplist::load(cfg.stopwords));
    p.config = {cfg.text_bag, cfg.aspect_bag, preprocess::Analyzer(stop, cfg.stemming)};
    std::vector<std::vector<std::string>> docs;
    docs.reserve(train.size());
    for (const auto& inst : train) docs.push_back(p.config.analyzer.terms(inst.text));
    p.vocabulary = Vocabulary::fit(docs, {cfg.min_df, cfg.max_features, cfg.stemming});
    return p;
  });

  FeatureMatrix x_train, x_test;
  detail::stage("features", [&] {
    if (cfg.polarity) pipeline.providers = make_providers(cfg.providers);
    x_train = pipeline.transform(train);
    x_test = pipeline.transform(test);
  });
  std::vector<Polarity> y_train, y_test;
  for (const auto& inst : train) y_train.push_back(inst.label);
  for (const auto& inst : test) y_test.push_back(inst.label);

  const auto layout = pipeline.layout();
  result.model.model = detail::stage("train", [&]() -> Model {
    if (cfg.classifier == ClassifierKind::tree) return fit_tree(x_train, y_train, cfg.tree);
    return fit_nb(x_train, y_train);
  });
  result.model.layout_hash = layout.hash();
  result.model.layout_descriptor = layout.descriptor();
  {
    auto pj = pipeline.to_json();
    nlohmann::json specs = nlohmann::json::array();
    if (cfg.polarity) {
      for (const auto& p : cfg.providers) specs.push_back(nlohmann::json(to_json(p)));
    }
    pj["providers"] = std::move(specs);
    result.model.pipeline = std::move(pj);
  }

  detail::stage("evaluate", [&] {
    result.test_predictions = predict_batch(result.model.model, x_test);
    result.metrics = metrics(confusion_matrix(y_test, result.test_predictions));
  });

  auto& r = result.report;
  r["name"] = cfg.name;
  r["config"] = to_json(cfg);
  r["split"] = {{"n_train", train.size()},
                {"n_test", test.size()},
                {"train_units", result.train_ids.size()},
                {"test_units", result.test_ids.size()},
                {"fingerprint", result.split_fingerprint}};
  r["layout"] = {{"descriptor", layout.descriptor()}, {"hash", layout.hash()}, {"dimension", layout.dimension()}};
  if (const auto* tree = std::get_if<DecisionTree>(&result.model.model)) {
    r["classifier"] = {{"kind", "tree"},
                       {"nodes", tree->nodes().size()},
                       {"leaves", tree->leaf_count()},
                       {"depth", tree->depth()}};
  } else {
    r["classifier"] = {{"kind", "nb"}};
  }
  r["metrics"] = to_json(result.metrics);

  if (!cfg.output_dir.empty()) {
    detail::stage("write", [&] {
      const std::filesystem::path out(cfg.output_dir);
      std::filesystem::create_directories(out);
      detail::write_file(out / "report.json", r.dump(2) + "\n");
      detail::write_file(out / "config.json", to_json(cfg).dump(2) + "\n");
      detail::write_file(out / "report.txt",
                         render_report(result.metrics, cfg.name.empty() ? std::string("experiment") : cfg.name));
      save_model(result.model, (out / "model.json").string());
      std::ostringstream preds;
      for (std::size_t i = 0; i < test.size(); ++i) {
        nlohmann::ordered_json jp{{"id", test[i].id},
                                  {"label", to_string(test[i].label)},
                                  {"predicted", to_string(result.test_predictions[i])}};
        preds << jp.dump() << '\n';
      }
      detail::write_file(out / "predictions.jsonl", preds.str());
    });
  }
  return result;
}

/// Labels new instances with a saved model. Providers come from the model's
/// pipeline unless `providers` overrides them.
inline std::vector<Polarity> predict_with_model(const ModelFile& mf, const Dataset& d,
                                                const std::optional<std::vector<ProviderSpec>>& providers = {}) {
  const FeaturePipeline pipeline = detail::stage("pipeline", [&] {
    std::vector<ProviderSpec> specs;
    if (providers) {
      specs = *providers;
    } else {
      for (const auto& jp : mf.pipeline.at("providers")) specs.push_back(provider_spec_from_json(jp));
    }
    return FeaturePipeline::from_json(mf.pipeline, make_providers(specs));
  });
  const FeatureMatrix x = detail::stage("features", [&] {
    const auto layout = pipeline.layout();
    const auto expected = model_dimension(mf.model);
    if (layout.dimension() != expected) {
      throw InvalidArgument("dimension mismatch: model expects " + std::to_string(expected) +
                            " features, pipeline produces " + std::to_string(layout.dimension()) + " (" +
                            layout.descriptor() + ")");
    }
    if (!mf.layout_hash.empty() && layout.hash() != mf.layout_hash) {
      throw InvalidArgument("feature layout " + layout.descriptor() + " does not match the model's layout " +
                            mf.layout_descriptor);
    }
    return pipeline.transform(d);
  });
  return detail::stage("predict", [&] { return predict_batch(mf.model, x); });
}

// ---------------------------------------------------------------------------
// Comparison table over saved reports.

struct ComparisonRow {
  std::string label;
  std::string classifier;
  std::string features;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
};

inline ComparisonRow comparison_row(const nlohmann::json& report, const std::string& fallback_label) {
  ComparisonRow row;
  row.label = report.value("name", "");
  if (row.label.empty()) row.label = fallback_label;
  row.classifier = report.at("classifier").value("kind", "?");
  row.features = detail::features_label(report.at("config").at("features"));
  const auto& m = report.at("metrics");
  row.accuracy = m.at("accuracy").get<double>();
  row.macro_f1 = m.at("macro").at("f1").get<double>();
  row.weighted_f1 = m.at("weighted").at("f1").get<double>();
  return row;
}

/// Rows sorted by accuracy, highest first; ties keep input order.
inline std::string render_comparison(std::vector<ComparisonRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.accuracy > b.accuracy; });
  std::size_t w_label = 8, w_clf = 10, w_feat = 8;
  for (const auto& r : rows) {
    w_label = std::max(w_label, r.label.size());
    w_clf = std::max(w_clf, r.classifier.size());
    w_feat = std::max(w_feat, r.features.size());
  }
  std::ostringstream o;
  o << std::left << std::setw(static_cast<int>(w_label + 2)) << "Approach" << std::setw(static_cast<int>(w_clf + 2))
    << "Classifier" << std::setw(static_cast<int>(w_feat + 2)) << "Features"
    << "Accuracy (%)  Macro-F1 (%)  Weighted-F1 (%)\n";
  o << std::fixed << std::setprecision(2);
  for (const auto& r : rows) {
    o << std::left << std::setw(static_cast<int>(w_label + 2)) << r.label << std::setw(static_cast<int>(w_clf + 2))
      << r.classifier << std::setw(static_cast<int>(w_feat + 2)) << r.features << std::right << std::setw(12)
      << 100.0 * r.accuracy << "  " << std::setw(12) << 100.0 * r.macro_f1 << "  " << std::setw(15)
      << 100.0 * r.weighted_f1 << '\n';
  }
  return o.str();
}

}  // namespace pabsa
