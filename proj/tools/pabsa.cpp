// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pabsa/pabsa.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::uint64_t seed = 42;
  std::string out;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pabsa::Error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw pabsa::Error(path + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw pabsa::Error("cannot write " + p.string());
  out << s;
}

pabsa::ProviderSpec file_spec(const std::string& path) {
  pabsa::ProviderSpec spec;
  spec.kind = "file";
  spec.path = path;
  return spec;
}

fs::path output_dir(const CommonOptions& common) {
  fs::path dir = common.out.empty() ? fs::path(".") : fs::path(common.out);
  fs::create_directories(dir);
  return dir;
}

// --- stats -----------------------------------------------------------------

int cmd_stats(const std::string& dataset) {
  const auto d = pabsa::load_dataset(dataset);
  std::cout << pabsa::render_stats(pabsa::dataset_stats(d));
  return 0;
}

// --- split -----------------------------------------------------------------

struct SplitOptions {
  std::string dataset;
  double ratio = 0.8;
  std::string granularity = "target";
  CLI::Option* ratio_opt = nullptr;
  CLI::Option* granularity_opt = nullptr;
};

int cmd_split(const SplitOptions& o, const CommonOptions& common) {
  pabsa::ExperimentConfig file_cfg;
  if (!common.config.empty()) file_cfg = pabsa::load_config(common.config);
  double ratio = file_cfg.train_ratio;
  auto granularity = file_cfg.granularity;
  std::uint64_t seed = file_cfg.seed;
  if (o.ratio_opt->count()) ratio = o.ratio;
  if (o.granularity_opt->count()) {
    const auto g = pabsa::parse_granularity(o.granularity);
    if (!g) throw pabsa::InvalidArgument("unknown granularity: " + o.granularity);
    granularity = *g;
  }
  if (common.seed_opt->count()) seed = common.seed;
  const auto d = pabsa::load_dataset(o.dataset);
  const auto parts = pabsa::split(d, ratio, seed, granularity);
  const auto dir = output_dir(common);
  pabsa::save_dataset(parts.train, (dir / "train.jsonl").string());
  pabsa::save_dataset(parts.test, (dir / "test.jsonl").string());
  std::cout << "train\t" << parts.train.size() << "\ntest\t" << parts.test.size() << '\n';
  return 0;
}

// --- augment ---------------------------------------------------------------

struct AugmentOptions {
  std::string dataset;
  std::string synonyms;
  std::string entities;
  double synonym_rate = 0.1;
  double entity_rate = 0.1;
  std::size_t copies = 1;
  bool no_protect = false;
  CLI::Option* synonyms_opt = nullptr;
  CLI::Option* entities_opt = nullptr;
  CLI::Option* synonym_rate_opt = nullptr;
  CLI::Option* entity_rate_opt = nullptr;
  CLI::Option* copies_opt = nullptr;
  CLI::Option* no_protect_opt = nullptr;
};

int cmd_augment(const AugmentOptions& o, const CommonOptions& common) {
  // defaults < config file < flags
  pabsa::ExperimentConfig file_cfg;
  if (!common.config.empty()) file_cfg = pabsa::load_config(common.config);
  pabsa::AugmentConfig cfg = file_cfg.augment_cfg;
  cfg.seed = common.config.empty() ? 42 : file_cfg.seed;
  std::string synonyms = file_cfg.synonyms;
  std::string entities = file_cfg.entities;
  if (o.synonyms_opt->count()) synonyms = o.synonyms;
  if (o.entities_opt->count()) entities = o.entities;
  if (o.synonym_rate_opt->count()) cfg.synonym_rate = o.synonym_rate;
  if (o.entity_rate_opt->count()) cfg.entity_rate = o.entity_rate;
  if (o.copies_opt->count()) cfg.copies = o.copies;
  if (o.no_protect_opt->count()) cfg.protect_aspect = false;
  if (common.seed_opt->count()) cfg.seed = common.seed;
  cfg.validate();

  const auto lex = synonyms.empty() ? pabsa::SynonymLexicon{} : pabsa::SynonymLexicon::load(synonyms);
  const auto ents = entities.empty() ? pabsa::EntityDictionary{} : pabsa::EntityDictionary::load(entities);
  const auto d = pabsa::load_dataset(o.dataset);
  const auto result = pabsa::augment_dataset(d, lex, ents, cfg);

  const auto dir = output_dir(common);
  pabsa::save_dataset(result.dataset, (dir / "augmented.jsonl").string());
  std::ofstream audit(dir / "audit.jsonl", std::ios::binary);
  if (!audit) throw pabsa::Error("cannot write " + (dir / "audit.jsonl").string());
  pabsa::write_audit(audit, result.audits);
  std::size_t n_repl = 0;
  for (const auto& a : result.audits) n_repl += a.replacements.size();
  std::cout << "instances\t" << result.dataset.size() << "\nreplacements\t" << n_repl << '\n';
  return 0;
}

// --- run -------------------------------------------------------------------

struct RunOptions {
  std::string dataset;
  std::string name;
  std::string classifier;
  std::vector<std::string> provider_caches;
  std::size_t max_depth = 0;
  bool no_polarity = false;
  bool no_aspect_bag = false;
  bool no_text_bag = false;
  CLI::Option* max_depth_opt = nullptr;
};

int cmd_run(const RunOptions& o, const CommonOptions& common) {
  pabsa::ExperimentConfig cfg;
  if (!common.config.empty()) cfg = pabsa::load_config(common.config);
  if (!o.dataset.empty()) cfg.dataset = o.dataset;
  if (!o.name.empty()) cfg.name = o.name;
  if (!o.classifier.empty()) {
    if (o.classifier == "tree") {
      cfg.classifier = pabsa::ClassifierKind::tree;
    } else if (o.classifier == "nb") {
      cfg.classifier = pabsa::ClassifierKind::naive_bayes;
    } else {
      throw pabsa::InvalidArgument("unknown classifier: " + o.classifier);
    }
  }
  for (const auto& p : o.provider_caches) cfg.providers.push_back(file_spec(p));
  if (o.max_depth_opt->count()) cfg.tree.max_depth = o.max_depth;
  if (o.no_polarity) cfg.polarity = false;
  if (o.no_aspect_bag) cfg.aspect_bag = false;
  if (o.no_text_bag) cfg.text_bag = false;
  if (common.seed_opt->count()) cfg.seed = common.seed;
  if (common.out_opt->count()) cfg.output_dir = common.out;
  if (cfg.output_dir.empty()) cfg.output_dir = "pabsa-run";

  const auto result = pabsa::run_experiment(cfg);
  if (!common.config.empty()) {
    fs::copy_file(common.config, fs::path(cfg.output_dir) / "config.input.json", fs::copy_options::overwrite_existing);
  }
  std::cout << pabsa::render_report(result.metrics, cfg.name.empty() ? "experiment" : cfg.name);
  std::cout << "\nreport written to " << (fs::path(cfg.output_dir) / "report.json").string() << '\n';
  return 0;
}

// --- compare ---------------------------------------------------------------

int cmd_compare(const std::vector<std::string>& reports) {
  std::vector<pabsa::ComparisonRow> rows;
  for (const auto& path : reports) {
    const auto j = read_json_file(path);
    try {
      rows.push_back(pabsa::comparison_row(j, fs::path(path).parent_path().filename().string()));
    } catch (const nlohmann::json::exception& e) {
      throw pabsa::Error(path + ": not a report file (" + e.what() + ")");
    }
  }
  std::cout << pabsa::render_comparison(std::move(rows));
  return 0;
}

// --- predict ---------------------------------------------------------------

struct PredictOptions {
  std::string model;
  std::string input;
  std::vector<std::string> provider_caches;
};

int cmd_predict(const PredictOptions& o, const CommonOptions& common) {
  const auto model = pabsa::detail::stage("load-model", [&] { return pabsa::load_model(o.model); });
  const auto d = pabsa::detail::stage("load", [&] { return pabsa::load_dataset(o.input); });
  std::optional<std::vector<pabsa::ProviderSpec>> providers;
  if (!o.provider_caches.empty()) {
    providers.emplace();
    for (const auto& p : o.provider_caches) providers->push_back(file_spec(p));
  }
  const auto labels = pabsa::predict_with_model(model, d, providers);
  std::ostringstream out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    nlohmann::ordered_json j{{"id", d[i].id}, {"predicted", pabsa::to_string(labels[i])}};
    out << j.dump() << '\n';
  }
  if (common.out.empty()) {
    std::cout << out.str();
  } else {
    write_text(output_dir(common) / "predictions.jsonl", out.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid aspect-based sentiment analysis toolkit for Persian"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOptions common;
  app.add_option("--config", common.config, "Experiment config (JSON)");
  common.seed_opt = app.add_option("--seed", common.seed, "Random seed")->capture_default_str();
  common.out_opt = app.add_option("--out", common.out, "Output directory");

  std::string stats_dataset;
  auto* stats = app.add_subcommand("stats", "Print corpus statistics");
  stats->add_option("dataset", stats_dataset, "Dataset file (JSON lines)")->required();

  SplitOptions split_opts;
  auto* split = app.add_subcommand("split", "Seeded train/test split");
  split->add_option("dataset", split_opts.dataset, "Dataset file")->required();
  split_opts.ratio_opt = split->add_option("--ratio", split_opts.ratio, "Training fraction")->capture_default_str();
  split_opts.granularity_opt =
      split->add_option("--granularity", split_opts.granularity, "target | comment")->capture_default_str();

  AugmentOptions aug;
  auto* augment = app.add_subcommand("augment", "Synonym and entity replacement augmentation");
  augment->add_option("dataset", aug.dataset, "Dataset file")->required();
  aug.synonyms_opt = augment->add_option("--synonyms", aug.synonyms, "Synonym lexicon (TSV)");
  aug.entities_opt = augment->add_option("--entities", aug.entities, "Entity dictionary (TSV)");
  aug.synonym_rate_opt = augment->add_option("--synonym-rate", aug.synonym_rate, "Per-token replacement probability");
  aug.entity_rate_opt = augment->add_option("--entity-rate", aug.entity_rate, "Per-entity replacement probability");
  aug.copies_opt = augment->add_option("--copies", aug.copies, "Augmented copies per instance");
  aug.no_protect_opt = augment->add_flag("--no-protect-aspect", aug.no_protect, "Allow edits inside the aspect span");

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run an experiment and write its report");
  run->add_option("--dataset", run_opts.dataset, "Dataset file (overrides config)");
  run->add_option("--name", run_opts.name, "Experiment name");
  run->add_option("--classifier", run_opts.classifier, "tree | nb");
  run->add_option("--provider-cache", run_opts.provider_caches, "Add a file-backed polarity provider");
  run_opts.max_depth_opt = run->add_option("--max-depth", run_opts.max_depth, "Tree depth limit");
  run->add_flag("--no-polarity", run_opts.no_polarity, "Drop the polarity block");
  run->add_flag("--no-aspect-bag", run_opts.no_aspect_bag, "Drop the aspect TF-IDF block");
  run->add_flag("--no-text-bag", run_opts.no_text_bag, "Drop the text TF-IDF block");

  std::vector<std::string> reports;
  auto* compare = app.add_subcommand("compare", "Comparison table over report files");
  compare->add_option("reports", reports, "report.json files")->required();

  PredictOptions pred;
  auto* predict = app.add_subcommand("predict", "Label instances with a saved model");
  predict->add_option("--model", pred.model, "model.json written by run")->required();
  predict->add_option("input", pred.input, "Dataset file to label")->required();
  predict->add_option("--provider-cache", pred.provider_caches, "Polarity caches (override the model's)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats) return cmd_stats(stats_dataset);
    if (*split) return cmd_split(split_opts, common);
    if (*augment) return cmd_augment(aug, common);
    if (*run) return cmd_run(run_opts, common);
    if (*compare) return cmd_compare(reports);
    if (*predict) return cmd_predict(pred, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
