// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pabsa/pabsa.hpp"

namespace pabsa::test {

inline std::string source_path(const std::string& rel) { return std::string(PABSA_SOURCE_DIR) + "/" + rel; }

/// Instance whose aspect is the first occurrence of `term` in `text`.
inline AspectInstance instance(std::string id, std::string text, std::string term,
                               Polarity label = Polarity::positive) {
  const auto cps = utf8::decode(text);
  const auto pos = cps.find(utf8::decode(term));
  if (pos == std::u32string::npos) throw std::logic_error("term not in text");
  AspectInstance inst;
  inst.id = std::move(id);
  inst.text = std::move(text);
  inst.aspect_term = std::move(term);
  inst.aspect_start = pos;
  inst.aspect_end = pos + utf8::length(inst.aspect_term);
  inst.label = label;
  return inst;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("pabsa-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

/// Runs the pabsa executable with the given arguments.
inline CliResult run_cli(const std::vector<std::string>& args, const std::string& env = "") {
  TempDir tmp;
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += shell_quote(PABSA_CLI_PATH);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " >" + shell_quote(tmp / "out") + " 2>" + shell_quote(tmp / "err");
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(tmp / "out");
  r.err = read_file(tmp / "err");
  return r;
}

inline std::vector<Polarity> labels_of(const Dataset& d) {
  std::vector<Polarity> y;
  for (const auto& inst : d) y.push_back(inst.label);
  return y;
}

/// Random dataset of single-word-aspect instances over a small alphabet so
/// texts repeat (several targets per comment).
inline Dataset random_dataset(SplitMix64& rng, std::size_t n) {
  static const std::vector<std::string> words = {"alpha", "beta", "gamma", "دوربین", "باتری", "قیمت", "خوب", "بد"};
  std::vector<AspectInstance> out;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    if (!texts.empty() && rng.below(3) == 0) {
      text = texts[rng.below(texts.size())];
    } else {
      const std::size_t len = 1 + rng.below(6);
      for (std::size_t k = 0; k < len; ++k) text += (k ? " " : "") + words[rng.below(words.size())];
      texts.push_back(text);
    }
    auto toks = preprocess::tokenize(text);
    const auto& t = toks[rng.below(toks.size())];
    AspectInstance inst{"i" + std::to_string(i), text, t.surface, t.start, t.end,
                        static_cast<Polarity>(rng.below(3))};
    out.push_back(std::move(inst));
  }
  return Dataset(std::move(out));
}

}  // namespace pabsa::test
