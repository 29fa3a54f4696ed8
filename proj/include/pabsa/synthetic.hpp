// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pabsa/corpus.hpp"
#include "pabsa/features.hpp"
#include "pabsa/random.hpp"
#include "pabsa/utf8.hpp"

namespace pabsa::synthetic {

/// Knobs of the generated benchmark. The defaults give a corpus where the
/// wording only weakly predicts the label while the polarity scores are
/// strongly informative.
struct FixtureSpec {
  std::size_t n_instances = 375;
  std::uint64_t seed = 42;
  double cue_fidelity = 0.55;   // P(cue word comes from the true class)
  double score_noise = 0.01;    // P(polarity argmax points to a wrong class)
  std::string provider_id = "mbert-synthetic";
};

struct Fixture {
  Dataset dataset;
  std::vector<PolarityScores> scores;  // aligned with dataset
};

namespace detail {

inline const std::vector<std::string>& aspects() {
  static const std::vector<std::string> v = {"گوشی", "باتری", "دوربین", "صفحه‌نمایش", "قیمت", "ارسال", "کیفیت", "طراحی"};
  return v;
}

inline const std::array<std::vector<std::string>, 3>& cues() {
  static const std::array<std::vector<std::string>, 3> v = {{
      {"عالی", "خوب", "راضی", "زیبا", "سریع"},
      {"معمولی", "متوسط", "قابل‌قبول", "عادی"},
      {"بد", "ضعیف", "خراب", "کند", "گران"},
  }};
  return v;
}

inline const std::vector<std::string>& fillers() {
  static const std::vector<std::string> v = {
      "این", "من", "از", "خرید", "کردم", "برای", "بسیار", "واقعا", "هم", "بود", "است", "داشت", "یک",
      "روز", "بعد", "ماه", "استفاده", "محصول", "فروشنده", "دیجی‌کالا", "نسبت", "به", "آن", "که", "با",
      "دارد", "همه", "چیز", "کمی", "خیلی"};
  return v;
}

template <typename T>
const T& pick(const std::vector<T>& v, SplitMix64& rng) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

inline double round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace detail

inline Fixture make_fixture(const FixtureSpec& spec = {}) {
  SplitMix64 rng(spec.seed);
  std::vector<AspectInstance> instances;
  std::vector<PolarityScores> scores;
  for (std::size_t i = 0; i < spec.n_instances; ++i) {
    const auto label = static_cast<Polarity>(rng.below(3));
    const std::size_t c = index_of(label);

    std::size_t cue_class = c;
    if (rng.uniform() >= spec.cue_fidelity) cue_class = (c + 1 + rng.below(2)) % 3;

    std::string text;
    auto add = [&](const std::string& w) {
      if (!text.empty()) text += ' ';
      text += w;
    };
    const std::size_t before = 2 + rng.below(5);
    for (std::size_t k = 0; k < before; ++k) add(detail::pick(detail::fillers(), rng));
    const auto& aspect = detail::pick(detail::aspects(), rng);
    const std::size_t aspect_start = text.empty() ? 0 : utf8::length(text) + 1;
    add(aspect);
    add(detail::pick(detail::cues()[cue_class], rng));
    const std::size_t after = 1 + rng.below(5);
    for (std::size_t k = 0; k < after; ++k) add(detail::pick(detail::fillers(), rng));

    AspectInstance inst;
    inst.id = "syn-" + std::to_string(i + 1);
    inst.text = text;
    inst.aspect_term = aspect;
    inst.aspect_start = aspect_start;
    inst.aspect_end = aspect_start + utf8::length(aspect);
    inst.label = label;
    instances.push_back(std::move(inst));

    std::size_t top = c;
    if (rng.uniform() < spec.score_noise) top = (c + 1 + rng.below(2)) % 3;
    const double p_top = detail::round4(0.55 + 0.4 * rng.uniform());
    const double share = rng.uniform();
    const double p_a = detail::round4((1.0 - p_top) * share);
    PolarityScores s{spec.provider_id, {}};
    s.scores[top] = p_top;
    s.scores[(top + 1) % 3] = p_a;
    s.scores[(top + 2) % 3] = detail::round4(1.0 - p_top - p_a);
    scores.push_back(s);
  }
  return {Dataset(std::move(instances)), std::move(scores)};
}

}  // namespace pabsa::synthetic
