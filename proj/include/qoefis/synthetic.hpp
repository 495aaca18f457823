#pragma once

// Synthetic survey generator for demos and end-to-end tests.
//
// Each participant belongs to one of four latent experience tiers. A tier
// fixes the multiset of the four high-level answers; the answers are then
// shuffled across G1..G4. The overall rating is the mean of the normalised
// answers plus Gaussian noise, clipped to [0, 100]. Low-level q_* items
// scatter by at most one point around their high-level answer.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>

#include "qoefis/dataset.hpp"
#include "qoefis/error.hpp"

namespace qoefis {

struct SyntheticConfig {
  std::size_t rows = 75;
  std::uint64_t seed = 0;
  double noise_sd = 5.0;
  double minority_share = 0.2;  // fraction of rows with app "YC"; the rest are "RR"
};

[[nodiscard]] inline Dataset generate_synthetic_survey(const SyntheticConfig& config) {
  if (config.rows == 0) throw InvalidArgument("synthetic survey needs at least one row");
  if (!(config.noise_sd >= 0.0)) throw InvalidArgument("noise_sd must be non-negative");
  if (!(config.minority_share >= 0.0 && config.minority_share <= 1.0)) {
    throw InvalidArgument("minority_share must lie in [0, 1]");
  }
  static constexpr std::array<std::array<int, 4>, 4> kTiers{{
      {1, 2, 2, 2},
      {2, 2, 3, 3},
      {3, 3, 4, 4},
      {4, 4, 4, 5},
  }};
  static constexpr std::array<const char*, 4> kLowPrefix{"q_cq", "q_hq", "q_eu", "q_ui"};
  static constexpr std::array<const char*, 4> kAges{"10-19", "20-29", "30-39", "40-49"};

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> tier_dist(0, 3);
  std::uniform_int_distribution<int> jitter(-1, 1);
  std::uniform_int_distribution<int> age_dist(0, 3);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> noise(0.0, config.noise_sd > 0.0 ? config.noise_sd : 1.0);

  const auto majority = static_cast<std::size_t>(
      std::llround((1.0 - config.minority_share) * static_cast<double>(config.rows)));
  Dataset ds;
  ds.provenance.source = "synthetic(seed=" + std::to_string(config.seed) + ")";
  for (std::size_t i = 0; i < config.rows; ++i) {
    SurveyRow row;
    char id[16];
    std::snprintf(id, sizeof id, "P%03zu", i + 1);
    row.participant_id = id;
    row.app = i < majority ? "RR" : "YC";
    row.gender = coin(rng) ? "male" : "female";
    row.age_range = kAges[static_cast<std::size_t>(age_dist(rng))];
    row.prior_ar = coin(rng);
    row.prior_gesture = coin(rng);

    auto answers = kTiers[static_cast<std::size_t>(tier_dist(rng))];
    std::shuffle(answers.begin(), answers.end(), rng);
    double mean = 0.0;
    for (std::size_t g = 0; g < 4; ++g) {
      row.likert[std::string(kHighLevelColumns[g])] = answers[g];
      mean += normalize_likert(answers[g], kLikertOptions) / 4.0;
      for (int q = 1; q <= 2; ++q) {
        row.likert[std::string(kLowPrefix[g]) + std::to_string(q)] = std::clamp(answers[g] + jitter(rng), 1, 5);
      }
    }
    const double eps = config.noise_sd > 0.0 ? noise(rng) : 0.0;
    row.overall = std::clamp(mean + eps, 0.0, 100.0);
    ds.rows.push_back(std::move(row));
  }
  ds.provenance.row_count = ds.rows.size();
  return ds;
}

}  // namespace qoefis
