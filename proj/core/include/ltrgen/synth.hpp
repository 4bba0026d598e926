#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "ltrgen/types.hpp"

namespace ltrgen {

enum class RowNorm { L2, Linf };

/// Grades are buckets of <x, w_true> cut at fixed quantiles, y_max + 1 equally
/// populated buckets.
struct RealizableLabels {
  Vector w_true;
  int y_max = 4;
};

/// Realizable grades, each resampled uniformly in {0..y_max} with probability flip_prob.
struct NoisyLabels {
  Vector w_true;
  double flip_prob = 0.1;
  int y_max = 4;
};

/// Grades uniform in {0..y_max}, independent of the features.
struct RandomLabels {
  int y_max = 4;
};

/// Real-valued labels y_j = scale <x_j, w_true> + noise_std * N(0, 1).
struct ScoreLabels {
  Vector w_true;
  double noise_std = 0.0;
  double scale = 1.0;
};

using LabelMode = std::variant<RealizableLabels, NoisyLabels, RandomLabels, ScoreLabels>;

struct SynthConfig {
  std::size_t m = 10;
  std::size_t d = 5;
  std::size_t n = 100;
  double input_radius = 1.0;
  RowNorm row_norm = RowNorm::L2;
  LabelMode label_mode = RandomLabels{};
  std::uint64_t seed = 0;
  /// Seed of the quantile calibration draw; shared by train and test sets so
  /// both come from the same distribution.
  std::uint64_t calibration_seed = 0x5eedULL;

  void validate() const;
};

/// Quantile cut points (ascending, y_max of them) used by the realizable and noisy modes.
std::vector<double> grade_thresholds(const SynthConfig& config);

/// Deterministic in (config, seed).
Dataset generate(const SynthConfig& config);

/// Query-level shuffle then split; train gets round(fraction * n) queries.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

}  // namespace ltrgen
