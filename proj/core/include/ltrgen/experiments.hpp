#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ltrgen/bounds.hpp"
#include "ltrgen/losses.hpp"
#include "ltrgen/trainers.hpp"
#include "ltrgen/types.hpp"

namespace ltrgen {

enum class TrainerKind { Rerm, Ogd, Erm };

std::string to_string(TrainerKind kind);
TrainerKind trainer_kind_from_string(const std::string& text);

/// Mixes (base, a, b) into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

/// One trained model on one sweep point.
struct ExperimentResult {
  std::string sweep_variable;
  double sweep_value = 0.0;
  std::size_t trial = 0;
  std::string trainer;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double gap = 0.0;  // test_loss - train_loss
  /// gap minus the same difference for a reference model fit on independent
  /// data; same expectation as gap, much lower variance.
  std::optional<double> centered_gap;
  /// Held-out loss of the model minus the held-out loss of the reference minimizer.
  std::optional<double> excess;
  BoundReport bounds;
  double ndcg_at_1 = 0.0;
  std::uint64_t seed = 0;

  static std::vector<std::string> header();
  std::vector<std::string> cells() const;
};

void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& rows);

/// Mean and a percentile-bootstrap interval.
struct Interval {
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

struct GapVsMConfig {
  SurrogateLoss loss = SurrogateLoss::listnet();
  TrainerKind trainer = TrainerKind::Rerm;
  std::vector<std::size_t> m_values{5, 25, 125};
  std::size_t n = 200;
  std::size_t d = 10;
  std::size_t trials = 20;
  /// Held-out and reference set sizes as a multiple of n.
  std::size_t test_factor = 25;
  ClassSpec spec;
  /// Graded labels from a hidden direction with this resampling probability.
  double flip_prob = 0.2;
  int y_max = 4;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::size_t bootstrap = 2000;
  double confidence = 0.90;
  /// Also fit a reference minimizer on the held-out set to report excess risk.
  bool compute_excess = true;

  void validate() const;
};

struct GapVsMSummary {
  std::vector<std::size_t> m_values;
  std::vector<double> mean_gap;
  std::vector<double> mean_centered_gap;
  std::vector<double> chapelle;  // chapelle_complexity column per m
  /// Mean centered gap at the largest m over the smallest m, with bootstrap CI.
  Interval gap_ratio;
  /// Same ratio from the raw gaps (noisy).
  double raw_gap_ratio = 0.0;
  double chapelle_ratio = 0.0;
  std::size_t rerm_violations = 0;  // RERM runs whose excess exceeds the rerm bound
  std::size_t rerm_runs = 0;
};

struct GapVsMOutput {
  std::vector<ExperimentResult> rows;
  GapVsMSummary summary;
};

GapVsMOutput run_gap_vs_m(const GapVsMConfig& config);

enum class RateMode { Realizable, Noisy };

std::string to_string(RateMode mode);
RateMode rate_mode_from_string(const std::string& text);

struct RateVsNConfig {
  RateMode mode = RateMode::Realizable;
  std::vector<std::size_t> n_values{100, 400, 1600, 6400};
  std::size_t trials = 10;
  std::size_t m = 10;
  std::size_t d = 20;
  ClassSpec spec{NormKind::L2, 3.0, 1.0};
  /// Label noise standard deviation in noisy mode.
  double noise_std = 1.0;
  /// Queries in the evaluation pool that stands in for the distribution.
  std::size_t pool_size = 20000;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::size_t bootstrap = 2000;
  double confidence = 0.90;
  /// Also run RERM on every training set and check it against its bound.
  bool run_rerm = true;

  void validate() const;
};

struct RateVsNSummary {
  std::vector<std::size_t> n_values;
  std::vector<double> mean_excess;
  /// Least-squares slope of log mean excess against log n.
  Interval slope;
  double l_star = 0.0;
  std::size_t rerm_violations = 0;
  std::size_t rerm_runs = 0;
};

struct RateVsNOutput {
  std::vector<ExperimentResult> rows;
  RateVsNSummary summary;
};

/// Real-valued labels y = X w_true (+ noise); the smooth loss is ListNet
/// measured relative to its per-query entropy floor. OGD uses the smooth step
/// with L* estimated by a RERM pilot run on the same training set.
RateVsNOutput run_rate_vs_n(const RateVsNConfig& config);

/// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ltrgen
