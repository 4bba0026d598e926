#include "ltrgen/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ltrgen {

namespace {

constexpr std::size_t kCalibrationDraws = 100000;

const Vector* weights_of(const LabelMode& mode) {
  if (const auto* r = std::get_if<RealizableLabels>(&mode)) return &r->w_true;
  if (const auto* r = std::get_if<NoisyLabels>(&mode)) return &r->w_true;
  if (const auto* r = std::get_if<ScoreLabels>(&mode)) return &r->w_true;
  return nullptr;
}

int y_max_of(const LabelMode& mode) {
  if (const auto* r = std::get_if<RealizableLabels>(&mode)) return r->y_max;
  if (const auto* r = std::get_if<NoisyLabels>(&mode)) return r->y_max;
  if (const auto* r = std::get_if<RandomLabels>(&mode)) return r->y_max;
  return 0;
}

void draw_row(std::mt19937_64& rng, RowNorm norm, double radius, std::span<double> row) {
  if (norm == RowNorm::L2) {
    std::normal_distribution<double> normal(0.0, 1.0);
    double sq = 0.0;
    do {
      sq = 0.0;
      for (double& x : row) {
        x = normal(rng);
        sq += x * x;
      }
    } while (sq == 0.0);
    const double scale = radius / std::sqrt(sq);
    for (double& x : row) x *= scale;
  } else {
    // Uniform on the cube surface: pick a face, then a uniform point on it.
    std::uniform_real_distribution<double> unit(-radius, radius);
    for (double& x : row) x = unit(rng);
    std::uniform_int_distribution<std::size_t> face(0, 2 * row.size() - 1);
    const std::size_t f = face(rng);
    row[f / 2] = (f % 2 == 0) ? radius : -radius;
  }
}

int bucket(double score, const std::vector<double>& thresholds) {
  return static_cast<int>(std::upper_bound(thresholds.begin(), thresholds.end(), score) -
                          thresholds.begin());
}

}  // namespace

void SynthConfig::validate() const {
  if (m < 1 || d < 1 || n < 1) throw std::invalid_argument("SynthConfig: m, d, n must be >= 1");
  if (!(input_radius > 0.0) || !std::isfinite(input_radius)) {
    throw std::invalid_argument("SynthConfig: input_radius must be positive");
  }
  if (const Vector* w = weights_of(label_mode); w && w->size() != d) {
    throw ShapeError("SynthConfig: w_true has length " + std::to_string(w->size()) + ", expected d = " +
                     std::to_string(d));
  }
  if (y_max_of(label_mode) < 0) throw std::invalid_argument("SynthConfig: y_max must be >= 0");
  if (const auto* noisy = std::get_if<NoisyLabels>(&label_mode)) {
    if (!(noisy->flip_prob >= 0.0 && noisy->flip_prob <= 1.0)) {
      throw std::invalid_argument("SynthConfig: flip_prob must lie in [0, 1]");
    }
  }
  if (const auto* sc = std::get_if<ScoreLabels>(&label_mode)) {
    if (!(sc->noise_std >= 0.0)) throw std::invalid_argument("SynthConfig: noise_std must be >= 0");
  }
}

std::vector<double> grade_thresholds(const SynthConfig& config) {
  config.validate();
  const Vector* w = weights_of(config.label_mode);
  const int y_max = y_max_of(config.label_mode);
  if (!w || std::holds_alternative<ScoreLabels>(config.label_mode)) {
    throw std::invalid_argument("grade_thresholds: label mode has no grade buckets");
  }
  std::mt19937_64 rng(config.calibration_seed);
  std::vector<double> scores(kCalibrationDraws);
  Vector row(config.d);
  for (double& s : scores) {
    draw_row(rng, config.row_norm, config.input_radius, row);
    s = dot(row, *w);
  }
  std::sort(scores.begin(), scores.end());
  std::vector<double> cuts;
  const std::size_t buckets = static_cast<std::size_t>(y_max) + 1;
  for (std::size_t k = 1; k < buckets; ++k) {
    cuts.push_back(scores[k * kCalibrationDraws / buckets]);
  }
  return cuts;
}

Dataset generate(const SynthConfig& config) {
  config.validate();
  std::vector<double> thresholds;
  if (std::holds_alternative<RealizableLabels>(config.label_mode) ||
      std::holds_alternative<NoisyLabels>(config.label_mode)) {
    thresholds = grade_thresholds(config);
  }
  std::mt19937_64 rng(config.seed);
  std::vector<QueryInstance> out;
  out.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    Matrix x(config.m, config.d);
    for (std::size_t j = 0; j < config.m; ++j) draw_row(rng, config.row_norm, config.input_radius, x.row(j));
    Vector y(config.m);
    std::visit(
        [&](const auto& mode) {
          using M = std::decay_t<decltype(mode)>;
          if constexpr (std::is_same_v<M, RealizableLabels>) {
            for (std::size_t j = 0; j < config.m; ++j) y[j] = bucket(dot(x.row(j), mode.w_true), thresholds);
          } else if constexpr (std::is_same_v<M, NoisyLabels>) {
            std::bernoulli_distribution flip(mode.flip_prob);
            std::uniform_int_distribution<int> grade(0, mode.y_max);
            for (std::size_t j = 0; j < config.m; ++j) {
              y[j] = bucket(dot(x.row(j), mode.w_true), thresholds);
              if (flip(rng)) y[j] = grade(rng);
            }
          } else if constexpr (std::is_same_v<M, RandomLabels>) {
            std::uniform_int_distribution<int> grade(0, mode.y_max);
            for (double& v : y) v = grade(rng);
          } else {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (std::size_t j = 0; j < config.m; ++j) {
              y[j] = mode.scale * dot(x.row(j), mode.w_true);
              if (mode.noise_std > 0.0) y[j] += mode.noise_std * normal(rng);
            }
          }
        },
        config.label_mode);
    out.emplace_back(std::move(x), std::move(y));
  }
  return Dataset(std::move(out));
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  }
  if (data.size() < 2) throw std::invalid_argument("split: need at least 2 queries");
  const std::size_t n = data.size();
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n) {
    throw std::invalid_argument("split: fraction " + std::to_string(train_fraction) + " of " +
                                std::to_string(n) + " queries leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<QueryInstance> train;
  std::vector<QueryInstance> test;
  for (std::size_t k = 0; k < n; ++k) (k < n_train ? train : test).push_back(data[order[k]]);
  return {Dataset(std::move(train)), Dataset(std::move(test))};
}

}  // namespace ltrgen
