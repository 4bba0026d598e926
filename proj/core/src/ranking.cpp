#include "ltrgen/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ltrgen {

Vector score(const ScoringParams& params, const Matrix& features) {
  if (params.w.size() != features.cols()) {
    throw ShapeError("score: weight length " + std::to_string(params.w.size()) +
                     " does not match feature dimension " + std::to_string(features.cols()));
  }
  Vector s = features.multiply(params.w);
  if (params.v) {
    if (params.v->size() != features.cols()) {
      throw ShapeError("score: v length does not match feature dimension");
    }
    // 1^T X v: the same shift for every document.
    double shift = 0.0;
    for (std::size_t j = 0; j < features.rows(); ++j) shift += dot(features.row(j), *params.v);
    for (double& x : s) x += shift;
  }
  return s;
}

Vector score(const ScoringParams& params, const QueryInstance& instance) {
  return score(params, instance.features());
}

bool is_permutation(std::span<const std::size_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Permutation inverse(std::span<const std::size_t> perm) {
  if (!is_permutation(perm)) throw std::invalid_argument("inverse: not a permutation");
  Permutation inv(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) inv[perm[j]] = j;
  return inv;
}

Vector permute(std::span<const std::size_t> perm, std::span<const double> values) {
  if (perm.size() != values.size()) {
    throw ShapeError("permute: degree " + std::to_string(perm.size()) + " vs length " +
                     std::to_string(values.size()));
  }
  if (!is_permutation(perm)) throw std::invalid_argument("permute: not a permutation");
  Vector out(values.size());
  for (std::size_t j = 0; j < perm.size(); ++j) out[j] = values[perm[j]];
  return out;
}

Matrix permute_rows(std::span<const std::size_t> perm, const Matrix& x) {
  if (perm.size() != x.rows()) {
    throw ShapeError("apply_permutation: degree " + std::to_string(perm.size()) + " vs m = " +
                     std::to_string(x.rows()));
  }
  if (!is_permutation(perm)) throw std::invalid_argument("apply_permutation: not a permutation");
  Matrix out(x.rows(), x.cols());
  for (std::size_t j = 0; j < perm.size(); ++j) {
    auto src = x.row(perm[j]);
    std::copy(src.begin(), src.end(), out.row(j).begin());
  }
  return out;
}

QueryInstance apply_permutation(std::span<const std::size_t> perm, const QueryInstance& instance) {
  return QueryInstance(permute_rows(perm, instance.features()), permute(perm, instance.labels()));
}

InvarianceCheck check_invariance(const MatrixScorer& scorer, const Matrix& features,
                                 std::span<const std::size_t> perm) {
  const Vector base = scorer(features);
  const Vector lhs = permute(perm, base);
  const Vector rhs = scorer(permute_rows(perm, features));
  if (lhs.size() != rhs.size()) throw ShapeError("check_invariance: scorer output length changed");
  double dev = 0.0;
  for (std::size_t j = 0; j < lhs.size(); ++j) dev = std::max(dev, std::abs(lhs[j] - rhs[j]));
  return {dev <= 1e-12 * (1.0 + norm_linf(base)), dev};
}

InvarianceCheck check_invariance(const ScoringParams& params, const QueryInstance& instance,
                                 std::span<const std::size_t> perm) {
  return check_invariance([&](const Matrix& x) { return score(params, x); },
                          instance.features(), perm);
}

FullLinearMap::FullLinearMap(std::vector<Matrix> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ShapeError("FullLinearMap: need at least one output");
  for (const auto& w : weights_) {
    if (w.rows() != weights_.size() || w.cols() != weights_.front().cols()) {
      throw ShapeError("FullLinearMap: each W_i must be m x d");
    }
  }
}

Vector FullLinearMap::operator()(const Matrix& x) const {
  if (x.rows() != weights_.size() || x.cols() != weights_.front().cols()) {
    throw ShapeError("FullLinearMap: input shape mismatch");
  }
  Vector out(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) out[i] = dot(x.data(), weights_[i].data());
  return out;
}

Permutation rank_from_scores(std::span<const double> scores) {
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument("rank_from_scores: non-finite score");
  }
  Permutation order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

namespace {

double gain(double grade) { return std::exp2(grade) - 1.0; }
double discount(std::size_t rank1) { return 1.0 / std::log2(1.0 + static_cast<double>(rank1)); }

}  // namespace

double ndcg_at_k(std::span<const double> scores, std::span<const double> labels, std::size_t k) {
  if (scores.size() != labels.size()) throw ShapeError("ndcg_at_k: length mismatch");
  if (k == 0) throw std::invalid_argument("ndcg_at_k: k must be positive");
  if (k > scores.size()) {
    throw std::invalid_argument("ndcg_at_k: k = " + std::to_string(k) + " exceeds m = " +
                                std::to_string(scores.size()));
  }
  const Permutation order = rank_from_scores(scores);
  Vector ideal(labels.begin(), labels.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double dcg = 0.0;
  double idcg = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    dcg += gain(labels[order[r]]) * discount(r + 1);
    idcg += gain(ideal[r]) * discount(r + 1);
  }
  if (idcg <= 0.0) return 1.0;
  return dcg / idcg;
}

double input_radius(const Matrix& features, NormKind kind) {
  double r = 0.0;
  for (std::size_t j = 0; j < features.rows(); ++j) {
    r = std::max(r, kind == NormKind::L2 ? norm_l2(features.row(j)) : norm_linf(features.row(j)));
  }
  return r;
}

double input_radius(const Dataset& dataset, NormKind kind) {
  double r = 0.0;
  for (const auto& q : dataset) r = std::max(r, input_radius(q.features(), kind));
  return r;
}

Vector project_l2(std::span<const double> w, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_l2: radius must be positive");
  Vector out(w.begin(), w.end());
  const double n = norm_l2(w);
  if (n <= radius) return out;
  const double scale = radius / n;
  for (double& x : out) x *= scale;
  return out;
}

Vector project_l1(std::span<const double> w, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_l1: radius must be positive");
  Vector out(w.begin(), w.end());
  if (norm_l1(w) <= radius) return out;

  // Find theta with sum_i max(|w_i| - theta, 0) = radius from the sorted magnitudes.
  Vector mag(w.size());
  std::transform(w.begin(), w.end(), mag.begin(), [](double x) { return std::abs(x); });
  std::sort(mag.begin(), mag.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    cumsum += mag[k];
    const double t = (cumsum - radius) / static_cast<double>(k + 1);
    if (k + 1 == mag.size() || mag[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (double& x : out) {
    const double a = std::max(std::abs(x) - theta, 0.0);
    x = std::copysign(a, x);
  }
  return out;
}

Vector project(std::span<const double> w, const ClassSpec& spec) {
  return spec.norm_kind == NormKind::L2 ? project_l2(w, spec.weight_radius)
                                        : project_l1(w, spec.weight_radius);
}

double weight_norm(std::span<const double> w, NormKind kind) {
  return kind == NormKind::L2 ? norm_l2(w) : norm_l1(w);
}

}  // namespace ltrgen
