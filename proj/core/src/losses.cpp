#include "ltrgen/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ltrgen {

namespace {

void check_inputs(std::span<const double> s, std::span<const double> y, const char* who) {
  if (s.size() != y.size()) {
    throw ShapeError(std::string(who) + ": scores have length " + std::to_string(s.size()) +
                     " but labels have length " + std::to_string(y.size()));
  }
  if (s.empty()) throw ShapeError(std::string(who) + ": empty score vector");
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!std::isfinite(s[j]) || !std::isfinite(y[j])) {
      throw std::invalid_argument(std::string(who) + ": non-finite input");
    }
  }
}

double listnet_value(std::span<const double> s, std::span<const double> y) {
  // -sum_j P_j(y) log P_j(s) = lse(s) - <P(y), s>
  const Vector py = softmax(y);
  const double lse = log_sum_exp(s);
  double v = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) v += py[j] * (lse - s[j]);
  return std::max(v, 0.0);
}

Vector listnet_gradient(std::span<const double> s, std::span<const double> y) {
  Vector g = softmax(s);
  const Vector py = softmax(y);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] -= py[j];
  return g;
}

// Sum over pairs y_i > y_j of max(0, 1 + s_j - s_i). Pairs sitting exactly on
// the hinge count as active in the subgradient written to `grad`.
double pairwise_hinge_quadratic(std::span<const double> s, std::span<const double> y, Vector* grad) {
  double v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] > y[j] && 1.0 + s[j] - s[i] >= 0.0) {
        v += 1.0 + s[j] - s[i];
        if (grad) {
          (*grad)[j] += 1.0;
          (*grad)[i] -= 1.0;
        }
      }
    }
  }
  return v;
}

// Same quantity using per-grade sorted scores and prefix sums; O(m L log m)
// for L distinct grades.
double pairwise_hinge(std::span<const double> s, std::span<const double> y, Vector* grad) {
  const std::size_t m = s.size();
  std::vector<double> levels(y.begin(), y.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.size() * levels.size() > m) return pairwise_hinge_quadratic(s, y, grad);

  const std::size_t nl = levels.size();
  std::vector<std::vector<double>> sorted(nl);
  std::vector<std::size_t> level_of(m);
  for (std::size_t j = 0; j < m; ++j) {
    level_of[j] = static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), y[j]) - levels.begin());
    sorted[level_of[j]].push_back(s[j]);
  }
  std::vector<std::vector<double>> prefix(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    std::sort(sorted[l].begin(), sorted[l].end());
    prefix[l].assign(sorted[l].size() + 1, 0.0);
    for (std::size_t k = 0; k < sorted[l].size(); ++k) prefix[l][k + 1] = prefix[l][k] + sorted[l][k];
  }
  double v = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t li = level_of[i];
    // i as the more relevant document: partners j in lower grades with s_j >= s_i - 1.
    for (std::size_t l = 0; l < li; ++l) {
      const auto& col = sorted[l];
      const auto first = static_cast<std::size_t>(std::lower_bound(col.begin(), col.end(), s[i] - 1.0) - col.begin());
      const double count = static_cast<double>(col.size() - first);
      v += count * (1.0 - s[i]) + (prefix[l].back() - prefix[l][first]);
      if (grad) (*grad)[i] -= count;
    }
    // i as the less relevant document: partners in higher grades with s_k <= s_i + 1.
    if (grad) {
      for (std::size_t l = li + 1; l < nl; ++l) {
        const auto& col = sorted[l];
        const auto last = static_cast<std::size_t>(std::upper_bound(col.begin(), col.end(), s[i] + 1.0) - col.begin());
        (*grad)[i] += static_cast<double>(last);
      }
    }
  }
  return v;
}

}  // namespace

Vector softmax(std::span<const double> x, double temperature) {
  if (x.empty()) return {};
  const double mx = *std::max_element(x.begin(), x.end());
  Vector p(x.size());
  double z = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    p[j] = std::exp((x[j] - mx) / temperature);
    z += p[j];
  }
  for (double& v : p) v /= z;
  return p;
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = *std::max_element(x.begin(), x.end());
  double z = 0.0;
  for (double v : x) z += std::exp(v - mx);
  return mx + std::log(z);
}

double dcg_gain(double grade) { return std::exp2(grade) - 1.0; }

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::ListNet:
      return "listnet";
    case LossKind::SmoothDCG1:
      return "sdcg";
    case LossKind::RankSVM:
      return "ranksvm";
  }
  return "?";
}

LossKind loss_kind_from_string(const std::string& text) {
  if (text == "listnet") return LossKind::ListNet;
  if (text == "sdcg" || text == "smoothdcg1" || text == "smooth-dcg1") return LossKind::SmoothDCG1;
  if (text == "ranksvm") return LossKind::RankSVM;
  throw std::invalid_argument("unknown loss '" + text + "' (expected listnet, sdcg or ranksvm)");
}

SurrogateLoss::SurrogateLoss(LossKind kind, double sigma, int y_max)
    : kind_(kind), sigma_(sigma), y_max_(y_max) {
  if (kind_ == LossKind::SmoothDCG1 && !(sigma_ > 0.0 && std::isfinite(sigma_))) {
    throw std::invalid_argument("SmoothDCG1: sigma must be positive");
  }
  if (y_max_ < 0) throw std::invalid_argument("SurrogateLoss: y_max must be nonnegative");
}

SurrogateLoss SurrogateLoss::listnet() { return SurrogateLoss(LossKind::ListNet, 0.0, 4); }

SurrogateLoss SurrogateLoss::smooth_dcg1(double sigma, int y_max) {
  return SurrogateLoss(LossKind::SmoothDCG1, sigma, y_max);
}

SurrogateLoss SurrogateLoss::ranksvm() { return SurrogateLoss(LossKind::RankSVM, 0.0, 4); }

SurrogateLoss SurrogateLoss::with_y_max(int y_max) const {
  return SurrogateLoss(kind_, sigma_, y_max);
}

std::string SurrogateLoss::name() const { return to_string(kind_); }

double SurrogateLoss::value(std::span<const double> s, std::span<const double> y) const {
  check_inputs(s, y, "loss_value");
  switch (kind_) {
    case LossKind::ListNet:
      return listnet_value(s, y);
    case LossKind::SmoothDCG1: {
      // D(1) = 1
      const Vector p = softmax(s, sigma_);
      double v = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) v += dcg_gain(y[i]) * p[i];
      return v;
    }
    case LossKind::RankSVM:
      return pairwise_hinge(s, y, nullptr);
  }
  return 0.0;
}

Vector SurrogateLoss::gradient(std::span<const double> s, std::span<const double> y) const {
  check_inputs(s, y, "loss_gradient");
  switch (kind_) {
    case LossKind::ListNet:
      return listnet_gradient(s, y);
    case LossKind::SmoothDCG1: {
      const Vector p = softmax(s, sigma_);
      double mean_gain = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) mean_gain += dcg_gain(y[i]) * p[i];
      Vector g(s.size());
      for (std::size_t j = 0; j < s.size(); ++j) {
        g[j] = p[j] * (dcg_gain(y[j]) - mean_gain) / sigma_;
      }
      return g;
    }
    case LossKind::RankSVM: {
      Vector g(s.size(), 0.0);
      pairwise_hinge(s, y, &g);
      return g;
    }
  }
  return {};
}

Matrix SurrogateLoss::hessian(std::span<const double> s, std::span<const double> y) const {
  check_inputs(s, y, "loss_hessian");
  const std::size_t m = s.size();
  Matrix h(m, m);
  switch (kind_) {
    case LossKind::ListNet: {
      const Vector p = softmax(s);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) h(j, k) = (j == k ? p[j] : 0.0) - p[j] * p[k];
      }
      return h;
    }
    case LossKind::SmoothDCG1: {
      const Vector p = softmax(s, sigma_);
      double mean_gain = 0.0;
      for (std::size_t i = 0; i < m; ++i) mean_gain += dcg_gain(y[i]) * p[i];
      const double inv = 1.0 / (sigma_ * sigma_);
      for (std::size_t j = 0; j < m; ++j) {
        const double cj = dcg_gain(y[j]) - mean_gain;
        for (std::size_t k = 0; k < m; ++k) {
          const double ck = dcg_gain(y[k]) - mean_gain;
          h(j, k) = inv * ((j == k ? p[j] * cj : 0.0) - p[j] * p[k] * (cj + ck));
        }
      }
      return h;
    }
    case LossKind::RankSVM:
      throw UnsupportedOperation("loss_hessian: RankSVM is not twice differentiable");
  }
  return h;
}

std::optional<double> SurrogateLoss::smoothness_inf() const {
  if (kind_ == LossKind::ListNet) return 2.0;
  return std::nullopt;
}

double SurrogateLoss::lipschitz_inf(std::size_t m) const {
  switch (kind_) {
    case LossKind::ListNet:
      return 2.0;
    case LossKind::SmoothDCG1:
      return 2.0 * dcg_gain(y_max_) / sigma_;
    case LossKind::RankSVM: {
      const double md = static_cast<double>(m);
      return md * (md - 1.0);
    }
  }
  return 0.0;
}

LossConstants SurrogateLoss::constants(const ClassSpec& spec, std::size_t m) const {
  if (m < 1) throw std::invalid_argument("analytic_constants: m must be >= 1");
  spec.validate();
  const double md = static_cast<double>(m);
  // Bound on |s_j| over the class: |<x, w>| <= ||w|| ||x||_dual.
  const double score_radius = spec.weight_radius * spec.input_radius;
  LossConstants c;
  c.lipschitz_inf = lipschitz_inf(m);
  c.smoothness_inf = smoothness_inf();
  switch (kind_) {
    case LossKind::ListNet:
      c.lipschitz_l2 = 2.0;
      // -log P_j(s) <= log m + 2 ||s||_inf
      c.uniform_bound = std::log(md) + 2.0 * score_radius;
      break;
    case LossKind::SmoothDCG1:
      c.lipschitz_l2 = c.lipschitz_inf;
      c.uniform_bound = dcg_gain(y_max_);
      break;
    case LossKind::RankSVM: {
      // Each coordinate of the subgradient is bounded by m - 1 in magnitude.
      c.lipschitz_l2 = (md - 1.0) * std::sqrt(md);
      const double half = std::floor(md / 2.0);
      c.lipschitz_witness = 2.0 * half * (md - half);
      // At most m(m-1)/2 ordered pairs, each hinge at most 1 + 2 ||s||_inf.
      c.uniform_bound = 0.5 * md * (md - 1.0) * (1.0 + 2.0 * score_radius);
      break;
    }
  }
  return c;
}

double ListNetExcessLoss::value(std::span<const double> s, std::span<const double> y) const {
  check_inputs(s, y, "loss_value");
  // KL(P(y) || P(s)) = sum_j P_j(y) (log P_j(y) - log P_j(s))
  const Vector py = softmax(y);
  const double lse_s = log_sum_exp(s);
  const double lse_y = log_sum_exp(y);
  double v = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (py[j] > 0.0) v += py[j] * ((y[j] - lse_y) - (s[j] - lse_s));
  }
  return std::max(v, 0.0);
}

Vector ListNetExcessLoss::gradient(std::span<const double> s, std::span<const double> y) const {
  check_inputs(s, y, "loss_gradient");
  return listnet_gradient(s, y);
}

double empirical_loss(const ScoreLoss& loss, const Dataset& data, std::span<const double> w) {
  double total = 0.0;
  for (const auto& q : data) {
    const Vector s = q.features().multiply(w);
    total += loss.value(s, q.labels());
  }
  return total / static_cast<double>(data.size());
}

Vector empirical_gradient(const ScoreLoss& loss, const Dataset& data, std::span<const double> w) {
  Vector g(data.dim(), 0.0);
  for (const auto& q : data) {
    const Vector s = q.features().multiply(w);
    const Vector gs = loss.gradient(s, q.labels());
    const Vector gw = q.features().multiply_transposed(gs);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += gw[k];
  }
  const double inv = 1.0 / static_cast<double>(data.size());
  for (double& x : g) x *= inv;
  return g;
}

}  // namespace ltrgen
