#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "ltrgen/types.hpp"

namespace ltrgen {

/// A nonnegative loss of a score vector s against relevance labels y.
/// Trainers and the verification lab work against this interface so that
/// test-only stubs can stand in for the surrogates.
class ScoreLoss {
 public:
  virtual ~ScoreLoss() = default;

  virtual double value(std::span<const double> s, std::span<const double> y) const = 0;
  virtual Vector gradient(std::span<const double> s, std::span<const double> y) const = 0;
  virtual bool convex() const = 0;
  /// Smoothness constant w.r.t. the l-infinity norm on scores, when known.
  virtual std::optional<double> smoothness_inf() const { return std::nullopt; }
  /// Lipschitz constant w.r.t. l-infinity on scores for lists of length m.
  virtual double lipschitz_inf(std::size_t m) const = 0;
  virtual std::string name() const = 0;
};

enum class LossKind { ListNet, SmoothDCG1, RankSVM };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& text);

/// Analytic constants of a surrogate on a given hypothesis class.
struct LossConstants {
  double lipschitz_inf = 0.0;               // G_phi, dual norm l1
  std::optional<double> smoothness_inf;     // H_phi, infinity -> 1 operator norm
  double uniform_bound = 0.0;               // B over the class
  double lipschitz_l2 = 0.0;                // l2 Lipschitz constant (baseline bound)
  std::optional<double> lipschitz_witness;  // RankSVM: attained value on the half-split family
};

/// ListNet (top-1), smoothed DCG@1, or pairwise hinge RankSVM.
class SurrogateLoss final : public ScoreLoss {
 public:
  static SurrogateLoss listnet();
  static SurrogateLoss smooth_dcg1(double sigma, int y_max = 4);
  static SurrogateLoss ranksvm();

  LossKind kind() const { return kind_; }
  /// Smoothing temperature; only meaningful for SmoothDCG1.
  double sigma() const { return sigma_; }
  int y_max() const { return y_max_; }
  SurrogateLoss with_y_max(int y_max) const;

  double value(std::span<const double> s, std::span<const double> y) const override;
  Vector gradient(std::span<const double> s, std::span<const double> y) const override;
  /// Exact Hessian for ListNet and SmoothDCG1; RankSVM throws UnsupportedOperation.
  Matrix hessian(std::span<const double> s, std::span<const double> y) const;

  bool convex() const override { return kind_ != LossKind::SmoothDCG1; }
  std::optional<double> smoothness_inf() const override;
  double lipschitz_inf(std::size_t m) const override;
  std::string name() const override;

  LossConstants constants(const ClassSpec& spec, std::size_t m) const;

 private:
  SurrogateLoss(LossKind kind, double sigma, int y_max);

  LossKind kind_;
  double sigma_;
  int y_max_;
};

inline double loss_value(const SurrogateLoss& loss, std::span<const double> s,
                         std::span<const double> y) {
  return loss.value(s, y);
}
inline Vector loss_gradient(const SurrogateLoss& loss, std::span<const double> s,
                            std::span<const double> y) {
  return loss.gradient(s, y);
}
inline Matrix loss_hessian(const SurrogateLoss& loss, std::span<const double> s,
                           std::span<const double> y) {
  return loss.hessian(s, y);
}
inline LossConstants analytic_constants(const SurrogateLoss& loss, const ClassSpec& spec,
                                        std::size_t m) {
  return loss.constants(spec, m);
}

/// ListNet minus its per-query minimum, the entropy of P(y). Same gradient and
/// Hessian as ListNet; zero exactly when softmax(s) = softmax(y).
class ListNetExcessLoss final : public ScoreLoss {
 public:
  double value(std::span<const double> s, std::span<const double> y) const override;
  Vector gradient(std::span<const double> s, std::span<const double> y) const override;
  bool convex() const override { return true; }
  std::optional<double> smoothness_inf() const override { return 2.0; }
  double lipschitz_inf(std::size_t) const override { return 2.0; }
  std::string name() const override { return "listnet-excess"; }
};

/// Numerically stable softmax of x / temperature.
Vector softmax(std::span<const double> x, double temperature = 1.0);
double log_sum_exp(std::span<const double> x);

/// DCG gain 2^g - 1.
double dcg_gain(double grade);

/// Mean loss of a linear scorer over a dataset and its gradient in w.
double empirical_loss(const ScoreLoss& loss, const Dataset& data, std::span<const double> w);
Vector empirical_gradient(const ScoreLoss& loss, const Dataset& data, std::span<const double> w);

}  // namespace ltrgen
