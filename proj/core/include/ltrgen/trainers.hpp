#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ltrgen/losses.hpp"
#include "ltrgen/types.hpp"

namespace ltrgen {

/// Constant OGD step size.
struct OgdFixedStep {
  double eta = 0.0;
};
/// eta = W2 / (G_w sqrt(2 n)), G_w = G_phi R_X: balances W2^2/(2 eta) + eta G_w^2 n.
struct OgdRegretStep {};
/// Smooth-loss step eta_smooth(W2, H_phi R_X^2, L_star, n).
struct SmoothEtaStep {
  double l_star_estimate = 0.0;
  /// Overrides H_phi for losses without an analytic smoothness constant.
  std::optional<double> smoothness_override;
};

using StepPolicy = std::variant<OgdFixedStep, OgdRegretStep, SmoothEtaStep>;

struct TrainConfig {
  ClassSpec spec;
  SurrogateLoss loss = SurrogateLoss::listnet();
  StepPolicy step_policy = OgdRegretStep{};
  /// Passes over the data for erm_train.
  int epochs = 1;
  /// RERM regularization; absent means lambda_default.
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  /// RERM stopping rule: projected-gradient norm and iteration cap.
  double tolerance = 1e-8;
  int max_iterations = 20000;
  bool record_trace = false;

  void validate() const;
};

struct TrainedModel {
  ScoringParams weights;
  double train_loss = 0.0;
  std::optional<std::vector<double>> iterate_trace;
  bool converged = true;
  /// Step size used by OGD (0 for the batch trainers).
  double step_size = 0.0;
  /// Regularization used by RERM.
  double lambda = 0.0;
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// lambda = sqrt((4 G^2 / n) / (W2^2 / 2 + 4 W2^2 / n)), with G the Lipschitz
/// constant in w-space (G_phi R_X).
double lambda_default(double g_w, double w2, std::size_t n);

/// eta = W2 / (4 H W2 + 2 sqrt(4 H^2 W2^2 + 2 H L* n)), with H = H_phi R_X^2.
double eta_smooth(double w2, double h_w, double l_star, std::size_t n);

/// Lipschitz constant of w -> phi(Xw, y) for the loss on this dataset: G_phi(max m) * R_X.
double weight_space_lipschitz(const ScoreLoss& loss, const ClassSpec& spec, const Dataset& data);

/// One pass of projected online gradient descent from w_1 = 0; returns the
/// average of the iterates w_1..w_n that were played.
TrainedModel ogd_train(const Dataset& data, const TrainConfig& config);
TrainedModel ogd_train(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss);

/// Minimizer of (lambda/2)||w||^2 + L_hat(w) over the l2 ball, by projected
/// gradient descent with a halving line search. Losses without a smoothness
/// constant use projected subgradient steps 1/(lambda t) and return the best
/// iterate.
TrainedModel rerm_train(const Dataset& data, const TrainConfig& config);
TrainedModel rerm_train(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss);

/// Projected stochastic subgradient descent on L_hat over the class ball,
/// step W / (G_w sqrt(t)); returns the best epoch-end iterate.
TrainedModel erm_train(const Dataset& data, const TrainConfig& config);
TrainedModel erm_train(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss);

/// (lambda/2)||w||^2 + L_hat(w)
double rerm_objective(const ScoreLoss& loss, const Dataset& data, std::span<const double> w,
                      double lambda);

}  // namespace ltrgen
