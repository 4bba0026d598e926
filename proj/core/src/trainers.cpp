#include "ltrgen/trainers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ltrgen/ranking.hpp"

namespace ltrgen {

void TrainConfig::validate() const {
  spec.validate();
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (lambda && !(*lambda >= 0.0)) throw std::invalid_argument("TrainConfig: lambda must be >= 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("TrainConfig: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("TrainConfig: max_iterations must be >= 1");
}

double lambda_default(double g_w, double w2, std::size_t n) {
  if (!(g_w >= 0.0) || !(w2 > 0.0) || n < 1) {
    throw std::invalid_argument("lambda_default: need G >= 0, W2 > 0, n >= 1");
  }
  const double nd = static_cast<double>(n);
  return std::sqrt((4.0 * g_w * g_w / nd) / (w2 * w2 / 2.0 + 4.0 * w2 * w2 / nd));
}

double eta_smooth(double w2, double h_w, double l_star, std::size_t n) {
  if (!(w2 > 0.0) || !(h_w > 0.0) || !(l_star >= 0.0) || n < 1) {
    throw std::invalid_argument("eta_smooth: need W2 > 0, H > 0, L* >= 0, n >= 1");
  }
  const double nd = static_cast<double>(n);
  return w2 / (4.0 * h_w * w2 + 2.0 * std::sqrt(4.0 * h_w * h_w * w2 * w2 + 2.0 * h_w * l_star * nd));
}

double weight_space_lipschitz(const ScoreLoss& loss, const ClassSpec& spec, const Dataset& data) {
  return loss.lipschitz_inf(data.max_docs()) * spec.input_radius;
}

double rerm_objective(const ScoreLoss& loss, const Dataset& data, std::span<const double> w,
                      double lambda) {
  const double sq = norm_l2(w);
  return 0.5 * lambda * sq * sq + empirical_loss(loss, data, w);
}

namespace {

Vector instance_gradient(const ScoreLoss& loss, const QueryInstance& q, std::span<const double> w) {
  const Vector s = q.features().multiply(w);
  return q.features().multiply_transposed(loss.gradient(s, q.labels()));
}

double ogd_step_size(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss,
                     std::vector<std::string>& warnings) {
  const double n = static_cast<double>(data.size());
  const double w2 = config.spec.weight_radius;
  return std::visit(
      [&](const auto& policy) -> double {
        using P = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<P, OgdFixedStep>) {
          if (!(policy.eta >= 0.0)) throw std::invalid_argument("ogd_train: eta must be >= 0");
          return policy.eta;
        } else if constexpr (std::is_same_v<P, OgdRegretStep>) {
          if (config.spec.norm_kind != NormKind::L2) {
            throw std::invalid_argument("ogd_train: the regret-balancing step needs an L2 class");
          }
          const double g_w = weight_space_lipschitz(loss, config.spec, data);
          if (g_w == 0.0) {
            warnings.emplace_back("zero Lipschitz constant; using eta = 0");
            return 0.0;
          }
          return w2 / (g_w * std::sqrt(2.0 * n));
        } else {
          const std::optional<double> h_phi =
              policy.smoothness_override ? policy.smoothness_override : loss.smoothness_inf();
          if (!h_phi) {
            throw UnsupportedOperation("ogd_train: smooth step needs a smoothness constant for " +
                                       loss.name());
          }
          const double r = config.spec.input_radius;
          return eta_smooth(w2, *h_phi * r * r, policy.l_star_estimate, data.size());
        }
      },
      config.step_policy);
}

// Strongly convex but nonsmooth objective: line searches fail at almost every
// kink, so use subgradient steps 1/(lambda t) and keep the best iterate.
TrainedModel rerm_subgradient(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss,
                              double lambda, TrainedModel model) {
  const std::size_t d = data.dim();
  Vector w(d, 0.0);
  Vector best_w = w;
  double best_f = rerm_objective(loss, data, w, lambda);
  std::vector<double> trace;
  for (int t = 1; t <= config.max_iterations; ++t) {
    if (config.record_trace) trace.push_back(best_f);
    Vector grad = empirical_gradient(loss, data, w);
    for (std::size_t k = 0; k < d; ++k) grad[k] += lambda * w[k];
    if (norm_l2(grad) == 0.0) {
      model.converged = true;
      break;
    }
    const double eta = 1.0 / (lambda * t);
    for (std::size_t k = 0; k < d; ++k) w[k] -= eta * grad[k];
    w = project(w, config.spec);
    const double f = rerm_objective(loss, data, w, lambda);
    if (f < best_f) {
      best_f = f;
      best_w = w;
    }
    model.iterations = t;
  }
  model.weights.w = std::move(best_w);
  model.train_loss = empirical_loss(loss, data, model.weights.w);
  if (!model.converged) {
    model.warnings.emplace_back("rerm_train: nonsmooth objective, returning the best of " +
                                std::to_string(model.iterations) + " subgradient iterates");
  }
  if (config.record_trace) model.iterate_trace = std::move(trace);
  return model;
}

}  // namespace

TrainedModel ogd_train(const Dataset& data, const TrainConfig& config) {
  return ogd_train(data, config, config.loss);
}

TrainedModel ogd_train(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss) {
  config.validate();
  TrainedModel model;
  if (!loss.convex()) {
    model.warnings.emplace_back(loss.name() + " is not convex; the OGD guarantee does not apply");
  }
  const double eta = ogd_step_size(data, config, loss, model.warnings);
  const std::size_t d = data.dim();
  Vector w(d, 0.0);
  Vector sum(d, 0.0);
  std::vector<double> trace;
  for (const auto& q : data) {
    for (std::size_t k = 0; k < d; ++k) sum[k] += w[k];
    if (config.record_trace) trace.push_back(loss.value(q.features().multiply(w), q.labels()));
    const Vector g = instance_gradient(loss, q, w);
    for (std::size_t k = 0; k < d; ++k) w[k] -= eta * g[k];
    w = project(w, config.spec);
  }
  const double inv = 1.0 / static_cast<double>(data.size());
  for (double& x : sum) x *= inv;
  model.weights.w = std::move(sum);
  model.train_loss = empirical_loss(loss, data, model.weights.w);
  model.step_size = eta;
  model.iterations = static_cast<int>(data.size());
  if (config.record_trace) model.iterate_trace = std::move(trace);
  return model;
}

TrainedModel rerm_train(const Dataset& data, const TrainConfig& config) {
  return rerm_train(data, config, config.loss);
}

TrainedModel rerm_train(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss) {
  config.validate();
  if (!loss.convex()) {
    throw std::invalid_argument("rerm_train: " + loss.name() + " is not convex");
  }
  const double lambda = config.lambda ? *config.lambda
                                      : lambda_default(weight_space_lipschitz(loss, config.spec, data),
                                                       config.spec.weight_radius, data.size());
  const std::size_t d = data.dim();

  auto objective_and_gradient = [&](const Vector& w, Vector& grad) {
    grad = empirical_gradient(loss, data, w);
    for (std::size_t k = 0; k < d; ++k) grad[k] += lambda * w[k];
    return rerm_objective(loss, data, w, lambda);
  };
  auto mapping_norm = [&](const Vector& w, const Vector& grad) {
    Vector probe(d);
    for (std::size_t k = 0; k < d; ++k) probe[k] = w[k] - grad[k];
    probe = project(probe, config.spec);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += (w[k] - probe[k]) * (w[k] - probe[k]);
    return std::sqrt(s);
  };

  TrainedModel model;
  model.lambda = lambda;
  model.converged = false;
  if (!loss.smoothness_inf() && lambda > 0.0) {
    return rerm_subgradient(data, config, loss, lambda, std::move(model));
  }
  Vector w(d, 0.0);
  Vector grad;
  double f = objective_and_gradient(w, grad);
  Vector best_w = w;
  double best_f = f;
  double step = 1.0;
  int fallback_steps = 0;
  std::vector<double> trace;

  int it = 0;
  for (; it < config.max_iterations; ++it) {
    if (config.record_trace) trace.push_back(f);
    if (mapping_norm(w, grad) <= config.tolerance) {
      model.converged = true;
      break;
    }
    // Backtracking on the projected step: accept when the quadratic upper model holds.
    bool accepted = false;
    Vector candidate(d);
    Vector cand_grad;
    double cand_f = f;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t k = 0; k < d; ++k) candidate[k] = w[k] - step * grad[k];
      candidate = project(candidate, config.spec);
      double lin = 0.0;
      double sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = candidate[k] - w[k];
        lin += grad[k] * diff;
        sq += diff * diff;
      }
      cand_f = rerm_objective(loss, data, candidate, lambda);
      if (cand_f <= f + lin + sq / (2.0 * step) + 1e-15 * std::abs(f)) {
        accepted = true;
        cand_f = objective_and_gradient(candidate, cand_grad);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Nonsmooth objective at a kink: fall back to a diminishing subgradient step.
      ++fallback_steps;
      const double t = lambda > 0.0
                           ? 1.0 / (lambda * (fallback_steps + 1.0))
                           : config.spec.weight_radius /
                                 (std::max(norm_l2(grad), 1e-300) * std::sqrt(fallback_steps + 1.0));
      for (std::size_t k = 0; k < d; ++k) candidate[k] = w[k] - t * grad[k];
      candidate = project(candidate, config.spec);
      cand_f = objective_and_gradient(candidate, cand_grad);
      step = 1.0;
    } else {
      step = std::min(step * 2.0, 1e6);
    }
    w = candidate;
    grad = cand_grad;
    f = cand_f;
    if (f < best_f) {
      best_f = f;
      best_w = w;
    }
  }
  if (model.converged) best_w = w;
  model.iterations = it;
  model.weights.w = std::move(best_w);
  model.train_loss = empirical_loss(loss, data, model.weights.w);
  if (!model.converged) {
    model.warnings.emplace_back("rerm_train: projected-gradient tolerance not reached after " +
                                std::to_string(it) + " iterations");
  }
  if (config.record_trace) model.iterate_trace = std::move(trace);
  return model;
}

TrainedModel erm_train(const Dataset& data, const TrainConfig& config) {
  return erm_train(data, config, config.loss);
}

TrainedModel erm_train(const Dataset& data, const TrainConfig& config, const ScoreLoss& loss) {
  config.validate();
  TrainedModel model;
  if (!loss.convex()) {
    model.warnings.emplace_back(loss.name() + " is not convex; ERM may stop at a local minimum");
  }
  const std::size_t d = data.dim();
  const double w_radius = config.spec.weight_radius;
  double g_w = weight_space_lipschitz(loss, config.spec, data);
  if (g_w <= 0.0) g_w = 1.0;

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Vector w(d, 0.0);
  Vector best_w = w;
  double best_loss = empirical_loss(loss, data, w);
  std::vector<double> trace{best_loss};
  std::size_t t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      ++t;
      const double eta = w_radius / (g_w * std::sqrt(static_cast<double>(t)));
      const Vector g = instance_gradient(loss, data[idx], w);
      for (std::size_t k = 0; k < d; ++k) w[k] -= eta * g[k];
      w = project(w, config.spec);
    }
    const double current = empirical_loss(loss, data, w);
    trace.push_back(current);
    if (current < best_loss) {
      best_loss = current;
      best_w = w;
    }
  }
  model.weights.w = std::move(best_w);
  model.train_loss = best_loss;
  model.iterations = static_cast<int>(t);
  model.iterate_trace = std::move(trace);
  return model;
}

}  // namespace ltrgen
