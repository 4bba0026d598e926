#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "ltrgen/losses.hpp"
#include "ltrgen/types.hpp"

namespace ltrgen {

/// Random (s, y) draws: s uniform in [-score_scale, score_scale]^m, y integer
/// grades uniform in {0, ..., label_range}.
struct SamplerSpec {
  std::size_t m = 2;
  double score_scale = 1.0;
  int label_range = 4;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Central differences (phi(s + h e_j) - phi(s - h e_j)) / (2h).
Vector finite_diff_gradient(const ScoreLoss& loss, std::span<const double> s,
                            std::span<const double> y, double h);

/// ||fd - g||_2 / max(||g||_2, 1e-3) between the closed form and central differences.
double gradient_relative_error(const ScoreLoss& loss, std::span<const double> s,
                               std::span<const double> y, double h = 1e-6);

/// Smallest |1 + s_j - s_i| over pairs with y_i > y_j (infinity without pairs).
double min_hinge_margin(std::span<const double> s, std::span<const double> y);

struct LipschitzEstimate {
  double value = 0.0;
  Vector s_argmax;
  Vector y_argmax;
};

/// sup over sampled points of ||gradient||_1.
LipschitzEstimate empirical_lipschitz_inf(const ScoreLoss& loss, const SamplerSpec& sampler);

/// ListNet point whose gradient l1 norm approaches 2 as `magnitude` grows:
/// labels put their mass on document 0, scores on document 1.
std::pair<Vector, Vector> listnet_adversarial_point(std::size_t m, double magnitude);

/// RankSVM witness with scores 0 and floor(m/2) relevant documents; every
/// pair is active.
std::pair<Vector, Vector> ranksvm_witness(std::size_t m);

struct OpNormResult {
  double value = 0.0;          // exact when `exact`, otherwise equal to abs_sum_bound
  double abs_sum_bound = 0.0;  // sum_jk |M_jk|
  bool exact = false;
};

/// ||M||_{inf->1} = max over sign vectors v of ||M v||_1; exact for m <= 12.
OpNormResult op_norm_inf_to_1(const Matrix& m);

struct DualNormReport {
  double closed_form = 0.0;   // max_j ||X_j||_p
  double basis_sup = 0.0;     // max over +-e_j of ||X^T v||_p
  double sampled_sup = 0.0;   // max over random v on the l1 sphere
  bool passes = false;
};

/// Checks ||X^T||_{1->p} = max_j ||X_j||_p: basis vectors attain it and random
/// l1-sphere samples never exceed it.
DualNormReport verify_dual_norm_identity(const Matrix& x, double p, std::size_t samples,
                                         std::uint64_t seed = 0);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool passes = false;
};

/// ||grad_w f(w)||_2 <= sqrt(4 H f(w)), f(w) = phi(Xw, y), H = H_phi R_X^2.
InequalityReport self_bounding_check(const ScoreLoss& loss, const ClassSpec& spec,
                                     const Matrix& x, std::span<const double> y,
                                     std::span<const double> w);

/// (phi(s1) - phi(s2))^2 <= 6 H_phi (phi(s1) + phi(s2)) ||s1 - s2||_inf^2.
InequalityReport vector_smoothness_check(const ScoreLoss& loss, std::span<const double> s1,
                                         std::span<const double> s2, std::span<const double> y);

enum class InnerOpt { Grid, Multistart };

std::string to_string(InnerOpt opt);

struct RademacherEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  InnerOpt inner_opt = InnerOpt::Grid;
};

struct RademacherOptions {
  InnerOpt inner_opt = InnerOpt::Grid;
  /// Grid spacing as a fraction of the weight radius.
  double grid_pitch = 1.0 / 200.0;
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of E_sigma sup_w (1/n) sum_i sigma_i phi(X_i w, y_i)
/// over the weight ball of `spec`.
RademacherEstimate monte_carlo_rademacher(const ScoreLoss& loss, const ClassSpec& spec,
                                          const Dataset& data, std::size_t trials,
                                          const RademacherOptions& options = {});

/// The same expectation by enumerating all 2^n sign vectors (n <= 20).
RademacherEstimate exhaustive_rademacher(const ScoreLoss& loss, const ClassSpec& spec,
                                         const Dataset& data, const RademacherOptions& options = {});

}  // namespace ltrgen
