#include "ltrgen/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ltrgen/csv.hpp"
#include "ltrgen/ranking.hpp"
#include "ltrgen/verification.hpp"

namespace ltrgen {

std::vector<std::string> CheckRow::header() {
  return {"suite", "check", "m", "observed", "bound", "margin", "pass"};
}

std::vector<std::string> CheckRow::cells() const {
  return {suite, check, std::to_string(m), format_real(observed), format_real(bound), format_real(margin),
          pass ? "1" : "0"};
}

void write_checks_csv(std::ostream& out, const std::vector<CheckRow>& rows) {
  CsvWriter w(out);
  w.write_row(CheckRow::header());
  for (const auto& r : rows) w.write_row(r.cells());
}

namespace {

CheckRow upper(std::string suite, std::string check, std::size_t m, double observed, double bound) {
  CheckRow r{std::move(suite), std::move(check), m, observed, bound, bound - observed, false};
  r.pass = observed <= bound * (1.0 + 1e-9);
  return r;
}

CheckRow lower(std::string suite, std::string check, std::size_t m, double observed, double bound) {
  CheckRow r{std::move(suite), std::move(check), m, observed, bound, observed - bound, false};
  r.pass = observed >= bound;
  return r;
}

CheckRow equality(std::string suite, std::string check, std::size_t m, double observed, double bound) {
  CheckRow r{std::move(suite), std::move(check), m, observed, bound, -std::abs(observed - bound), false};
  r.pass = std::abs(observed - bound) <= 1e-12 * (1.0 + std::abs(bound));
  return r;
}

Vector uniform_vector(std::mt19937_64& rng, std::size_t m, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(m);
  for (double& x : v) x = u(rng);
  return v;
}

Vector grade_vector(std::mt19937_64& rng, std::size_t m, int y_max) {
  std::uniform_int_distribution<int> g(0, y_max);
  Vector v(m);
  for (double& x : v) x = g(rng);
  return v;
}

Matrix sphere_rows(std::mt19937_64& rng, std::size_t m, std::size_t d, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(m, d);
  for (std::size_t j = 0; j < m; ++j) {
    auto row = x.row(j);
    double sq = 0.0;
    for (double& v : row) {
      v = normal(rng);
      sq += v * v;
    }
    for (double& v : row) v *= radius / std::sqrt(std::max(sq, 1e-300));
  }
  return x;
}

void gradient_check(std::vector<CheckRow>& rows, const SurrogateLoss& loss, const VerifyOptions& opt,
                    double scale, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick_m(1, 64);
  const bool hinge = loss.kind() == LossKind::RankSVM;
  const double h = hinge ? 1e-7 : 1e-6;
  double worst = 0.0;
  std::size_t done = 0;
  while (done < opt.points) {
    const std::size_t m = pick_m(rng);
    const Vector s = uniform_vector(rng, m, scale);
    const Vector y = grade_vector(rng, m, opt.y_max);
    if (hinge && min_hinge_margin(s, y) < 1e-6) continue;
    worst = std::max(worst, gradient_relative_error(loss, s, y, h));
    ++done;
  }
  rows.push_back(upper("gradient", "finite_difference_rel_error", 0, worst, 1e-5));
}

void lipschitz_sweep(std::vector<CheckRow>& rows, const SurrogateLoss& loss, const VerifyOptions& opt,
                     const std::vector<std::size_t>& m_values, double scale) {
  for (std::size_t m : m_values) {
    SamplerSpec sampler{m, scale, opt.y_max, opt.trials, opt.seed + m};
    const LipschitzEstimate est = empirical_lipschitz_inf(loss, sampler);
    rows.push_back(upper("lipschitz", "lipschitz_inf_sup", m, est.value, loss.lipschitz_inf(m)));
  }
}

void listnet_suite(std::vector<CheckRow>& rows, const VerifyOptions& opt, std::mt19937_64& rng) {
  const SurrogateLoss loss = SurrogateLoss::listnet();
  gradient_check(rows, loss, opt, 5.0, rng);
  const auto m_values = opt.m_values.empty() ? std::vector<std::size_t>{2, 16, 128, 512} : opt.m_values;
  lipschitz_sweep(rows, loss, opt, m_values, 50.0);
  for (std::size_t m : m_values) {
    if (m < 2) continue;
    const auto [s, y] = listnet_adversarial_point(m, 20.0);
    rows.push_back(lower("lipschitz", "adversarial_lipschitz_inf", m, norm_l1(loss.gradient(s, y)), 1.99));
  }
  for (std::size_t m = 1; m <= 12; ++m) {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Vector s = k == 0 ? Vector(m, 0.0) : uniform_vector(rng, m, 5.0);
      const Vector y = grade_vector(rng, m, opt.y_max);
      worst = std::max(worst, op_norm_inf_to_1(loss.hessian(s, y)).value);
    }
    rows.push_back(upper("smoothness", "hessian_inf_to_1_exact", m, worst, 2.0));
  }
  for (std::size_t m : m_values) {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Vector s = uniform_vector(rng, m, 5.0);
      worst = std::max(worst, op_norm_inf_to_1(loss.hessian(s, grade_vector(rng, m, opt.y_max))).abs_sum_bound);
    }
    rows.push_back(upper("smoothness", "hessian_abs_sum_bound", m, worst, 2.0));
  }

  std::uniform_int_distribution<std::size_t> pick_m(1, 32);
  std::uniform_int_distribution<std::size_t> pick_d(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double self_ratio = 0.0;
  double vec_ratio = 0.0;
  for (std::size_t k = 0; k < opt.points; ++k) {
    const std::size_t m = pick_m(rng);
    const std::size_t d = pick_d(rng);
    const double radius = 0.1 + 4.9 * unit(rng);
    const ClassSpec spec{NormKind::L2, 3.0, radius};
    const Matrix x = sphere_rows(rng, m, d, radius);
    Vector w = uniform_vector(rng, d, 3.0);
    w = project_l2(w, 3.0);
    const Vector y = grade_vector(rng, m, opt.y_max);
    const InequalityReport sb = self_bounding_check(loss, spec, x, y, w);
    if (sb.rhs > 0.0) self_ratio = std::max(self_ratio, sb.lhs / sb.rhs);
    const Vector s1 = uniform_vector(rng, m, 10.0);
    const Vector s2 = uniform_vector(rng, m, 10.0);
    const InequalityReport vs = vector_smoothness_check(loss, s1, s2, y);
    if (vs.rhs > 0.0) vec_ratio = std::max(vec_ratio, vs.lhs / vs.rhs);
  }
  rows.push_back(upper("inequality", "self_bounding_ratio", 0, self_ratio, 1.0));
  rows.push_back(upper("inequality", "vector_smoothness_ratio", 0, vec_ratio, 1.0));
}

void sdcg_suite(std::vector<CheckRow>& rows, const VerifyOptions& opt, std::mt19937_64& rng) {
  const SurrogateLoss loss = SurrogateLoss::smooth_dcg1(opt.sigma, opt.y_max);
  gradient_check(rows, loss, opt, 3.0 * opt.sigma, rng);
  const auto m_values = opt.m_values.empty() ? std::vector<std::size_t>{2, 16, 128, 512} : opt.m_values;
  lipschitz_sweep(rows, loss, opt, m_values, 3.0 * opt.sigma);
}

void ranksvm_suite(std::vector<CheckRow>& rows, const VerifyOptions& opt, std::mt19937_64& rng) {
  const SurrogateLoss loss = SurrogateLoss::ranksvm();
  gradient_check(rows, loss, opt, 3.0, rng);
  const auto m_values =
      opt.m_values.empty() ? std::vector<std::size_t>{2, 4, 8, 16, 32, 64} : opt.m_values;
  for (std::size_t m : m_values) {
    const auto [s, y] = ranksvm_witness(m);
    const double half = std::floor(static_cast<double>(m) / 2.0);
    const double expected = 2.0 * half * (static_cast<double>(m) - half);
    rows.push_back(equality("witness", "subgradient_l1_norm", m, norm_l1(loss.gradient(s, y)), expected));
  }
  VerifyOptions quick = opt;
  quick.trials = std::min<std::size_t>(opt.trials, 10000);
  lipschitz_sweep(rows, loss, quick, m_values, 3.0);
}

void common_suite(std::vector<CheckRow>& rows, const VerifyOptions& opt, std::mt19937_64& rng) {
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 2}, {3, 5}, {8, 3}};
  const std::vector<double> ps{1.0, 2.0, std::numeric_limits<double>::infinity()};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& [r, c] : shapes) {
    for (double p : ps) {
      double worst_ratio = 0.0;
      bool all = true;
      for (int k = 0; k < 100; ++k) {
        Matrix x(r, c);
        for (double& v : x.data()) v = normal(rng);
        const DualNormReport rep = verify_dual_norm_identity(x, p, 2000, rng());
        all = all && rep.passes;
        worst_ratio = std::max(worst_ratio, rep.sampled_sup / rep.closed_form);
      }
      CheckRow row = upper("dual_norm", "sampled_sup_over_closed_form_" + std::to_string(r) + "x" +
                                            std::to_string(c) + "_p" + (std::isinf(p) ? "inf" : format_real(p)),
                           0, worst_ratio, 1.0);
      row.pass = row.pass && all;
      rows.push_back(row);
    }
  }
  double worst = 0.0;
  std::uniform_int_distribution<std::size_t> pick_m(1, 12);
  std::uniform_int_distribution<std::size_t> pick_d(1, 6);
  for (std::size_t k = 0; k < opt.points; ++k) {
    const std::size_t m = pick_m(rng);
    const std::size_t d = pick_d(rng);
    Matrix x(m, d);
    for (double& v : x.data()) v = normal(rng);
    ScoringParams params{uniform_vector(rng, d, 1.0), uniform_vector(rng, d, 1.0)};
    Permutation perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const QueryInstance q(x, Vector(m, 0.0));
    const InvarianceCheck chk = check_invariance(params, q, perm);
    worst = std::max(worst, chk.deviation / (1.0 + norm_linf(score(params, q))));
  }
  rows.push_back(upper("invariance", "equivariance_relative_deviation", 0, worst, 1e-12));
}

}  // namespace

std::vector<CheckRow> run_verify(const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<CheckRow> rows;
  switch (options.loss) {
    case LossKind::ListNet:
      listnet_suite(rows, options, rng);
      break;
    case LossKind::SmoothDCG1:
      sdcg_suite(rows, options, rng);
      break;
    case LossKind::RankSVM:
      ranksvm_suite(rows, options, rng);
      break;
  }
  common_suite(rows, options, rng);
  return rows;
}

}  // namespace ltrgen
