// Acceptance checks, one pass/fail line per criterion.
//   ltrgen_acceptance                 run every criterion
//   ltrgen_acceptance --criterion N   run criterion N only
// Exit status is 0 when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltrgen/bounds.hpp"
#include "ltrgen/csv.hpp"
#include "ltrgen/experiments.hpp"
#include "ltrgen/letor.hpp"
#include "ltrgen/losses.hpp"
#include "ltrgen/ranking.hpp"
#include "ltrgen/synth.hpp"
#include "ltrgen/trainers.hpp"
#include "ltrgen/verification.hpp"
#include "oracles.hpp"

namespace {

using namespace ltrgen;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) { return format_real(v); }

Vector uniform_vector(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Vector grades(std::mt19937_64& rng, std::size_t m, int y_max) {
  std::uniform_int_distribution<int> g(0, y_max);
  Vector y(m);
  for (double& x : y) x = g(rng);
  return y;
}

Matrix unit_rows(std::mt19937_64& rng, std::size_t m, std::size_t d, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(m, d);
  for (std::size_t j = 0; j < m; ++j) {
    double sq = 0.0;
    for (double& v : x.row(j)) {
      v = normal(rng);
      sq += v * v;
    }
    for (double& v : x.row(j)) v *= radius / std::sqrt(sq);
  }
  return x;
}

Permutation random_perm(std::mt19937_64& rng, std::size_t m) {
  Permutation p(m);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// 1: closed-form gradients against central differences.
Outcome criterion1() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> pick_m(1, 64);
  const std::vector<std::pair<std::string, SurrogateLoss>> losses{
      {"listnet", SurrogateLoss::listnet()},
      {"sdcg", SurrogateLoss::smooth_dcg1(1.0, 4)},
      {"ranksvm", SurrogateLoss::ranksvm()}};
  std::ostringstream detail;
  bool pass = true;
  for (const auto& [name, loss] : losses) {
    double worst = 0.0;
    std::size_t done = 0;
    while (done < 1000) {
      const std::size_t m = pick_m(rng);
      const Vector s = uniform_vector(rng, m, 3.0);
      const Vector y = grades(rng, m, 4);
      // Central differences with h = 1e-6 are exact for the hinge only away from kinks.
      if (loss.kind() == LossKind::RankSVM && min_hinge_margin(s, y) < 1e-3) continue;
      worst = std::max(worst, gradient_relative_error(loss, s, y, 1e-6));
      ++done;
    }
    pass = pass && worst < 1e-5;
    detail << name << "_max_rel_err=" << fmt(worst) << " ";
  }
  const double t = seconds_since(start);
  pass = pass && t < 10.0;
  detail << "(limit 1e-05) runtime=" << fmt(t) << "s (limit 10s)";
  return {pass, detail.str()};
}

// 2: ListNet l-infinity Lipschitz constant 2 and smoothness constant 2.
Outcome criterion2() {
  const auto start = Clock::now();
  const auto loss = SurrogateLoss::listnet();
  std::ostringstream detail;
  bool pass = true;
  std::uint64_t seed = 200;
  for (std::size_t m : {2, 16, 128, 512}) {
    const double sup = empirical_lipschitz_inf(loss, {m, 20.0, 4, 100000, seed++}).value;
    const auto [s, y] = listnet_adversarial_point(m, 30.0);
    const double adv = norm_l1(loss.gradient(s, y));
    pass = pass && sup <= 2.0 && adv >= 1.99;
    detail << "m=" << m << " sup=" << fmt(sup) << " adversarial=" << fmt(adv) << "; ";
  }
  std::mt19937_64 rng(seed);
  double worst_h = 0.0;
  for (std::size_t m = 1; m <= 12; ++m) {
    for (int k = 0; k < 500; ++k) {
      const Vector s = uniform_vector(rng, m, 5.0);
      const OpNormResult r = op_norm_inf_to_1(loss.hessian(s, grades(rng, m, 4)));
      pass = pass && r.exact;
      worst_h = std::max(worst_h, r.value);
    }
  }
  pass = pass && worst_h <= 2.0;
  const double t = seconds_since(start);
  pass = pass && t < 60.0;
  detail << "hessian_inf_to_1_max(m<=12)=" << fmt(worst_h) << " runtime=" << fmt(t) << "s (limit 60s)";
  return {pass, detail.str()};
}

// 3: SmoothDCG@1 gradient never exceeds 2 D(1) G(y_max) / sigma.
Outcome criterion3() {
  std::size_t violations = 0;
  std::size_t configs = 0;
  double worst_ratio = 0.0;
  std::uint64_t seed = 300;
  for (double sigma : {0.1, 1.0, 10.0}) {
    for (int y_max = 1; y_max <= 4; ++y_max) {
      const auto loss = SurrogateLoss::smooth_dcg1(sigma, y_max);
      for (std::size_t m : {2, 16, 128, 512}) {
        const double bound = loss.lipschitz_inf(m);
        const double sup = empirical_lipschitz_inf(loss, {m, 3.0 * sigma, y_max, 100000, seed++}).value;
        violations += sup > bound ? 1 : 0;
        worst_ratio = std::max(worst_ratio, sup / bound);
        ++configs;
      }
    }
  }
  return {violations == 0, "configs=" + std::to_string(configs) + " violations=" + std::to_string(violations) +
                               " max_sup_over_bound=" + fmt(worst_ratio)};
}

// 4: RankSVM half-split witness has subgradient l1 norm m^2 / 2.
Outcome criterion4() {
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t m = 2; m <= 64; m *= 2) {
    const auto [s, y] = ranksvm_witness(m);
    const double v = norm_l1(SurrogateLoss::ranksvm().gradient(s, y));
    const double expected = static_cast<double>(m * m) / 2.0;
    pass = pass && v == expected;
    detail << "m=" << m << ":" << fmt(v) << "/" << fmt(expected) << " ";
  }
  return {pass, detail.str()};
}

// 5: the 2d-dimensional class is permutation equivariant; generic linear maps are not.
Outcome criterion5() {
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<std::size_t> pick_m(2, 20);
  std::uniform_int_distribution<std::size_t> pick_d(1, 8);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  std::size_t ranking_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = pick_m(rng);
    const std::size_t d = pick_d(rng);
    Matrix x(m, d);
    for (double& v : x.data()) v = normal(rng);
    const QueryInstance q(x, Vector(m, 0.0));
    const ScoringParams with_v{uniform_vector(rng, d, 1.0), uniform_vector(rng, d, 1.0)};
    const ScoringParams without_v{with_v.w, std::nullopt};
    const InvarianceCheck chk = check_invariance(with_v, q, random_perm(rng, m));
    worst = std::max(worst, chk.deviation / (1.0 + norm_linf(score(with_v, q))));
    if (rank_from_scores(score(with_v, q)) != rank_from_scores(score(without_v, q))) ++ranking_mismatch;
  }
  std::size_t full_violations = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = pick_m(rng);
    const std::size_t d = pick_d(rng);
    std::vector<Matrix> weights;
    for (std::size_t i = 0; i < m; ++i) {
      Matrix w(m, d);
      for (double& v : w.data()) v = normal(rng);
      weights.push_back(std::move(w));
    }
    const FullLinearMap f(std::move(weights));
    Matrix x(m, d);
    for (double& v : x.data()) v = normal(rng);
    Permutation perm = random_perm(rng, m);
    if (std::is_sorted(perm.begin(), perm.end())) std::swap(perm[0], perm[1]);
    if (!check_invariance([&f](const Matrix& z) { return f(z); }, x, perm).invariant) ++full_violations;
  }
  const bool pass = worst <= 1e-12 && full_violations == 100 && ranking_mismatch == 0;
  return {pass, "max_rel_deviation=" + fmt(worst) + " (limit 1e-12) full_linear_violations=" +
                    std::to_string(full_violations) + "/100 ranking_mismatches_v_vs_no_v=" +
                    std::to_string(ranking_mismatch)};
}

// 6: ||X^T||_{1->p} = max_j ||X_j||_p.
Outcome criterion6() {
  std::mt19937_64 rng(600);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 2}, {3, 5}, {8, 3}, {16, 10}};
  std::size_t failures = 0;
  std::size_t total = 0;
  double worst = 0.0;
  for (const auto& [r, c] : shapes) {
    for (double p : {1.0, 2.0, static_cast<double>(INFINITY)}) {
      for (int k = 0; k < 100; ++k) {
        Matrix x(r, c);
        for (double& v : x.data()) v = normal(rng);
        const DualNormReport rep = verify_dual_norm_identity(x, p, 10000, rng());
        failures += rep.passes ? 0 : 1;
        worst = std::max(worst, rep.sampled_sup / rep.closed_form);
        ++total;
      }
    }
  }
  return {failures == 0, "matrices=" + std::to_string(total) + " failures=" + std::to_string(failures) +
                             " max_sampled_over_closed_form=" + fmt(worst)};
}

// 7: self-bounding and vector smoothness inequalities for ListNet.
Outcome criterion7() {
  std::mt19937_64 rng(700);
  std::uniform_int_distribution<std::size_t> pick_m(1, 32);
  std::uniform_int_distribution<std::size_t> pick_d(1, 8);
  std::uniform_real_distribution<double> pick_r(0.1, 3.0);
  const auto loss = SurrogateLoss::listnet();
  std::size_t self_viol = 0;
  std::size_t vec_viol = 0;
  double self_worst = 0.0;
  double vec_worst = 0.0;
  for (int t = 0; t < 100000; ++t) {
    const std::size_t m = pick_m(rng);
    const std::size_t d = pick_d(rng);
    const double radius = pick_r(rng);
    const ClassSpec spec{NormKind::L2, 5.0, radius};
    const Matrix x = unit_rows(rng, m, d, radius);
    const Vector w = project_l2(uniform_vector(rng, d, 5.0), 5.0);
    const InequalityReport r = self_bounding_check(loss, spec, x, grades(rng, m, 4), w);
    self_viol += r.passes ? 0 : 1;
    if (r.rhs > 0.0) self_worst = std::max(self_worst, r.lhs / r.rhs);
  }
  for (int t = 0; t < 100000; ++t) {
    const std::size_t m = pick_m(rng);
    const Vector s1 = uniform_vector(rng, m, 10.0);
    const Vector s2 = uniform_vector(rng, m, 10.0);
    const InequalityReport r = vector_smoothness_check(loss, s1, s2, grades(rng, m, 4));
    vec_viol += r.passes ? 0 : 1;
    if (r.rhs > 0.0) vec_worst = std::max(vec_worst, r.lhs / r.rhs);
  }
  return {self_viol == 0 && vec_viol == 0,
          "self_bounding_violations=" + std::to_string(self_viol) + "/100000 max_ratio=" + fmt(self_worst) +
              " vector_smoothness_violations=" + std::to_string(vec_viol) + "/100000 max_ratio=" + fmt(vec_worst)};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 8: closed forms against 50-digit oracles.
Outcome criterion8() {
  struct Row {
    double g, w, r;
    std::size_t m, n;
  };
  std::vector<Row> grid;
  const std::vector<std::size_t> ms{1, 5, 10, 100, 1000};
  const std::vector<std::size_t> ns{50, 200, 1000, 10000, 100000};
  const std::vector<std::tuple<double, double, double>> scales{{2.0, 1.0, 1.0}, {0.5, 3.0, 0.7}};
  for (const auto& [g, w, r] : scales) {
    for (std::size_t m : ms) {
      for (std::size_t n : ns) grid.push_back({g, w, r, m, n});
    }
  }
  double worst = 0.0;
  std::string worst_name;
  auto track = [&](const std::string& name, double lib, double ora) {
    const double e = rel_err(lib, ora);
    if (!(e <= worst) && !std::isnan(e)) {
      worst = e;
      worst_name = name;
    }
    if (std::isnan(e)) {
      worst = INFINITY;
      worst_name = name + "(nan)";
    }
  };
  double fixed_point_resid = 0.0;
  std::size_t k = 0;
  try {
    for (const Row& row : grid) {
      oracle::Consts c;
      c.g = row.g;
      c.h = 2.0;
      c.w = row.w;
      c.r = row.r;
      c.b = 100.0 * row.g * row.w * row.r + std::log(static_cast<double>(row.m));
      c.m = row.m;
      c.n = row.n;
      c.d = 2 + 37 * (k % 7);
      c.l_star = 0.05 * static_cast<double>(k % 5);
      BoundInputs in;
      in.g_inf = c.g;
      in.g_l2 = c.g;
      in.h_inf = c.h;
      in.b = c.b;
      in.m = c.m;
      in.n = c.n;
      in.d = c.d;
      in.delta = 0.05;
      in.l_star = c.l_star;
      in.spec = {NormKind::L2, c.w, c.r};
      BoundInputs in1 = in;
      in1.spec.norm_kind = NormKind::L1;

      track("lambda_default", lambda_default(c.g, c.w, c.n), oracle::lambda_default(c.g, c.w, c.n));
      track("eta_smooth", eta_smooth(c.w, c.h, c.l_star, c.n), oracle::eta_smooth(c.w, c.h, c.l_star, c.n));
      track("fast_rate", fast_rate_bound(in), oracle::fast_rate(c));
      const double s = c.g * c.w * c.r;
      // Multipliers keep every ceiling argument away from an integer.
      for (double eps : {0.3713 * s, 0.05171 * s, 1.3 * s}) {
        track("covering_l2", covering_bound(CoverVariant::L2, in, eps), oracle::covering_l2(c, eps));
        track("covering_l1", covering_bound(CoverVariant::L1, in1, eps), oracle::covering_l1(c, eps));
        track("covering_local", covering_bound(CoverVariant::Local, in, eps, 0.3),
              oracle::covering_local(c, eps, 0.3));
      }
      track("rademacher_l2", rademacher_bound(CoverVariant::L2, in), oracle::rademacher_l2(c));
      track("rademacher_l1", rademacher_bound(CoverVariant::L1, in1), oracle::rademacher_l1(c));
      track("rademacher_local", rademacher_bound(CoverVariant::Local, in, 0.2), oracle::rademacher_local(c, 0.2));
      const double scale = local_complexity_scale(in);
      track("local_scale", scale, oracle::local_scale(c).convert_to<double>());
      const double r_star = fixed_point_r_star(scale, c.b);
      track("r_star", r_star, oracle::fixed_point_bisection(scale, c.b, 0.5 * r_star, 2.0 * r_star));
      fixed_point_resid = std::max(fixed_point_resid, rel_err(psi_n(r_star, scale, c.b), r_star));
      ++k;
    }
  } catch (const std::exception& e) {
    return {false, std::string("exception on config ") + std::to_string(k) + ": " + e.what()};
  }
  const bool pass = worst <= 1e-9 && fixed_point_resid <= 1e-9;
  return {pass, "configs=" + std::to_string(grid.size()) + " max_rel_err=" + fmt(worst) + " (" + worst_name +
                    ") fixed_point_residual=" + fmt(fixed_point_resid) + " (limit 1e-09)"};
}

// 9: optimized Dudley integral of the l2 covering bound against the closed-form corollary.
Outcome criterion9() {
  std::size_t below = 0;
  std::size_t within3 = 0;
  std::size_t relaxed_below = 0;
  double worst_over = 0.0;
  double worst_factor = 0.0;
  double worst_relaxed = 0.0;
  std::size_t configs = 0;
  for (double s : {1.0, 2.0}) {
    for (std::size_t m : {2, 10, 50, 200, 1000}) {
      for (std::size_t n : {100, 10000}) {
        BoundInputs in;
        in.g_inf = s;
        in.g_l2 = s;
        in.b = std::log(static_cast<double>(m)) + 2.0 * s;
        in.m = m;
        in.n = n;
        in.spec = {NormKind::L2, 1.0, 1.0};
        const double closed = rademacher_bound(CoverVariant::L2, in);
        const auto cover = [&in](double e) { return covering_bound(CoverVariant::L2, in, e); };
        const double lo = 1e-3 * s;
        const auto bps = l2_covering_breakpoints(in, lo, in.b);
        const double dudley = optimize_dudley(cover, in.b, n, 1e-10, bps).value;
        // The same integral with the ceiling dropped, for the ledger analysis.
        const double lg = std::log2(2.0 * static_cast<double>(m * n) + 1.0);
        const auto relaxed = [&](double e) { return s * s / (e * e) * lg; };
        const double dudley_relaxed = optimize_dudley(relaxed, in.b, n, 1e-10).value;
        below += dudley <= closed ? 1 : 0;
        within3 += closed <= 3.0 * dudley ? 1 : 0;
        relaxed_below += dudley_relaxed <= closed ? 1 : 0;
        worst_over = std::max(worst_over, dudley / closed);
        worst_factor = std::max(worst_factor, closed / dudley);
        worst_relaxed = std::max(worst_relaxed, dudley_relaxed / closed);
        ++configs;
      }
    }
  }
  const bool pass = below == configs && within3 == configs;
  return {pass, "configs=" + std::to_string(configs) + " dudley<=closed_form:" + std::to_string(below) + "/" +
                    std::to_string(configs) + " max_dudley_over_closed=" + fmt(worst_over) +
                    " closed<=3*dudley:" + std::to_string(within3) + "/" + std::to_string(configs) +
                    " max_closed_over_dudley=" + fmt(worst_factor) +
                    " [info: ceiling dropped, dudley<=closed_form:" + std::to_string(relaxed_below) + "/" +
                    std::to_string(configs) + " max_ratio=" + fmt(worst_relaxed) + "]"};
}

struct GapRuns {
  GapVsMSummary listnet;
  GapVsMSummary ranksvm;
  double seconds = 0.0;
};

GapRuns run_gap_experiments() {
  const auto start = Clock::now();
  GapVsMConfig cfg;
  cfg.loss = SurrogateLoss::listnet();
  GapRuns out;
  out.listnet = run_gap_vs_m(cfg).summary;
  cfg.loss = SurrogateLoss::ranksvm();
  out.ranksvm = run_gap_vs_m(cfg).summary;
  out.seconds = seconds_since(start);
  return out;
}

// 10: the gap does not grow with m for ListNet; it does for RankSVM.
Outcome criterion10() {
  const GapRuns runs = run_gap_experiments();
  const auto& l = runs.listnet;
  const auto& r = runs.ranksvm;
  const bool pass = l.gap_ratio.estimate <= 1.5 && l.gap_ratio.high <= 2.0 &&
                    std::abs(l.chapelle_ratio - 5.0) <= 1e-9 && r.gap_ratio.estimate >= 2.0 &&
                    runs.seconds < 600.0;
  return {pass, "listnet gap_ratio=" + fmt(l.gap_ratio.estimate) + " (<=1.5) ci90=[" + fmt(l.gap_ratio.low) + ", " +
                    fmt(l.gap_ratio.high) + "] (upper<=2) raw_gap_ratio=" + fmt(l.raw_gap_ratio) +
                    " chapelle_ratio=" + fmt(l.chapelle_ratio) + " (=5) ranksvm gap_ratio=" +
                    fmt(r.gap_ratio.estimate) + " (>=2) ci90=[" + fmt(r.gap_ratio.low) + ", " + fmt(r.gap_ratio.high) +
                    "] runtime=" + fmt(runs.seconds) + "s (limit 600s)"};
}

struct RateRuns {
  RateVsNSummary realizable;
  RateVsNSummary noisy;
  double seconds = 0.0;
};

RateRuns run_rate_experiments() {
  const auto start = Clock::now();
  RateVsNConfig cfg;
  RateRuns out;
  cfg.mode = RateMode::Realizable;
  out.realizable = run_rate_vs_n(cfg).summary;
  cfg.mode = RateMode::Noisy;
  out.noisy = run_rate_vs_n(cfg).summary;
  out.seconds = seconds_since(start);
  return out;
}

// 11: optimistic rates for a smooth loss.
Outcome criterion11() {
  const RateRuns runs = run_rate_experiments();
  const double a = runs.realizable.slope.estimate;
  const double b = runs.noisy.slope.estimate;
  const bool pass = a <= -0.75 && b >= -0.65 && b <= -0.35 && runs.seconds < 900.0;
  return {pass, "realizable_slope=" + fmt(a) + " (<=-0.75) noisy_slope=" + fmt(b) + " (in [-0.65, -0.35]) l_star=" +
                    fmt(runs.noisy.l_star) + " runtime=" + fmt(runs.seconds) + "s (limit 900s)"};
}

// 12: every RERM run of criteria 10 and 11 stays under the RERM excess-risk bound.
Outcome criterion12() {
  const GapRuns gap = run_gap_experiments();
  const RateRuns rate = run_rate_experiments();
  const std::size_t violations = gap.listnet.rerm_violations + gap.ranksvm.rerm_violations +
                                 rate.realizable.rerm_violations + rate.noisy.rerm_violations;
  const std::size_t runs =
      gap.listnet.rerm_runs + gap.ranksvm.rerm_runs + rate.realizable.rerm_runs + rate.noisy.rerm_runs;
  return {violations == 0 && runs > 0,
          "rerm_runs=" + std::to_string(runs) + " violations=" + std::to_string(violations) +
              " (gap listnet " + std::to_string(gap.listnet.rerm_violations) + "/" +
              std::to_string(gap.listnet.rerm_runs) + ", gap ranksvm " + std::to_string(gap.ranksvm.rerm_violations) +
              "/" + std::to_string(gap.ranksvm.rerm_runs) + ", rate realizable " +
              std::to_string(rate.realizable.rerm_violations) + "/" + std::to_string(rate.realizable.rerm_runs) +
              ", rate noisy " + std::to_string(rate.noisy.rerm_violations) + "/" +
              std::to_string(rate.noisy.rerm_runs) + ")"};
}

// 13: grid Monte-Carlo Rademacher estimates against the l2 corollary.
Outcome criterion13() {
  struct Cfg {
    std::size_t n, m, d;
  };
  const std::vector<Cfg> cfgs{{4, 2, 1}, {6, 3, 1}, {8, 4, 2}, {10, 2, 2}, {12, 8, 1},
                              {12, 5, 2}, {14, 6, 1}, {16, 8, 2}, {16, 3, 1}, {11, 7, 2}};
  const auto loss = SurrogateLoss::listnet();
  const ClassSpec spec{NormKind::L2, 1.0, 1.0};
  std::size_t below = 0;
  std::size_t agree = 0;
  std::size_t exhaustive_runs = 0;
  double worst_ratio = 0.0;
  double worst_z = 0.0;
  std::uint64_t seed = 1300;
  try {
    for (const Cfg& c : cfgs) {
      SynthConfig sc;
      sc.n = c.n;
      sc.m = c.m;
      sc.d = c.d;
      sc.seed = seed++;
      sc.label_mode = RandomLabels{4};
      const Dataset data = generate(sc);
      RademacherOptions opt;
      opt.grid_pitch = c.d == 1 ? 1.0 / 1000.0 : 1.0 / 100.0;
      opt.seed = seed++;
      const RademacherEstimate mc = monte_carlo_rademacher(loss, spec, data, 1000, opt);
      const LossConstants k = loss.constants(spec, c.m);
      BoundInputs in;
      in.g_inf = k.lipschitz_inf;
      in.g_l2 = k.lipschitz_l2;
      in.b = k.uniform_bound;
      in.m = c.m;
      in.n = c.n;
      in.d = c.d;
      in.spec = spec;
      const double closed = rademacher_bound(CoverVariant::L2, in);
      below += mc.mean <= closed ? 1 : 0;
      worst_ratio = std::max(worst_ratio, mc.mean / closed);
      if (c.n <= 12) {
        const RademacherEstimate ex = exhaustive_rademacher(loss, spec, data, opt);
        const double z = std::abs(ex.mean - mc.mean) / mc.std_error;
        agree += z <= 3.0 ? 1 : 0;
        worst_z = std::max(worst_z, z);
        ++exhaustive_runs;
      }
    }
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
  const bool pass = below == cfgs.size() && agree == exhaustive_runs;
  return {pass, "mc<=closed_form:" + std::to_string(below) + "/" + std::to_string(cfgs.size()) +
                    " max_mc_over_closed=" + fmt(worst_ratio) + " exhaustive_vs_mc_within_3se:" +
                    std::to_string(agree) + "/" + std::to_string(exhaustive_runs) + " max_z=" + fmt(worst_z)};
}

// 14: LETOR round trip and malformed-line rejection.
Outcome criterion14() {
  std::mt19937_64 rng(1400);
  std::size_t round_trip_ok = 0;
  for (int t = 0; t < 100; ++t) {
    SynthConfig sc;
    sc.m = 1 + rng() % 20;
    sc.d = 1 + rng() % 12;
    sc.n = 1 + rng() % 15;
    sc.seed = rng();
    sc.input_radius = std::pow(10.0, static_cast<double>(rng() % 7) - 3.0);
    sc.label_mode = RandomLabels{static_cast<int>(rng() % 5)};
    const Dataset data = generate(sc);
    const Dataset back = parse_letor_string(serialize_letor_string(data)).dataset;
    bool same = back.size() == data.size();
    for (std::size_t i = 0; same && i < data.size(); ++i) {
      same = back[i].labels() == data[i].labels() && back[i].num_docs() == data[i].num_docs() &&
             back[i].dim() == data[i].dim();
      const auto a = data[i].features().data();
      const auto b = back[i].features().data();
      for (std::size_t k = 0; same && k < a.size(); ++k) {
        same = std::abs(a[k] - b[k]) <= 5e-9 * std::abs(a[k]);
      }
    }
    round_trip_ok += same ? 1 : 0;
  }
  const std::vector<std::pair<std::string, std::size_t>> malformed{
      {"1 qid:1 1:0.5\nabc qid:1 1:0.5\n", 2},
      {"1 qid:1 1:0.5\n0 qid:1 1:0.5\n\n# c\n2 id:1 1:0.5\n", 5},
      {"1 qid:1 1:0.5 2:x\n", 1},
      {"1 qid:1 1:0.5\n1 qid:1 0:0.5\n", 2},
      {"1 qid:1 1:0.5\n1 qid:1 3:1 3:2\n", 2},
      {"1 qid:1 1:0.5\n-2 qid:1 1:0.5\n", 2},
      {"1 qid:1 1:0.5\n1 qid:1 1:inf\n", 2},
      {"1 qid:1 1:0.5\n1 qid:1 1=0.5\n", 2},
      {"1\n", 1},
  };
  std::size_t rejected = 0;
  for (const auto& [text, line] : malformed) {
    try {
      parse_letor_string(text);
    } catch (const LetorParseError& e) {
      rejected += e.line() == line ? 1 : 0;
    }
  }
  const bool pass = round_trip_ok == 100 && rejected == malformed.size();
  return {pass, "round_trips=" + std::to_string(round_trip_ok) + "/100 malformed_rejected_at_correct_line=" +
                    std::to_string(rejected) + "/" + std::to_string(malformed.size())};
}

const std::vector<std::function<Outcome()>> kCriteria{criterion1, criterion2,  criterion3,  criterion4, criterion5,
                                                      criterion6, criterion7,  criterion8,  criterion9, criterion10,
                                                      criterion11, criterion12, criterion13, criterion14};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: ltrgen_acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) selected.push_back(k);
  }
  bool all = true;
  for (int k : selected) {
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << k << "\n";
      return 2;
    }
    Outcome out;
    try {
      out = kCriteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k << ": " << (out.pass ? "PASS" : "FAIL") << " " << out.detail << std::endl;
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
