#include "ltrgen/verification.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ltrgen/ranking.hpp"

namespace ltrgen {

void SamplerSpec::validate() const {
  if (m < 1) throw std::invalid_argument("SamplerSpec: m must be >= 1");
  if (!(score_scale > 0.0)) throw std::invalid_argument("SamplerSpec: score_scale must be positive");
  if (label_range < 0) throw std::invalid_argument("SamplerSpec: label_range must be >= 0");
  if (trials < 1) throw std::invalid_argument("SamplerSpec: trials must be >= 1");
}

Vector finite_diff_gradient(const ScoreLoss& loss, std::span<const double> s,
                            std::span<const double> y, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  Vector probe(s.begin(), s.end());
  Vector g(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double orig = probe[j];
    probe[j] = orig + h;
    const double up = loss.value(probe, y);
    probe[j] = orig - h;
    const double down = loss.value(probe, y);
    probe[j] = orig;
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

double gradient_relative_error(const ScoreLoss& loss, std::span<const double> s,
                               std::span<const double> y, double h) {
  const Vector fd = finite_diff_gradient(loss, s, y, h);
  const Vector g = loss.gradient(s, y);
  Vector diff(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) diff[j] = fd[j] - g[j];
  return norm_l2(diff) / std::max(norm_l2(g), 1e-3);
}

double min_hinge_margin(std::span<const double> s, std::span<const double> y) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] > y[j]) best = std::min(best, std::abs(1.0 + s[j] - s[i]));
    }
  }
  return best;
}

LipschitzEstimate empirical_lipschitz_inf(const ScoreLoss& loss, const SamplerSpec& sampler) {
  sampler.validate();
  std::mt19937_64 rng(sampler.seed);
  std::uniform_real_distribution<double> score(-sampler.score_scale, sampler.score_scale);
  std::uniform_int_distribution<int> grade(0, sampler.label_range);
  LipschitzEstimate best;
  best.value = -1.0;
  Vector s(sampler.m);
  Vector y(sampler.m);
  for (std::size_t t = 0; t < sampler.trials; ++t) {
    for (std::size_t j = 0; j < sampler.m; ++j) {
      s[j] = score(rng);
      y[j] = grade(rng);
    }
    const double v = norm_l1(loss.gradient(s, y));
    if (v > best.value) {
      best.value = v;
      best.s_argmax = s;
      best.y_argmax = y;
    }
  }
  return best;
}

std::pair<Vector, Vector> listnet_adversarial_point(std::size_t m, double magnitude) {
  if (m < 2) throw std::invalid_argument("listnet_adversarial_point: m must be >= 2");
  Vector s(m, 0.0);
  Vector y(m, 0.0);
  y[0] = magnitude + std::log(static_cast<double>(m));
  s[1] = magnitude + std::log(static_cast<double>(m));
  return {s, y};
}

std::pair<Vector, Vector> ranksvm_witness(std::size_t m) {
  if (m < 1) throw std::invalid_argument("ranksvm_witness: m must be >= 1");
  Vector s(m, 0.0);
  Vector y(m, 0.0);
  for (std::size_t j = 0; j < m / 2; ++j) y[j] = 1.0;
  return {s, y};
}

OpNormResult op_norm_inf_to_1(const Matrix& mat) {
  if (mat.rows() != mat.cols()) throw ShapeError("op_norm_inf_to_1: matrix must be square");
  const std::size_t m = mat.rows();
  OpNormResult res;
  for (double v : mat.data()) res.abs_sum_bound += std::abs(v);
  if (m > 12) {
    res.value = res.abs_sum_bound;
    res.exact = false;
    return res;
  }
  res.exact = true;
  Vector mv(m);
  const std::size_t count = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::fill(mv.begin(), mv.end(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const double sign = (mask >> k) & 1U ? -1.0 : 1.0;
      for (std::size_t j = 0; j < m; ++j) mv[j] += mat(j, k) * sign;
    }
    res.value = std::max(res.value, norm_l1(mv));
  }
  return res;
}

DualNormReport verify_dual_norm_identity(const Matrix& x, double p, std::size_t samples,
                                         std::uint64_t seed) {
  if (!(p >= 1.0)) throw std::invalid_argument("verify_dual_norm_identity: p must be >= 1");
  const std::size_t m = x.rows();
  DualNormReport rep;
  for (std::size_t j = 0; j < m; ++j) rep.closed_form = std::max(rep.closed_form, norm_p(x.row(j), p));
  Vector v(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (double sign : {1.0, -1.0}) {
      std::fill(v.begin(), v.end(), 0.0);
      v[j] = sign;
      rep.basis_sup = std::max(rep.basis_sup, norm_p(x.multiply_transposed(v), p));
    }
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < samples; ++t) {
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = expo(rng);
      total += v[j];
    }
    for (std::size_t j = 0; j < m; ++j) v[j] = (coin(rng) ? 1.0 : -1.0) * v[j] / total;
    rep.sampled_sup = std::max(rep.sampled_sup, norm_p(x.multiply_transposed(v), p));
  }
  const double tol = 1e-12 * (1.0 + rep.closed_form);
  rep.passes = std::abs(rep.basis_sup - rep.closed_form) <= tol && rep.sampled_sup <= rep.closed_form + tol;
  return rep;
}

namespace {

double require_smoothness(const ScoreLoss& loss, const char* who) {
  const auto h = loss.smoothness_inf();
  if (!h) throw UnsupportedOperation(std::string(who) + ": " + loss.name() + " has no smoothness constant");
  return *h;
}

}  // namespace

InequalityReport self_bounding_check(const ScoreLoss& loss, const ClassSpec& spec,
                                     const Matrix& x, std::span<const double> y,
                                     std::span<const double> w) {
  const double h_phi = require_smoothness(loss, "self_bounding_check");
  spec.validate();
  if (spec.norm_kind != NormKind::L2) throw std::invalid_argument("self_bounding_check: needs an L2 class");
  if (input_radius(x, NormKind::L2) > spec.input_radius * (1.0 + 1e-12)) {
    throw std::invalid_argument("self_bounding_check: a row exceeds the class input radius");
  }
  const double h = h_phi * spec.input_radius * spec.input_radius;
  const Vector s = x.multiply(w);
  const double f = loss.value(s, y);
  const Vector grad_w = x.multiply_transposed(loss.gradient(s, y));
  InequalityReport rep;
  rep.lhs = norm_l2(grad_w);
  rep.rhs = std::sqrt(4.0 * h * std::max(f, 0.0));
  rep.passes = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-300;
  return rep;
}

InequalityReport vector_smoothness_check(const ScoreLoss& loss, std::span<const double> s1,
                                         std::span<const double> s2, std::span<const double> y) {
  const double h_phi = require_smoothness(loss, "vector_smoothness_check");
  if (s1.size() != s2.size()) throw ShapeError("vector_smoothness_check: score lengths differ");
  const double f1 = loss.value(s1, y);
  const double f2 = loss.value(s2, y);
  double dist = 0.0;
  for (std::size_t j = 0; j < s1.size(); ++j) dist = std::max(dist, std::abs(s1[j] - s2[j]));
  InequalityReport rep;
  rep.lhs = (f1 - f2) * (f1 - f2);
  rep.rhs = 6.0 * h_phi * (f1 + f2) * dist * dist;
  rep.passes = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-300;
  return rep;
}

std::string to_string(InnerOpt opt) { return opt == InnerOpt::Grid ? "grid" : "multistart"; }

namespace {

// Lattice points of spacing pitch * W inside the weight ball.
std::vector<Vector> ball_grid(const ClassSpec& spec, std::size_t d, double pitch) {
  const double w = spec.weight_radius;
  const long k = static_cast<long>(std::ceil(1.0 / pitch));
  const double step = w / static_cast<double>(k);
  std::vector<Vector> pts;
  std::vector<long> idx(d, -k);
  Vector p(d);
  while (true) {
    for (std::size_t a = 0; a < d; ++a) p[a] = step * static_cast<double>(idx[a]);
    if (weight_norm(p, spec.norm_kind) <= w * (1.0 + 1e-12)) pts.push_back(p);
    std::size_t a = 0;
    while (a < d && idx[a] == k) idx[a++] = -k;
    if (a == d) break;
    ++idx[a];
  }
  return pts;
}

// Column-major table: losses[i * G + g] = phi(X_i w_g, y_i).
struct LossTable {
  std::size_t n = 0;
  std::size_t points = 0;
  std::vector<double> losses;
};

LossTable tabulate(const ScoreLoss& loss, const Dataset& data, const std::vector<Vector>& pts) {
  LossTable t;
  t.n = data.size();
  t.points = pts.size();
  t.losses.resize(t.n * t.points);
  for (std::size_t i = 0; i < t.n; ++i) {
    const auto& q = data[i];
    for (std::size_t g = 0; g < t.points; ++g) {
      t.losses[i * t.points + g] = loss.value(q.features().multiply(pts[g]), q.labels());
    }
  }
  return t;
}

void check_grid_dimension(const Dataset& data) {
  if (data.dim() > 3) {
    throw std::invalid_argument("monte_carlo_rademacher: grid mode supports d <= 3; use multistart");
  }
}

// sup_w (1/n) sum_i sigma_i phi(X_i w, y_i) by projected ascent from several starts.
double multistart_sup(const ScoreLoss& loss, const ClassSpec& spec, const Dataset& data,
                      std::span<const double> sigma, std::size_t restarts, std::mt19937_64& rng) {
  const std::size_t d = data.dim();
  const double n = static_cast<double>(data.size());
  const double w_rad = spec.weight_radius;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto objective = [&](const Vector& w) {
    double v = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      v += sigma[i] * loss.value(data[i].features().multiply(w), data[i].labels());
    }
    return v / n;
  };
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Vector w(d);
    if (r == 0) {
      std::fill(w.begin(), w.end(), 0.0);
    } else {
      for (double& x : w) x = normal(rng);
      const double nrm = norm_l2(w);
      const double radius = w_rad * std::pow(unit(rng), 1.0 / static_cast<double>(d));
      for (double& x : w) x *= radius / std::max(nrm, 1e-300);
      w = project(w, spec);
    }
    double current = objective(w);
    best = std::max(best, current);
    for (int t = 1; t <= 200; ++t) {
      Vector g(d, 0.0);
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& q = data[i];
        const Vector s = q.features().multiply(w);
        const Vector gw = q.features().multiply_transposed(loss.gradient(s, q.labels()));
        for (std::size_t k = 0; k < d; ++k) g[k] += sigma[i] * gw[k] / n;
      }
      const double gn = norm_l2(g);
      if (gn < 1e-14) break;
      const double step = 0.5 * w_rad / std::sqrt(static_cast<double>(t));
      Vector cand(d);
      for (std::size_t k = 0; k < d; ++k) cand[k] = w[k] + step * g[k] / gn;
      cand = project(cand, spec);
      const double v = objective(cand);
      w = std::move(cand);
      current = v;
      best = std::max(best, current);
    }
  }
  return best;
}

RademacherEstimate summarize(const std::vector<double>& values, InnerOpt opt, bool exhaustive) {
  RademacherEstimate est;
  est.trials = values.size();
  est.inner_opt = opt;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (!exhaustive && values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return est;
}

}  // namespace

RademacherEstimate monte_carlo_rademacher(const ScoreLoss& loss, const ClassSpec& spec,
                                          const Dataset& data, std::size_t trials,
                                          const RademacherOptions& options) {
  spec.validate();
  if (trials < 1) throw std::invalid_argument("monte_carlo_rademacher: trials must be >= 1");
  const std::size_t n = data.size();
  std::vector<Vector> sigmas(trials, Vector(n));
  for (std::size_t t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution coin(0.5);
    for (double& s : sigmas[t]) s = coin(rng) ? 1.0 : -1.0;
  }
  std::vector<double> values(trials);
  if (options.inner_opt == InnerOpt::Grid) {
    check_grid_dimension(data);
    const LossTable table = tabulate(loss, data, ball_grid(spec, data.dim(), options.grid_pitch));
    std::vector<double> acc(table.points);
    for (std::size_t t = 0; t < trials; ++t) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double s = sigmas[t][i];
        const double* col = table.losses.data() + i * table.points;
        for (std::size_t g = 0; g < table.points; ++g) acc[g] += s * col[g];
      }
      values[t] = *std::max_element(acc.begin(), acc.end()) / static_cast<double>(n);
    }
  } else {
    for (std::size_t t = 0; t < trials; ++t) {
      std::mt19937_64 rng(options.seed * 1000003ULL + t);
      values[t] = multistart_sup(loss, spec, data, sigmas[t], options.restarts, rng);
    }
  }
  return summarize(values, options.inner_opt, false);
}

RademacherEstimate exhaustive_rademacher(const ScoreLoss& loss, const ClassSpec& spec,
                                         const Dataset& data, const RademacherOptions& options) {
  spec.validate();
  const std::size_t n = data.size();
  if (n > 20) throw std::invalid_argument("exhaustive_rademacher: n must be <= 20");
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> values(count);
  if (options.inner_opt == InnerOpt::Grid) {
    check_grid_dimension(data);
    const LossTable table = tabulate(loss, data, ball_grid(spec, data.dim(), options.grid_pitch));
    // Gray-code walk: each step flips one sign and updates the sums in place.
    Vector sigma(n, 1.0);
    std::vector<double> acc(table.points, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* col = table.losses.data() + i * table.points;
      for (std::size_t g = 0; g < table.points; ++g) acc[g] += col[g];
    }
    values[0] = *std::max_element(acc.begin(), acc.end()) / static_cast<double>(n);
    for (std::size_t k = 1; k < count; ++k) {
      const std::size_t flip = static_cast<std::size_t>(std::countr_zero(k));
      sigma[flip] = -sigma[flip];
      const double delta = 2.0 * sigma[flip];
      const double* col = table.losses.data() + flip * table.points;
      for (std::size_t g = 0; g < table.points; ++g) acc[g] += delta * col[g];
      values[k] = *std::max_element(acc.begin(), acc.end()) / static_cast<double>(n);
    }
  } else {
    Vector sigma(n);
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t i = 0; i < n; ++i) sigma[i] = (k >> i) & 1U ? -1.0 : 1.0;
      std::mt19937_64 rng(options.seed * 1000003ULL + k);
      values[k] = multistart_sup(loss, spec, data, sigma, options.restarts, rng);
    }
  }
  return summarize(values, options.inner_opt, true);
}

}  // namespace ltrgen
