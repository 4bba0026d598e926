#include "ltrgen/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ltrgen/csv.hpp"
#include "ltrgen/ranking.hpp"
#include "ltrgen/synth.hpp"

namespace ltrgen {

std::string to_string(TrainerKind kind) {
  switch (kind) {
    case TrainerKind::Rerm:
      return "rerm";
    case TrainerKind::Ogd:
      return "ogd";
    case TrainerKind::Erm:
      return "erm";
  }
  return "?";
}

TrainerKind trainer_kind_from_string(const std::string& text) {
  if (text == "rerm") return TrainerKind::Rerm;
  if (text == "ogd") return TrainerKind::Ogd;
  if (text == "erm") return TrainerKind::Erm;
  throw std::invalid_argument("unknown trainer '" + text + "' (expected rerm, ogd or erm)");
}

std::string to_string(RateMode mode) { return mode == RateMode::Realizable ? "realizable" : "noisy"; }

RateMode rate_mode_from_string(const std::string& text) {
  if (text == "realizable") return RateMode::Realizable;
  if (text == "noisy") return RateMode::Noisy;
  throw std::invalid_argument("unknown mode '" + text + "' (expected realizable or noisy)");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer applied to a running mix
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

std::vector<std::string> ExperimentResult::header() {
  std::vector<std::string> h{"sweep_variable", "sweep_value", "trial",     "trainer",
                             "train_loss",     "test_loss",   "gap",       "centered_gap",
                             "excess",         "ndcg_at_1",   "seed"};
  for (const auto& c : BoundReport::columns()) h.push_back(c);
  return h;
}

std::vector<std::string> ExperimentResult::cells() const {
  std::vector<std::string> c{sweep_variable,
                             format_real(sweep_value),
                             std::to_string(trial),
                             trainer,
                             format_real(train_loss),
                             format_real(test_loss),
                             format_real(gap),
                             centered_gap ? format_real(*centered_gap) : "NA",
                             excess ? format_real(*excess) : "NA",
                             format_real(ndcg_at_1),
                             std::to_string(seed)};
  for (const auto& v : bounds.cells()) c.push_back(v);
  return c;
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& rows) {
  CsvWriter w(out);
  w.write_row(ExperimentResult::header());
  for (const auto& r : rows) w.write_row(r.cells());
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  double mx = 0.0;
  double my = 0.0;
  const double k = static_cast<double>(x.size());
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw NumericalDomainError("loglog_slope: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i] / k;
    my += ly[i] / k;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> resample(const std::vector<double>& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  std::vector<double> out(v.size());
  for (double& x : out) x = v[pick(rng)];
  return out;
}

Vector random_direction(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(d);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (double& x : w) {
      x = normal(rng);
      sq += x * x;
    }
  } while (sq == 0.0);
  for (double& x : w) x /= std::sqrt(sq);
  return w;
}

double mean_ndcg_at_1(const Dataset& data, std::span<const double> w) {
  double total = 0.0;
  for (const auto& q : data) total += ndcg_at_k(q.features().multiply(w), q.labels(), 1);
  return total / static_cast<double>(data.size());
}

TrainConfig base_train_config(const ClassSpec& spec, const SurrogateLoss& loss, std::uint64_t seed) {
  TrainConfig tc;
  tc.spec = spec;
  tc.loss = loss;
  tc.seed = seed;
  tc.tolerance = 1e-7;
  tc.max_iterations = 3000;
  tc.epochs = 20;
  return tc;
}

TrainedModel train_with(TrainerKind kind, const Dataset& data, TrainConfig tc, const ScoreLoss& loss) {
  switch (kind) {
    case TrainerKind::Rerm:
      return rerm_train(data, tc, loss);
    case TrainerKind::Ogd:
      tc.step_policy = OgdRegretStep{};
      return ogd_train(data, tc, loss);
    case TrainerKind::Erm:
      return erm_train(data, tc, loss);
  }
  throw std::logic_error("unreachable trainer kind");
}

// Minimizer of the held-out loss over the weight ball, used as the comparator.
Vector reference_minimizer(const Dataset& data, const ClassSpec& spec, const ScoreLoss& loss,
                           bool smooth, std::uint64_t seed) {
  TrainConfig tc = base_train_config(spec, SurrogateLoss::listnet(), seed);
  tc.lambda = 0.0;
  tc.tolerance = 1e-9;
  tc.max_iterations = 5000;
  if (smooth) return rerm_train(data, tc, loss).weights.w;
  tc.epochs = 30;
  return erm_train(data, tc, loss).weights.w;
}

BoundInputs inputs_for(const SurrogateLoss& loss, const ClassSpec& spec, std::size_t m, std::size_t n,
                       std::size_t d, double delta) {
  const LossConstants c = loss.constants(spec, m);
  BoundInputs in;
  in.g_inf = c.lipschitz_inf;
  in.g_l2 = c.lipschitz_l2;
  in.h_inf = c.smoothness_inf;
  in.b = c.uniform_bound;
  in.spec = spec;
  in.m = m;
  in.n = n;
  in.d = d;
  in.delta = delta;
  return in;
}

}  // namespace

void GapVsMConfig::validate() const {
  spec.validate();
  if (m_values.size() < 2) throw std::invalid_argument("gap-vs-m: need at least two m values");
  for (std::size_t m : m_values) {
    if (m < 1) throw std::invalid_argument("gap-vs-m: m values must be >= 1");
  }
  if (n < 1 || d < 1 || trials < 1 || test_factor < 1) {
    throw std::invalid_argument("gap-vs-m: n, d, trials and test_factor must be >= 1");
  }
  if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw std::invalid_argument("gap-vs-m: flip_prob must lie in [0, 1]");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("gap-vs-m: confidence must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("gap-vs-m: delta must lie in (0, 1)");
}

GapVsMOutput run_gap_vs_m(const GapVsMConfig& config) {
  config.validate();
  GapVsMOutput out;
  const Vector w_true = random_direction(config.d, derive_seed(config.seed, 0xD1, 0));
  const bool smooth = config.loss.smoothness_inf().has_value();
  const bool with_reference = config.loss.convex();
  std::vector<std::vector<double>> gaps(config.m_values.size());
  std::vector<std::vector<double>> centered(config.m_values.size());
  for (std::size_t k = 0; k < config.m_values.size(); ++k) {
    const std::size_t m = config.m_values[k];
    BoundInputs bin = inputs_for(config.loss, config.spec, m, config.n, config.d, config.delta);
    const BoundReport report = make_bound_report(bin);
    SynthConfig sc;
    sc.m = m;
    sc.d = config.d;
    sc.input_radius = config.spec.input_radius;
    sc.row_norm = config.spec.norm_kind == NormKind::L2 ? RowNorm::L2 : RowNorm::Linf;
    sc.label_mode = NoisyLabels{w_true, config.flip_prob, config.y_max};

    // Reference models per m, fit on data that no trial sees: the held-out
    // minimizer is the excess-risk comparator; a model trained like the trials
    // (same lambda) is the control variate for the gap.
    Vector w_ref;
    Vector w_control;
    if (with_reference) {
      sc.n = config.n * config.test_factor;
      sc.seed = derive_seed(config.seed, k + 1, 0xEF);
      const Dataset reference = generate(sc);
      w_ref = reference_minimizer(reference, config.spec, config.loss, smooth,
                                  derive_seed(config.seed, k + 1, 0xF0));
      sc.n = config.n;
      sc.seed = derive_seed(config.seed, k + 1, 0xF1);
      const Dataset sizing = generate(sc);
      TrainConfig tc = base_train_config(config.spec, config.loss, derive_seed(config.seed, k + 1, 0xF2));
      if (!smooth) tc.max_iterations = 600;
      if (config.trainer == TrainerKind::Rerm) {
        tc.lambda = lambda_default(weight_space_lipschitz(config.loss, config.spec, sizing),
                                   config.spec.weight_radius, config.n);
      }
      w_control = train_with(config.trainer, reference, tc, config.loss).weights.w;
    }
    for (std::size_t t = 0; t < config.trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(config.seed, k + 1, t);
      sc.n = config.n;
      sc.seed = derive_seed(trial_seed, 1, 0);
      const Dataset train = generate(sc);
      sc.n = config.n * config.test_factor;
      sc.seed = derive_seed(trial_seed, 2, 0);
      const Dataset test = generate(sc);

      TrainConfig tc = base_train_config(config.spec, config.loss, derive_seed(trial_seed, 3, 0));
      if (!smooth) tc.max_iterations = 600;
      const TrainedModel model = train_with(config.trainer, train, tc, config.loss);
      ExperimentResult r;
      r.sweep_variable = "m";
      r.sweep_value = static_cast<double>(m);
      r.trial = t;
      r.trainer = to_string(config.trainer);
      r.train_loss = empirical_loss(config.loss, train, model.weights.w);
      r.test_loss = empirical_loss(config.loss, test, model.weights.w);
      r.gap = r.test_loss - r.train_loss;
      if (with_reference) {
        r.centered_gap = r.gap - (empirical_loss(config.loss, test, w_control) -
                                  empirical_loss(config.loss, train, w_control));
        if (config.compute_excess) r.excess = r.test_loss - empirical_loss(config.loss, test, w_ref);
        centered[k].push_back(*r.centered_gap);
      }
      r.bounds = report;
      r.ndcg_at_1 = mean_ndcg_at_1(test, model.weights.w);
      r.seed = trial_seed;
      if (config.trainer == TrainerKind::Rerm && r.excess && report.rerm) {
        ++out.summary.rerm_runs;
        if (*r.excess > *report.rerm) ++out.summary.rerm_violations;
      }
      gaps[k].push_back(r.gap);
      out.rows.push_back(std::move(r));
    }
    out.summary.m_values.push_back(m);
    out.summary.mean_gap.push_back(mean(gaps[k]));
    out.summary.mean_centered_gap.push_back(with_reference ? mean(centered[k]) : std::nan(""));
    out.summary.chapelle.push_back(report.chapelle_complexity.value_or(std::nan("")));
  }
  auto& s = out.summary;
  s.raw_gap_ratio = s.mean_gap.back() / s.mean_gap.front();
  s.chapelle_ratio = s.chapelle.back() / s.chapelle.front();
  // Without a reference model (nonconvex loss) the ratio falls back to raw gaps.
  const auto& series = with_reference ? centered : gaps;
  s.gap_ratio.estimate = mean(series.back()) / mean(series.front());
  std::mt19937_64 rng(derive_seed(config.seed, 0xB0, 0));
  std::vector<double> ratios;
  ratios.reserve(config.bootstrap);
  for (std::size_t b = 0; b < config.bootstrap; ++b) {
    ratios.push_back(mean(resample(series.back(), rng)) / mean(resample(series.front(), rng)));
  }
  if (!ratios.empty()) {
    const double tail = 0.5 * (1.0 - config.confidence);
    s.gap_ratio.low = percentile(ratios, tail);
    s.gap_ratio.high = percentile(ratios, 1.0 - tail);
  }
  return out;
}

void RateVsNConfig::validate() const {
  spec.validate();
  if (spec.norm_kind != NormKind::L2) throw std::invalid_argument("rate-vs-n: needs an L2 class");
  if (n_values.size() < 3) throw std::invalid_argument("rate-vs-n: need at least 3 n values to fit a slope");
  for (std::size_t n : n_values) {
    if (n < 3) throw std::invalid_argument("rate-vs-n: n values must be >= 3");
  }
  if (trials < 1 || m < 1 || d < 1 || pool_size < 1) {
    throw std::invalid_argument("rate-vs-n: trials, m, d and pool_size must be >= 1");
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("rate-vs-n: noise_std must be >= 0");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("rate-vs-n: confidence must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("rate-vs-n: delta must lie in (0, 1)");
}

RateVsNOutput run_rate_vs_n(const RateVsNConfig& config) {
  config.validate();
  RateVsNOutput out;
  const ListNetExcessLoss loss;
  const SurrogateLoss listnet = SurrogateLoss::listnet();
  Vector w_true = random_direction(config.d, derive_seed(config.seed, 0xD1, 0));
  for (double& x : w_true) x *= config.spec.weight_radius;

  SynthConfig sc;
  sc.m = config.m;
  sc.d = config.d;
  sc.input_radius = config.spec.input_radius;
  sc.row_norm = RowNorm::L2;
  sc.label_mode = ScoreLabels{w_true, config.mode == RateMode::Noisy ? config.noise_std : 0.0, 1.0};
  sc.n = config.pool_size;
  sc.seed = derive_seed(config.seed, 0xF00, 0);
  const Dataset pool = generate(sc);

  Vector w_star = w_true;
  if (config.mode == RateMode::Noisy) {
    w_star = reference_minimizer(pool, config.spec, loss, true, derive_seed(config.seed, 0xF01, 0));
  }
  const double l_star = empirical_loss(loss, pool, w_star);
  out.summary.l_star = l_star;

  std::vector<std::vector<double>> excess(config.n_values.size());
  for (std::size_t k = 0; k < config.n_values.size(); ++k) {
    const std::size_t n = config.n_values[k];
    BoundInputs bin = inputs_for(listnet, config.spec, config.m, n, config.d, config.delta);
    bin.l_star = l_star;
    const BoundReport report = make_bound_report(bin);
    for (std::size_t t = 0; t < config.trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(config.seed, k + 1, t);
      sc.n = n;
      sc.seed = derive_seed(trial_seed, 1, 0);
      const Dataset train = generate(sc);

      TrainConfig tc = base_train_config(config.spec, listnet, derive_seed(trial_seed, 3, 0));
      tc.tolerance = 1e-8;
      tc.max_iterations = 5000;
      const TrainedModel pilot = rerm_train(train, tc, loss);
      tc.step_policy = SmoothEtaStep{std::max(pilot.train_loss, 0.0), std::nullopt};
      const TrainedModel ogd = ogd_train(train, tc, loss);

      auto make_row = [&](const TrainedModel& model, const std::string& trainer) {
        ExperimentResult r;
        r.sweep_variable = "n";
        r.sweep_value = static_cast<double>(n);
        r.trial = t;
        r.trainer = trainer;
        r.train_loss = empirical_loss(loss, train, model.weights.w);
        r.test_loss = empirical_loss(loss, pool, model.weights.w);
        r.gap = r.test_loss - r.train_loss;
        r.excess = r.test_loss - l_star;
        r.bounds = report;
        r.ndcg_at_1 = mean_ndcg_at_1(pool, model.weights.w);
        r.seed = trial_seed;
        return r;
      };
      ExperimentResult ogd_row = make_row(ogd, "ogd");
      excess[k].push_back(*ogd_row.excess);
      out.rows.push_back(std::move(ogd_row));
      if (config.run_rerm) {
        ExperimentResult rerm_row = make_row(pilot, "rerm");
        ++out.summary.rerm_runs;
        if (report.rerm && *rerm_row.excess > *report.rerm) ++out.summary.rerm_violations;
        out.rows.push_back(std::move(rerm_row));
      }
    }
    out.summary.n_values.push_back(n);
    out.summary.mean_excess.push_back(mean(excess[k]));
  }
  std::vector<double> ns(config.n_values.begin(), config.n_values.end());
  auto& s = out.summary;
  auto positive_slope = [&](const std::vector<double>& means) {
    std::vector<double> clipped(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) clipped[i] = std::max(means[i], 1e-300);
    return loglog_slope(ns, clipped);
  };
  s.slope.estimate = positive_slope(s.mean_excess);
  std::mt19937_64 rng(derive_seed(config.seed, 0xB0, 0));
  std::vector<double> slopes;
  slopes.reserve(config.bootstrap);
  std::vector<double> means(excess.size());
  for (std::size_t b = 0; b < config.bootstrap; ++b) {
    for (std::size_t k = 0; k < excess.size(); ++k) means[k] = mean(resample(excess[k], rng));
    slopes.push_back(positive_slope(means));
  }
  if (!slopes.empty()) {
    const double tail = 0.5 * (1.0 - config.confidence);
    s.slope.low = percentile(slopes, tail);
    s.slope.high = percentile(slopes, 1.0 - tail);
  }
  return out;
}

}  // namespace ltrgen
