// Command-line front end: verification suites, bound tables, the gap-vs-m and
// rate-vs-n experiments, training on LETOR files, and LETOR round-trips.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ltrgen/bounds.hpp"
#include "ltrgen/csv.hpp"
#include "ltrgen/experiments.hpp"
#include "ltrgen/letor.hpp"
#include "ltrgen/losses.hpp"
#include "ltrgen/ranking.hpp"
#include "ltrgen/trainers.hpp"
#include "ltrgen/verify_suite.hpp"

namespace {

using namespace ltrgen;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

/// A usage problem detected after flag parsing (bad value, missing constant).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes CSV to --out when given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  /// Summaries go to stdout when the CSV goes to a file, stderr otherwise.
  std::ostream& summary() { return file_ ? std::cout : std::cerr; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

SurrogateLoss make_loss(const std::string& name, double sigma, int y_max) {
  switch (loss_kind_from_string(name)) {
    case LossKind::ListNet:
      return SurrogateLoss::listnet().with_y_max(y_max);
    case LossKind::SmoothDCG1:
      return SurrogateLoss::smooth_dcg1(sigma, y_max);
    case LossKind::RankSVM:
      return SurrogateLoss::ranksvm().with_y_max(y_max);
  }
  throw UsageError("unknown loss");
}

/// "a:b" expands to a, 2a, 4a, ... <= b; a plain list is taken as is.
std::vector<std::size_t> parse_m_sweep(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
    return out;
  }
  const std::size_t a = std::stoul(text.substr(0, colon));
  const std::size_t b = std::stoul(text.substr(colon + 1));
  if (a < 1 || b < a) throw UsageError("--sweep-m expects a:b with 1 <= a <= b");
  std::vector<std::size_t> out;
  for (std::size_t m = a; m <= b; m *= 2) out.push_back(m);
  return out;
}

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--seed", flags.seed, "Random seed")->capture_default_str();
  sub->add_option("--out", flags.out, "CSV output path (default: stdout)");
  sub->add_option("--config", "Flat 'key = value' file; '#' starts a comment; flags override it");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Expands "--config <path>" into "--key value" arguments placed before the
/// command-line flags of the same subcommand. Keys that also appear as flags
/// on the command line are skipped so the flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> given;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      continue;
    }
    if (args[i].rfind("--", 0) == 0) given.push_back(args[i].substr(2, args[i].find('=') - 2));
    out.push_back(args[i]);
  }
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::vector<std::string> injected;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw UsageError(path + ":" + std::to_string(number) + ": empty key");
    if (std::find(given.begin(), given.end(), key) != given.end()) continue;
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  // args[0] is the subcommand name.
  if (out.empty()) return injected;
  out.insert(out.begin() + 1, injected.begin(), injected.end());
  return out;
}

int cmd_verify(const VerifyOptions& opt, const std::string& out_path) {
  const std::vector<CheckRow> rows = run_verify(opt);
  Output out(out_path);
  write_checks_csv(out.stream(), rows);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  out.summary() << "verify " << to_string(opt.loss) << ": " << rows.size() - failed << "/" << rows.size()
                << " checks passed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ltrgen: generalization bounds and checks for linear learning-to-rank surrogates"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the constant and inequality checks for one loss");
  CommonFlags verify_common;
  std::string verify_loss = "listnet";
  VerifyOptions vopt;
  std::string sweep_m;
  add_common(verify, verify_common);
  verify->add_option("--loss", verify_loss, "listnet | sdcg | ranksvm")->capture_default_str();
  verify->add_option("--sigma", vopt.sigma, "SmoothDCG@1 temperature")->capture_default_str();
  verify->add_option("--ymax", vopt.y_max, "Largest relevance grade")->capture_default_str();
  verify->add_option("--trials", vopt.trials, "Random draws per Lipschitz check")->capture_default_str();
  verify->add_option("--points", vopt.points, "Random points for gradient and inequality checks")
      ->capture_default_str();
  verify->add_option("--sweep-m", sweep_m, "Document counts: a:b doubles from a to b, or a comma list");

  // gap-vs-m
  auto* gap = app.add_subcommand("gap-vs-m", "Generalization gap as the list length m grows");
  CommonFlags gap_common;
  GapVsMConfig gcfg;
  std::string gap_loss = "listnet";
  std::string gap_trainer = "rerm";
  std::string gap_norm = "l2";
  double gap_sigma = 1.0;
  add_common(gap, gap_common);
  gap->add_option("--loss", gap_loss, "listnet | sdcg | ranksvm")->capture_default_str();
  gap->add_option("--sigma", gap_sigma, "SmoothDCG@1 temperature")->capture_default_str();
  gap->add_option("--trainer", gap_trainer, "rerm | ogd | erm")->capture_default_str();
  gap->add_option("--m", gcfg.m_values, "Comma-separated list lengths")->delimiter(',')->capture_default_str();
  gap->add_option("--n", gcfg.n, "Training queries")->capture_default_str();
  gap->add_option("--d", gcfg.d, "Feature dimension")->capture_default_str();
  gap->add_option("--trials", gcfg.trials, "Trials per m")->capture_default_str();
  gap->add_option("--W", gcfg.spec.weight_radius, "Weight radius")->capture_default_str();
  gap->add_option("--R", gcfg.spec.input_radius, "Input radius")->capture_default_str();
  gap->add_option("--norm", gap_norm, "l2 | l1")->capture_default_str();
  gap->add_option("--flip", gcfg.flip_prob, "Label resampling probability")->capture_default_str();
  gap->add_option("--ymax", gcfg.y_max, "Largest relevance grade")->capture_default_str();
  gap->add_option("--test-factor", gcfg.test_factor, "Held-out size as a multiple of n")->capture_default_str();
  gap->add_option("--delta", gcfg.delta, "Confidence parameter of the bounds")->capture_default_str();
  gap->add_option("--bootstrap", gcfg.bootstrap, "Bootstrap replicates")->capture_default_str();

  // rate-vs-n
  auto* rate = app.add_subcommand("rate-vs-n", "Excess risk of a smooth loss as n grows");
  CommonFlags rate_common;
  RateVsNConfig rcfg;
  std::string rate_mode = "realizable";
  add_common(rate, rate_common);
  rate->add_option("--mode", rate_mode, "realizable | noisy")->capture_default_str();
  rate->add_option("--n", rcfg.n_values, "Comma-separated training sizes (at least 3)")
      ->delimiter(',')
      ->capture_default_str();
  rate->add_option("--trials", rcfg.trials, "Trials per n")->capture_default_str();
  rate->add_option("--m", rcfg.m, "Documents per query")->capture_default_str();
  rate->add_option("--d", rcfg.d, "Feature dimension")->capture_default_str();
  rate->add_option("--W", rcfg.spec.weight_radius, "Weight radius (also the norm of the true weights)")
      ->capture_default_str();
  rate->add_option("--R", rcfg.spec.input_radius, "Input radius")->capture_default_str();
  rate->add_option("--noise", rcfg.noise_std, "Label noise std in noisy mode")->capture_default_str();
  rate->add_option("--pool", rcfg.pool_size, "Evaluation pool size")->capture_default_str();
  rate->add_option("--delta", rcfg.delta, "Confidence parameter of the bounds")->capture_default_str();
  rate->add_option("--bootstrap", rcfg.bootstrap, "Bootstrap replicates")->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate every bound for a grid of constants");
  CommonFlags bounds_common;
  std::optional<std::string> b_loss;
  std::optional<double> b_g, b_gl2, b_h, b_b, b_lstar;
  double b_sigma = 1.0;
  int b_ymax = 4;
  double b_w = 1.0;
  double b_r = 1.0;
  std::string b_norm = "l2";
  std::vector<std::size_t> b_m, b_n;
  std::size_t b_d = 10;
  double b_delta = 0.05;
  add_common(bounds, bounds_common);
  bounds->add_option("--loss", b_loss, "Derive G, G_l2, H, B from this loss (listnet | sdcg | ranksvm)");
  bounds->add_option("--sigma", b_sigma, "SmoothDCG@1 temperature")->capture_default_str();
  bounds->add_option("--ymax", b_ymax, "Largest relevance grade")->capture_default_str();
  bounds->add_option("--G", b_g, "l-infinity Lipschitz constant of the loss");
  bounds->add_option("--G-l2", b_gl2, "l2 Lipschitz constant (baseline bound); defaults to --G");
  bounds->add_option("--H", b_h, "l-infinity smoothness constant");
  bounds->add_option("--B", b_b, "Uniform bound on the loss");
  bounds->add_option("--L-star", b_lstar, "Optimal expected loss (smooth bounds)");
  bounds->add_option("--W", b_w, "Weight radius")->capture_default_str();
  bounds->add_option("--R", b_r, "Input radius")->capture_default_str();
  bounds->add_option("--norm", b_norm, "l2 | l1")->capture_default_str();
  bounds->add_option("--m", b_m, "Comma-separated list lengths")->delimiter(',')->required();
  bounds->add_option("--n", b_n, "Comma-separated sample sizes")->delimiter(',')->required();
  bounds->add_option("--d", b_d, "Feature dimension")->capture_default_str();
  bounds->add_option("--delta", b_delta, "Confidence parameter")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Train a linear scorer on a LETOR file");
  CommonFlags train_common;
  std::string t_data, t_loss = "listnet", t_trainer = "rerm", t_norm = "l2";
  double t_sigma = 1.0;
  double t_w = 1.0;
  std::optional<double> t_r, t_lambda;
  int t_epochs = 20;
  add_common(train, train_common);
  train->add_option("--data", t_data, "LETOR/SVMlight training file")->required();
  train->add_option("--loss", t_loss, "listnet | sdcg | ranksvm")->capture_default_str();
  train->add_option("--sigma", t_sigma, "SmoothDCG@1 temperature")->capture_default_str();
  train->add_option("--trainer", t_trainer, "rerm | ogd | erm")->capture_default_str();
  train->add_option("--W", t_w, "Weight radius")->capture_default_str();
  train->add_option("--R", t_r, "Input radius (default: measured on the data)");
  train->add_option("--norm", t_norm, "l2 | l1")->capture_default_str();
  train->add_option("--lambda", t_lambda, "RERM regularization (default: from the constants)");
  train->add_option("--epochs", t_epochs, "Passes for erm")->capture_default_str();

  // parse
  auto* parse = app.add_subcommand("parse", "Parse a LETOR file and write it back out");
  std::string p_in, p_out;
  parse->add_option("--in", p_in, "Input LETOR file")->required();
  parse->add_option("--out", p_out, "Output path (default: stdout)");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      vopt.loss = loss_kind_from_string(verify_loss);
      vopt.seed = verify_common.seed;
      if (!sweep_m.empty()) vopt.m_values = parse_m_sweep(sweep_m);
      return cmd_verify(vopt, verify_common.out);
    }
    if (gap->parsed()) {
      gcfg.loss = make_loss(gap_loss, gap_sigma, gcfg.y_max);
      gcfg.trainer = trainer_kind_from_string(gap_trainer);
      gcfg.spec.norm_kind = norm_kind_from_string(gap_norm);
      gcfg.seed = gap_common.seed;
      gcfg.validate();
      const GapVsMOutput res = run_gap_vs_m(gcfg);
      Output out(gap_common.out);
      write_results_csv(out.stream(), res.rows);
      const auto& s = res.summary;
      auto& log = out.summary();
      for (std::size_t k = 0; k < s.m_values.size(); ++k) {
        log << "m=" << s.m_values[k] << " mean_gap=" << format_real(s.mean_gap[k])
            << " mean_centered_gap=" << format_real(s.mean_centered_gap[k])
            << " chapelle_complexity=" << format_real(s.chapelle[k]) << "\n";
      }
      log << "gap_ratio=" << format_real(s.gap_ratio.estimate) << " ci=[" << format_real(s.gap_ratio.low) << ", "
          << format_real(s.gap_ratio.high) << "] raw_gap_ratio=" << format_real(s.raw_gap_ratio)
          << " chapelle_ratio=" << format_real(s.chapelle_ratio) << "\n";
      if (s.rerm_runs > 0) {
        log << "rerm_bound_violations=" << s.rerm_violations << "/" << s.rerm_runs << "\n";
      }
      return kExitOk;
    }
    if (rate->parsed()) {
      rcfg.mode = rate_mode_from_string(rate_mode);
      rcfg.seed = rate_common.seed;
      rcfg.validate();
      const RateVsNOutput res = run_rate_vs_n(rcfg);
      Output out(rate_common.out);
      write_results_csv(out.stream(), res.rows);
      const auto& s = res.summary;
      auto& log = out.summary();
      log << "l_star=" << format_real(s.l_star) << "\n";
      for (std::size_t k = 0; k < s.n_values.size(); ++k) {
        log << "n=" << s.n_values[k] << " mean_excess=" << format_real(s.mean_excess[k]) << "\n";
      }
      log << "slope=" << format_real(s.slope.estimate) << " ci=[" << format_real(s.slope.low) << ", "
          << format_real(s.slope.high) << "]\n";
      if (s.rerm_runs > 0) {
        log << "rerm_bound_violations=" << s.rerm_violations << "/" << s.rerm_runs << "\n";
      }
      return kExitOk;
    }
    if (bounds->parsed()) {
      if (!b_loss && !b_g) throw UsageError("bounds: missing required constant --G (or pass --loss)");
      Output out(bounds_common.out);
      CsvWriter w(out.stream());
      std::vector<std::string> header{"m", "n"};
      for (const auto& c : BoundReport::columns()) header.push_back(c);
      w.write_row(header);
      const ClassSpec spec{norm_kind_from_string(b_norm), b_w, b_r};
      std::optional<SurrogateLoss> loss;
      if (b_loss) loss = make_loss(*b_loss, b_sigma, b_ymax);
      for (std::size_t m : b_m) {
        for (std::size_t n : b_n) {
          BoundInputs in;
          in.spec = spec;
          in.m = m;
          in.n = n;
          in.d = b_d;
          in.delta = b_delta;
          in.l_star = b_lstar;
          if (loss) {
            const LossConstants c = loss->constants(spec, m);
            in.g_inf = c.lipschitz_inf;
            in.g_l2 = c.lipschitz_l2;
            in.h_inf = c.smoothness_inf;
            in.b = c.uniform_bound;
          }
          if (b_g) in.g_inf = *b_g;
          if (b_gl2) in.g_l2 = *b_gl2;
          else if (b_g) in.g_l2 = *b_g;
          if (b_h) in.h_inf = *b_h;
          if (b_b) in.b = *b_b;
          if (!loss && !b_b) in.b = 2.0 * in.g_inf * b_w * b_r;
          std::vector<std::string> row{std::to_string(m), std::to_string(n)};
          for (const auto& c : make_bound_report(in).cells()) row.push_back(c);
          w.write_row(row);
        }
      }
      return kExitOk;
    }
    if (train->parsed()) {
      std::ifstream in(t_data);
      if (!in) throw std::runtime_error("cannot open '" + t_data + "'");
      const LetorData data = parse_letor(in);
      const NormKind norm = norm_kind_from_string(t_norm);
      TrainConfig tc;
      tc.loss = make_loss(t_loss, t_sigma, 4);
      tc.spec = ClassSpec{norm, t_w, t_r ? *t_r : input_radius(data.dataset, norm)};
      tc.lambda = t_lambda;
      tc.epochs = t_epochs;
      tc.seed = train_common.seed;
      TrainedModel model;
      switch (trainer_kind_from_string(t_trainer)) {
        case TrainerKind::Rerm:
          model = rerm_train(data.dataset, tc);
          break;
        case TrainerKind::Ogd:
          tc.step_policy = OgdRegretStep{};
          model = ogd_train(data.dataset, tc);
          break;
        case TrainerKind::Erm:
          model = erm_train(data.dataset, tc);
          break;
      }
      Output out(train_common.out);
      CsvWriter w(out.stream());
      w.write_row({"feature", "weight"});
      for (std::size_t k = 0; k < model.weights.w.size(); ++k) {
        w.write_row({std::to_string(k + 1), format_real(model.weights.w[k])});
      }
      auto& log = out.summary();
      log << "train_loss=" << format_real(model.train_loss) << " iterations=" << model.iterations << "\n";
      for (const auto& warning : model.warnings) log << "warning: " << warning << "\n";
      return kExitOk;
    }
    if (parse->parsed()) {
      std::ifstream in(p_in);
      if (!in) throw std::runtime_error("cannot open '" + p_in + "'");
      const LetorData data = parse_letor(in);
      Output out(p_out);
      serialize_letor(out.stream(), data.dataset, data.query_ids);
      out.summary() << "queries=" << data.dataset.size() << " d=" << data.dataset.dim() << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
