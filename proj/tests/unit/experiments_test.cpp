#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "ltrgen/csv.hpp"
#include "ltrgen/experiments.hpp"

namespace ltrgen {
namespace {

TEST(DeriveSeed, DeterministicAndSpread) {
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a) {
    for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(5, a, b));
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(derive_seed(0, 1, 2), derive_seed(0, 2, 1));
}

TEST(LogLogSlope, PowerLaws) {
  const std::vector<double> x{1, 10, 100, 1000};
  EXPECT_NEAR(loglog_slope(x, {3, 3, 3, 3}), 0.0, 1e-12);
  EXPECT_NEAR(loglog_slope(x, {1, 1e-1, 1e-2, 1e-3}), -1.0, 1e-12);
  EXPECT_NEAR(loglog_slope(x, {2, 2 * std::sqrt(10.0), 20, 20 * std::sqrt(10.0)}), 0.5, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(loglog_slope({1, 2}, {1, 0}), NumericalDomainError);
}

TEST(Csv, EscapingAndFormatting) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(1.0 / 3.0), "0.3333333333");
  std::ostringstream out;
  CsvWriter(out).write_row({"x", "y,z"});
  EXPECT_EQ(out.str(), "x,\"y,z\"\n");
}

TEST(TrainerKind, StringRoundTrip) {
  for (auto k : {TrainerKind::Rerm, TrainerKind::Ogd, TrainerKind::Erm}) {
    EXPECT_EQ(trainer_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(trainer_kind_from_string("sgd"), std::invalid_argument);
  EXPECT_EQ(rate_mode_from_string(to_string(RateMode::Noisy)), RateMode::Noisy);
}

GapVsMConfig small_gap() {
  GapVsMConfig c;
  c.m_values = {2, 8};
  c.n = 20;
  c.d = 3;
  c.trials = 2;
  c.test_factor = 5;
  c.bootstrap = 100;
  c.seed = 4;
  return c;
}

TEST(GapVsM, RowsAndSummaryShape) {
  const GapVsMOutput out = run_gap_vs_m(small_gap());
  ASSERT_EQ(out.rows.size(), 4u);
  ASSERT_EQ(out.summary.m_values.size(), 2u);
  for (const auto& r : out.rows) {
    EXPECT_EQ(r.sweep_variable, "m");
    EXPECT_EQ(r.trainer, "rerm");
    EXPECT_NEAR(r.gap, r.test_loss - r.train_loss, 1e-12);
    ASSERT_TRUE(r.centered_gap.has_value());
    ASSERT_TRUE(r.excess.has_value());
    EXPECT_GE(r.ndcg_at_1, 0.0);
    EXPECT_LE(r.ndcg_at_1, 1.0);
  }
  for (std::size_t k = 0; k < 2; ++k) {
    const double mean = (out.rows[2 * k].gap + out.rows[2 * k + 1].gap) / 2.0;
    EXPECT_NEAR(out.summary.mean_gap[k], mean, 1e-12);
  }
  EXPECT_LE(out.summary.gap_ratio.low, out.summary.gap_ratio.high);
  EXPECT_NEAR(out.summary.chapelle_ratio, out.summary.chapelle[1] / out.summary.chapelle[0], 1e-12);
  EXPECT_EQ(out.summary.rerm_runs, 4u);
}

TEST(GapVsM, DeterministicInSeed) {
  GapVsMConfig c = small_gap();
  c.trials = 1;
  const auto a = run_gap_vs_m(c);
  const auto b = run_gap_vs_m(c);
  std::ostringstream sa, sb;
  write_results_csv(sa, a.rows);
  write_results_csv(sb, b.rows);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(GapVsM, CsvHeaderMatchesCells) {
  const auto out = run_gap_vs_m(small_gap());
  std::ostringstream s;
  write_results_csv(s, out.rows);
  std::istringstream in(s.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("sweep_variable,sweep_value,trial,trainer,train_loss,test_loss,gap,centered_gap", 0), 0u);
  const auto cols = ExperimentResult::header().size();
  EXPECT_EQ(out.rows.front().cells().size(), cols);
}

TEST(GapVsM, Validation) {
  GapVsMConfig c = small_gap();
  c.m_values = {5};
  EXPECT_THROW(run_gap_vs_m(c), std::invalid_argument);
  c = small_gap();
  c.flip_prob = 2.0;
  EXPECT_THROW(run_gap_vs_m(c), std::invalid_argument);
}

TEST(RateVsN, SmallRealizableRun) {
  RateVsNConfig c;
  c.n_values = {20, 40, 80};
  c.trials = 2;
  c.d = 3;
  c.m = 4;
  c.pool_size = 500;
  c.bootstrap = 100;
  const RateVsNOutput out = run_rate_vs_n(c);
  ASSERT_EQ(out.summary.mean_excess.size(), 3u);
  EXPECT_EQ(out.summary.n_values, c.n_values);
  EXPECT_TRUE(std::isfinite(out.summary.slope.estimate));
  EXPECT_LE(out.summary.slope.low, out.summary.slope.high);
  for (const auto& r : out.rows) EXPECT_EQ(r.sweep_variable, "n");
}

TEST(RateVsN, Validation) {
  RateVsNConfig c;
  c.n_values = {10, 20};
  EXPECT_THROW(run_rate_vs_n(c), std::invalid_argument);
  c.n_values = {10, 20, 40};
  c.spec.norm_kind = NormKind::L1;
  EXPECT_THROW(run_rate_vs_n(c), std::invalid_argument);
}

}  // namespace
}  // namespace ltrgen
