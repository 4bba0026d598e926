#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ltrgen/losses.hpp"

namespace ltrgen {

/// One row of a constant or inequality check.
struct CheckRow {
  std::string suite;
  std::string check;
  std::size_t m = 0;
  double observed = 0.0;
  double bound = 0.0;
  /// bound - observed for upper-bound checks; -|observed - bound| for equalities.
  double margin = 0.0;
  bool pass = false;

  static std::vector<std::string> header();
  std::vector<std::string> cells() const;
};

void write_checks_csv(std::ostream& out, const std::vector<CheckRow>& rows);

struct VerifyOptions {
  LossKind loss = LossKind::ListNet;
  double sigma = 1.0;
  int y_max = 4;
  /// Random draws per Lipschitz check.
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  /// Document counts for the Lipschitz sweep (loss-specific default when empty).
  std::vector<std::size_t> m_values;
  /// Random points for gradient and inequality checks.
  std::size_t points = 1000;
};

/// Gradient, Lipschitz, smoothness and (for ListNet) inequality checks for
/// the selected loss, plus the loss-independent dual-norm and invariance checks.
std::vector<CheckRow> run_verify(const VerifyOptions& options);

}  // namespace ltrgen
