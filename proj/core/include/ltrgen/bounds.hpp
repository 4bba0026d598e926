#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltrgen/types.hpp"

namespace ltrgen {

/// Constants feeding every bound. Logs are natural unless a name says log2.
struct BoundInputs {
  double g_inf = 0.0;              // G_phi (l-infinity Lipschitz)
  double g_l2 = 0.0;               // l2 Lipschitz constant used by the baseline bound
  std::optional<double> h_inf;     // H_phi (l-infinity smoothness)
  double b = 0.0;                  // uniform bound on the loss over the class
  ClassSpec spec;
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t d = 1;
  double delta = 0.05;
  std::optional<double> l_star;    // L_phi(w*)

  void validate() const;
};

/// 3 G_l2 W2 R_X sqrt(m/n) + sqrt(8 log(1/delta) / n). nullopt for an L1 class.
std::optional<double> bound_chapelle(const BoundInputs& in);
/// The sqrt(m/n) complexity term of bound_chapelle alone.
std::optional<double> bound_chapelle_complexity(const BoundInputs& in);
/// G_phi W2 R_X sqrt(2/n). nullopt for an L1 class.
std::optional<double> bound_ogd(const BoundInputs& in);
/// 2 G_phi R_X W2 (8/n + sqrt(2/n)). nullopt for an L1 class.
std::optional<double> bound_rerm(const BoundInputs& in);

enum class CoverVariant { L2, L1, Local };

/// log2 covering-number estimates:
///   L2:    ceil(G^2 W2^2 R^2 / eps^2) log2(2mn + 1)
///   L1:    ceil(288 G^2 W1^2 R̄^2 (2 + ln d) / eps^2) log2(2 ceil(8 G W1 R̄ / eps) mn + 1)
///   Local: ceil(12 H W2^2 R^2 r / eps^2) log2(2mn + 1), and 0 when r = 0.
double covering_bound(CoverVariant variant, const BoundInputs& in, double epsilon, double r = 0.0);

/// Closed-form empirical Rademacher bounds (natural log outside, log2 inside).
double rademacher_bound(CoverVariant variant, const BoundInputs& in, double r = 0.0);

/// C = 5 sqrt(3) W2 R_X sqrt(H_phi log2(3mn) / n)
double local_complexity_scale(const BoundInputs& in);
/// psi_n(r) = 4 sqrt(r) C log(3 sqrt(B) / C)
double psi_n(double r, double c, double b);
/// Largest root of r = psi_n(r): (4 C log(3 sqrt(B) / C))^2.
double fixed_point_r_star(double c, double b);
/// r_0 = B (log(1/delta) + log log n) / n
double r_zero(const BoundInputs& in);

/// 4 alpha + 10 int_alpha^upper sqrt(log_covering(eps) / n) d eps, adaptive
/// Gauss-Kronrod quadrature to absolute tolerance `tolerance`. Known jump
/// locations of the integrand (for example from a ceiling) may be passed as
/// `breakpoints`; the integral is then split there. alpha = 0 is allowed only
/// for integrands that stay integrable at 0.
double dudley_integral(const std::function<double(double)>& log_covering, double alpha,
                       double upper_limit, std::size_t n, double tolerance = 1e-8,
                       std::span<const double> breakpoints = {});

struct DudleyOptimum {
  double alpha = 0.0;
  double value = 0.0;
};
/// Golden-section search of the (convex) Dudley objective over alpha in (0, upper).
DudleyOptimum optimize_dudley(const std::function<double(double)>& log_covering, double upper_limit,
                              std::size_t n, double tolerance = 1e-8,
                              std::span<const double> breakpoints = {});

/// Jump locations of the L2 covering bound's ceiling inside (lo, hi).
std::vector<double> l2_covering_breakpoints(const BoundInputs& in, double lo, double hi);

enum class GenBoundKind { LipschitzL2, LipschitzL1, Smooth };

/// Lipschitz forms: 2 R_hat + 3 B sqrt(log(1/delta) / (2n)) with the matching
/// closed-form Rademacher bound. Smooth: the local-Rademacher excess term
/// 45 r* + sqrt(8 r* L) + sqrt(4 r0 L) + 20 r0 with L = L_star.
double gen_bound(GenBoundKind kind, const BoundInputs& in);

/// Smooth-loss bound on L(w_hat) - L(w*) for an empirical risk minimizer:
/// Bernstein on L_hat(w*) followed by solving the uniform inequality for L(w_hat).
double smooth_erm_excess(const BoundInputs& in);
/// The O-tilde display sqrt(L* D0 / n) + D0 / n with D0 = B log(1/delta) + W2^2 R^2 H.
double smooth_display(const BoundInputs& in);

/// L* + 2 sqrt(2 H W2^2 L* / n) + 8 H W2^2 / n with H = H_phi R_X^2.
double fast_rate_bound(const BoundInputs& in);

/// Every applicable bound; nullopt marks an inapplicable entry.
struct BoundReport {
  std::optional<double> chapelle_wu;
  std::optional<double> chapelle_complexity;
  std::optional<double> ogd;
  std::optional<double> rerm;
  std::optional<double> rademacher_l2;
  std::optional<double> gen_l2;
  std::optional<double> rademacher_l1;
  std::optional<double> gen_l1;
  std::optional<double> smooth_uniform;
  std::optional<double> smooth_erm;
  std::optional<double> smooth_display;
  std::optional<double> fast_rate;

  /// Column names in serialization order.
  static std::vector<std::string> columns();
  /// Values in column order, "NA" for inapplicable entries.
  std::vector<std::string> cells() const;
};

/// Evaluates every bound that the inputs support; failures become NA.
BoundReport make_bound_report(const BoundInputs& in);

}  // namespace ltrgen
