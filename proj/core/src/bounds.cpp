#include "ltrgen/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ltrgen {

namespace {

double as_real(std::size_t v) { return static_cast<double>(v); }

double log_one_over_delta(const BoundInputs& in) { return std::log(1.0 / in.delta); }

bool is_l2(const BoundInputs& in) { return in.spec.norm_kind == NormKind::L2; }

double require_h(const BoundInputs& in, const char* who) {
  if (!in.h_inf) throw std::invalid_argument(std::string(who) + ": smoothness constant H_inf is required");
  return *in.h_inf;
}

double require_l_star(const BoundInputs& in, const char* who) {
  if (!in.l_star) throw std::invalid_argument(std::string(who) + ": L_star is required");
  return *in.l_star;
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {kron * h, std::abs((kron - gauss) * h)};
}

double adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol,
                   int depth) {
  const GkResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= 60 || (b - a) <= 1e-15 * std::max(1.0, std::abs(b))) {
    return r.value;
  }
  const double c = 0.5 * (a + b);
  return adaptive_gk(f, a, c, 0.5 * tol, depth + 1) + adaptive_gk(f, c, b, 0.5 * tol, depth + 1);
}

double l2_scale(const BoundInputs& in) {
  return in.g_inf * in.spec.weight_radius * in.spec.input_radius;
}

}  // namespace

void BoundInputs::validate() const {
  spec.validate();
  if (n < 1) throw std::invalid_argument("BoundInputs: n must be >= 1");
  if (m < 1) throw std::invalid_argument("BoundInputs: m must be >= 1");
  if (d < 1) throw std::invalid_argument("BoundInputs: d must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("BoundInputs: delta must lie in (0, 1)");
  if (l_star && !(*l_star >= 0.0)) throw std::invalid_argument("BoundInputs: L_star must be >= 0");
  if (!(g_inf >= 0.0) || !(g_l2 >= 0.0) || !(b >= 0.0)) {
    throw std::invalid_argument("BoundInputs: G_inf, G_l2 and B must be >= 0");
  }
  if (h_inf && !(*h_inf >= 0.0)) throw std::invalid_argument("BoundInputs: H_inf must be >= 0");
}

std::optional<double> bound_chapelle_complexity(const BoundInputs& in) {
  in.validate();
  if (!is_l2(in)) return std::nullopt;
  return 3.0 * in.g_l2 * in.spec.weight_radius * in.spec.input_radius *
         std::sqrt(as_real(in.m) / as_real(in.n));
}

std::optional<double> bound_chapelle(const BoundInputs& in) {
  const auto complexity = bound_chapelle_complexity(in);
  if (!complexity) return std::nullopt;
  return *complexity + std::sqrt(8.0 * log_one_over_delta(in) / as_real(in.n));
}

std::optional<double> bound_ogd(const BoundInputs& in) {
  in.validate();
  if (!is_l2(in)) return std::nullopt;
  return l2_scale(in) * std::sqrt(2.0 / as_real(in.n));
}

std::optional<double> bound_rerm(const BoundInputs& in) {
  in.validate();
  if (!is_l2(in)) return std::nullopt;
  const double n = as_real(in.n);
  return 2.0 * l2_scale(in) * (8.0 / n + std::sqrt(2.0 / n));
}

double covering_bound(CoverVariant variant, const BoundInputs& in, double epsilon, double r) {
  in.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("covering_bound: epsilon must be positive");
  const double mn = as_real(in.m) * as_real(in.n);
  const double w = in.spec.weight_radius;
  const double rx = in.spec.input_radius;
  const double g = in.g_inf;
  switch (variant) {
    case CoverVariant::L2: {
      const double k = std::ceil(g * g * w * w * rx * rx / (epsilon * epsilon));
      return k * std::log2(2.0 * mn + 1.0);
    }
    case CoverVariant::L1: {
      const double k = std::ceil(288.0 * g * g * w * w * rx * rx *
                                 (2.0 + std::log(as_real(in.d))) / (epsilon * epsilon));
      const double grid = std::ceil(8.0 * g * w * rx / epsilon);
      return k * std::log2(2.0 * grid * mn + 1.0);
    }
    case CoverVariant::Local: {
      const double h = require_h(in, "covering_bound");
      if (!(r >= 0.0)) throw std::invalid_argument("covering_bound: r must be >= 0");
      if (r == 0.0) return 0.0;
      const double k = std::ceil(12.0 * h * w * w * rx * rx * r / (epsilon * epsilon));
      return k * std::log2(2.0 * mn + 1.0);
    }
  }
  return 0.0;
}

double local_complexity_scale(const BoundInputs& in) {
  in.validate();
  const double h = require_h(in, "local_complexity_scale");
  const double mn = as_real(in.m) * as_real(in.n);
  return 5.0 * std::sqrt(3.0) * in.spec.weight_radius * in.spec.input_radius *
         std::sqrt(h * std::log2(3.0 * mn) / as_real(in.n));
}

double psi_n(double r, double c, double b) {
  if (!(r >= 0.0) || !(c > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("psi_n: need r >= 0, C > 0, B > 0");
  }
  const double arg = 3.0 * std::sqrt(b) / c;
  if (!(arg > 1.0)) {
    throw NumericalDomainError("psi_n: log(3 sqrt(B) / C) <= 0; B is too small relative to C");
  }
  return 4.0 * std::sqrt(r) * c * std::log(arg);
}

double fixed_point_r_star(double c, double b) {
  const double slope = psi_n(1.0, c, b);
  return slope * slope;
}

double r_zero(const BoundInputs& in) {
  in.validate();
  const double n = as_real(in.n);
  const double loglog = std::log(std::log(n));
  const double r0 = in.b * (log_one_over_delta(in) + loglog) / n;
  if (!(r0 > 0.0) || !std::isfinite(r0)) {
    throw NumericalDomainError("r_zero: B (log(1/delta) + log log n) / n must be positive and finite (needs n >= 3 or small delta)");
  }
  return r0;
}

double rademacher_bound(CoverVariant variant, const BoundInputs& in, double r) {
  in.validate();
  if (!(in.b > 0.0)) throw std::invalid_argument("rademacher_bound: B must be positive");
  const double n = as_real(in.n);
  const double mn = as_real(in.m) * n;
  switch (variant) {
    case CoverVariant::L2: {
      const double scale = l2_scale(in);
      if (!(scale > 0.0)) return 0.0;
      const double l = std::log2(3.0 * mn);
      const double arg = 6.0 * in.b * std::sqrt(n) / (5.0 * scale * std::sqrt(l));
      if (!(arg > 1.0)) {
        throw NumericalDomainError("rademacher_bound(L2): log argument <= 1; B is too small relative to G W R");
      }
      return 10.0 * scale * std::sqrt(l / n) * std::log(arg);
    }
    case CoverVariant::L1: {
      const double scale = l2_scale(in);
      if (!(scale > 0.0)) return 0.0;
      if (in.d < 2) throw NumericalDomainError("rademacher_bound(L1): needs d >= 2 (log d > 0)");
      const double inner = 24.0 * mn * scale;
      if (!(inner > 1.0)) throw NumericalDomainError("rademacher_bound(L1): needs 24 m n G W R > 1");
      const double logs = std::log(as_real(in.d)) * std::log2(inner);
      const double arg = (in.b + inner) / (40.0 * std::sqrt(2.0) * scale * std::sqrt(logs));
      if (!(arg > 1.0)) {
        throw NumericalDomainError("rademacher_bound(L1): log argument <= 1; B is too small relative to G W R");
      }
      const double lg = std::log(arg);
      return 120.0 * std::sqrt(2.0) * scale * std::sqrt(logs / n) * lg * lg;
    }
    case CoverVariant::Local: {
      if (!(r >= 0.0)) throw std::invalid_argument("rademacher_bound(local): r must be >= 0");
      return psi_n(r, local_complexity_scale(in), in.b);
    }
  }
  return 0.0;
}

double dudley_integral(const std::function<double(double)>& log_covering, double alpha,
                       double upper_limit, std::size_t n, double tolerance,
                       std::span<const double> breakpoints) {
  if (!(alpha >= 0.0) || !(upper_limit > alpha)) {
    throw std::invalid_argument("dudley_integral: need upper_limit > alpha >= 0");
  }
  if (n < 1) throw std::invalid_argument("dudley_integral: n must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("dudley_integral: tolerance must be positive");
  const double nd = as_real(n);
  const std::function<double(double)> integrand = [&](double eps) {
    const double v = log_covering(eps);
    if (std::isnan(v) || v < 0.0) throw NumericalDomainError("dudley_integral: log covering number must be >= 0");
    return std::sqrt(v / nd);
  };
  if (alpha == 0.0) {
    // An integrand growing like 1/eps or faster is not integrable at 0.
    const double e1 = 1e-9 * upper_limit;
    const double e2 = 1e-12 * upper_limit;
    const double f1 = integrand(e1);
    const double f2 = integrand(e2);
    if (!std::isfinite(f2) || (f1 > 0.0 && f2 / f1 >= std::pow(1e3, 0.95))) {
      throw NumericalDomainError("dudley_integral: integrand diverges at 0; use alpha > 0");
    }
  }
  std::vector<double> cuts{alpha};
  for (double p : breakpoints) {
    if (p > alpha && p < upper_limit) cuts.push_back(p);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(upper_limit);
  const double piece_tol = tolerance / (10.0 * as_real(cuts.size() - 1));
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += adaptive_gk(integrand, cuts[k], cuts[k + 1], piece_tol, 0);
  }
  return 4.0 * alpha + 10.0 * total;
}

DudleyOptimum optimize_dudley(const std::function<double(double)>& log_covering, double upper_limit,
                              std::size_t n, double tolerance, std::span<const double> breakpoints) {
  if (!(upper_limit > 0.0)) throw std::invalid_argument("optimize_dudley: upper_limit must be positive");
  auto objective = [&](double a) {
    return dudley_integral(log_covering, a, upper_limit, n, tolerance, breakpoints);
  };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 1e-12 * upper_limit;
  double hi = upper_limit;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-10 * upper_limit) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  DudleyOptimum best{x1, f1};
  if (f2 < best.value) best = {x2, f2};
  // The objective at the upper end is exactly 4 * upper.
  if (4.0 * upper_limit < best.value) best = {upper_limit, 4.0 * upper_limit};
  return best;
}

std::vector<double> l2_covering_breakpoints(const BoundInputs& in, double lo, double hi) {
  // ceil(S^2 / eps^2) jumps at eps = S / sqrt(k).
  std::vector<double> out;
  const double s = l2_scale(in);
  if (!(s > 0.0) || !(hi > lo) || !(hi > 0.0)) return out;
  const double lo_pos = std::max(lo, std::numeric_limits<double>::min());
  const double k_lo = std::max(1.0, std::floor(s * s / (hi * hi)));
  const double k_hi = std::ceil(s * s / (lo_pos * lo_pos));
  if (k_hi - k_lo > 1e7) throw std::invalid_argument("l2_covering_breakpoints: too many jumps; raise lo");
  for (double k = k_lo; k <= k_hi; k += 1.0) {
    const double e = s / std::sqrt(k);
    if (e > lo && e < hi) out.push_back(e);
  }
  return out;
}

double gen_bound(GenBoundKind kind, const BoundInputs& in) {
  in.validate();
  const double n = as_real(in.n);
  const double concentration = 3.0 * in.b * std::sqrt(log_one_over_delta(in) / (2.0 * n));
  switch (kind) {
    case GenBoundKind::LipschitzL2:
      if (!is_l2(in)) throw std::invalid_argument("gen_bound(lipschitz_l2): needs an L2 class");
      return 2.0 * rademacher_bound(CoverVariant::L2, in) + concentration;
    case GenBoundKind::LipschitzL1:
      if (is_l2(in)) throw std::invalid_argument("gen_bound(lipschitz_l1): needs an L1 class");
      return 2.0 * rademacher_bound(CoverVariant::L1, in) + concentration;
    case GenBoundKind::Smooth: {
      require_h(in, "gen_bound(smooth)");
      const double l = require_l_star(in, "gen_bound(smooth)");
      const double r_star = fixed_point_r_star(local_complexity_scale(in), in.b);
      const double r0 = r_zero(in);
      return 45.0 * r_star + std::sqrt(8.0 * r_star * l) + std::sqrt(4.0 * r0 * l) + 20.0 * r0;
    }
  }
  return 0.0;
}

double smooth_erm_excess(const BoundInputs& in) {
  in.validate();
  require_h(in, "smooth_erm_excess");
  const double l = require_l_star(in, "smooth_erm_excess");
  const double r_star = fixed_point_r_star(local_complexity_scale(in), in.b);
  const double r0 = r_zero(in);
  // Empirical risk of w* with probability 1 - delta.
  const double l_hat_star = l + std::sqrt(4.0 * r0 * l) + 4.0 * r0;
  // L(w_hat) <= L_hat(w_hat) + 45 r* + sqrt(8 r* L(w_hat)) + sqrt(4 r0 L(w_hat)) + 20 r0
  // and L_hat(w_hat) <= L_hat(w*); solve x^2 - a x - c <= 0 for x = sqrt(L(w_hat)).
  const double a = std::sqrt(8.0 * r_star) + std::sqrt(4.0 * r0);
  const double c = l_hat_star + 45.0 * r_star + 20.0 * r0;
  const double x = 0.5 * (a + std::sqrt(a * a + 4.0 * c));
  return std::max(0.0, x * x - l);
}

double smooth_display(const BoundInputs& in) {
  in.validate();
  const double h = require_h(in, "smooth_display");
  const double l = require_l_star(in, "smooth_display");
  const double n = as_real(in.n);
  const double w = in.spec.weight_radius;
  const double rx = in.spec.input_radius;
  const double d0 = in.b * log_one_over_delta(in) + w * w * rx * rx * h;
  return std::sqrt(l * d0 / n) + d0 / n;
}

double fast_rate_bound(const BoundInputs& in) {
  in.validate();
  const double h_phi = require_h(in, "fast_rate_bound");
  const double l = require_l_star(in, "fast_rate_bound");
  const double n = as_real(in.n);
  const double h = h_phi * in.spec.input_radius * in.spec.input_radius;
  const double w2 = in.spec.weight_radius * in.spec.weight_radius;
  return l + 2.0 * std::sqrt(2.0 * h * w2 * l / n) + 8.0 * h * w2 / n;
}

std::vector<std::string> BoundReport::columns() {
  return {"chapelle_wu",    "chapelle_complexity", "ogd",          "rerm",
          "rademacher_l2",  "gen_l2",              "rademacher_l1", "gen_l1",
          "smooth_uniform", "smooth_erm",          "smooth_display", "fast_rate"};
}

std::vector<std::string> BoundReport::cells() const {
  const std::array<const std::optional<double>*, 12> values = {
      &chapelle_wu,   &chapelle_complexity, &ogd,         &rerm,          &rademacher_l2, &gen_l2,
      &rademacher_l1, &gen_l1,              &smooth_uniform, &smooth_erm, &smooth_display, &fast_rate};
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto* v : values) {
    if (!*v) {
      out.emplace_back("NA");
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g", **v);
      out.emplace_back(buf);
    }
  }
  return out;
}

BoundReport make_bound_report(const BoundInputs& in) {
  in.validate();
  auto attempt = [](auto&& fn) -> std::optional<double> {
    try {
      const double v = fn();
      if (!std::isfinite(v) || v < 0.0) return std::nullopt;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  BoundReport r;
  r.chapelle_wu = bound_chapelle(in);
  r.chapelle_complexity = bound_chapelle_complexity(in);
  r.ogd = bound_ogd(in);
  r.rerm = bound_rerm(in);
  if (is_l2(in)) {
    r.rademacher_l2 = attempt([&] { return rademacher_bound(CoverVariant::L2, in); });
    r.gen_l2 = attempt([&] { return gen_bound(GenBoundKind::LipschitzL2, in); });
  } else {
    r.rademacher_l1 = attempt([&] { return rademacher_bound(CoverVariant::L1, in); });
    r.gen_l1 = attempt([&] { return gen_bound(GenBoundKind::LipschitzL1, in); });
  }
  if (in.h_inf && in.l_star && is_l2(in)) {
    r.smooth_uniform = attempt([&] { return gen_bound(GenBoundKind::Smooth, in); });
    r.smooth_erm = attempt([&] { return smooth_erm_excess(in); });
    r.smooth_display = attempt([&] { return smooth_display(in); });
    r.fast_rate = attempt([&] { return fast_rate_bound(in); });
  }
  return r;
}

}  // namespace ltrgen
