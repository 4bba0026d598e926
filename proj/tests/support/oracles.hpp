#pragma once

// Independent 50-digit evaluations of the closed-form bounds, written from the
// formulas rather than from the library code.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cstddef>

namespace ltrgen::oracle {

using Big = boost::multiprecision::cpp_dec_float_50;

struct Consts {
  double g = 1.0;  // G_phi
  double h = 2.0;  // H_phi
  double b = 1.0;  // B
  double w = 1.0;  // weight radius
  double r = 1.0;  // input radius
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t d = 2;
  double delta = 0.05;
  double l_star = 0.0;
};

inline Big big(double v) { return Big(v); }
inline Big big(std::size_t v) { return Big(static_cast<unsigned long long>(v)); }
inline Big log2b(const Big& x) { return log(x) / log(Big(2)); }

inline double lambda_default(double g, double w, std::size_t n) {
  const Big nn = big(n), gg = big(g), ww = big(w);
  return sqrt((4 * gg * gg / nn) / (ww * ww / 2 + 4 * ww * ww / nn)).convert_to<double>();
}

inline double eta_smooth(double w, double h, double l, std::size_t n) {
  const Big ww = big(w), hh = big(h);
  return (ww / (4 * hh * ww + 2 * sqrt(4 * hh * hh * ww * ww + 2 * hh * big(l) * big(n)))).convert_to<double>();
}

inline double fast_rate(const Consts& c) {
  const Big h = big(c.h) * big(c.r) * big(c.r);
  const Big w2 = big(c.w) * big(c.w);
  const Big n = big(c.n);
  const Big l = big(c.l_star);
  return (l + 2 * sqrt(2 * h * w2 * l / n) + 8 * h * w2 / n).convert_to<double>();
}

inline double covering_l2(const Consts& c, double eps) {
  const Big s = big(c.g) * big(c.w) * big(c.r);
  const Big k = ceil(s * s / (big(eps) * big(eps)));
  return (k * log2b(2 * big(c.m) * big(c.n) + 1)).convert_to<double>();
}

inline double covering_l1(const Consts& c, double eps) {
  const Big s = big(c.g) * big(c.w) * big(c.r);
  const Big e = big(eps);
  const Big k = ceil(288 * s * s * (2 + log(big(c.d))) / (e * e));
  const Big grid = ceil(8 * s / e);
  return (k * log2b(2 * grid * big(c.m) * big(c.n) + 1)).convert_to<double>();
}

inline double covering_local(const Consts& c, double eps, double radius) {
  const Big k = ceil(12 * big(c.h) * big(c.w) * big(c.w) * big(c.r) * big(c.r) * big(radius) / (big(eps) * big(eps)));
  return (k * log2b(2 * big(c.m) * big(c.n) + 1)).convert_to<double>();
}

inline double rademacher_l2(const Consts& c) {
  const Big s = big(c.g) * big(c.w) * big(c.r);
  const Big n = big(c.n);
  const Big l = log2b(3 * big(c.m) * n);
  return (10 * s * sqrt(l / n) * log(6 * big(c.b) * sqrt(n) / (5 * s * sqrt(l)))).convert_to<double>();
}

inline double rademacher_l1(const Consts& c) {
  const Big s = big(c.g) * big(c.w) * big(c.r);
  const Big n = big(c.n);
  const Big inner = 24 * big(c.m) * n * s;
  const Big logs = log(big(c.d)) * log2b(inner);
  const Big lg = log((big(c.b) + inner) / (40 * sqrt(Big(2)) * s * sqrt(logs)));
  return (120 * sqrt(Big(2)) * s * sqrt(logs / n) * lg * lg).convert_to<double>();
}

inline Big local_scale(const Consts& c) {
  return 5 * sqrt(Big(3)) * big(c.w) * big(c.r) * sqrt(big(c.h) * log2b(3 * big(c.m) * big(c.n)) / big(c.n));
}

inline Big psi(const Big& r, const Big& scale, const Big& b) { return 4 * sqrt(r) * scale * log(3 * sqrt(b) / scale); }

inline double rademacher_local(const Consts& c, double radius) {
  return psi(big(radius), local_scale(c), big(c.b)).convert_to<double>();
}

/// Largest root of r = psi(r) by bisection on [lo, hi] where r - psi(r) changes sign.
inline double fixed_point_bisection(double scale, double b, double lo, double hi) {
  Big a = big(lo), z = big(hi);
  const Big s = big(scale), bb = big(b);
  for (int it = 0; it < 300; ++it) {
    const Big mid = (a + z) / 2;
    if (mid - psi(mid, s, bb) > 0) {
      z = mid;
    } else {
      a = mid;
    }
  }
  return ((a + z) / 2).convert_to<double>();
}

}  // namespace ltrgen::oracle
