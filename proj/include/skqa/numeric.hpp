#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "skqa/errors.hpp"

namespace skqa {

/// Kahan compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

class KahanComplex {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean and standard error, compensated, fixed accumulation order.
inline MeanStderr mean_stderr(std::span<const double> xs) {
  const std::size_t m = xs.size();
  if (m == 0) return {};
  KahanSum s;
  for (double x : xs) s.add(x);
  const double mean = s.value() / static_cast<double>(m);
  if (m == 1) return {mean, 0.0};
  KahanSum q;
  for (double x : xs) q.add((x - mean) * (x - mean));
  const double var = q.value() / static_cast<double>(m - 1);
  return {mean, std::sqrt(var / static_cast<double>(m))};
}

inline double sample_variance(std::span<const double> xs) {
  const std::size_t m = xs.size();
  if (m < 2) return 0.0;
  KahanSum s;
  for (double x : xs) s.add(x);
  const double mean = s.value() / static_cast<double>(m);
  KahanSum q;
  for (double x : xs) q.add((x - mean) * (x - mean));
  return q.value() / static_cast<double>(m - 1);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("linear_fit: need >= 2 matching points");
  const double m = static_cast<double>(x.size());
  KahanSum sx, sy, sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
    sxx.add(x[i] * x[i]);
    sxy.add(x[i] * y[i]);
    syy.add(y[i] * y[i]);
  }
  const double vxx = sxx.value() - sx.value() * sx.value() / m;
  const double vxy = sxy.value() - sx.value() * sy.value() / m;
  const double vyy = syy.value() - sy.value() * sy.value() / m;
  LinearFit f;
  f.slope = vxy / vxx;
  f.intercept = (sy.value() - f.slope * sx.value()) / m;
  f.r2 = (vyy > 0.0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return f;
}

/// Weighted least squares for y = a + b*x with known per-point sigmas.
/// Returns (a, sigma_a, b).
struct WeightedInterceptFit {
  double intercept = 0.0;
  double intercept_sigma = 0.0;
  double slope = 0.0;
};

inline WeightedInterceptFit weighted_intercept_fit(std::span<const double> x,
                                                   std::span<const double> y,
                                                   std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2)
    throw ConfigError("weighted_intercept_fit: need >= 2 matching points");
  double sw = 0, swx = 0, swxx = 0, swy = 0, swxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    swx += w * x[i];
    swxx += w * x[i] * x[i];
    swy += w * y[i];
    swxy += w * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  WeightedInterceptFit f;
  f.intercept = (swxx * swy - swx * swxy) / det;
  f.slope = (sw * swxy - swx * swy) / det;
  f.intercept_sigma = std::sqrt(swxx / det);
  return f;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace skqa
