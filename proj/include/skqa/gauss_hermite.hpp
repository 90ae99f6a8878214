#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "skqa/errors.hpp"

namespace skqa {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule recast for the standard normal weight:
/// E[f(X)] ~ sum_i w_i f(x_i) for X ~ N(0,1). Newton iteration on the
/// orthonormal-scaled Hermite recurrence; stable to a few hundred nodes.
inline QuadratureRule gauss_hermite_normal(int n) {
  if (n < 1) throw ConfigError("gauss_hermite_normal: need n >= 1 nodes");
  constexpr double kPim4 = 0.7511255444649425;  // pi^(-1/4)
  constexpr double kEps = 1e-14;
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    for (int it = 0; it < 100; ++it) {
      double p1 = kPim4, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= kEps) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  // Map from weight exp(-t^2) to the standard normal density.
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = std::sqrt(2.0) * x[i];
    rule.weights[i] = w[i] * inv_sqrt_pi;
  }
  // Ascending nodes.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return rule.nodes[a] < rule.nodes[b]; });
  QuadratureRule sorted;
  sorted.nodes.resize(n);
  sorted.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    sorted.nodes[i] = rule.nodes[idx[i]];
    sorted.weights[i] = rule.weights[idx[i]];
  }
  return sorted;
}

}  // namespace skqa
