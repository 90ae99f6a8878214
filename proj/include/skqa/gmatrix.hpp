#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "skqa/errors.hpp"
#include "skqa/parallel.hpp"
#include "skqa/schedule.hpp"

namespace skqa {

// The infinite-size machinery works on bit-chain configurations with slots
// 0..2p+1 and the middle pair (p, p+1) identified, leaving 2^{2p+1} free
// configurations. Slot j of configuration index m reads bit j for j <= p and
// bit j-1 for j > p, mapped to a spin via 1 - 2*bit.

inline int chain_spin(std::uint32_t m, int j, int p) {
  const int bit = (j <= p) ? ((m >> j) & 1u) : ((m >> (j - 1)) & 1u);
  return 1 - 2 * bit;
}

/// Path-integral weights of the mixer-only bit chain:
/// Q_a = 1/2 prod_{t=1..2p+1} <a_t| e^{i bt_t X} |a_{t-1}>
/// with bt = (0, -beta_1..-beta_p, 0, beta_p..beta_1) and
/// <a|e^{i th X}|b> = cos th if a = b, i sin th otherwise.
struct QVector {
  int p = 0;
  std::vector<std::complex<double>> q;  // 2^{2p+1} entries

  std::size_t size() const { return q.size(); }
};

inline std::vector<double> signed_betas(std::span<const double> betas) {
  const int p = static_cast<int>(betas.size());
  std::vector<double> bt(2 * p + 2, 0.0);
  for (int t = 1; t <= p; ++t) bt[t] = -betas[t - 1];
  for (int t = p + 2; t <= 2 * p + 1; ++t) bt[t] = betas[2 * p + 1 - t];
  return bt;
}

inline QVector compute_q(std::span<const double> betas) {
  const int p = static_cast<int>(betas.size());
  if (p < 1) throw ConfigError("compute_q: need p >= 1");
  if (p > 11) throw ConfigError("compute_q: p exceeds the 2^{2p+1} configuration cap (p <= 11)");
  QVector out;
  out.p = p;
  const std::uint32_t count = 1u << (2 * p + 1);
  out.q.resize(count);
  const std::vector<double> bt = signed_betas(betas);
  std::vector<std::complex<double>> diag(2 * p + 2), off(2 * p + 2);
  for (int t = 1; t <= 2 * p + 1; ++t) {
    diag[t] = {std::cos(bt[t]), 0.0};
    off[t] = {0.0, std::sin(bt[t])};
  }
  for (std::uint32_t m = 0; m < count; ++m) {
    std::complex<double> w(0.5, 0.0);
    int prev = chain_spin(m, 0, p);
    for (int t = 1; t <= 2 * p + 1; ++t) {
      const int cur = chain_spin(m, t, p);
      w *= (cur == prev) ? diag[t] : off[t];
      prev = cur;
    }
    out.q[m] = w;
  }
  return out;
}

/// Closed form for the mixer-only moment sum_a Q_a prod_r a_{j_r}:
/// sort the indices, pair them up, and accumulate B differences.
inline std::complex<double> noninteracting_correlation(std::span<const double> B,
                                                       std::vector<int> indices) {
  if (indices.size() % 2 != 0)
    throw ConfigError("noninteracting_correlation: index count must be even");
  std::sort(indices.begin(), indices.end());
  double phase = 0.0;
  for (std::size_t r = 0; r + 1 < indices.size(); r += 2)
    phase += B[indices[r + 1]] - B[indices[r]];
  return std::exp(std::complex<double>(0.0, -2.0 * phase));
}

/// Symmetric complex order-parameter matrix over slots 0..2p+1.
struct GMatrix {
  int p = 0;
  std::vector<std::complex<double>> g;  // row-major (2p+2)^2

  int dim() const { return 2 * p + 2; }
  std::complex<double>& at(int j, int k) { return g[static_cast<std::size_t>(j) * dim() + k]; }
  const std::complex<double>& at(int j, int k) const {
    return g[static_cast<std::size_t>(j) * dim() + k];
  }
  double inf_norm() const {
    double m = 0.0;
    for (const auto& z : g) m = std::max(m, std::abs(z));
    return m;
  }
};

/// Mixer-only solution: G_{j,k} = exp(-2i (B_max - B_min)) over the index pair.
inline GMatrix noninteracting_g(const DiscreteAngles& angles) {
  GMatrix G;
  G.p = angles.p;
  const int dim = G.dim();
  G.g.resize(static_cast<std::size_t>(dim) * dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) {
      const double lo = angles.B[std::min(j, k)];
      const double hi = angles.B[std::max(j, k)];
      G.at(j, k) = std::exp(std::complex<double>(0.0, -2.0 * (hi - lo)));
    }
  return G;
}

class GSolveError : public NumericalError {
 public:
  GSolveError(const std::string& msg, int iterations, double residual, double g_norm)
      : NumericalError(msg), iterations(iterations), residual(residual), g_norm(g_norm) {}
  int iterations;
  double residual;
  double g_norm;
};

struct GSolveOptions {
  double tol = 1e-12;
  double damping = 0.5;
  int max_iter = 20000;
};

struct GSolveReport {
  int iterations = 0;
  double residual = 0.0;
  double zstar_residual = 0.0;
  double g_inf_norm = 0.0;
};

namespace detail {

/// Evaluates the normalized fixed-point map
///   F(G)_{j,k} = sum_a Q_a e^{-q(a)/2} a_j a_k / sum_a Q_a e^{-q(a)/2},
///   q(a) = sum_{r,s} G_{r,s} Gamma_r Gamma_s a_r a_s,
/// and returns the un-normalized denominator (the Z* value) through `zstar`.
/// The configuration sum is a reduction over fixed chunks, so the result does
/// not depend on the worker count.
inline GMatrix g_fixed_point_map(const GMatrix& G, const QVector& Q,
                                 std::span<const double> Gamma,
                                 std::complex<double>* zstar = nullptr) {
  const int p = Q.p;
  const int dim = 2 * p + 2;
  const std::uint32_t count = static_cast<std::uint32_t>(Q.size());
  const int chunks = 64;
  const std::uint32_t chunk_size = (count + chunks - 1) / chunks;

  struct Partial {
    std::vector<std::complex<double>> num;
    std::complex<double> den{0.0, 0.0};
  };
  std::vector<Partial> parts(chunks);

  parallel_for(chunks, [&](std::size_t c) {
    Partial part;
    part.num.assign(static_cast<std::size_t>(dim) * dim, {0.0, 0.0});
    std::vector<double> v(dim);
    std::vector<std::complex<double>> gv(dim);
    std::vector<int> spin(dim);
    const std::uint32_t lo = static_cast<std::uint32_t>(c) * chunk_size;
    const std::uint32_t hi = std::min<std::uint32_t>(count, lo + chunk_size);
    for (std::uint32_t m = lo; m < hi; ++m) {
      for (int j = 0; j < dim; ++j) {
        spin[j] = chain_spin(m, j, p);
        v[j] = Gamma[j] * spin[j];
      }
      std::complex<double> quad(0.0, 0.0);
      for (int r = 0; r < dim; ++r) {
        std::complex<double> row(0.0, 0.0);
        const std::complex<double>* Gr = &G.g[static_cast<std::size_t>(r) * dim];
        for (int s = 0; s < dim; ++s) row += Gr[s] * v[s];
        quad += v[r] * row;
      }
      const std::complex<double> w = Q.q[m] * std::exp(-0.5 * quad);
      part.den += w;
      for (int j = 0; j < dim; ++j) gv[j] = (spin[j] == 1) ? w : -w;
      for (int j = 0; j < dim; ++j) {
        std::complex<double>* row = &part.num[static_cast<std::size_t>(j) * dim];
        const bool up = spin[j] == 1;
        for (int k = j; k < dim; ++k) row[k] += up ? gv[k] : -gv[k];
      }
    }
    parts[c] = std::move(part);
  });

  GMatrix F;
  F.p = p;
  F.g.assign(static_cast<std::size_t>(dim) * dim, {0.0, 0.0});
  std::complex<double> den(0.0, 0.0);
  for (const auto& part : parts) {
    den += part.den;
    for (std::size_t i = 0; i < F.g.size(); ++i) F.g[i] += part.num[i];
  }
  if (zstar) *zstar = den;
  for (int j = 0; j < dim; ++j)
    for (int k = j; k < dim; ++k) {
      const std::complex<double> val = F.at(j, k) / den;
      F.at(j, k) = val;
      F.at(k, j) = val;
    }
  return F;
}

}  // namespace detail

/// |sum_a Q_a exp(-q(a)/2) - 1| at the given G; vanishes at the solved
/// fixed point.
inline double zstar_residual(const GMatrix& G, const QVector& Q, std::span<const double> Gamma) {
  std::complex<double> z;
  detail::g_fixed_point_map(G, Q, Gamma, &z);
  return std::abs(z - std::complex<double>(1.0, 0.0));
}

/// Damped iteration G <- (1-eta) G + eta F(G) from the given seed matrix.
inline GMatrix solve_g_matrix_from(GMatrix G, const QVector& Q, const DiscreteAngles& angles,
                                   const GSolveOptions& opts = {},
                                   GSolveReport* report = nullptr) {
  if (!(opts.tol > 0.0)) throw ConfigError("solve_g_matrix: tol must be > 0");
  if (!(opts.damping > 0.0) || opts.damping > 1.0)
    throw ConfigError("solve_g_matrix: damping must be in (0, 1]");
  const int dim = G.dim();
  double residual = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    std::complex<double> z;
    GMatrix F = detail::g_fixed_point_map(G, Q, angles.Gamma, &z);
    residual = 0.0;
    for (std::size_t i = 0; i < G.g.size(); ++i)
      residual = std::max(residual, std::abs(F.g[i] - G.g[i]));
    for (std::size_t i = 0; i < G.g.size(); ++i)
      G.g[i] = (1.0 - opts.damping) * G.g[i] + opts.damping * F.g[i];
    // Unit diagonal is exact for the normalized map; pin it against drift.
    for (int j = 0; j < dim; ++j) G.at(j, j) = {1.0, 0.0};
    const double g_norm = G.inf_norm();
    if (!std::isfinite(g_norm) || g_norm > 1e3) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "solve_g_matrix: iterates exploded (|G|_inf %.3e after %d iterations, "
                    "residual %.3e)",
                    g_norm, it, residual);
      throw GSolveError(msg, it, residual, g_norm);
    }
    if (residual < opts.tol) {
      if (report) {
        report->iterations = it;
        report->residual = residual;
        report->zstar_residual = std::abs(z - std::complex<double>(1.0, 0.0));
        report->g_inf_norm = g_norm;
      }
      return G;
    }
  }
  char msg[160];
  std::snprintf(msg, sizeof msg,
                "solve_g_matrix: no convergence after %d iterations (residual %.3e)",
                opts.max_iter, residual);
  throw GSolveError(msg, opts.max_iter, residual, G.inf_norm());
}

/// Same iteration started at the mixer-only closed form.
inline GMatrix solve_g_matrix(const QVector& Q, const DiscreteAngles& angles,
                              const GSolveOptions& opts = {}, GSolveReport* report = nullptr) {
  return solve_g_matrix_from(noninteracting_g(angles), Q, angles, opts, report);
}

inline GMatrix solve_g_matrix(const DiscreteAngles& angles, const GSolveOptions& opts = {},
                              GSolveReport* report = nullptr) {
  return solve_g_matrix(compute_q(angles.beta), angles, opts, report);
}

/// Infinite-size energy density (i/2) sum_r Gamma_r G_{r,p+1}^2; real at a
/// converged symmetric fixed point.
inline double infinite_size_energy(const GMatrix& G, std::span<const double> Gamma) {
  const int dim = G.dim();
  const int mid = G.p + 1;
  std::complex<double> acc(0.0, 0.0);
  for (int r = 0; r < dim; ++r) {
    const std::complex<double> grm = G.at(r, mid);
    acc += Gamma[r] * grm * grm;
  }
  const std::complex<double> e = std::complex<double>(0.0, 0.5) * acc;
  if (std::abs(e.imag()) > 1e-8)
    throw NumericalError("infinite_size_energy: imaginary part " + std::to_string(e.imag()) +
                         " above threshold; G looks unconverged");
  return e.real();
}

inline double infinite_size_energy(const GMatrix& G, const DiscreteAngles& angles) {
  return infinite_size_energy(G, angles.Gamma);
}

/// CSV export, rows j,k,re,im.
inline void export_g_csv(const GMatrix& G, std::ostream& os) {
  char buf[96];
  os << "j,k,re,im\n";
  for (int j = 0; j < G.dim(); ++j)
    for (int k = 0; k < G.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", j, k, G.at(j, k).real(),
                    G.at(j, k).imag());
      os << buf;
    }
}

}  // namespace skqa
