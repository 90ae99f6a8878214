#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "skqa/annealing.hpp"
#include "skqa/errors.hpp"
#include "skqa/gauss_hermite.hpp"
#include "skqa/gmatrix.hpp"
#include "skqa/numeric.hpp"
#include "skqa/parallel.hpp"
#include "skqa/schedule.hpp"
#include "skqa/sk_model.hpp"
#include "skqa/statevector.hpp"

namespace skqa {

namespace detail {

/// Shared tables for the exact configuration sum: Q weights, the squared
/// phase profile phi(c)^2 = (sum_l Gamma_l c_l)^2 indexed by configuration,
/// and the per-configuration sign rows a_p(c) * a_l(c).
struct QgmsTables {
  int n = 0;
  int p = 0;
  int dim = 0;                          // 2p+2 slots
  std::uint32_t configs = 0;            // 2^{2p+1}
  std::vector<std::complex<double>> q;  // Q weights
  std::vector<double> phi2;             // phi^2 per configuration
  std::vector<std::int8_t> mid_sign;    // configs x dim, a_p * a_l
  std::vector<double> gamma_seq;        // Gamma, size dim

  QgmsTables(int n_, const DiscreteAngles& angles) {
    n = n_;
    p = angles.p;
    dim = 2 * p + 2;
    configs = 1u << (2 * p + 1);
    const QVector qv = compute_q(angles.beta);
    q = qv.q;
    gamma_seq = angles.Gamma;
    phi2.resize(configs);
    mid_sign.resize(static_cast<std::size_t>(configs) * dim);
    for (std::uint32_t m = 0; m < configs; ++m) {
      double phi = 0.0;
      const int ap = chain_spin(m, p, p);
      for (int l = 0; l < dim; ++l) {
        const int al = chain_spin(m, l, p);
        phi += angles.Gamma[l] * al;
        mid_sign[static_cast<std::size_t>(m) * dim + l] = static_cast<std::int8_t>(ap * al);
      }
      phi2[m] = phi * phi;
    }
  }
};

/// Enumerates compositions of `remaining` over slots i..configs-1 in
/// colexicographic order, carrying the multinomial coefficient, the product
/// of Q powers, and the pair-sum sum_{a,b} phi^2_{a xor b} n_a n_b
/// incrementally (O(#assigned) per extension).
struct QgmsEnumerator {
  const QgmsTables& tab;
  std::vector<std::pair<std::uint32_t, int>> assigned;  // (slot, count), nonzero only
  std::vector<std::int64_t> tvec;                       // sum_a n_a * (a_p a_l)
  KahanComplex acc;

  explicit QgmsEnumerator(const QgmsTables& t) : tab(t), tvec(t.dim, 0) {
    assigned.reserve(static_cast<std::size_t>(t.n));
  }

  void leaf(double multinom, std::complex<double> qpow, double pair_sum) {
    const double gauss = std::exp(-pair_sum / (4.0 * tab.n));
    double corr = 0.0;
    for (int l = 0; l < tab.dim; ++l) {
      const double t = static_cast<double>(tvec[l]);
      corr += tab.gamma_seq[l] * t * t;
    }
    corr /= static_cast<double>(tab.n) * tab.n;
    acc.add(multinom * gauss * corr * qpow);
  }

  void recurse(std::uint32_t slot, int remaining, double multinom,
               std::complex<double> qpow, double pair_sum) {
    if (slot + 1 == tab.configs) {
      extend(slot, remaining, remaining, multinom, qpow, pair_sum,
             [&](double m2, std::complex<double> q2, double s2) { leaf(m2, q2, s2); });
      return;
    }
    for (int k = 0; k <= remaining; ++k)
      extend(slot, remaining, k, multinom, qpow, pair_sum,
             [&](double m2, std::complex<double> q2, double s2) {
               recurse(slot + 1, remaining - k, m2, q2, s2);
             });
  }

  template <class Next>
  void extend(std::uint32_t slot, int remaining, int k, double multinom,
              std::complex<double> qpow, double pair_sum, Next next) {
    if (k == 0) {
      next(multinom, qpow, pair_sum);
      return;
    }
    multinom *= binomial(remaining, k);
    for (int i = 0; i < k; ++i) qpow *= tab.q[slot];
    double s2 = pair_sum + static_cast<double>(k) * k * tab.phi2[0];
    for (const auto& [j, c] : assigned)
      s2 += 2.0 * k * c * tab.phi2[slot ^ j];
    assigned.emplace_back(slot, k);
    const std::int8_t* sg = &tab.mid_sign[static_cast<std::size_t>(slot) * tab.dim];
    for (int l = 0; l < tab.dim; ++l) tvec[l] += static_cast<std::int64_t>(k) * sg[l];
    next(multinom, qpow, s2);
    for (int l = 0; l < tab.dim; ++l) tvec[l] -= static_cast<std::int64_t>(k) * sg[l];
    assigned.pop_back();
  }
};

}  // namespace detail

inline double qgms_composition_count(int n, int p) {
  const double slots = std::pow(2.0, 2 * p + 1);
  // C(n + |S| - 1, |S| - 1) evaluated in floating point is exact here.
  double r = 1.0;
  for (int i = 1; i <= n; ++i) r = r * (slots - 1 + i) / i;
  return r;
}

/// Exact finite-n disorder-averaged energy density E_J <C/n> as a sum over
/// bit-configuration compositions, evaluated at the final layer. The middle
/// slot pair carries the continuation angle with opposite signs, so its value
/// cancels from the result.
inline double qgms_energy_exact(int n, const DiscreteAngles& angles,
                                unsigned workers = 0) {
  if (n < 1) throw ConfigError("qgms_energy_exact: n must be >= 1");
  if (qgms_composition_count(n, angles.p) > 1e7)
    throw NumericalError("qgms_energy_exact: composition count above the 1e7 cap");
  const detail::QgmsTables tab(n, angles);

  // Partition by the count assigned to slot 0; merge in slot-count order.
  std::vector<std::complex<double>> partial(static_cast<std::size_t>(n) + 1);
  parallel_for(static_cast<std::size_t>(n) + 1, [&](std::size_t k0) {
    detail::QgmsEnumerator en(tab);
    en.extend(0, n, static_cast<int>(k0), 1.0, {1.0, 0.0}, 0.0,
              [&](double m2, std::complex<double> q2, double s2) {
                en.recurse(1, n - static_cast<int>(k0), m2, q2, s2);
              });
    partial[k0] = en.acc.value();
  }, workers);

  KahanComplex total;
  for (const auto& z : partial) total.add(z);
  const std::complex<double> e = std::complex<double>(0.0, 0.5) * total.value();
  if (std::abs(e.imag()) > 1e-9 * std::max(1.0, std::abs(e.real())))
    throw NumericalError("qgms_energy_exact: imaginary residue " +
                         std::to_string(e.imag()) + " above threshold");
  return e.real();
}

/// Tensorized Gauss-Hermite average of the circuit energy over the Gaussian
/// couplings; independent of the configuration-sum path.
inline double quadrature_disorder_average(int n, const DiscreteAngles& angles,
                                          int nodes_per_coupling) {
  const std::size_t pairs = SkInstance::pair_count(n);
  if (pairs > 3)
    throw ConfigError("quadrature_disorder_average: more than 3 couplings");
  if (nodes_per_coupling < 8)
    throw ConfigError("quadrature_disorder_average: need >= 8 nodes");
  const QuadratureRule rule = gauss_hermite_normal(nodes_per_coupling);
  if (pairs == 0) return 0.0;

  std::vector<int> idx(pairs, 0);
  std::vector<double> couplings(pairs, 0.0);
  KahanSum acc;
  for (;;) {
    double w = 1.0;
    for (std::size_t d = 0; d < pairs; ++d) {
      couplings[d] = rule.nodes[idx[d]];
      w *= rule.weights[idx[d]];
    }
    acc.add(w * qaoa_energy(instance_from_couplings(n, couplings), angles));
    std::size_t d = 0;
    while (d < pairs && ++idx[d] == nodes_per_coupling) {
      idx[d] = 0;
      ++d;
    }
    if (d == pairs) break;
  }
  return acc.value();
}

struct McResult {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean / standard error of the circuit energy over instances seeded
/// base_seed + index. Deterministic for fixed inputs and any worker count.
inline McResult monte_carlo_disorder_average(int n, const DiscreteAngles& angles,
                                             int num_instances, std::uint64_t base_seed) {
  if (num_instances < 2)
    throw ConfigError("monte_carlo_disorder_average: need >= 2 instances");
  std::vector<double> vals(num_instances);
  parallel_for(static_cast<std::size_t>(num_instances), [&](std::size_t i) {
    vals[i] = qaoa_energy(sample_instance(n, base_seed + i), angles);
  });
  const MeanStderr ms = mean_stderr(vals);
  return {ms.mean, ms.stderr_};
}

/// Annealing variant of the disorder average.
inline McResult monte_carlo_disorder_average(int n, const ContinuousSchedule& sched,
                                             double tol, int num_instances,
                                             std::uint64_t base_seed) {
  if (num_instances < 2)
    throw ConfigError("monte_carlo_disorder_average: need >= 2 instances");
  std::vector<double> vals(num_instances);
  parallel_for(static_cast<std::size_t>(num_instances), [&](std::size_t i) {
    vals[i] = annealing_energy(sample_instance(n, base_seed + i), sched, tol);
  });
  const MeanStderr ms = mean_stderr(vals);
  return {ms.mean, ms.stderr_};
}

struct ConcentrationRow {
  int n = 0;
  double mean = 0.0;
  double variance = 0.0;
};

struct ConcentrationTable {
  std::vector<ConcentrationRow> rows;
  double decay_exponent = 0.0;  // slope of log variance vs log n
  double r2 = 0.0;
};

/// Per-size empirical variance of the per-instance circuit energy for the
/// midpoint discretization of `sched` at depth p, with the fitted decay
/// exponent of variance against n.
inline ConcentrationTable empirical_concentration(std::span<const int> ns,
                                                  const ContinuousSchedule& sched, int p,
                                                  int instances, std::uint64_t base_seed) {
  ConcentrationTable table;
  const DiscreteAngles angles = extrapolate(sched, p);
  for (int n : ns) {
    std::vector<double> vals(instances);
    parallel_for(static_cast<std::size_t>(instances), [&](std::size_t i) {
      vals[i] = qaoa_energy(sample_instance(n, base_seed + i), angles);
    });
    ConcentrationRow row;
    row.n = n;
    row.mean = mean_stderr(vals).mean;
    row.variance = sample_variance(vals);
    table.rows.push_back(row);
  }
  if (table.rows.size() >= 2) {
    std::vector<double> lx, ly;
    for (const auto& r : table.rows)
      if (r.variance > 0.0) {
        lx.push_back(std::log(static_cast<double>(r.n)));
        ly.push_back(std::log(r.variance));
      }
    if (lx.size() >= 2) {
      const LinearFit f = linear_fit(lx, ly);
      table.decay_exponent = f.slope;
      table.r2 = f.r2;
    }
  }
  return table;
}

}  // namespace skqa
