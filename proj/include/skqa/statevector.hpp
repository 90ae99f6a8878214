#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "skqa/errors.hpp"
#include "skqa/numeric.hpp"
#include "skqa/schedule.hpp"
#include "skqa/sk_model.hpp"

namespace skqa {

/// Dense 2^n-amplitude state, basis index bit i = qubit i.
struct StateVector {
  int n = 0;
  std::vector<std::complex<double>> amp;

  std::size_t dim() const { return amp.size(); }
};

inline StateVector plus_state(int n) {
  if (n < 1 || n > kMaxQubits)
    throw ConfigError("plus_state: n must be in [1, 24]");
  StateVector s;
  s.n = n;
  s.amp.assign(std::size_t{1} << n, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
  return s;
}

inline double norm(const StateVector& s) {
  KahanSum acc;
  for (const auto& a : s.amp) acc.add(std::norm(a));
  return std::sqrt(acc.value());
}

/// Multiplies each amplitude by exp(-i * gamma * value(sigma)).
inline StateVector& apply_phase(StateVector& s, const CostVector& costs, double gamma) {
  if (costs.values.size() != s.dim())
    throw ConfigError("apply_phase: dimension mismatch");
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    const double th = -gamma * costs.values[i];
    s.amp[i] *= std::complex<double>(std::cos(th), std::sin(th));
  }
  return s;
}

/// Applies exp(-i beta X) = cos(beta) I - i sin(beta) X on every qubit.
inline StateVector& apply_mixer(StateVector& s, double beta) {
  const double c = std::cos(beta);
  const std::complex<double> ms(0.0, -std::sin(beta));
  const std::size_t dim = s.dim();
  for (int q = 0; q < s.n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t base = 0; base < dim; base += 2 * bit)
      for (std::size_t i = base; i < base + bit; ++i) {
        const std::complex<double> a = s.amp[i];
        const std::complex<double> b = s.amp[i + bit];
        s.amp[i] = c * a + ms * b;
        s.amp[i + bit] = c * b + ms * a;
      }
  }
  return s;
}

/// p-layer circuit: phase then mixer per layer, acting on |+>^n.
/// Uses gamma_1..gamma_p only; the continuation slot gamma_{p+1} never enters.
inline StateVector qaoa_state(const CostVector& costs, const DiscreteAngles& angles) {
  StateVector s = plus_state(costs.n);
  for (int t = 0; t < angles.p; ++t) {
    apply_phase(s, costs, angles.gamma[t]);
    apply_mixer(s, angles.beta[t]);
  }
  return s;
}

inline StateVector qaoa_state(const SkInstance& inst, const DiscreteAngles& angles) {
  return qaoa_state(cost_values(inst), angles);
}

/// <psi| C/n |psi>, a real quadratic form in |amplitude|^2.
inline double energy_density(const CostVector& costs, const StateVector& state) {
  if (costs.values.size() != state.dim())
    throw ConfigError("energy_density: dimension mismatch");
  KahanSum acc;
  for (std::size_t i = 0; i < state.dim(); ++i)
    acc.add(std::norm(state.amp[i]) * costs.values[i]);
  return acc.value() / costs.n;
}

inline double qaoa_energy(const CostVector& costs, const DiscreteAngles& angles) {
  return energy_density(costs, qaoa_state(costs, angles));
}

inline double qaoa_energy(const SkInstance& inst, const DiscreteAngles& angles) {
  const CostVector costs = cost_values(inst);
  return energy_density(costs, qaoa_state(costs, angles));
}

/// Amplitude dump for debugging: CSV rows "index,re,im".
inline void dump_amplitudes(const StateVector& s, std::ostream& os) {
  char buf[96];
  os << "index,re,im\n";
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, s.amp[i].real(), s.amp[i].imag());
    os << buf;
  }
}

}  // namespace skqa
