#pragma once

#include <cstddef>
#include <cstdio>
#include <string>

#include "skqa/errors.hpp"
#include "skqa/schedule.hpp"
#include "skqa/sk_model.hpp"
#include "skqa/statevector.hpp"

namespace skqa {

class AnnealingError : public NumericalError {
 public:
  AnnealingError(const std::string& msg, double residual, std::size_t steps)
      : NumericalError(msg), residual(residual), steps(steps) {}
  double residual;
  std::size_t steps;
};

/// One pass of Strang splitting for i dpsi/du = (gamma(u) C + beta(u) B) psi
/// over u in [0,1] with `steps` equal steps and midpoint-sampled coefficients:
/// half-phase, full mixer, half-phase per step. Adjacent half-phases are
/// fused into one diagonal multiply.
inline StateVector strang_evolve(const CostVector& costs, const ContinuousSchedule& sched,
                                 std::size_t steps) {
  const double h = 1.0 / static_cast<double>(steps);
  StateVector s = plus_state(costs.n);
  auto mid = [&](std::size_t k) { return (static_cast<double>(k) + 0.5) * h; };
  apply_phase(s, costs, sched.gamma(mid(0)) * h * 0.5);
  for (std::size_t k = 0; k < steps; ++k) {
    apply_mixer(s, sched.beta(mid(k)) * h);
    if (k + 1 < steps)
      apply_phase(s, costs, (sched.gamma(mid(k)) + sched.gamma(mid(k + 1))) * h * 0.5);
    else
      apply_phase(s, costs, sched.gamma(mid(k)) * h * 0.5);
  }
  return s;
}

struct EvolveOptions {
  double tol = 1e-8;
  std::size_t initial_steps = 64;
  std::size_t max_steps = std::size_t{1} << 20;
};

struct EvolveResult {
  StateVector state;
  double energy = 0.0;
  std::size_t steps = 0;
  double residual = 0.0;  // |energy(N) - energy(N/2)| at acceptance
};

/// Doubles the step count until the energy density moves by less than tol
/// between refinements; returns the finer state.
inline EvolveResult evolve(const CostVector& costs, const ContinuousSchedule& sched,
                           const EvolveOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw ConfigError("evolve: tol must be > 0");
  std::size_t steps = opts.initial_steps;
  StateVector state = strang_evolve(costs, sched, steps);
  double energy = energy_density(costs, state);
  double residual = 0.0;
  while (steps < opts.max_steps) {
    const std::size_t finer = steps * 2;
    StateVector next = strang_evolve(costs, sched, finer);
    const double next_energy = energy_density(costs, next);
    residual = std::abs(next_energy - energy);
    state = std::move(next);
    energy = next_energy;
    steps = finer;
    if (residual < opts.tol) return {std::move(state), energy, steps, residual};
  }
  char msg[128];
  std::snprintf(msg, sizeof msg,
                "evolve: step cap reached before energy settled (residual %.3e at %zu steps)",
                residual, steps);
  throw AnnealingError(msg, residual, steps);
}

inline EvolveResult evolve(const SkInstance& inst, const ContinuousSchedule& sched,
                           const EvolveOptions& opts = {}) {
  return evolve(cost_values(inst), sched, opts);
}

inline double annealing_energy(const CostVector& costs, const ContinuousSchedule& sched,
                               double tol = 1e-8) {
  EvolveOptions opts;
  opts.tol = tol;
  return evolve(costs, sched, opts).energy;
}

inline double annealing_energy(const SkInstance& inst, const ContinuousSchedule& sched,
                               double tol = 1e-8) {
  return annealing_energy(cost_values(inst), sched, tol);
}

}  // namespace skqa
