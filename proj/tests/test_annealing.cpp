#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "skqa/annealing.hpp"
#include "skqa/numeric.hpp"
#include "skqa/schedule.hpp"
#include "skqa/sk_model.hpp"
#include "skqa/statevector.hpp"

using namespace skqa;

TEST_CASE("degenerate schedules", "[annealing]") {
  const CostVector cv = cost_values(sample_instance(6, 1));
  SECTION("mixer-only schedule keeps zero energy") {
    const ContinuousSchedule s = ContinuousSchedule::constant(0.0, 1.3);
    const EvolveResult r = evolve(cv, s, {1e-10, 64, 1 << 16});
    REQUIRE(std::abs(r.energy) <= 1e-10);
  }
  SECTION("phase-only schedule keeps flat moduli and zero energy") {
    const ContinuousSchedule s = ContinuousSchedule::constant(0.9, 0.0);
    const EvolveResult r = evolve(cv, s, {1e-10, 64, 1 << 16});
    REQUIRE(std::abs(r.energy) <= 1e-10);
    const double expected = std::pow(2.0, -3.0);
    for (const auto& a : r.state.amp)
      REQUIRE(std::abs(a) == Catch::Approx(expected).margin(1e-12));
  }
  SECTION("zero schedule gives zero energy") {
    REQUIRE(std::abs(annealing_energy(cv, ContinuousSchedule::constant(0.0, 0.0), 1e-9)) <= 1e-14);
  }
}

TEST_CASE("splitting is second order", "[annealing]") {
  const CostVector cv = cost_values(sample_instance(8, 4));
  const ContinuousSchedule sched = reference_schedule(4.0);
  const double ref = energy_density(cv, strang_evolve(cv, sched, 16384));
  std::vector<double> lh, le;
  for (std::size_t steps : {64, 128, 256, 512}) {
    const double err = std::abs(energy_density(cv, strang_evolve(cv, sched, steps)) - ref);
    REQUIRE(err > 0.0);
    lh.push_back(std::log(1.0 / static_cast<double>(steps)));
    le.push_back(std::log(err));
  }
  const LinearFit f = linear_fit(lh, le);
  CHECK(f.slope == Catch::Approx(2.0).margin(0.2));
}

TEST_CASE("refinement ladder", "[annealing]") {
  const CostVector cv = cost_values(sample_instance(7, 12));
  const ContinuousSchedule sched = reference_schedule(3.0);
  SECTION("tolerances 1e-8 and 1e-10 agree to 1e-7") {
    const double a = annealing_energy(cv, sched, 1e-8);
    const double b = annealing_energy(cv, sched, 1e-10);
    REQUIRE(std::abs(a - b) <= 1e-7);
  }
  SECTION("norm is conserved") {
    const EvolveResult r = evolve(cv, sched, {1e-8, 64, 1 << 20});
    REQUIRE(std::abs(norm(r.state) - 1.0) <= 1e-12);
  }
  SECTION("nonpositive tolerance rejected") {
    REQUIRE_THROWS_AS(evolve(cv, sched, {0.0, 64, 1 << 20}), ConfigError);
  }
  SECTION("step cap reported with the achieved residual") {
    try {
      evolve(cv, reference_schedule(40.0), {1e-13, 64, 256});
      FAIL("expected AnnealingError");
    } catch (const AnnealingError& e) {
      REQUIRE(e.steps == 256);
      REQUIRE(e.residual > 0.0);
    }
  }
}

TEST_CASE("deep circuit matches the continuous energy", "[annealing]") {
  // Interval-rule discretization at p = 256 against the integrator, on the
  // fixed-total-time schedule; the gap sits below 10x the integrator
  // tolerance once the tolerance resolves the discretization error.
  const CostVector cv = cost_values(sample_instance(8, 7));
  const ContinuousSchedule sched = reference_schedule(17.0);
  const double tol = 2e-5;
  const double annealed = annealing_energy(cv, sched, tol);
  const double circuit = qaoa_energy(cv, discretize_theory(sched, 256));
  REQUIRE(std::abs(circuit - annealed) <= 10.0 * tol);
}

TEST_CASE("discretized circuit approaches the continuous state", "[annealing]") {
  const SkInstance inst = sample_instance(6, 33);
  const CostVector cv = cost_values(inst);
  const ContinuousSchedule sched = reference_schedule(6.0);
  const EvolveResult cont = evolve(cv, sched, {1e-9, 256, 1 << 20});
  double prev = 2.0;
  for (int p : {32, 64, 128, 256}) {
    const StateVector circ = qaoa_state(cv, discretize_theory(sched, p));
    KahanSum acc;
    for (std::size_t i = 0; i < circ.amp.size(); ++i)
      acc.add(std::norm(circ.amp[i] - cont.state.amp[i]));
    const double dist = std::sqrt(acc.value());
    REQUIRE(dist < prev);
    prev = dist;
  }
  REQUIRE(prev < 0.05);
}
