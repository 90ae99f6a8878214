#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "skqa/experiments.hpp"
#include "skqa/rng.hpp"

using namespace skqa;

TEST_CASE("fit_decay_exponent", "[experiments]") {
  SECTION("pure 1/p series") {
    std::vector<std::pair<double, double>> s;
    for (double p : {4.0, 8.0, 16.0, 32.0}) s.emplace_back(p, 5.0 / p);
    const LinearFit f = fit_decay_exponent(s);
    CHECK(f.slope == Catch::Approx(-1.0).margin(1e-12));
    CHECK(f.r2 == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("constant series") {
    std::vector<std::pair<double, double>> s{{2, 0.7}, {4, 0.7}, {8, 0.7}, {16, 0.7}};
    CHECK(fit_decay_exponent(s).slope == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("noisy 1/p^2 series") {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < 12; ++i) {
      const double p = 4.0 * std::pow(1.6, i);
      const double noise = 1.0 + 0.01 * (2.0 * uniform(99, i) - 1.0);
      s.emplace_back(p, 3.0 / (p * p) * noise);
    }
    CHECK(fit_decay_exponent(s).slope == Catch::Approx(-2.0).margin(0.05));
  }
  SECTION("validation") {
    std::vector<std::pair<double, double>> two{{1, 1}, {2, 1}};
    REQUIRE_THROWS_AS(fit_decay_exponent(two), ConfigError);
    std::vector<std::pair<double, double>> neg{{1, 1}, {2, -1}, {3, 1}};
    REQUIRE_THROWS_AS(fit_decay_exponent(neg), ConfigError);
  }
}

TEST_CASE("emit_outputs determinism and shape", "[experiments]") {
  SECTION("empty record set: header-only CSV, empty-axes SVG") {
    const std::vector<ExperimentRecord> empty;
    CHECK(records_to_csv(empty) == "experiment,p,n,delta,T,metric,value,stderr,instances,base_seed\n");
    const std::string svg = render_records_svg(empty, {});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") == std::string::npos);
  }
  SECTION("golden fixture renders byte-identically") {
    std::vector<ExperimentRecord> recs;
    for (int n : {4, 6, 8})
      for (int p : {2, 4, 8, 16})
        recs.push_back({"constant_time", p, n, 1.0 / p, 1.0, "energy_gap",
                        0.5 / p + 0.01 * n, 0.001, 10, 7});
    const std::string csv1 = records_to_csv(recs);
    const std::string csv2 = records_to_csv(recs);
    REQUIRE(csv1 == csv2);
    PlotRequest req;
    const std::string svg1 = render_records_svg(recs, req);
    const std::string svg2 = render_records_svg(recs, req);
    REQUIRE(svg1 == svg2);
    // three series, one legend entry each
    std::size_t legends = 0, pos = 0;
    while ((pos = svg1.find("class=\"legend\"", pos)) != std::string::npos) {
      ++legends;
      pos += 10;
    }
    REQUIRE(legends == 3);
  }
  SECTION("CSV round trip") {
    std::vector<ExperimentRecord> recs{
        {"delta_sweep", 4, 10, 0.8, 3.2, "residual_ar", -0.123456789012345, 0.01, 100, 99}};
    std::stringstream ss(records_to_csv(recs));
    const auto back = records_from_csv(ss);
    REQUIRE(back.size() == 1);
    CHECK(back[0].experiment == "delta_sweep");
    CHECK(back[0].p == 4);
    CHECK(back[0].delta == 0.8);
    CHECK(back[0].value == -0.123456789012345);
    CHECK(back[0].base_seed == 99);
  }
}

TEST_CASE("config parsing", "[experiments]") {
  SECTION("key=value file with comments and overrides") {
    std::stringstream ss("# comment\np_list = 2,4\nn_list=4\nT = 1.5\ninstances = 8\n"
                         "base_seed = 11\ntol = 1e-6\n");
    const auto kv = parse_key_values(ss);
    const SweepConfig cfg = sweep_config_from(kv);
    CHECK(cfg.p_list == std::vector<int>{2, 4});
    CHECK(cfg.n_list == std::vector<int>{4});
    CHECK(cfg.T == 1.5);
    CHECK(cfg.instances == 8);
    CHECK(cfg.base_seed == 11);
    CHECK(cfg.tol == 1e-6);
  }
  SECTION("unknown keys rejected") {
    std::stringstream ss("p_list = 2\nwat = 3\n");
    REQUIRE_THROWS_AS(sweep_config_from(parse_key_values(ss)), ConfigError);
  }
  SECTION("malformed lines rejected") {
    std::stringstream ss("p_list 2\n");
    REQUIRE_THROWS_AS(parse_key_values(ss), ConfigError);
  }
  SECTION("validation failures") {
    SweepConfig cfg;
    cfg.p_list = {2};
    cfg.n_list = {};
    REQUIRE_THROWS_AS(run_constant_time_sweep(cfg), ConfigError);
  }
}

TEST_CASE("constant-time sweep", "[experiments]") {
  SECTION("T = 0 gives exactly zero gaps") {
    SweepConfig cfg;
    cfg.p_list = {1, 2};
    cfg.n_list = {3};
    cfg.T = 0.0;
    cfg.instances = 3;
    cfg.tol = 1e-8;
    const auto recs = run_constant_time_sweep(cfg);
    for (const auto& r : recs)
      if (r.metric == "energy_gap") {
        REQUIRE(r.value == 0.0);
        REQUIRE(r.stderr_ == 0.0);
      }
  }
  SECTION("gap decays with depth on an in-regime configuration") {
    SweepConfig cfg;
    cfg.p_list = {4, 8, 16};
    cfg.n_list = {6};
    cfg.T = 2.0;
    cfg.instances = 20;
    cfg.tol = 1e-7;
    cfg.base_seed = 12;
    const auto recs = run_constant_time_sweep(cfg);
    std::vector<std::pair<double, double>> series;
    for (const auto& r : recs)
      if (r.metric == "energy_gap") series.emplace_back(r.p, r.value);
    REQUIRE(series.size() == 3);
    const LinearFit f = fit_decay_exponent(series);
    CHECK(f.slope < -0.5);
    CHECK(f.slope > -1.6);
  }
  SECTION("byte-for-byte reproducible from (config, base_seed)") {
    SweepConfig cfg;
    cfg.p_list = {2, 4};
    cfg.n_list = {4};
    cfg.T = 0.5;
    cfg.instances = 4;
    cfg.tol = 1e-6;
    cfg.base_seed = 3;
    const std::string csv1 = records_to_csv(run_constant_time_sweep(cfg));
    const std::string csv2 = records_to_csv(run_constant_time_sweep(cfg));
    REQUIRE(csv1 == csv2);
    REQUIRE(csv1.find("energy_gap") != std::string::npos);
    REQUIRE(csv1.find("nu_anneal") != std::string::npos);
  }
}

TEST_CASE("delta sweep", "[experiments]") {
  SECTION("identical simulators in both slots give residual exactly zero") {
    SweepConfig cfg;
    cfg.p_list = {1, 2};
    cfg.n_list = {3};
    cfg.delta_list = {0.4, 0.8};
    cfg.instances = 3;
    const auto recs = run_delta_sweep(cfg, qaoa_simulator(), qaoa_simulator());
    bool saw_residual = false;
    for (const auto& r : recs)
      if (r.metric == "residual_ar") {
        saw_residual = true;
        REQUIRE(r.value == 0.0);
      }
    REQUIRE(saw_residual);
  }
  SECTION("degenerate baseline is flagged, not divided") {
    SweepConfig cfg;
    cfg.p_list = {1};
    cfg.n_list = {3};
    cfg.delta_list = {0.5};
    cfg.instances = 3;
    // Annealing slot pinned to the exact optimum: 1 - ar_qa vanishes.
    const SimulatorFn at_optimum = [](const CostVector& costs, const DiscreteAngles&,
                                      const ContinuousSchedule&, double) {
      return ground_energy(costs).energy / costs.n;
    };
    const auto recs = run_delta_sweep(cfg, qaoa_simulator(), at_optimum);
    bool flagged = false;
    for (const auto& r : recs) {
      REQUIRE(r.metric != "residual_ar");
      if (r.metric == "residual_ar_flagged") flagged = true;
    }
    REQUIRE(flagged);
  }
  SECTION("records carry both approximation ratios") {
    SweepConfig cfg;
    cfg.p_list = {2};
    cfg.n_list = {4};
    cfg.delta_list = {0.5};
    cfg.instances = 4;
    cfg.tol = 1e-6;
    const auto recs = run_delta_sweep(cfg);
    int seen = 0;
    for (const auto& r : recs) {
      if (r.metric == "ar_qaoa" || r.metric == "ar_qa") {
        ++seen;
        REQUIRE(std::isfinite(r.value));
      }
      REQUIRE(r.T == Catch::Approx(1.0));
    }
    REQUIRE(seen == 2);
  }
}
