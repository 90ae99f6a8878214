#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "skqa/numeric.hpp"
#include "skqa/rng.hpp"
#include "skqa/schedule.hpp"

using namespace skqa;

TEST_CASE("fourier analyze / synthesize round trip", "[schedule]") {
  SECTION("bundled 17-layer angles reproduce to 1e-10") {
    const auto& g = reference_gammas_p17();
    const auto& b = reference_betas_p17();
    const FourierCoeffs c = fourier_analyze(g, b);
    const auto [g2, b2] = fourier_synthesize(c);
    for (std::size_t t = 0; t < g.size(); ++t) {
      REQUIRE(g2[t] == Catch::Approx(g[t]).margin(1e-10));
      REQUIRE(b2[t] == Catch::Approx(b[t]).margin(1e-10));
    }
    CHECK(g2[0] == Catch::Approx(0.1735).margin(1e-10));
    CHECK(b2[0] == Catch::Approx(0.6375).margin(1e-10));
  }
  SECTION("random angle lists round trip to 1e-10") {
    for (int p0 : {1, 2, 5, 23}) {
      std::vector<double> g(p0), b(p0);
      for (int t = 0; t < p0; ++t) {
        g[t] = uniform(7, 2 * t) - 0.5;
        b[t] = uniform(7, 2 * t + 1) - 0.5;
      }
      const auto [g2, b2] = fourier_synthesize(fourier_analyze(g, b));
      for (int t = 0; t < p0; ++t) {
        REQUIRE(g2[t] == Catch::Approx(g[t]).margin(1e-10));
        REQUIRE(b2[t] == Catch::Approx(b[t]).margin(1e-10));
      }
    }
  }
  SECTION("single-layer round trip is the 1x1 transform") {
    const double g = 0.7;
    const auto [g2, b2] = fourier_synthesize(fourier_analyze({{g}}, {{0.25}}));
    REQUIRE(g2[0] == Catch::Approx(g).margin(1e-14));
    REQUIRE(b2[0] == Catch::Approx(0.25).margin(1e-14));
  }
  SECTION("zero angles give zero coefficients") {
    const FourierCoeffs c = fourier_analyze(std::vector<double>(5, 0.0), std::vector<double>(5, 0.0));
    for (double x : c.gamma) REQUIRE(x == 0.0);
    for (double x : c.beta) REQUIRE(x == 0.0);
  }
  SECTION("length mismatch rejected") {
    REQUIRE_THROWS_AS(fourier_analyze(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                      ConfigError);
  }
}

TEST_CASE("extrapolate midpoint rule", "[schedule]") {
  SECTION("p = p0 at scale p0 recovers the bundled angles to 1e-10") {
    const DiscreteAngles raw = extrapolate(reference_schedule(17.0, false), 17);
    const DiscreteAngles minimizing = extrapolate(reference_schedule(17.0), 17);
    const auto& g = reference_gammas_p17();
    const auto& b = reference_betas_p17();
    for (int t = 0; t < 17; ++t) {
      REQUIRE(raw.gamma[t] == Catch::Approx(g[t]).margin(1e-10));
      REQUIRE(raw.beta[t] == Catch::Approx(b[t]).margin(1e-10));
      REQUIRE(minimizing.gamma[t] == Catch::Approx(g[t]).margin(1e-10));
      REQUIRE(minimizing.beta[t] == Catch::Approx(-b[t]).margin(1e-10));
    }
  }
  SECTION("constant schedule gives g/p, b/p") {
    const DiscreteAngles a = extrapolate(ContinuousSchedule::constant(0.7, -0.2), 5);
    for (int t = 0; t < 5; ++t) {
      REQUIRE(a.gamma[t] == Catch::Approx(0.7 / 5).epsilon(1e-15));
      REQUIRE(a.beta[t] == Catch::Approx(-0.2 / 5).epsilon(1e-15));
    }
  }
  SECTION("doubling p halves constant-schedule angles exactly") {
    const ContinuousSchedule s = ContinuousSchedule::constant(0.7, 0.3);
    const DiscreteAngles a4 = extrapolate(s, 4);
    const DiscreteAngles a8 = extrapolate(s, 8);
    for (int t = 0; t < 8; ++t) REQUIRE(a8.gamma[t] * 2.0 == a4.gamma[t / 2]);
  }
}

TEST_CASE("discretize_theory rule", "[schedule]") {
  SECTION("constant gamma gives g/(p+1) including the continuation slot") {
    const DiscreteAngles a = discretize_theory(ContinuousSchedule::constant(0.9, 0.0), 6);
    for (int t = 0; t <= 6; ++t) REQUIRE(a.gamma[t] == Catch::Approx(0.9 / 7).epsilon(1e-15));
  }
  SECTION("constant beta gives exact interval integral b/(p+1/2)") {
    const DiscreteAngles a = discretize_theory(ContinuousSchedule::constant(0.0, 0.4), 6);
    for (int t = 0; t < 6; ++t) REQUIRE(a.beta[t] == Catch::Approx(0.4 / 6.5).epsilon(1e-14));
  }
  SECTION("midpoint and theory rules agree at rate 1/p on a smooth schedule") {
    const ContinuousSchedule s = reference_schedule(1.0);
    std::vector<double> lp, le;
    for (int p : {8, 16, 32, 64, 128, 256}) {
      const DiscreteAngles mid = extrapolate(s, p);
      const DiscreteAngles th = discretize_theory(s, p);
      double worst = 0.0;
      for (int t = 0; t < p; ++t)
        worst = std::max(worst, std::abs(mid.gamma[t] * p - th.gamma[t] * (p + 1)));
      lp.push_back(std::log(static_cast<double>(p)));
      le.push_back(std::log(worst));
    }
    const LinearFit f = linear_fit(lp, le);
    CHECK(f.slope == Catch::Approx(-1.0).margin(0.2));
  }
}

TEST_CASE("Gamma and B bookkeeping", "[schedule]") {
  SECTION("p=1 worked example") {
    const DiscreteAngles a = make_angles({0.3, 0.5}, {0.2});
    REQUIRE(a.Gamma == std::vector<double>{-0.3, -0.5, 0.5, 0.3});
    REQUIRE(a.B == std::vector<double>{0.0, -0.2, -0.2, 0.0});
  }
  SECTION("antisymmetry and endpoint are exact for random schedules") {
    for (int p : {1, 2, 5, 9}) {
      std::vector<double> g(p + 1), b(p);
      for (int t = 0; t <= p; ++t) g[t] = uniform(31, 3 * t) - 0.5;
      for (int t = 0; t < p; ++t) b[t] = uniform(37, 3 * t + 1) - 0.5;
      const DiscreteAngles a = make_angles(g, b);
      for (int j = 0; j <= 2 * p + 1; ++j)
        REQUIRE(a.Gamma[j] + a.Gamma[2 * p + 1 - j] == 0.0);
      REQUIRE(a.B[2 * p + 1] == 0.0);
      REQUIRE(a.B[p] == a.B[p + 1]);
    }
  }
}

TEST_CASE("total angles", "[schedule]") {
  SECTION("bundled 17-layer sums") {
    const DiscreteAngles a = extrapolate(reference_schedule(17.0), 17);
    const auto [gt, bt] = total_angles(a);
    CHECK(gt == Catch::Approx(7.3301).margin(2e-9));
    CHECK(bt == Catch::Approx(5.5220).margin(2e-9));
  }
  SECTION("scaling constants hold across depths") {
    for (int p : {17, 34, 68, 136}) {
      for (double delta : {0.5, 1.0}) {
        const auto [gt, bt] = total_angles(extrapolate(reference_schedule(delta * p), p));
        CHECK(gt / (delta * p) == Catch::Approx(0.43).margin(0.01));
        CHECK(bt / (delta * p) == Catch::Approx(0.32).margin(0.015));
      }
    }
  }
  SECTION("zero schedule") {
    const auto [gt, bt] = total_angles(extrapolate(ContinuousSchedule::constant(0, 0), 4));
    CHECK(gt == 0.0);
    CHECK(bt == 0.0);
  }
}

TEST_CASE("continuous schedule evaluation", "[schedule]") {
  SECTION("Lipschitz bound holds on 1e4 random pairs") {
    const ContinuousSchedule s = reference_schedule(3.0);
    const double M = s.gamma_lipschitz_bound();
    for (int i = 0; i < 10000; ++i) {
      const double x = uniform(91, 2 * i), y = uniform(91, 2 * i + 1);
      REQUIRE(std::abs(s.gamma(x) - s.gamma(y)) <= M * std::abs(x - y) + 1e-12);
    }
  }
  SECTION("rescaling multiplies values") {
    const ContinuousSchedule s = reference_schedule(1.0);
    const ContinuousSchedule s2 = s.rescaled(2.5);
    CHECK(s2.gamma(0.3) == Catch::Approx(2.5 * s.gamma(0.3)).epsilon(1e-15));
    CHECK(s2.beta(0.8) == Catch::Approx(2.5 * s.beta(0.8)).epsilon(1e-15));
  }
  SECTION("beta integral closed form matches a Riemann sum") {
    const ContinuousSchedule s = reference_schedule(2.0);
    const int grid = 200000;
    double riemann = 0.0;
    for (int i = 0; i < grid; ++i) riemann += s.beta((i + 0.5) / grid) / grid;
    CHECK(s.beta_integral(0.0, 1.0) == Catch::Approx(riemann).margin(1e-9));
  }
  SECTION("schedule file round trip") {
    const ContinuousSchedule s = reference_schedule(4.25);
    std::stringstream ss;
    s.save(ss);
    REQUIRE(ss.str().rfind("sched v1\n17 ", 0) == 0);
    const ContinuousSchedule back = ContinuousSchedule::load(ss);
    CHECK(back.scale() == s.scale());
    CHECK(back.gamma(0.37) == Catch::Approx(s.gamma(0.37)).epsilon(1e-15));
    std::stringstream bad("sched v2\n");
    REQUIRE_THROWS_AS(ContinuousSchedule::load(bad), ConfigError);
  }
  SECTION("angles CSV export shape") {
    std::stringstream ss;
    export_angles_csv(extrapolate(reference_schedule(2.0), 3), ss);
    const std::string text = ss.str();
    REQUIRE(text.rfind("t,gamma,beta\n", 0) == 0);
    REQUIRE(std::count(text.begin(), text.end(), '\n') == 5);  // header + p + continuation
  }
}
