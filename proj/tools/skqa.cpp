// Command-line driver for SK-model circuit-vs-annealing experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "skqa/experiments.hpp"
#include "skqa/gmatrix.hpp"
#include "skqa/qgms.hpp"
#include "skqa/schedule.hpp"

namespace {

using namespace skqa;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

SweepConfig load_config(const std::string& config_path,
                        const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) throw ConfigError("cannot open config file: " + config_path);
    kv = parse_key_values(f);
  }
  for (const auto& [k, v] : overrides)
    if (!v.empty()) kv[k] = v;
  return sweep_config_from(kv);
}

struct CommonFlags {
  std::string config, p_list, n_list, delta_list, T, instances, base_seed, tol, schedule;
  std::string out_csv = "records.csv";
  std::string out_svg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "key=value config file; flags override");
    cmd->add_option("--p-list", p_list, "comma-separated depths");
    cmd->add_option("--n-list", n_list, "comma-separated sizes");
    cmd->add_option("--delta-list", delta_list, "comma-separated Delta values");
    cmd->add_option("--T", T, "total-time proxy Delta*p");
    cmd->add_option("--instances", instances, "instances per cell");
    cmd->add_option("--base-seed", base_seed, "seed of instance 0");
    cmd->add_option("--tol", tol, "annealing energy tolerance");
    cmd->add_option("--schedule", schedule, "sched v1 file (default: bundled reference)");
    cmd->add_option("--out-csv", out_csv, "output CSV path");
    cmd->add_option("--out-svg", out_svg, "optional SVG plot path");
  }

  SweepConfig to_config() const {
    return load_config(config, {{"p_list", p_list},
                                {"n_list", n_list},
                                {"delta_list", delta_list},
                                {"T", T},
                                {"instances", instances},
                                {"base_seed", base_seed},
                                {"tol", tol},
                                {"schedule", schedule}});
  }
};

int run_sweep_constant_time(const CommonFlags& flags) {
  const SweepConfig cfg = flags.to_config();
  const auto records = run_constant_time_sweep(cfg);
  PlotRequest req;
  req.metric = "energy_gap";
  req.group_by = "n";
  req.title = "circuit vs annealing energy gap";
  emit_outputs(records, flags.out_csv, flags.out_svg, req);
  std::printf("wrote %zu records to %s\n", records.size(), flags.out_csv.c_str());
  return 0;
}

int run_sweep_delta(const CommonFlags& flags) {
  const SweepConfig cfg = flags.to_config();
  const auto records = run_delta_sweep(cfg);
  PlotRequest req;
  req.metric = "residual_ar";
  req.group_by = "delta";
  req.xlog = true;
  req.ylog = false;
  req.title = "residual approximation ratio";
  emit_outputs(records, flags.out_csv, flags.out_svg, req);
  std::printf("wrote %zu records to %s\n", records.size(), flags.out_csv.c_str());
  return 0;
}

int run_gmatrix(int p, double scale, const std::string& schedule_path, const std::string& rule,
                double tol, double damping, int max_iter, int multistart,
                const std::string& out_csv) {
  ContinuousSchedule sched =
      schedule_path.empty() ? reference_schedule(scale) : ContinuousSchedule::load_file(schedule_path);
  if (!schedule_path.empty()) sched = sched.with_scale(scale);
  const DiscreteAngles angles = discretize(
      sched, p, rule == "midpoint" ? DiscretizationRule::midpoint : DiscretizationRule::theory);
  GSolveOptions opts;
  opts.tol = tol;
  opts.damping = damping;
  opts.max_iter = max_iter;
  GSolveReport report;
  const QVector q = compute_q(angles.beta);
  const GMatrix G = solve_g_matrix(q, angles, opts, &report);
  const double energy = infinite_size_energy(G, angles);
  std::printf("p=%d scale=%.6g rule=%s\n", p, scale, rule.c_str());
  std::printf("iterations=%d residual=%.3e zstar_residual=%.3e |G|_inf=%.6f\n", report.iterations,
              report.residual, report.zstar_residual, report.g_inf_norm);
  std::printf("infinite_size_energy=%.12f\n", energy);
  if (multistart > 0) {
    // Fixed-point uniqueness diagnostic: restart from perturbed seeds and
    // report the largest deviation from the reference solution.
    double worst = 0.0;
    for (int s = 1; s <= multistart; ++s) {
      GMatrix init = noninteracting_g(angles);
      for (std::size_t i = 0; i < init.g.size(); ++i)
        init.g[i] += 0.1 * (uniform(s, i) - 0.5);
      GSolveReport rep2;
      const GMatrix Gs = solve_g_matrix_from(std::move(init), q, angles, opts, &rep2);
      double dev = 0.0;
      for (std::size_t i = 0; i < Gs.g.size(); ++i)
        dev = std::max(dev, std::abs(Gs.g[i] - G.g[i]));
      worst = std::max(worst, dev);
      std::printf("multistart %d: iterations=%d deviation=%.3e\n", s, rep2.iterations, dev);
    }
    std::printf("multistart max deviation=%.3e\n", worst);
  }
  if (!out_csv.empty()) {
    std::ofstream f(out_csv, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + out_csv);
    export_g_csv(G, f);
    std::printf("wrote G entries to %s\n", out_csv.c_str());
  }
  return 0;
}

int run_oracle_check(int n, int p, int points, int nodes, int mc, std::uint64_t seed) {
  if (p < 1 || n < 2) throw ConfigError("oracle-check: need n >= 2, p >= 1");
  std::printf("%-10s %-10s %14s %14s %14s %10s\n", "gamma", "beta", "qgms_exact", "quadrature",
              "monte_carlo", "mc_stderr");
  int failures = 0;
  for (int pt = 0; pt < points; ++pt) {
    std::vector<double> g(p), b(p);
    for (int t = 0; t < p; ++t) {
      g[t] = 0.1 + 0.5 * uniform(seed, 1000 * pt + 2 * t);
      b[t] = 0.1 + 0.5 * uniform(seed, 1000 * pt + 2 * t + 1);
    }
    const DiscreteAngles angles = make_angles(g, b);
    const double exact = qgms_energy_exact(n, angles);
    const double quad = quadrature_disorder_average(n, angles, nodes);
    const McResult mcres = monte_carlo_disorder_average(n, angles, mc, seed + 77 + pt);
    std::printf("%-10.4f %-10.4f %14.9f %14.9f %14.9f %10.2e\n", g[0], b[0], exact, quad,
                mcres.mean, mcres.stderr_);
    if (std::abs(exact - quad) > 1e-6 || std::abs(mcres.mean - exact) > 3 * mcres.stderr_)
      ++failures;
  }
  if (failures) {
    std::fprintf(stderr, "oracle-check: %d point(s) disagree\n", failures);
    throw NumericalError("oracle disagreement");
  }
  std::printf("all %d points agree (quadrature to 1e-6, monte carlo to 3 stderr)\n", points);
  return 0;
}

int run_concentration(const std::string& n_list, int p, double delta, int instances,
                      std::uint64_t seed, const std::string& out_csv) {
  const std::vector<int> ns = parse_int_list(n_list);
  const ConcentrationTable t =
      empirical_concentration(ns, reference_schedule(delta * p), p, instances, seed);
  std::printf("%6s %14s %14s\n", "n", "mean", "variance");
  for (const auto& row : t.rows)
    std::printf("%6d %14.9f %14.6e\n", row.n, row.mean, row.variance);
  std::printf("variance decay exponent: %.3f (r2=%.4f)\n", t.decay_exponent, t.r2);
  if (!out_csv.empty()) {
    std::vector<ExperimentRecord> records;
    for (const auto& row : t.rows)
      records.push_back({"concentration", p, row.n, delta, delta * p, "energy_variance",
                         row.variance, 0.0, instances, seed});
    emit_outputs(records, out_csv);
    std::printf("wrote %s\n", out_csv.c_str());
  }
  return 0;
}

int run_plot(const std::string& in_csv, const std::string& metric, const std::string& group_by,
             bool xlog, bool ylog, const std::string& out_svg) {
  std::ifstream f(in_csv);
  if (!f) throw ConfigError("cannot open: " + in_csv);
  const auto records = records_from_csv(f);
  PlotRequest req;
  req.metric = metric;
  req.group_by = group_by;
  req.xlog = xlog;
  req.ylog = ylog;
  std::ofstream out(out_svg, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + out_svg);
  out << render_records_svg(records, req);
  std::printf("wrote %s\n", out_svg.c_str());
  return 0;
}

int run_angles(int p, double delta, const std::string& rule, const std::string& schedule_path,
               const std::string& out_csv) {
  ContinuousSchedule sched = schedule_path.empty() ? reference_schedule(delta * p)
                                                   : ContinuousSchedule::load_file(schedule_path);
  if (!schedule_path.empty()) sched = sched.with_scale(delta * p);
  const DiscreteAngles angles = discretize(
      sched, p, rule == "midpoint" ? DiscretizationRule::midpoint : DiscretizationRule::theory);
  const auto [gt, bt] = total_angles(angles);
  std::printf("p=%d delta=%.6g gamma_tot=%.6f beta_tot=%.6f\n", p, delta, gt, bt);
  if (!out_csv.empty()) {
    std::ofstream f(out_csv, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + out_csv);
    export_angles_csv(angles, f);
    std::printf("wrote %s\n", out_csv.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SK-model circuit-vs-annealing numerical laboratory"};
  app.require_subcommand(1);
  app.footer("Worker threads: set SKQA_WORKERS (default: hardware concurrency).");

  CommonFlags ct_flags, ds_flags;
  auto* ct = app.add_subcommand("sweep-constant-time",
                                "fixed T = Delta*p: circuit-vs-annealing gap per (n, p)");
  ct_flags.attach(ct);
  auto* ds = app.add_subcommand("sweep-delta",
                                "fixed Delta grid: approximation ratios and residual");
  ds_flags.attach(ds);

  int g_p = 2;
  double g_scale = 0.4, g_tol = 1e-12, g_damping = 0.5;
  int g_max_iter = 20000, g_multistart = 0;
  std::string g_rule = "theory", g_schedule, g_out;
  auto* gm = app.add_subcommand("gmatrix", "solve the infinite-size fixed point");
  gm->add_option("--p", g_p, "depth")->check(CLI::PositiveNumber);
  gm->add_option("--scale", g_scale, "schedule scale Delta*p");
  gm->add_option("--rule", g_rule, "midpoint|theory")
      ->check(CLI::IsMember({"midpoint", "theory"}));
  gm->add_option("--schedule", g_schedule, "sched v1 file");
  gm->add_option("--tol", g_tol, "fixed-point tolerance");
  gm->add_option("--damping", g_damping, "damping factor in (0,1]");
  gm->add_option("--max-iter", g_max_iter, "iteration cap");
  gm->add_option("--multistart", g_multistart, "uniqueness diagnostic restarts");
  gm->add_option("--out-csv", g_out, "write G entries as CSV");

  int oc_n = 3, oc_p = 1, oc_points = 5, oc_nodes = 64, oc_mc = 10000;
  std::uint64_t oc_seed = 1;
  auto* oc = app.add_subcommand("oracle-check",
                                "exact sum vs quadrature vs monte carlo at small (n, p)");
  oc->add_option("--n", oc_n, "size");
  oc->add_option("--p", oc_p, "depth");
  oc->add_option("--points", oc_points, "random angle points");
  oc->add_option("--nodes", oc_nodes, "quadrature nodes per coupling");
  oc->add_option("--mc", oc_mc, "monte carlo instances");
  oc->add_option("--seed", oc_seed, "seed");

  std::string cn_nlist = "8,12,16,20", cn_out;
  int cn_p = 8, cn_instances = 256;
  double cn_delta = 0.5;
  std::uint64_t cn_seed = 1;
  auto* cn = app.add_subcommand("concentration", "variance of the energy across disorder");
  cn->add_option("--n-list", cn_nlist, "sizes");
  cn->add_option("--p", cn_p, "depth");
  cn->add_option("--delta", cn_delta, "schedule rescaling");
  cn->add_option("--instances", cn_instances, "instances per size");
  cn->add_option("--seed", cn_seed, "seed");
  cn->add_option("--out-csv", cn_out, "output CSV");

  std::string pl_in, pl_metric = "energy_gap", pl_group = "n", pl_out = "plot.svg";
  bool pl_xlog = true, pl_ylog = true;
  auto* pl = app.add_subcommand("plot", "render an SVG from a records CSV");
  pl->add_option("--in", pl_in, "records CSV")->required();
  pl->add_option("--metric", pl_metric, "metric to plot");
  pl->add_option("--group", pl_group, "series grouping: n|delta");
  pl->add_flag("--xlog,!--no-xlog", pl_xlog, "log-scale x");
  pl->add_flag("--ylog,!--no-ylog", pl_ylog, "log-scale y");
  pl->add_option("--out", pl_out, "output SVG");

  int an_p = 17;
  double an_delta = 1.0;
  std::string an_rule = "midpoint", an_schedule, an_out;
  auto* an = app.add_subcommand("angles", "discretize a schedule and export the angles");
  an->add_option("--p", an_p, "depth");
  an->add_option("--delta", an_delta, "schedule rescaling");
  an->add_option("--rule", an_rule, "midpoint|theory")
      ->check(CLI::IsMember({"midpoint", "theory"}));
  an->add_option("--schedule", an_schedule, "sched v1 file");
  an->add_option("--out-csv", an_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ct->parsed()) return run_sweep_constant_time(ct_flags);
    if (ds->parsed()) return run_sweep_delta(ds_flags);
    if (gm->parsed())
      return run_gmatrix(g_p, g_scale, g_schedule, g_rule, g_tol, g_damping, g_max_iter,
                         g_multistart, g_out);
    if (oc->parsed()) return run_oracle_check(oc_n, oc_p, oc_points, oc_nodes, oc_mc, oc_seed);
    if (cn->parsed())
      return run_concentration(cn_nlist, cn_p, cn_delta, cn_instances, cn_seed, cn_out);
    if (pl->parsed()) return run_plot(pl_in, pl_metric, pl_group, pl_xlog, pl_ylog, pl_out);
    if (an->parsed()) return run_angles(an_p, an_delta, an_rule, an_schedule, an_out);
  } catch (const skqa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const skqa::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
