#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "skqa/annealing.hpp"
#include "skqa/errors.hpp"
#include "skqa/numeric.hpp"
#include "skqa/parallel.hpp"
#include "skqa/schedule.hpp"
#include "skqa/sk_model.hpp"
#include "skqa/statevector.hpp"
#include "skqa/svg.hpp"

namespace skqa {

/// One (cell, metric) row of a sweep.
struct ExperimentRecord {
  std::string experiment;
  int p = 0;
  int n = 0;
  double delta = 0.0;
  double T = 0.0;
  std::string metric;
  double value = 0.0;
  double stderr_ = 0.0;
  int instances = 0;
  std::uint64_t base_seed = 0;
};

inline std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "experiment,p,n,delta,T,metric,value,stderr,instances,base_seed\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%.17g,%s,%.17g,%.17g,%d,%llu\n",
                  r.experiment.c_str(), r.p, r.n, r.delta, r.T, r.metric.c_str(), r.value,
                  r.stderr_, r.instances, static_cast<unsigned long long>(r.base_seed));
    out += buf;
  }
  return out;
}

inline std::vector<ExperimentRecord> records_from_csv(std::istream& is) {
  std::vector<ExperimentRecord> records;
  std::string line;
  if (!std::getline(is, line))
    throw ConfigError("records_from_csv: empty input");
  if (line != "experiment,p,n,delta,T,metric,value,stderr,instances,base_seed")
    throw ConfigError("records_from_csv: unexpected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else
        cur += c;
    }
    f.push_back(cur);
    if (f.size() != 10) throw ConfigError("records_from_csv: bad row: " + line);
    ExperimentRecord r;
    r.experiment = f[0];
    r.p = std::stoi(f[1]);
    r.n = std::stoi(f[2]);
    r.delta = std::stod(f[3]);
    r.T = std::stod(f[4]);
    r.metric = f[5];
    r.value = std::stod(f[6]);
    r.stderr_ = std::stod(f[7]);
    r.instances = std::stoi(f[8]);
    r.base_seed = std::stoull(f[9]);
    records.push_back(std::move(r));
  }
  return records;
}

// --- sweep configuration ---------------------------------------------------

struct SweepConfig {
  std::vector<int> p_list;
  std::vector<int> n_list;
  std::vector<double> delta_list;
  double T = 17.0;
  int instances = 100;
  std::uint64_t base_seed = 1;
  double tol = 1e-8;
  ContinuousSchedule schedule = reference_schedule();

  void validate_common() const {
    if (p_list.empty()) throw ConfigError("config: p_list must be nonempty");
    if (n_list.empty()) throw ConfigError("config: n_list must be nonempty");
    for (int p : p_list)
      if (p < 1) throw ConfigError("config: p values must be >= 1");
    for (int n : n_list)
      if (n < 1 || n > kMaxQubits) throw ConfigError("config: n values must be in [1, 24]");
    if (instances < 2) throw ConfigError("config: instances must be >= 2");
    if (!(tol > 0.0)) throw ConfigError("config: tol must be > 0");
  }
};

/// A simulator slot: energy density of one instance under one cell's
/// parameters. Both sweep slots share this signature so either side can be
/// swapped out (or duplicated) in tests.
using SimulatorFn = std::function<double(const CostVector& costs, const DiscreteAngles& angles,
                                         const ContinuousSchedule& sched, double tol)>;

inline SimulatorFn qaoa_simulator() {
  return [](const CostVector& costs, const DiscreteAngles& angles, const ContinuousSchedule&,
            double) { return qaoa_energy(costs, angles); };
}

inline SimulatorFn annealing_simulator() {
  return [](const CostVector& costs, const DiscreteAngles&, const ContinuousSchedule& sched,
            double tol) { return annealing_energy(costs, sched, tol); };
}

/// Fixed total time T: one continuous schedule, discretized at each p
/// (Delta = T/p), against the continuous-time result on the same instances.
/// Emits per (n, p): energy_gap |mean(e_discrete - e_continuous)|, nu_qaoa;
/// per n: nu_anneal (keyed with p = 0).
inline std::vector<ExperimentRecord> run_constant_time_sweep(
    const SweepConfig& cfg, const SimulatorFn& qaoa_slot = qaoa_simulator(),
    const SimulatorFn& anneal_slot = annealing_simulator()) {
  cfg.validate_common();
  if (!(cfg.T >= 0.0)) throw ConfigError("config: T must be >= 0");
  const ContinuousSchedule sched = cfg.schedule.with_scale(cfg.T);
  std::vector<DiscreteAngles> angles;
  angles.reserve(cfg.p_list.size());
  for (int p : cfg.p_list) angles.push_back(extrapolate(sched, p));

  const std::size_t nn = cfg.n_list.size(), np = cfg.p_list.size();
  const std::size_t mi = static_cast<std::size_t>(cfg.instances);
  std::vector<double> anneal_e(nn * mi);
  std::vector<double> qaoa_e(nn * np * mi);

  parallel_for(nn * mi, [&](std::size_t task) {
    const std::size_t in = task / mi, i = task % mi;
    const SkInstance inst = sample_instance(cfg.n_list[in], cfg.base_seed + i);
    const CostVector costs = cost_values(inst);
    anneal_e[task] = anneal_slot(costs, angles.back(), sched, cfg.tol);
    for (std::size_t ip = 0; ip < np; ++ip)
      qaoa_e[(in * np + ip) * mi + i] = qaoa_slot(costs, angles[ip], sched, cfg.tol);
  });

  std::vector<ExperimentRecord> records;
  auto rec = [&](int p, int n, double delta, const std::string& metric, MeanStderr ms) {
    records.push_back({"constant_time", p, n, delta, cfg.T, metric, ms.mean, ms.stderr_,
                       cfg.instances, cfg.base_seed});
  };
  for (std::size_t in = 0; in < nn; ++in) {
    const int n = cfg.n_list[in];
    rec(0, n, 0.0, "nu_anneal",
        mean_stderr({anneal_e.data() + in * mi, mi}));
    for (std::size_t ip = 0; ip < np; ++ip) {
      const int p = cfg.p_list[ip];
      const double* eq = qaoa_e.data() + (in * np + ip) * mi;
      std::vector<double> diff(mi);
      for (std::size_t i = 0; i < mi; ++i) diff[i] = eq[i] - anneal_e[in * mi + i];
      const MeanStderr dms = mean_stderr(diff);
      rec(p, n, cfg.T / p, "nu_qaoa", mean_stderr({eq, mi}));
      rec(p, n, cfg.T / p, "energy_gap", {std::abs(dms.mean), dms.stderr_});
    }
  }
  return records;
}

/// Delta grid at growing total time T = Delta * p: per (delta, p, n) cell,
/// approximation ratios of both algorithms against the exact optimum and the
/// residual ratio (ar_qaoa - ar_qa) / (1 - ar_qa) computed from cell means.
/// Cells with 1 - ar_qa below 1e-9 are flagged instead of divided.
inline std::vector<ExperimentRecord> run_delta_sweep(
    const SweepConfig& cfg, const SimulatorFn& qaoa_slot = qaoa_simulator(),
    const SimulatorFn& anneal_slot = annealing_simulator()) {
  cfg.validate_common();
  if (cfg.delta_list.empty()) throw ConfigError("config: delta_list must be nonempty");

  const std::size_t nd = cfg.delta_list.size(), nn = cfg.n_list.size(), np = cfg.p_list.size();
  const std::size_t mi = static_cast<std::size_t>(cfg.instances);
  std::vector<double> ar_q(nd * nn * np * mi), ar_a(nd * nn * np * mi);

  parallel_for(nd * nn * mi, [&](std::size_t task) {
    const std::size_t id = task / (nn * mi);
    const std::size_t in = (task / mi) % nn;
    const std::size_t i = task % mi;
    const int n = cfg.n_list[in];
    const SkInstance inst = sample_instance(n, cfg.base_seed + i);
    const CostVector costs = cost_values(inst);
    const double opt_density = ground_energy(costs).energy / n;
    for (std::size_t ip = 0; ip < np; ++ip) {
      const int p = cfg.p_list[ip];
      const ContinuousSchedule sched = cfg.schedule.with_scale(cfg.delta_list[id] * p);
      const DiscreteAngles angles = extrapolate(sched, p);
      const std::size_t cell = ((id * nn + in) * np + ip) * mi + i;
      ar_q[cell] = qaoa_slot(costs, angles, sched, cfg.tol) / opt_density;
      ar_a[cell] = anneal_slot(costs, angles, sched, cfg.tol) / opt_density;
    }
  });

  std::vector<ExperimentRecord> records;
  for (std::size_t id = 0; id < nd; ++id)
    for (std::size_t in = 0; in < nn; ++in)
      for (std::size_t ip = 0; ip < np; ++ip) {
        const double delta = cfg.delta_list[id];
        const int n = cfg.n_list[in], p = cfg.p_list[ip];
        const std::size_t base = ((id * nn + in) * np + ip) * mi;
        const MeanStderr mq = mean_stderr({ar_q.data() + base, mi});
        const MeanStderr ma = mean_stderr({ar_a.data() + base, mi});
        auto rec = [&](const std::string& metric, double value, double se) {
          records.push_back({"delta_sweep", p, n, delta, delta * p, metric, value, se,
                             cfg.instances, cfg.base_seed});
        };
        rec("ar_qaoa", mq.mean, mq.stderr_);
        rec("ar_qa", ma.mean, ma.stderr_);
        if (std::abs(1.0 - ma.mean) < 1e-9) {
          rec("residual_ar_flagged", 1.0, 0.0);
        } else {
          // Stderr from per-instance residuals around the cell-mean baseline.
          std::vector<double> ri(mi);
          for (std::size_t i = 0; i < mi; ++i)
            ri[i] = (ar_q[base + i] - ar_a[base + i]) / (1.0 - ma.mean);
          rec("residual_ar", (mq.mean - ma.mean) / (1.0 - ma.mean), mean_stderr(ri).stderr_);
        }
      }
  return records;
}

/// Least-squares exponent of err ~ p^slope.
inline LinearFit fit_decay_exponent(std::span<const std::pair<double, double>> series) {
  if (series.size() < 3) throw ConfigError("fit_decay_exponent: need >= 3 points");
  std::vector<double> lx, ly;
  for (const auto& [p, err] : series) {
    if (!(p > 0.0) || !(err > 0.0))
      throw ConfigError("fit_decay_exponent: values must be positive");
    lx.push_back(std::log(p));
    ly.push_back(std::log(err));
  }
  return linear_fit(lx, ly);
}

// --- output emission --------------------------------------------------------

struct PlotRequest {
  std::string metric = "energy_gap";
  std::string group_by = "n";  // "n" or "delta"
  bool xlog = true;
  bool ylog = true;
  std::string title, xlabel = "p", ylabel;
};

inline std::string render_records_svg(const std::vector<ExperimentRecord>& records,
                                      const PlotRequest& req) {
  if (req.group_by != "n" && req.group_by != "delta")
    throw ConfigError("plot: group_by must be 'n' or 'delta'");
  std::map<double, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : records) {
    if (r.metric != req.metric) continue;
    const double key = (req.group_by == "n") ? r.n : r.delta;
    groups[key].emplace_back(r.p, r.value);
  }
  std::vector<PlotSeries> series;
  char lbl[64];
  for (auto& [key, pts] : groups) {
    std::sort(pts.begin(), pts.end());
    PlotSeries s;
    std::snprintf(lbl, sizeof lbl, "%s=%.6g", req.group_by.c_str(), key);
    s.label = lbl;
    for (const auto& [x, y] : pts) {
      s.x.push_back(x);
      s.y.push_back(y);
    }
    series.push_back(std::move(s));
  }
  PlotSpec spec;
  spec.title = req.title.empty() ? req.metric : req.title;
  spec.xlabel = req.xlabel;
  spec.ylabel = req.ylabel.empty() ? req.metric : req.ylabel;
  spec.xlog = req.xlog;
  spec.ylog = req.ylog;
  return render_svg(series, spec);
}

/// Writes the CSV (always) and, when svg_path is nonempty, the plot.
/// Deterministic bytes for fixed inputs.
inline void emit_outputs(const std::vector<ExperimentRecord>& records, const std::string& csv_path,
                         const std::string& svg_path = {}, const PlotRequest& req = {}) {
  {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + csv_path);
    f << records_to_csv(records);
  }
  if (!svg_path.empty()) {
    std::ofstream f(svg_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + svg_path);
    f << render_records_svg(records, req);
  }
}

// --- key=value configuration files ------------------------------------------

/// Parses "key = value" lines; '#' starts a comment; later keys win.
inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config: expected key=value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key in line: " + line);
    kv[key] = val;
  }
  return kv;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  if (out.empty()) throw ConfigError("config: empty integer list: " + s);
  return out;
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  if (out.empty()) throw ConfigError("config: empty list: " + s);
  return out;
}

/// Builds a SweepConfig from key=value pairs, rejecting unknown keys.
inline SweepConfig sweep_config_from(const std::map<std::string, std::string>& kv) {
  static const std::set<std::string> known = {"p_list", "n_list",    "delta_list", "T",
                                              "instances", "base_seed", "tol",     "schedule"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ConfigError("config: unknown key '" + k + "'");
  SweepConfig cfg;
  try {
    if (kv.count("p_list")) cfg.p_list = parse_int_list(kv.at("p_list"));
    if (kv.count("n_list")) cfg.n_list = parse_int_list(kv.at("n_list"));
    if (kv.count("delta_list")) cfg.delta_list = parse_double_list(kv.at("delta_list"));
    if (kv.count("T")) cfg.T = std::stod(kv.at("T"));
    if (kv.count("instances")) cfg.instances = std::stoi(kv.at("instances"));
    if (kv.count("base_seed")) cfg.base_seed = std::stoull(kv.at("base_seed"));
    if (kv.count("tol")) cfg.tol = std::stod(kv.at("tol"));
    if (kv.count("schedule")) cfg.schedule = ContinuousSchedule::load_file(kv.at("schedule"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: bad value: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("config: value out of range: ") + e.what());
  }
  return cfg;
}

}  // namespace skqa
