#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skqa/errors.hpp"

namespace skqa {

struct FourierCoeffs {
  std::vector<double> gamma;  // sine-IV components
  std::vector<double> beta;   // cosine-IV components
};

/// Decomposes p0-layer angle lists in the type-IV bases:
///   gamma_t = (1/p0) sum_k gh_k sin(pi (k-1/2)(t-1/2)/p0)
///   beta_t  = (1/p0) sum_k bh_k cos(pi (k-1/2)(t-1/2)/p0)
/// Direct O(p0^2) sums; the transform is its own inverse up to the 2/p0 pairing.
inline FourierCoeffs fourier_analyze(std::span<const double> gammas,
                                     std::span<const double> betas) {
  if (gammas.size() != betas.size() || gammas.empty())
    throw ConfigError("fourier_analyze: need equal-length nonempty angle lists");
  const int p0 = static_cast<int>(gammas.size());
  FourierCoeffs c;
  c.gamma.resize(p0);
  c.beta.resize(p0);
  for (int k = 1; k <= p0; ++k) {
    double sg = 0.0, sb = 0.0;
    for (int t = 1; t <= p0; ++t) {
      const double arg = std::numbers::pi * (k - 0.5) * (t - 0.5) / p0;
      sg += gammas[t - 1] * std::sin(arg);
      sb += betas[t - 1] * std::cos(arg);
    }
    c.gamma[k - 1] = 2.0 * sg;
    c.beta[k - 1] = 2.0 * sb;
  }
  return c;
}

/// Inverse of fourier_analyze at the original depth.
inline std::pair<std::vector<double>, std::vector<double>> fourier_synthesize(
    const FourierCoeffs& c) {
  const int p0 = static_cast<int>(c.gamma.size());
  std::vector<double> gammas(p0), betas(p0);
  for (int t = 1; t <= p0; ++t) {
    double sg = 0.0, sb = 0.0;
    for (int k = 1; k <= p0; ++k) {
      const double arg = std::numbers::pi * (k - 0.5) * (t - 0.5) / p0;
      sg += c.gamma[k - 1] * std::sin(arg);
      sb += c.beta[k - 1] * std::cos(arg);
    }
    gammas[t - 1] = sg / p0;
    betas[t - 1] = sb / p0;
  }
  return {std::move(gammas), std::move(betas)};
}

/// Pair of schedule functions on [0,1]. The canonical representation is the
/// type-IV Fourier family
///   gamma(s) = scale * (1/K) sum_k gh_k sin(pi (k-1/2) s)
///   beta(s)  = scale * (1/K) sum_k bh_k cos(pi (k-1/2) s)
/// with `scale` the Delta*p multiplier. Arbitrary user-supplied functions are
/// also accepted; they lose the closed-form integral unless an antiderivative
/// of beta is provided.
class ContinuousSchedule {
 public:
  static ContinuousSchedule from_fourier(std::vector<double> gamma_coeffs,
                                         std::vector<double> beta_coeffs,
                                         double scale = 1.0) {
    if (gamma_coeffs.empty() || gamma_coeffs.size() != beta_coeffs.size())
      throw ConfigError("ContinuousSchedule: coefficient lists must match and be nonempty");
    ContinuousSchedule s;
    s.gamma_coeffs_ = std::move(gamma_coeffs);
    s.beta_coeffs_ = std::move(beta_coeffs);
    s.scale_ = scale;
    return s;
  }

  static ContinuousSchedule constant(double g, double b, double scale = 1.0) {
    ContinuousSchedule s;
    s.gamma_fn_ = [g](double) { return g; };
    s.beta_fn_ = [b](double) { return b; };
    s.beta_antideriv_ = [b](double x) { return b * x; };
    s.gamma_lipschitz_ = 0.0;
    s.scale_ = scale;
    return s;
  }

  static ContinuousSchedule from_functions(std::function<double(double)> gamma_fn,
                                           std::function<double(double)> beta_fn,
                                           std::function<double(double)> beta_antideriv = nullptr,
                                           double gamma_lipschitz = -1.0,
                                           double scale = 1.0) {
    ContinuousSchedule s;
    s.gamma_fn_ = std::move(gamma_fn);
    s.beta_fn_ = std::move(beta_fn);
    s.beta_antideriv_ = std::move(beta_antideriv);
    s.gamma_lipschitz_ = gamma_lipschitz;
    s.scale_ = scale;
    return s;
  }

  double gamma(double s) const {
    if (gamma_fn_) return scale_ * gamma_fn_(s);
    double acc = 0.0;
    for (std::size_t k = 1; k <= gamma_coeffs_.size(); ++k)
      acc += gamma_coeffs_[k - 1] * std::sin(std::numbers::pi * (k - 0.5) * s);
    return scale_ * acc / static_cast<double>(gamma_coeffs_.size());
  }

  double beta(double s) const {
    if (beta_fn_) return scale_ * beta_fn_(s);
    double acc = 0.0;
    for (std::size_t k = 1; k <= beta_coeffs_.size(); ++k)
      acc += beta_coeffs_[k - 1] * std::cos(std::numbers::pi * (k - 0.5) * s);
    return scale_ * acc / static_cast<double>(beta_coeffs_.size());
  }

  /// Integral of beta over [a, b]; closed form for the Fourier family and for
  /// schedules carrying an antiderivative, adaptive Simpson otherwise.
  double beta_integral(double a, double b) const {
    if (!beta_fn_) return beta_primitive(b) - beta_primitive(a);
    if (beta_antideriv_) return scale_ * (beta_antideriv_(b) - beta_antideriv_(a));
    return simpson(a, b);
  }

  double scale() const { return scale_; }

  ContinuousSchedule rescaled(double factor) const {
    ContinuousSchedule s = *this;
    s.scale_ *= factor;
    return s;
  }
  ContinuousSchedule with_scale(double scale) const {
    ContinuousSchedule s = *this;
    s.scale_ = scale;
    return s;
  }

  /// Coefficient-sum bound on the Lipschitz constant of gamma.
  double gamma_lipschitz_bound() const {
    if (gamma_fn_) {
      if (gamma_lipschitz_ >= 0.0) return std::abs(scale_) * gamma_lipschitz_;
      throw ConfigError("gamma_lipschitz_bound: unknown for this schedule");
    }
    double acc = 0.0;
    for (std::size_t k = 1; k <= gamma_coeffs_.size(); ++k)
      acc += (k - 0.5) * std::abs(gamma_coeffs_[k - 1]);
    return std::abs(scale_) * std::numbers::pi * acc / static_cast<double>(gamma_coeffs_.size());
  }

  double gamma_max() const {
    return scan_max([this](double s) { return std::abs(gamma(s)); });
  }
  double beta_max() const {
    return scan_max([this](double s) { return std::abs(beta(s)); });
  }

  bool is_fourier() const { return !gamma_fn_; }
  const std::vector<double>& gamma_coeffs() const { return gamma_coeffs_; }
  const std::vector<double>& beta_coeffs() const { return beta_coeffs_; }

  // --- plain-text "sched v1" (Fourier family only) ---
  void save(std::ostream& os) const {
    if (!is_fourier())
      throw ConfigError("ContinuousSchedule::save: only Fourier schedules are serializable");
    os << "sched v1\n" << gamma_coeffs_.size() << ' ';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g\n", scale_);
    os << buf;
    auto line = [&os](const std::vector<double>& v) {
      char b[32];
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(b, sizeof b, "%.17g", v[i]);
        os << b << (i + 1 < v.size() ? ' ' : '\n');
      }
    };
    line(gamma_coeffs_);
    line(beta_coeffs_);
  }

  static ContinuousSchedule load(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != "sched v1")
      throw ConfigError("ContinuousSchedule::load: missing 'sched v1' header");
    std::size_t k = 0;
    double scale = 0.0;
    if (!(is >> k >> scale) || k == 0)
      throw ConfigError("ContinuousSchedule::load: bad 'K scale' line");
    std::vector<double> g(k), b(k);
    for (auto& x : g)
      if (!(is >> x)) throw ConfigError("ContinuousSchedule::load: truncated gamma coefficients");
    for (auto& x : b)
      if (!(is >> x)) throw ConfigError("ContinuousSchedule::load: truncated beta coefficients");
    return from_fourier(std::move(g), std::move(b), scale);
  }

  void save_file(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    save(f);
  }
  static ContinuousSchedule load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open for reading: " + path);
    return load(f);
  }

 private:
  double beta_primitive(double x) const {
    double acc = 0.0;
    for (std::size_t k = 1; k <= beta_coeffs_.size(); ++k) {
      const double w = std::numbers::pi * (k - 0.5);
      acc += beta_coeffs_[k - 1] * std::sin(w * x) / w;
    }
    return scale_ * acc / static_cast<double>(beta_coeffs_.size());
  }

  double simpson(double a, double b) const {
    // Fixed-depth composite Simpson; schedule functions are smooth.
    const int segments = 512;
    const double h = (b - a) / segments;
    double acc = beta(a) + beta(b);
    for (int i = 1; i < segments; ++i) acc += (i % 2 ? 4.0 : 2.0) * beta(a + i * h);
    return acc * h / 3.0;
  }

  template <class F>
  double scan_max(F f) const {
    const int grid = 4096;
    double best = 0.0;
    for (int i = 0; i <= grid; ++i)
      best = std::max(best, f(static_cast<double>(i) / grid));
    return best;
  }

  std::vector<double> gamma_coeffs_, beta_coeffs_;
  std::function<double(double)> gamma_fn_, beta_fn_, beta_antideriv_;
  double gamma_lipschitz_ = -1.0;
  double scale_ = 1.0;
};

/// Per-layer angles plus the mirrored bookkeeping sequences.
/// gamma has p+1 entries; gamma[p] is the continuation slot required by the
/// mirrored Gamma sequence and is never used by the circuit itself.
/// Gamma and B are zero-based over 0..2p+1:
///   Gamma_j = -gamma_{j+1} for j <= p, mirrored antisymmetrically above,
///   B = partial sums of (0, -beta_1..-beta_p, 0, beta_p..beta_1).
struct DiscreteAngles {
  int p = 0;
  std::vector<double> gamma;  // size p+1
  std::vector<double> beta;   // size p
  std::vector<double> Gamma;  // size 2p+2
  std::vector<double> B;      // size 2p+2
};

/// Fills Gamma and B from the angle lists. Antisymmetry of Gamma and the
/// mirror symmetry of B hold exactly by construction.
inline void build_gamma_b(DiscreteAngles& a) {
  const int p = a.p;
  a.Gamma.assign(2 * p + 2, 0.0);
  a.B.assign(2 * p + 2, 0.0);
  for (int j = 0; j <= p; ++j) {
    a.Gamma[j] = -a.gamma[j];
    a.Gamma[2 * p + 1 - j] = a.gamma[j];
  }
  double acc = 0.0;
  for (int r = 1; r <= p; ++r) {
    acc -= a.beta[r - 1];
    a.B[r] = acc;
  }
  for (int r = 0; r <= p; ++r) a.B[2 * p + 1 - r] = a.B[r];
}

inline DiscreteAngles make_angles(std::vector<double> gammas, std::vector<double> betas) {
  const int p = static_cast<int>(betas.size());
  if (gammas.size() != static_cast<std::size_t>(p) &&
      gammas.size() != static_cast<std::size_t>(p) + 1)
    throw ConfigError("make_angles: gamma list must have p or p+1 entries");
  DiscreteAngles a;
  a.p = p;
  a.gamma = std::move(gammas);
  if (a.gamma.size() == static_cast<std::size_t>(p)) a.gamma.push_back(0.0);
  a.beta = std::move(betas);
  build_gamma_b(a);
  return a;
}

/// Midpoint rule: gamma_t = (1/p) gamma((t-1/2)/p), same for beta; the
/// continuation slot evaluates at t = p+1 clamped to s = 1.
inline DiscreteAngles extrapolate(const ContinuousSchedule& sched, int p) {
  if (p < 1) throw ConfigError("extrapolate: p must be >= 1");
  DiscreteAngles a;
  a.p = p;
  a.gamma.resize(p + 1);
  a.beta.resize(p);
  for (int t = 1; t <= p; ++t) {
    const double s = (t - 0.5) / p;
    a.gamma[t - 1] = sched.gamma(s) / p;
    a.beta[t - 1] = sched.beta(s) / p;
  }
  a.gamma[p] = sched.gamma(1.0) / p;
  build_gamma_b(a);
  return a;
}

/// Left-endpoint gamma with 1/(p+1) normalization and interval-averaged beta
/// over the (p+1/2)-spaced grid.
inline DiscreteAngles discretize_theory(const ContinuousSchedule& sched, int p) {
  if (p < 1) throw ConfigError("discretize_theory: p must be >= 1");
  DiscreteAngles a;
  a.p = p;
  a.gamma.resize(p + 1);
  a.beta.resize(p);
  const double den = p + 0.5;
  for (int t = 1; t <= p + 1; ++t)
    a.gamma[t - 1] = sched.gamma((t - 1) / den) / (p + 1);
  for (int t = 1; t <= p; ++t)
    a.beta[t - 1] = sched.beta_integral((t - 1) / den, t / den);
  build_gamma_b(a);
  return a;
}

enum class DiscretizationRule { midpoint, theory };

inline DiscreteAngles discretize(const ContinuousSchedule& sched, int p, DiscretizationRule rule) {
  return rule == DiscretizationRule::midpoint ? extrapolate(sched, p)
                                              : discretize_theory(sched, p);
}

/// (sum_t |gamma_t|, sum_t |beta_t|) over t = 1..p; the continuation slot is
/// excluded.
inline std::pair<double, double> total_angles(const DiscreteAngles& a) {
  double g = 0.0, b = 0.0;
  for (int t = 0; t < a.p; ++t) {
    g += std::abs(a.gamma[t]);
    b += std::abs(a.beta[t]);
  }
  return {g, b};
}

/// CSV export, columns t,gamma,beta; the continuation row has an empty beta.
inline void export_angles_csv(const DiscreteAngles& a, std::ostream& os) {
  char buf[96];
  os << "t,gamma,beta\n";
  for (int t = 1; t <= a.p; ++t) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", t, a.gamma[t - 1], a.beta[t - 1]);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%d,%.17g,\n", a.p + 1, a.gamma[a.p]);
  os << buf;
}

/// Optimized 17-layer angle set used as the bundled reference schedule.
inline const std::vector<double>& reference_gammas_p17() {
  static const std::vector<double> g = {
      0.1735, 0.3376, 0.3562, 0.3789, 0.3844, 0.3907, 0.3946, 0.4016, 0.4099,
      0.4217, 0.4370, 0.4565, 0.4816, 0.5138, 0.5530, 0.5962, 0.6429};
  return g;
}

inline const std::vector<double>& reference_betas_p17() {
  static const std::vector<double> b = {
      0.6375, 0.5197, 0.4697, 0.4499, 0.4255, 0.4054, 0.3832, 0.3603, 0.3358,
      0.3092, 0.2807, 0.2501, 0.2171, 0.1816, 0.1426, 0.1001, 0.0536};
  return b;
}

/// Reference continuous schedule at unit scale. By default the mixer
/// coefficients carry the sign that anneals from |+> toward the cost
/// minimum (the tabulated magnitudes with beta < 0); with
/// minimizing = false, the midpoint rule at scale = p0 recovers the raw
/// 17-layer angle set.
inline ContinuousSchedule reference_schedule(double scale = 1.0, bool minimizing = true) {
  const FourierCoeffs c = fourier_analyze(reference_gammas_p17(), reference_betas_p17());
  std::vector<double> beta = c.beta;
  if (minimizing)
    for (double& x : beta) x = -x;
  return ContinuousSchedule::from_fourier(c.gamma, beta, scale);
}

}  // namespace skqa
