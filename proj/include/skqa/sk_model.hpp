#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "skqa/errors.hpp"
#include "skqa/rng.hpp"

namespace skqa {

// Dense cost tables are capped at n <= 24 (2^24 doubles / complex amplitudes).
inline constexpr int kMaxQubits = 24;

// Bit-to-spin convention, fixed globally: bit b in {0,1} maps to
// sigma = 1 - 2b, so bit 0 means spin +1.
inline constexpr int bit_to_spin(std::uint64_t bits, int i) {
  return 1 - 2 * static_cast<int>((bits >> i) & 1u);
}

/// All-to-all Ising instance with standard normal couplings J_{j,k}, 1<=j<k<=n.
struct SkInstance {
  int n = 0;
  std::uint64_t seed = 0;
  // Flat upper triangle, (j,k) in lexicographic order with 1-based j<k.
  std::vector<double> couplings;

  static std::size_t pair_count(int n) {
    return static_cast<std::size_t>(n) * (n - 1) / 2;
  }
  static std::size_t pair_index(int n, int j, int k) {
    // 1-based j<k.
    return static_cast<std::size_t>(j - 1) * n - static_cast<std::size_t>(j) * (j + 1) / 2 + k - 1;
  }
  double coupling(int j, int k) const { return couplings[pair_index(n, j, k)]; }
};

/// Draws couplings i.i.d. N(0,1) from a counter-based stream keyed by
/// (n, seed, (j,k)); order-independent, so regeneration is bit-identical.
inline SkInstance sample_instance(int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample_instance: n must be >= 1");
  SkInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.couplings.resize(SkInstance::pair_count(n));
  const std::uint64_t key = hash_combine(splitmix64(seed), static_cast<std::uint64_t>(n));
  for (int j = 1; j < n; ++j)
    for (int k = j + 1; k <= n; ++k)
      inst.couplings[SkInstance::pair_index(n, j, k)] =
          gaussian(key, (static_cast<std::uint64_t>(j) << 32) | static_cast<std::uint64_t>(k));
  return inst;
}

inline SkInstance instance_from_couplings(int n, std::vector<double> couplings,
                                          std::uint64_t seed = 0) {
  if (n < 1) throw ConfigError("instance_from_couplings: n must be >= 1");
  if (couplings.size() != SkInstance::pair_count(n))
    throw ConfigError("instance_from_couplings: expected n(n-1)/2 couplings");
  return SkInstance{n, seed, std::move(couplings)};
}

/// Diagonal of the cost Hamiltonian over all 2^n bitstrings,
/// value(sigma) = (1/sqrt(n)) sum_{j<k} J_{j,k} sigma_j sigma_k.
struct CostVector {
  int n = 0;
  std::vector<double> values;
};

inline CostVector cost_values(const SkInstance& inst) {
  const int n = inst.n;
  if (n > kMaxQubits)
    throw ConfigError("cost_values: n exceeds the dense cap of 24 qubits");
  CostVector cv;
  cv.n = n;
  const std::size_t dim = std::size_t{1} << n;
  cv.values.assign(dim, 0.0);
  if (n == 1) return cv;

  // Symmetric coupling table scaled by 1/sqrt(n) for O(n) Gray-code updates.
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 1; j < n; ++j)
    for (int k = j + 1; k <= n; ++k) {
      const double v = inst.coupling(j, k) * inv_sqrt_n;
      w[static_cast<std::size_t>(j - 1) * n + (k - 1)] = v;
      w[static_cast<std::size_t>(k - 1) * n + (j - 1)] = v;
    }

  // Gray-code walk over the half space with the top bit clear; the other
  // half is the global spin flip of the first, so mirroring keeps
  // value(sigma) == value(-sigma) bit-exact.
  std::vector<int> spin(n, 1);  // state 0: all bits 0, all spins +1
  double cost = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) cost += w[static_cast<std::size_t>(j) * n + k];
  const std::uint64_t half = dim >> 1;
  const std::uint64_t mask = dim - 1;
  std::uint64_t g = 0;  // Gray code of the current state
  cv.values[0] = cost;
  cv.values[mask] = cost;
  for (std::uint64_t i = 1; i < half; ++i) {
    const int b = std::countr_zero(i);  // bit flipped between g and next
    double row = 0.0;
    const double* wb = &w[static_cast<std::size_t>(b) * n];
    for (int k = 0; k < n; ++k) row += wb[k] * spin[k];
    row -= wb[b] * spin[b];
    cost -= 2.0 * spin[b] * row;
    spin[b] = -spin[b];
    g ^= (std::uint64_t{1} << b);
    cv.values[g] = cost;
    cv.values[g ^ mask] = cost;
  }
  return cv;
}

struct GroundState {
  double energy = 0.0;
  std::uint64_t argmin = 0;
};

/// Exact minimum over all 2^n entries, with the first minimizing bitstring.
inline GroundState ground_energy(const CostVector& costs) {
  GroundState gs{costs.values.empty() ? 0.0 : costs.values[0], 0};
  for (std::uint64_t i = 1; i < costs.values.size(); ++i)
    if (costs.values[i] < gs.energy) {
      gs.energy = costs.values[i];
      gs.argmin = i;
    }
  return gs;
}

// --- instance serialization, plain-text "sk v1" ---------------------------

inline void save_instance(const SkInstance& inst, std::ostream& os) {
  os << "sk v1\n" << inst.n << ' ' << inst.seed << '\n';
  char buf[64];
  for (int j = 1; j < inst.n; ++j)
    for (int k = j + 1; k <= inst.n; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", j, k, inst.coupling(j, k));
      os << buf;
    }
}

inline SkInstance load_instance(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != "sk v1")
    throw ConfigError("load_instance: missing 'sk v1' header");
  int n = 0;
  std::uint64_t seed = 0;
  if (!(is >> n >> seed) || n < 1)
    throw ConfigError("load_instance: bad 'n seed' line");
  SkInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.couplings.assign(SkInstance::pair_count(n), 0.0);
  int j, k;
  double v;
  std::size_t read = 0;
  while (is >> j >> k >> v) {
    if (j < 1 || k <= j || k > n) throw ConfigError("load_instance: bad coupling index");
    inst.couplings[SkInstance::pair_index(n, j, k)] = v;
    ++read;
  }
  if (read != inst.couplings.size())
    throw ConfigError("load_instance: wrong number of coupling lines");
  return inst;
}

inline void save_instance_file(const SkInstance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  save_instance(inst, f);
}

inline SkInstance load_instance_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open for reading: " + path);
  return load_instance(f);
}

}  // namespace skqa
