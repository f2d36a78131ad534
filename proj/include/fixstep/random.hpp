#pragma once

// Seeded random instances. Every randomized routine in fixstep takes an
// explicit 64-bit seed; per-(trial, iter) seeds are derived from a master
// seed with derive_seed so that runs are bit-reproducible.

#include <cstdint>
#include <random>
#include <vector>

#include "fixstep/linalg.hpp"

namespace fixstep {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 42;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// seed(trial, iter) = splitmix64(splitmix64(master ^ splitmix64(trial)) + iter)
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                    std::uint64_t iter) noexcept {
  return splitmix64(splitmix64(master ^ splitmix64(trial)) + iter);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector random_normal_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return Vector(std::move(v));
}

inline Vector random_unit_vector(std::size_t n, Rng& rng) {
  for (;;) {
    Vector v = random_normal_vector(n, rng);
    if (v.norm() > 1e-8) return v.normalized();
  }
}

/// Haar-ish random orthogonal matrix from Gram-Schmidt (applied twice) on a
/// Gaussian matrix.
inline Matrix random_orthogonal(std::size_t n, Rng& rng) {
  std::vector<Vector> cols;
  cols.reserve(n);
  while (cols.size() < n) {
    Vector v = random_normal_vector(n, rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : cols) v = axpy_neg(v, inner(q, v), q);
    if (v.norm() < 1e-8) continue;
    cols.push_back(v.normalized());
  }
  Matrix q(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) q(i, j) = cols[j][i];
  return q;
}

/// V diag(eigs) V^T with V random orthogonal; exactly symmetric storage.
inline Matrix random_symmetric_with_spectrum(const std::vector<double>& eigs, Rng& rng) {
  const std::size_t n = eigs.size();
  const Matrix v = random_orthogonal(n, rng);
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += v(i, k) * eigs[k] * v(j, k);
      m(i, j) = s;
    }
  return m.symmetrized_upper();
}

/// n values evenly spaced on [lo, hi] (both ends included; n == 1 gives lo).
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = hi;
  return out;
}

/// Random SPD matrix with spectrum exactly spread on [lo, hi] (up to rounding).
inline SpdMatrix random_spd(std::size_t n, double lo, double hi, Rng& rng) {
  return SpdMatrix(random_symmetric_with_spectrum(linspace(lo, hi, n), rng));
}

/// Random symmetric matrix with standard normal entries.
inline Matrix random_symmetric(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = normal(rng);
  return m.symmetrized_upper();
}

}  // namespace fixstep
