#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>

#include "rwl1/types.hpp"

namespace rwl1 {

/// SplitMix64 finalizer. Used to derive decorrelated per-stream seeds from a
/// base seed; nearby base seeds map to unrelated streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class EntryDist { Gaussian, Bernoulli };

/// m x d matrix with i.i.d. N(0, 1/m) entries, so columns have unit norm in
/// expectation. Deterministic for a given seed within one build.
inline Matrix generate_gaussian_matrix(int m, int d, std::uint64_t seed) {
  require(m >= 1 && d >= 1, "matrix sizes must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(double(m)));
  Matrix out(m, d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = gauss(rng);
  return out;
}

/// m x d matrix with i.i.d. entries uniform on {+1/sqrt(m), -1/sqrt(m)};
/// every column has norm exactly 1.
inline Matrix generate_bernoulli_matrix(int m, int d, std::uint64_t seed) {
  require(m >= 1 && d >= 1, "matrix sizes must be positive");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  const double v = 1.0 / std::sqrt(double(m));
  Matrix out(m, d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = coin(rng) ? v : -v;
  return out;
}

/// s-sparse signal in dimension d: support is a uniformly random s-subset,
/// entries i.i.d. standard Gaussian or symmetric Bernoulli (+-1).
inline SparseSignal generate_sparse_signal(int d, int s, EntryDist dist,
                                           std::uint64_t seed) {
  require(d >= 1 && s >= 1, "signal sizes must be positive");
  if (s > d) throw std::invalid_argument("sparsity s exceeds dimension d");
  std::mt19937_64 rng(seed);

  // Partial Fisher-Yates: the first s slots are a uniform s-subset.
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < s; ++i) {
    std::uniform_int_distribution<int> pick(i, d - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  SparseSignal sig;
  sig.dim = d;
  sig.support.assign(idx.begin(), idx.begin() + s);
  std::sort(sig.support.begin(), sig.support.end());

  sig.values.resize(s);
  if (dist == EntryDist::Gaussian) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < s; ++i) {
      double v = gauss(rng);
      while (v == 0.0) v = gauss(rng);  // nonzero by definition of support
      sig.values[i] = v;
    }
  } else {
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < s; ++i) sig.values[i] = coin(rng) ? 1.0 : -1.0;
  }
  sig.validate();
  return sig;
}

/// Noise vector with i.i.d. N(0, sigma^2) entries; sigma = 0 gives zeros.
inline Vector generate_noise(int m, double sigma, std::uint64_t seed) {
  require(m >= 1, "noise length must be positive");
  require(sigma >= 0.0, "sigma must be nonnegative");
  if (sigma == 0.0) return Vector::Zero(m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  Vector e(m);
  for (int i = 0; i < m; ++i) e[i] = gauss(rng);
  return e;
}

/// High-probability bound on the noise norm: epsilon with
/// epsilon^2 = sigma^2 (m + 2 sqrt(2m)).
inline double noise_level(double sigma, int m) {
  require(sigma >= 0.0, "sigma must be nonnegative");
  require(m >= 1, "m must be positive");
  return sigma * std::sqrt(double(m) + 2.0 * std::sqrt(2.0 * double(m)));
}

}  // namespace rwl1
