#pragma once

// Test-side reference computations. Nothing here calls into the library's
// formulas: values come from first principles (permutation listing, plain
// products, Gaussian elimination) so they can arbitrate the library.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace ref {

using Q = mpq_class;

inline Q q(long p, long d = 1) {
  Q v(p, d);
  v.canonicalize();
  return v;
}

inline Q pochhammer(const Q& x, long m) {
  Q out = 1;
  for (long k = 0; k < m; ++k) out *= x + k;
  return out;
}

inline Q factorial(long m) {
  Q out = 1;
  for (long k = 2; k <= m; ++k) out *= k;
  return out;
}

/// (theta)_m / m!, zero for negative m.
inline Q theta_of(const Q& theta, long m) {
  if (m < 0) return 0;
  return pochhammer(theta, m) / factorial(m);
}

/// Cycle lengths of a permutation in one-line notation.
inline std::vector<int> cycle_lengths(const std::vector<int>& perm) {
  std::vector<int> lens;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (std::size_t k = s; !seen[k]; k = static_cast<std::size_t>(perm[k])) {
      seen[k] = true;
      ++len;
    }
    lens.push_back(len);
  }
  return lens;
}

struct Moments {
  Q mean;
  Q variance;
};

/// Mean and variance of sum_cycles a_{len} under P(sigma) proportional to
/// theta^{#cycles}, by listing all n! permutations.
inline Moments permutation_moments(int n, const Q& theta, const std::vector<Q>& a) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Q z = 0, m1 = 0, m2 = 0;
  do {
    const std::vector<int> lens = cycle_lengths(perm);
    Q w = 1;
    Q h = 0;
    for (int len : lens) {
      w *= theta;
      h += a[static_cast<std::size_t>(len - 1)];
    }
    z += w;
    m1 += w * h;
    m2 += w * h * h;
  } while (std::next_permutation(perm.begin(), perm.end()));
  Moments out;
  out.mean = m1 / z;
  out.variance = m2 / z - out.mean * out.mean;
  return out;
}

/// Determinant by fraction-exact Gaussian elimination.
inline Q determinant(std::vector<std::vector<Q>> m) {
  const std::size_t n = m.size();
  Q det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Q f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

/// Random rational p/q with |p| <= 20, 1 <= q <= 12.
inline Q random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-20, 20), den(1, 12);
  return q(num(rng), den(rng));
}

inline std::vector<Q> random_vector(int n, std::mt19937_64& rng) {
  std::vector<Q> v;
  for (int j = 0; j < n; ++j) v.push_back(random_rational(rng));
  return v;
}

}  // namespace ref
