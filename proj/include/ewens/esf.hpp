#pragma once

// The Ewens measure on cycle types and closed-form moments of additive
// statistics h = sum_j a_j k_j.

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ewens/scalar.hpp"

namespace ewens {

/// Cycle counts (s_1, ..., s_n): s_j cycles of length j.
struct CycleType {
  std::vector<long> counts;

  CycleType() = default;
  explicit CycleType(std::vector<long> c) : counts(std::move(c)) {}

  int n() const { return static_cast<int>(counts.size()); }
  long count(int j) const { return counts[static_cast<std::size_t>(j - 1)]; }
  long total_cycles() const {
    return std::accumulate(counts.begin(), counts.end(), 0L);
  }
  friend bool operator==(const CycleType&, const CycleType&) = default;
  friend auto operator<=>(const CycleType&, const CycleType&) = default;
};

/// Weighted length 1*s_1 + ... + n*s_n.
inline long ell(const CycleType& s) {
  long total = 0;
  for (int j = 1; j <= s.n(); ++j) total += j * s.count(j);
  return total;
}

/// Coefficients (a_1, ..., a_n) of an additive statistic.
template <Field T>
struct WeightVector {
  std::vector<T> a;

  WeightVector() = default;
  explicit WeightVector(std::vector<T> v) : a(std::move(v)) {}

  int n() const { return static_cast<int>(a.size()); }
  const T& operator[](int j) const { return a[static_cast<std::size_t>(j - 1)]; }
  T& operator[](int j) { return a[static_cast<std::size_t>(j - 1)]; }
  bool is_zero() const {
    for (const T& v : a)
      if (sign_of(v) != 0) return false;
    return true;
  }
};

template <Field T>
WeightVector<T> unit_weight(int n, int j) {
  WeightVector<T> w(std::vector<T>(static_cast<std::size_t>(n), from_int<T>(0)));
  w[j] = from_int<T>(1);
  return w;
}

template <Field T>
WeightVector<T> ones_weight(int n) {
  return WeightVector<T>(std::vector<T>(static_cast<std::size_t>(n), from_int<T>(1)));
}

namespace detail {

inline void require_dim(int expected, int got, const char* what) {
  if (expected != got)
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(expected) + ", got " +
                            std::to_string(got));
}

// sum_j (a_j / j) Theta(n-j) / Theta(n)
template <Field T>
T scaled_linear_sum(const ThetaTable<T>& th, const WeightVector<T>& a) {
  const int n = th.n();
  T sum = from_int<T>(0);
  for (int j = 1; j <= n; ++j) {
    if (sign_of(a[j]) == 0) continue;
    sum += a[j] * th(n - j) / j;
  }
  return T(sum / th(n));
}

}  // namespace detail

/// Ewens sampling formula; 0 off the surface ell(s) = n.
template <Field T>
T esf_probability(const ThetaTable<T>& th, const CycleType& s) {
  const int n = th.n();
  detail::require_dim(n, s.n(), "esf_probability");
  if (ell(s) != n) return from_int<T>(0);
  T p = from_int<T>(1) / th(n);
  for (int j = 1; j <= n; ++j) {
    const long sj = s.count(j);
    for (long k = 1; k <= sj; ++k) {
      p *= th.theta();
      p /= from_int<T>(j * k);
    }
  }
  return p;
}

/// h(s) = sum_j a_j s_j.
template <Field T>
T additive_value(const WeightVector<T>& a, const CycleType& s) {
  detail::require_dim(a.n(), s.n(), "additive_value");
  T out = from_int<T>(0);
  for (int j = 1; j <= a.n(); ++j)
    if (s.count(j) != 0) out += a[j] * s.count(j);
  return out;
}

/// E h under the Ewens measure.
template <Field T>
T mean_statistic(const ThetaTable<T>& th, const WeightVector<T>& a) {
  detail::require_dim(th.n(), a.n(), "mean_statistic");
  return T(th.theta() * detail::scaled_linear_sum(th, a));
}

/// sum_j (a_j^2 / j) Theta(n-j) / Theta(n).
template <Field T>
T b_form(const ThetaTable<T>& th, const WeightVector<T>& a) {
  const int n = th.n();
  detail::require_dim(n, a.n(), "b_form");
  T sum = from_int<T>(0);
  for (int j = 1; j <= n; ++j) {
    if (sign_of(a[j]) == 0) continue;
    sum += a[j] * a[j] * th(n - j) / j;
  }
  return T(sum / th(n));
}

/// sum_{i+j<=n} (a_i a_j / ij) Theta(n-i-j)/Theta(n) minus the squared
/// linear sum.
template <Field T>
T delta_form(const ThetaTable<T>& th, const WeightVector<T>& a) {
  const int n = th.n();
  detail::require_dim(n, a.n(), "delta_form");
  std::vector<T> b(static_cast<std::size_t>(n) + 1, from_int<T>(0));
  for (int j = 1; j <= n; ++j) b[j] = a[j] / j;
  // Symmetric double sum: diagonal once, off-diagonal pairs twice.
  T pairs = from_int<T>(0);
  for (int i = 1; 2 * i <= n; ++i) {
    if (sign_of(b[i]) == 0) continue;
    T row = b[i] * th(n - 2 * i);
    for (int j = i + 1; i + j <= n; ++j) {
      if (sign_of(b[j]) == 0) continue;
      row += 2 * b[j] * th(n - i - j);
    }
    pairs += b[i] * row;
  }
  const T lin = detail::scaled_linear_sum(th, a);
  return T(pairs / th(n) - lin * lin);
}

/// Var h = theta B + theta^2 Delta.
template <Field T>
T variance_statistic(const ThetaTable<T>& th, const WeightVector<T>& a) {
  const T& theta = th.theta();
  return T(theta * b_form(th, a) + theta * theta * delta_form(th, a));
}

/// Var k_j, from the variance formula applied to the j-th unit weight.
template <Field T>
T var_cycle_count(const ThetaTable<T>& th, int j) {
  if (j < 1 || j > th.n()) throw std::out_of_range("var_cycle_count: j out of range");
  return variance_statistic(th, unit_weight<T>(th.n(), j));
}

/// (sum_j a_j^2 Var k_j - theta B, n^{-min(1,theta)} B). Reported only.
template <Field T>
std::pair<T, double> sum_var_gap(const ThetaTable<T>& th, const WeightVector<T>& a) {
  const int n = th.n();
  detail::require_dim(n, a.n(), "sum_var_gap");
  T sum = from_int<T>(0);
  for (int j = 1; j <= n; ++j) {
    if (sign_of(a[j]) == 0) continue;
    sum += a[j] * a[j] * var_cycle_count(th, j);
  }
  const T b = b_form(th, a);
  const double exponent = std::min(1.0, to_double(th.theta()));
  return {T(sum - th.theta() * b), std::pow(static_cast<double>(n), -exponent) * to_double(b)};
}

}  // namespace ewens
