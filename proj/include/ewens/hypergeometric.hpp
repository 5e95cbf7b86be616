#pragma once

// Terminating generalized hypergeometric series
//
//   F(-m, (upper); (lower); z) = sum_{k=0}^{m} (-m)_k prod (u)_k / prod (l)_k  z^k / k!
//
// The terminating parameter -m is kept apart from the other numerators so the
// series length is explicit.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewens/scalar.hpp"

namespace ewens {

/// A lower parameter hits zero inside the summation range.
class HypergeometricPole : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <Field T>
struct PfqSpec {
  long m = 0;
  std::vector<T> upper;
  std::vector<T> lower;
  T z = from_int<T>(1);
};

namespace detail {

// True when b is an integer in [1-m, 0], making (b)_k vanish for some k <= m.
template <Field T>
bool is_pole_in_range(const T& b, long m) {
  if constexpr (is_exact_v<T>) {
    if (b.get_den() != 1) return false;
    return b <= 0 && b >= 1 - m;
  } else {
    return b <= 0 && b >= static_cast<double>(1 - m) && b == std::floor(b);
  }
}

}  // namespace detail

/// Finite sum of the series; throws HypergeometricPole on an in-range zero
/// denominator.
template <Field T>
T pfq(const PfqSpec<T>& spec) {
  if (spec.m < 0) throw std::invalid_argument("pfq: termination order m < 0");
  for (const T& b : spec.lower) {
    if (detail::is_pole_in_range(b, spec.m))
      throw HypergeometricPole("pfq: lower parameter " + render(b) +
                               " vanishes inside a series of length " +
                               std::to_string(spec.m));
  }
  T term = from_int<T>(1);
  T sum = from_int<T>(1);
  for (long k = 0; k < spec.m; ++k) {
    // ratio t_{k+1} / t_k
    term *= from_int<T>(k - spec.m);
    if (sign_of(term) == 0) break;
    for (const T& u : spec.upper) term *= T(u + k);
    for (const T& l : spec.lower) term /= T(l + k);
    term *= spec.z;
    term /= from_int<T>(k + 1);
    sum += term;
  }
  return sum;
}

/// Sum of |t_k| over the series, in double precision: the scale against
/// which the rounding error of a floating evaluation is measured.
template <Field T>
double pfq_magnitude(const PfqSpec<T>& spec) {
  double term = 1.0;
  double sum = 1.0;
  for (long k = 0; k < spec.m; ++k) {
    term *= static_cast<double>(spec.m - k);
    if (term == 0.0) break;
    for (const T& u : spec.upper) term *= std::fabs(to_double(u) + k);
    for (const T& l : spec.lower) term /= std::fabs(to_double(l) + k);
    term *= std::fabs(to_double(spec.z));
    term /= static_cast<double>(k + 1);
    sum += term;
  }
  return sum;
}

template <Field T>
double hyper_magnitude(long m, std::vector<T> upper, std::vector<T> lower) {
  return pfq_magnitude(PfqSpec<T>{m, std::move(upper), std::move(lower), from_int<T>(1)});
}

/// Convenience form at z = 1.
template <Field T>
T hyper(long m, std::vector<T> upper, std::vector<T> lower) {
  return pfq(PfqSpec<T>{m, std::move(upper), std::move(lower), from_int<T>(1)});
}

/// Right side of Chu-Vandermonde, (c-b)_m / (c)_m.
template <Field T>
T chu_vandermonde_rhs(long m, const T& b, const T& c) {
  return T(rising_factorial(T(c - b), m) / rising_factorial(c, m));
}

}  // namespace ewens
