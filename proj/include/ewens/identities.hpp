#pragma once

// Binomial and hypergeometric identities behind the spectral proof, each
// evaluated on both sides by direct summation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewens/hahn.hpp"
#include "ewens/hypergeometric.hpp"
#include "ewens/scalar.hpp"
#include "ewens/spectral.hpp"
#include "ewens/spectral_float.hpp"

namespace ewens {

template <Field T>
struct IdentityCheck {
  T lhs;
  T rhs;
  bool holds;
  double scale = 0;  // summand magnitude; floating comparisons are relative to it
};

inline constexpr double kFloatIdentityTol = 1e-10;

/// Exact: equality. Floating: |lhs - rhs| <= kFloatIdentityTol * max(|lhs|,
/// |rhs|, scale), where scale is the sum of absolute summands on either side
/// (cancellation makes the sides themselves a poor yardstick).
template <Field T>
IdentityCheck<T> make_check(T lhs, T rhs, double scale = 0) {
  bool ok;
  if constexpr (is_exact_v<T>) {
    ok = lhs == rhs;
  } else {
    const double bound = std::max({std::fabs(lhs), std::fabs(rhs), scale});
    ok = std::fabs(lhs - rhs) <= kFloatIdentityTol * bound;
  }
  return {std::move(lhs), std::move(rhs), ok, scale};
}

/// Raised when an identity asserted inside a computation fails.
class IdentityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// sum_k binom(a+k,k) binom(b-k,M-k) = sum_k binom(a+b-k,M-k).
template <Field T>
IdentityCheck<T> check_binomial_convolution(const T& a, const T& b, long M) {
  if (M < 0) throw std::invalid_argument("check_binomial_convolution: M < 0");
  T lhs = from_int<T>(0);
  T rhs = from_int<T>(0);
  double scale = 0;
  for (long k = 0; k <= M; ++k) {
    const T l = gen_binomial(T(a + k), k) * gen_binomial(T(b - k), M - k);
    const T r = gen_binomial(T(a + b - k), M - k);
    lhs += l;
    rhs += r;
    scale += std::fabs(to_double(l)) + std::fabs(to_double(r));
  }
  return make_check(std::move(lhs), std::move(rhs), scale);
}

/// sum_k (-1)^k binom(M,k) binom(a-k,m) = binom(a-M, m-M).
template <Field T>
IdentityCheck<T> check_alternating_binomial(const T& a, long m, long M) {
  if (M < 0 || m < 0) throw std::invalid_argument("check_alternating_binomial: negative index");
  T lhs = from_int<T>(0);
  T binom_mk = from_int<T>(1);
  double scale = 0;
  for (long k = 0; k <= M; ++k) {
    T term = binom_mk * gen_binomial(T(a - k), m);
    scale += std::fabs(to_double(term));
    if (k % 2 == 0) lhs += term; else lhs -= term;
    binom_mk *= (M - k);
    binom_mk /= (k + 1);
  }
  return make_check(std::move(lhs), gen_binomial(T(a - M), m - M), scale);
}

/// sum_k binom(M,k) (alpha)_{M-k} (beta)_k F(-k, (upper); (lower); 1)
///   = (alpha+beta)_M F(-M, beta, (upper); alpha+beta, (lower); 1).
template <Field T>
IdentityCheck<T> check_hypergeometric_convolution(long M, const T& alpha, const T& beta,
                              const std::vector<T>& upper, const std::vector<T>& lower) {
  T lhs = from_int<T>(0);
  T binom_mk = from_int<T>(1);
  double scale = 0;
  for (long k = 0; k <= M; ++k) {
    const T coef = binom_mk * rising_factorial(alpha, M - k) * rising_factorial(beta, k);
    lhs += coef * hyper<T>(k, upper, lower);
    scale += std::fabs(to_double(coef)) * hyper_magnitude<T>(k, upper, lower);
    binom_mk *= (M - k);
    binom_mk /= (k + 1);
  }
  std::vector<T> up{beta};
  up.insert(up.end(), upper.begin(), upper.end());
  std::vector<T> low{T(alpha + beta)};
  low.insert(low.end(), lower.begin(), lower.end());
  const T coef = rising_factorial(T(alpha + beta), M);
  T rhs = coef * hyper<T>(M, up, low);
  scale += std::fabs(to_double(coef)) * hyper_magnitude<T>(M, up, low);
  return make_check(std::move(lhs), std::move(rhs), scale);
}

/// Sigma_r(M) = sum_{k<=M} Q_r(k; 1, theta-1, n) Theta(M-k) against
/// ((theta+1)_M / M!) 4F3(-M, 1, -r, r+theta+1; theta+1, 2, 1-n; 1).
template <Field T>
IdentityCheck<T> check_hahn_partial_sum(int r, int M, const ThetaTable<T>& th) {
  const int n = th.n();
  if (M < 0 || M > n - 1 || r < 0 || r > n - 1)
    throw std::out_of_range("hahn_partial_sum: need 0 <= M, r <= n-1");
  const T& theta = th.theta();
  T direct = from_int<T>(0);
  double scale = 0;
  for (int k = 0; k <= M; ++k) {
    const T term = hahn_q_general<T>(r, from_int<T>(k), from_int<T>(1), T(theta - 1), n) * th(M - k);
    direct += term;
    scale += std::fabs(to_double(term));
  }
  T fact = from_int<T>(1);
  for (int k = 2; k <= M; ++k) fact *= k;
  const T coef = rising_factorial(T(theta + 1), M) / fact;
  const std::vector<T> up{from_int<T>(1), from_int<T>(-r), T(theta + (r + 1))};
  const std::vector<T> low{T(theta + 1), from_int<T>(2), from_int<T>(1 - n)};
  T closed = coef * hyper<T>(M, up, low);
  scale += std::fabs(to_double(coef)) * hyper_magnitude<T>(M, up, low);
  return make_check(std::move(direct), std::move(closed), scale);
}

/// Direct sum Sigma_r(M); throws IdentityViolation if the closed form
/// disagrees.
template <Field T>
T hahn_partial_sum(int r, int M, const ThetaTable<T>& th) {
  IdentityCheck<T> c = check_hahn_partial_sum(r, M, th);
  if (!c.holds)
    throw IdentityViolation("Sigma_r closed form disagrees at r=" + std::to_string(r) +
                            ", M=" + std::to_string(M));
  return c.lhs;
}

/// Phi_r(x) = 3F2(-r, -n+x, r+theta-1; theta, -n; 1).
template <Field T>
T kernel_row_factor(int r, const T& x, const ThetaParam<T>& theta, int n) {
  return hyper<T>(r, {T(x - n), T(theta.value() + (r - 1))},
                  {theta.value(), from_int<T>(-n)});
}

template <Field T>
double kernel_row_factor_magnitude(int r, const T& x, const ThetaParam<T>& theta, int n) {
  return hyper_magnitude<T>(r, {T(x - n), T(theta.value() + (r - 1))},
                            {theta.value(), from_int<T>(-n)});
}

/// Closed form of the kernel row in the rational gauge:
///   sum_j q_{r-1}(j) C_ji = -Theta(n-i) n / (r (r+theta-1)) Phi_r(i).
/// (The float y_ri is this divided by sqrt(i Theta(n-i)).)
template <Field T>
IdentityCheck<T> check_kernel_hahn_row_gauge(int r, int i, const HahnBasis<T>& basis,
                                    const KernelMatrix<T>& kernel, const ThetaTable<T>& th) {
  const int n = th.n();
  T direct = from_int<T>(0);
  double scale = 0;
  const double theta_n = to_double(th(n));
  for (int j = 1; j <= n; ++j) {
    direct += basis.q(r - 1, j) * kernel.c(j - 1, i - 1);
    // C_ji is itself a difference of two positive terms.
    const double c_mag = to_double(th(n - i - j)) + to_double(th(n - i)) * to_double(th(n - j)) / theta_n;
    scale += std::fabs(to_double(basis.q(r - 1, j))) * c_mag;
  }
  const T& theta = th.theta();
  const T coef = -(th(n - i) * n) / (T(theta + (r - 1)) * r);
  T closed = coef * kernel_row_factor<T>(r, from_int<T>(i), th.param(), n);
  scale += std::fabs(to_double(coef)) * kernel_row_factor_magnitude<T>(r, from_int<T>(i), th.param(), n);
  return make_check(std::move(direct), std::move(closed), scale);
}

/// y_ri = -sqrt(Theta(n-i)/i) n / (r (r+theta-1)) Phi_r(i), in floating point.
template <Field T>
double kernel_hahn_row(int r, int i, const ThetaTable<T>& th) {
  const int n = th.n();
  if (r < 1 || r > n || i < 1 || i > n) throw std::out_of_range("kernel_hahn_row: need 1 <= r, i <= n");
  const double theta = to_double(th.theta());
  const double phi = to_double(kernel_row_factor<T>(r, from_int<T>(i), th.param(), n));
  return -std::sqrt(to_double(th(n - i)) / i) * n / (r * (r + theta - 1)) * phi;
}

/// The direct product pi_{r-1} e_r M_n, for comparison with kernel_hahn_row.
inline Eigen::VectorXd kernel_hahn_row_direct(const Eigen::MatrixXd& e, const std::vector<double>& pi,
                                     const Eigen::MatrixXd& m, int r) {
  return (pi[static_cast<std::size_t>(r - 1)] * e.row(r - 1) * m).transpose();
}

/// (-1)^{r-1} r! i 3F2(-r+1, -i+1, r+theta; 2, -n+1; 1)
///   = (theta)_{r-1} n 3F2(-r, -n+i, r+theta-1; theta, -n; 1).
template <Field T>
IdentityCheck<T> check_hahn_phi_relation(int i, int r, const ThetaParam<T>& theta, int n) {
  if (i < 1 || i > n || r < 1 || r > n)
    throw std::out_of_range("hahn_phi_relation: need 1 <= i, r <= n");
  T fact = from_int<T>(1);
  for (int k = 2; k <= r; ++k) fact *= k;
  const std::vector<T> up{from_int<T>(1 - i), T(theta.value() + r)};
  const std::vector<T> low{from_int<T>(2), from_int<T>(1 - n)};
  T lhs = fact * i * hyper<T>(r - 1, up, low);
  if ((r - 1) % 2 != 0) lhs = -lhs;
  const T coef = rising_factorial(theta.value(), r - 1) * n;
  T rhs = coef * kernel_row_factor<T>(r, from_int<T>(i), theta, n);
  const double scale = std::fabs(to_double(fact)) * i * hyper_magnitude<T>(r - 1, up, low) +
                       std::fabs(to_double(coef)) * kernel_row_factor_magnitude<T>(r, from_int<T>(i), theta, n);
  return make_check(std::move(lhs), std::move(rhs), scale);
}

template <Field T>
struct LeadingCoeffReport {
  T phi_extracted, phi_closed;
  T q_extracted, q_closed;      // polynomial q_{r-1}
  T ratio_extracted, ratio_closed;  // c_{r-1}
  bool holds;
};

/// Leading coefficients of Phi_r (degree r) and q_{r-1} (degree r-1), and
/// their ratio c_{r-1}, extracted by exact finite differences.
template <Field T>
LeadingCoeffReport<T> check_leading_coefficients(int r, const ThetaParam<T>& theta, int n) {
  if (r < 1 || r > n - 1) throw std::out_of_range("leading coefficients: need 1 <= r <= n-1");
  const T& th = theta.value();
  std::vector<T> phi_vals;
  for (int x = 0; x <= r; ++x) phi_vals.push_back(kernel_row_factor<T>(r, from_int<T>(x), theta, n));
  std::vector<T> q_vals;
  for (int j = 1; j <= r; ++j) q_vals.push_back(q_poly<T>(r - 1, j, theta, n));

  LeadingCoeffReport<T> rep;
  rep.phi_extracted = leading_coefficient(phi_vals, r);
  rep.q_extracted = leading_coefficient(q_vals, r - 1);

  T r_fact = from_int<T>(1);
  for (int k = 2; k <= r; ++k) r_fact *= k;
  rep.phi_closed = rising_factorial(T(th + (r - 1)), r) /
                   (rising_factorial(th, r) * rising_factorial(from_int<T>(-n), r));
  if (r % 2 != 0) rep.phi_closed = -rep.phi_closed;
  rep.q_closed = rising_factorial(T(th + r), r - 1) /
                 (r_fact * rising_factorial(from_int<T>(1 - n), r - 1));
  rep.ratio_extracted = rep.phi_extracted / rep.q_extracted;
  rep.ratio_closed = r_fact * T(th + (r - 1)) / (rising_factorial(th, r) * n);
  if ((r - 1) % 2 != 0) rep.ratio_closed = -rep.ratio_closed;
  if constexpr (is_exact_v<T>) {
    rep.holds = rep.phi_extracted == rep.phi_closed && rep.q_extracted == rep.q_closed &&
                rep.ratio_extracted == rep.ratio_closed;
  } else {
    // A deg-th forward difference can amplify the value errors by 2^deg.
    auto diff_scale = [](const std::vector<double>& mags, int deg) {
      double m = 0;
      for (double v : mags) m = std::max(m, v);
      double f = 1;
      for (int k = 2; k <= deg; ++k) f *= k;
      return std::ldexp(m, deg) / f;
    };
    std::vector<double> phi_mags, q_mags;
    for (int x = 0; x <= r; ++x)
      phi_mags.push_back(kernel_row_factor_magnitude<T>(r, from_int<T>(x), theta, n));
    for (double v : q_vals) q_mags.push_back(std::fabs(v));
    const double phi_scale = std::max(std::fabs(rep.phi_closed), diff_scale(phi_mags, r));
    const double q_scale = std::max(std::fabs(rep.q_closed), diff_scale(q_mags, r - 1));
    const double ratio_scale = std::fabs(rep.ratio_closed) *
                               (phi_scale / std::fabs(rep.phi_closed) + q_scale / std::fabs(rep.q_closed));
    rep.holds = std::fabs(rep.phi_extracted - rep.phi_closed) <= kFloatIdentityTol * phi_scale &&
                std::fabs(rep.q_extracted - rep.q_closed) <= kFloatIdentityTol * q_scale &&
                std::fabs(rep.ratio_extracted - rep.ratio_closed) <= kFloatIdentityTol * ratio_scale;
  }
  return rep;
}

/// q_{n-1}(j) = 2F1(-j+1, theta+n; 2; 1) = (-1)^{j-1} (theta+n-j)_{j-1} / j!.
template <Field T>
IdentityCheck<T> check_last_hahn_closed_form(int j, const ThetaParam<T>& theta, int n) {
  T lhs = q_poly<T>(n - 1, j, theta, n);
  T fact = from_int<T>(1);
  for (int k = 2; k <= j; ++k) fact *= k;
  T rhs = rising_factorial(T(theta.value() + (n - j)), j - 1) / fact;
  if ((j - 1) % 2 != 0) rhs = -rhs;
  return make_check(std::move(lhs), std::move(rhs));
}

}  // namespace ewens
