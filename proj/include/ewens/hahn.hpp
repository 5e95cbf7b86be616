#pragma once

// Discrete Hahn polynomials specialized to the eigenvectors of M_n.
//
//   Q_r(x; alpha, beta, n) = 3F2(-r, -x, r+alpha+beta+1; alpha+1, -n+1; 1)
//   q_r(j) = Q_r(j-1; 1, theta-1, n),  0 <= r <= n-1, 1 <= j <= n
//
// orthogonal under <f, g> = sum_j j f(j) g(j) Theta(n-j).

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ewens/hypergeometric.hpp"
#include "ewens/scalar.hpp"

namespace ewens {

// In floating point the alternating series loses most of its digits for
// large r, so the double overload sums the exact rational value of its
// (binary, hence rational) arguments and rounds once.
template <Field T>
T hahn_q_general(int r, const T& x, const T& alpha, const T& beta, int n) {
  if (r < 0 || r > n - 1) throw std::out_of_range("hahn_Q: need 0 <= r <= n-1");
  if constexpr (is_exact_v<T>) {
    return hyper<T>(r, {T(-x), T(alpha + beta + (r + 1))}, {T(alpha + 1), from_int<T>(1 - n)});
  } else {
    const Rational xq(x), aq(alpha), bq(beta);
    return hahn_q_general<Rational>(r, xq, aq, bq, n).get_d();
  }
}

/// q_r(j) = Q_r(j-1; 1, theta-1, n).
template <Field T>
T q_poly(int r, int j, const ThetaParam<T>& theta, int n) {
  if (j < 1 || j > n) throw std::out_of_range("q_poly: need 1 <= j <= n");
  if constexpr (is_exact_v<T>) {
    return hahn_q_general<T>(r, from_int<T>(j - 1), from_int<T>(1), T(theta.value() - 1), n);
  } else {
    // theta - 1 is formed exactly; rounding it first would perturb every value.
    const Rational tq(theta.value());
    return hahn_q_general<Rational>(r, Rational(j - 1), Rational(1), Rational(tq - 1), n).get_d();
  }
}

/// Values q_r(j) for all 0 <= r <= n-1, 1 <= j <= n, with the squared norms
/// pi_r^2 = <q_r, q_r>.
template <Field T>
class HahnBasis {
 public:
  explicit HahnBasis(const ThetaTable<T>& th) : n_(th.n()), theta_(th.theta()) {
    values_.resize(static_cast<std::size_t>(n_) * n_);
    weight_.reserve(static_cast<std::size_t>(n_));
    for (int j = 1; j <= n_; ++j) weight_.push_back(T(th(n_ - j) * j));
    for (int r = 0; r < n_; ++r)
      for (int j = 1; j <= n_; ++j) at(r, j) = q_poly<T>(r, j, th.param(), n_);
    for (int r = 0; r < n_; ++r) pi_sq_.push_back(inner_product(r, r));
  }

  int n() const { return n_; }
  const T& theta() const { return theta_; }
  const T& q(int r, int j) const {
    return values_[static_cast<std::size_t>(r) * n_ + (j - 1)];
  }
  const T& pi_sq(int r) const { return pi_sq_[static_cast<std::size_t>(r)]; }
  /// j Theta(n-j)
  const T& weight(int j) const { return weight_[static_cast<std::size_t>(j - 1)]; }

  /// sum_j j q_l(j) q_r(j) Theta(n-j)
  T inner_product(int l, int r) const {
    T sum = from_int<T>(0);
    for (int j = 1; j <= n_; ++j) sum += weight(j) * q(l, j) * q(r, j);
    return sum;
  }

  /// Coordinates a_j = j q_{r-1}(j) of the r-th eigenvector in weight space.
  std::vector<T> eigen_weights(int r) const {
    std::vector<T> out;
    for (int j = 1; j <= n_; ++j) out.push_back(T(q(r - 1, j) * j));
    return out;
  }

 private:
  T& at(int r, int j) { return values_[static_cast<std::size_t>(r) * n_ + (j - 1)]; }

  int n_;
  T theta_;
  std::vector<T> values_;
  std::vector<T> weight_;
  std::vector<T> pi_sq_;
};

/// e_rj = q_{r-1}(j) sqrt(j Theta(n-j)) / pi_{r-1}, as rows r = 1..n.
template <Field T>
Eigen::MatrixXd eigenbasis(const HahnBasis<T>& basis) {
  const int n = basis.n();
  Eigen::MatrixXd e(n, n);
  for (int r = 1; r <= n; ++r) {
    const double pi = std::sqrt(to_double(basis.pi_sq(r - 1)));
    for (int j = 1; j <= n; ++j)
      e(r - 1, j - 1) = to_double(basis.q(r - 1, j)) * std::sqrt(to_double(basis.weight(j))) / pi;
  }
  return e;
}

template <Field T>
Eigen::VectorXd eigenbasis_vector(const HahnBasis<T>& basis, int r) {
  if (r < 1 || r > basis.n()) throw std::out_of_range("eigenbasis_vector: need 1 <= r <= n");
  return eigenbasis(basis).row(r - 1).transpose();
}

/// Gram-Schmidt on the monomials 1, x, ..., x^{count-1} at x = 1..n under the
/// Hahn weight. Row k holds the values of the k-th orthogonal polynomial.
/// The monomial basis is badly conditioned, so the double overload runs the
/// process exactly on the (rational) values of the weights.
template <Field T>
std::vector<std::vector<T>> gram_schmidt_monomials(const HahnBasis<T>& basis, int count) {
  const int n = basis.n();
  std::vector<Rational> weight;
  for (int j = 1; j <= n; ++j) weight.push_back(Rational(basis.weight(j)));
  std::vector<std::vector<Rational>> exact;
  auto inner = [&](const std::vector<Rational>& f, const std::vector<Rational>& g) {
    Rational s = 0;
    for (int j = 0; j < n; ++j) s += weight[j] * f[j] * g[j];
    return s;
  };
  for (int k = 0; k < count; ++k) {
    std::vector<Rational> v;
    for (int j = 1; j <= n; ++j) {
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(k));
      v.emplace_back(p);
    }
    for (const auto& prev : exact) {
      const Rational coef = inner(v, prev) / inner(prev, prev);
      for (int j = 0; j < n; ++j) v[j] -= coef * prev[j];
    }
    exact.push_back(std::move(v));
  }
  std::vector<std::vector<T>> out;
  for (const auto& row : exact) {
    std::vector<T> conv;
    for (const Rational& x : row) {
      if constexpr (is_exact_v<T>) conv.push_back(x); else conv.push_back(x.get_d());
    }
    out.push_back(std::move(conv));
  }
  return out;
}

/// Leading coefficient of a degree <= deg polynomial from its values at
/// x0, x0+1, ..., x0+deg: the deg-th forward difference divided by deg!.
template <Field T>
T leading_coefficient(std::vector<T> values, int deg) {
  if (static_cast<int>(values.size()) != deg + 1)
    throw DimensionMismatch("leading_coefficient: need deg+1 samples");
  for (int level = 0; level < deg; ++level)
    for (int k = 0; k + 1 < static_cast<int>(values.size()) - level; ++k)
      values[k] = values[k + 1] - values[k];
  T out = values[0];
  for (int k = 2; k <= deg; ++k) out /= k;
  return out;
}

}  // namespace ewens
