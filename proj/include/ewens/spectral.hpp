#pragma once

// The quadratic-form matrix M_n of the variance problem, its closed-form
// spectrum, and the exponential-matrix triangularization.
//
// M_n has square roots in every entry. All exact work is done in the diagonal
// gauge D = diag(sqrt(j Theta(n-j))):
//
//   M = D^-1 C D^-1,   e^L = D^-1 U D,   e^L M e^-L = D^-1 R D,
//
// with C, U, R rational. Triangularity, diagonals and eigen-equations survive
// the conjugation, so they are checked on C, U, R directly.

#include <stdexcept>
#include <string>
#include <vector>

#include "ewens/esf.hpp"
#include "ewens/matrix.hpp"
#include "ewens/scalar.hpp"

namespace ewens {

/// Raised for n < 2; the variance bound is stated for n >= 2 only.
class SpectralDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline void require_spectral_n(int n) {
  if (n < 2)
    throw SpectralDomainError("spectral quantities need n >= 2, got n = " +
                              std::to_string(n));
}

/// Squares of the gauge diagonal, dsq_j = j Theta(n-j).
template <Field T>
struct GaugeDiag {
  std::vector<T> dsq;  // 1-based through operator[]

  const T& operator[](int j) const { return dsq[static_cast<std::size_t>(j - 1)]; }
  int n() const { return static_cast<int>(dsq.size()); }
};

template <Field T>
GaugeDiag<T> gauge_diag(const ThetaTable<T>& th) {
  const int n = th.n();
  GaugeDiag<T> g;
  g.dsq.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) g.dsq.push_back(T(th(n - j) * j));
  return g;
}

/// C_ij = Theta(n-i-j) - Theta(n-i) Theta(n-j) / Theta(n).
template <Field T>
struct KernelMatrix {
  int n = 0;
  T theta;
  Matrix<T> c;
};

template <Field T>
KernelMatrix<T> build_kernel(const ThetaTable<T>& th) {
  const int n = th.n();
  require_spectral_n(n);
  KernelMatrix<T> k{n, th.theta(), Matrix<T>(n, n)};
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      T v = th(n - i - j) - th(n - i) * th(n - j) / th(n);
      k.c(i - 1, j - 1) = v;
      k.c(j - 1, i - 1) = std::move(v);
    }
  }
  return k;
}

/// |C_ij| bounded by the two terms of its difference, in double precision.
template <Field T>
Matrix<double> kernel_magnitude(const ThetaTable<T>& th) {
  const int n = th.n();
  Matrix<double> m(n, n);
  const double total = to_double(th(n));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      m(i - 1, j - 1) = to_double(th(n - i - j)) + to_double(th(n - i)) * to_double(th(n - j)) / total;
  return m;
}

/// mu_r = (-1)^r (r-1)! / (theta)_r.
template <Field T>
T mu_closed(int r, const ThetaParam<T>& theta) {
  if (r < 1) throw std::out_of_range("mu_closed: r must be >= 1");
  T fact = from_int<T>(1);
  for (int k = 2; k < r; ++k) fact *= k;
  T out = fact / rising_factorial(theta.value(), r);
  return r % 2 == 0 ? out : T(-out);
}

/// Sharp constant (theta+2)/(theta+1).
template <Field T>
T tau_closed(const ThetaParam<T>& theta) {
  return T((theta.value() + 2) / (theta.value() + 1));
}

/// a_j = (theta+2) j^2 - (2n+theta) j, the direction attaining the sharp
/// constant.
template <Field T>
WeightVector<T> extremal_weights(int n, const ThetaParam<T>& theta) {
  require_spectral_n(n);
  WeightVector<T> a(std::vector<T>(static_cast<std::size_t>(n)));
  for (int j = 1; j <= n; ++j)
    a[j] = T((theta.value() + 2) * (j * j) - (theta.value() + 2 * n) * j);
  return a;
}

/// D_n(a) / (theta B_n(a)).
template <Field T>
T rayleigh_ratio(const ThetaTable<T>& th, const WeightVector<T>& a) {
  require_spectral_n(th.n());
  if (a.is_zero()) throw std::invalid_argument("rayleigh_ratio: zero weight vector");
  return T(variance_statistic(th, a) / (th.theta() * b_form(th, a)));
}

/// The eigen-equation M x = mu x transported to weight coordinates:
/// sum_j C_ij a_j / j == mu Theta(n-i) a_i for every i. Scale-invariant.
template <Field T>
bool rational_eigencheck(const KernelMatrix<T>& kernel, const ThetaTable<T>& th,
                         const T& mu, const WeightVector<T>& a) {
  const int n = kernel.n;
  detail::require_dim(n, a.n(), "rational_eigencheck");
  if (a.is_zero()) return false;
  const Matrix<double> mag = kernel_magnitude(th);
  for (int i = 1; i <= n; ++i) {
    T lhs = from_int<T>(0);
    double scale = 0;
    for (int j = 1; j <= n; ++j) {
      lhs += kernel.c(i - 1, j - 1) * a[j] / j;
      scale += mag(i - 1, j - 1) * std::fabs(to_double(a[j])) / j;
    }
    const T rhs = mu * th(n - i) * a[i];
    if (!scaled_equal<T>(lhs, rhs, scale, 1e-10)) return false;
  }
  return true;
}

/// Rational gauge image G of the subdiagonal generator L = D^-1 G D:
/// G_{j+1,j} = -(j+1) Theta(n-j-1) / Theta(n-j).
template <Field T>
Matrix<T> build_l_gauge(const ThetaTable<T>& th) {
  const int n = th.n();
  require_spectral_n(n);
  Matrix<T> g(n, n);
  for (int j = 1; j < n; ++j) g(j, j - 1) = T(-(th(n - j - 1) * (j + 1)) / th(n - j));
  return g;
}

/// exp of a nilpotent matrix by its finite series sum_{k<n} N^k / k!.
template <Field T>
Matrix<T> nilpotent_exp(const Matrix<T>& nil) {
  const std::size_t n = nil.rows();
  Matrix<T> out = Matrix<T>::identity(n);
  Matrix<T> term = Matrix<T>::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    term = term * nil;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) term(i, j) /= static_cast<long>(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += term(i, j);
  }
  return out;
}

/// U_ij = (-1)^{i-j} binom(i,j) Theta(n-i)/Theta(n-j) for i >= j; e^L = D^-1 U D.
template <Field T>
Matrix<T> exp_l_gauge(const ThetaTable<T>& th) {
  const int n = th.n();
  require_spectral_n(n);
  Matrix<T> u(n, n);
  for (int i = 1; i <= n; ++i) {
    T binom = from_int<T>(1);  // binom(i, j), j counting down from i
    for (int j = i; j >= 1; --j) {
      T v = binom * th(n - i) / th(n - j);
      u(i - 1, j - 1) = (i - j) % 2 == 0 ? v : T(-v);
      binom *= j;
      binom /= (i - j + 1);
    }
  }
  return u;
}

/// Entrywise absolute value; the gauge image of e^-L.
template <Field T>
Matrix<T> abs_entries(const Matrix<T>& m) {
  Matrix<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = FieldTraits<T>::abs(m(i, j));
  return out;
}

/// R = U C D^-2 |U|, the gauge image of e^L M e^-L.
template <Field T>
Matrix<T> triangularize(const ThetaTable<T>& th) {
  const int n = th.n();
  const KernelMatrix<T> kernel = build_kernel(th);
  const GaugeDiag<T> gauge = gauge_diag(th);
  const Matrix<T> u = exp_l_gauge(th);
  Matrix<T> uc = u * kernel.c;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) uc(i - 1, j - 1) /= gauge[j];
  return uc * abs_entries(u);
}

/// Closed form of the entries of R on and above the diagonal:
///   R_ij = (-1)^i Theta(n-i) / (j Theta(n-j)) * j! / (theta)_j * binom(n-i, j-i).
/// (In the unit-free gauge W = D^-1 R D this is the familiar w_ij, with
/// binom(n-i, j-i); in particular the last column is not zero above the
/// diagonal.)
template <Field T>
T triangular_entry_closed(int i, int j, const ThetaTable<T>& th) {
  const int n = th.n();
  if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("triangular_entry_closed: need 1 <= i, j <= n");
  if (i > j) return from_int<T>(0);
  T fact = from_int<T>(1);
  for (int k = 2; k <= j; ++k) fact *= k;
  T v = th(n - i) / (th(n - j) * j) * fact / rising_factorial(th.theta(), j) *
        gen_binomial(from_int<T>(n - i), j - i);
  if (i % 2 != 0) v = -v;
  return v;
}

/// Entrywise bound |U| |C| D^-2 |U| on the terms summed into R; floating
/// rounding in R is relative to it.
template <Field T>
Matrix<double> triangularize_magnitude(const ThetaTable<T>& th) {
  const int n = th.n();
  const GaugeDiag<T> gauge = gauge_diag(th);
  Matrix<double> u(n, n);
  const Matrix<T> ue = exp_l_gauge(th);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = std::fabs(to_double(ue(i, j)));
  Matrix<double> uc = u * kernel_magnitude(th);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) uc(i - 1, j - 1) /= to_double(gauge[j]);
  return uc * u;
}

/// Strictly-lower entries are zero: exactly, or within rel_tol of `scale`.
template <Field T>
bool is_upper_triangular(const Matrix<T>& m, const Matrix<double>& scale, double rel_tol) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i && j < m.cols(); ++j)
      if (!scaled_equal<T>(m(i, j), from_int<T>(0), scale(i, j), rel_tol)) return false;
  return true;
}

template <Field T>
bool is_upper_triangular(const Matrix<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i && j < m.cols(); ++j)
      if (sign_of(m(i, j)) != 0) return false;
  return true;
}

}  // namespace ewens
