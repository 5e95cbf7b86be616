#pragma once

// Scalar fields used throughout the library.
//
// Every formula is a template over a field type T. Two fields are supported:
// Rational (GMP mpq_class, exact) and double (binary floating point). The
// runtime-tagged Scalar wraps either one at the I/O boundary, where the mode
// is chosen by the user.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ewens {

using Rational = mpq_class;

enum class Mode { exact, floating };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Raised when exact and floating values meet in one computation.
class ModeMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when vectors or matrices of incompatible sizes are combined.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr Mode mode = Mode::exact;
  static Rational from_int(long v) { return Rational(v); }
  static Rational ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  static double to_double(const Rational& v) { return v.get_d(); }
  static int sign(const Rational& v) { return sgn(v); }
  static Rational abs(const Rational& v) { return ::abs(v); }
};

template <>
struct FieldTraits<double> {
  static constexpr Mode mode = Mode::floating;
  static double from_int(long v) { return static_cast<double>(v); }
  static double ratio(long p, long q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static double to_double(double v) { return v; }
  static int sign(double v) { return (v > 0) - (v < 0); }
  static double abs(double v) { return std::fabs(v); }
};

template <class T>
concept Field = requires { FieldTraits<T>::mode; };

template <Field T>
inline constexpr bool is_exact_v = FieldTraits<T>::mode == Mode::exact;

template <Field T>
T from_int(long v) {
  return FieldTraits<T>::from_int(v);
}

template <Field T>
T ratio(long p, long q) {
  return FieldTraits<T>::ratio(p, q);
}

template <Field T>
double to_double(const T& v) {
  return FieldTraits<T>::to_double(v);
}

template <Field T>
int sign_of(const T& v) {
  return FieldTraits<T>::sign(v);
}

/// Equality in the field: exact for rationals, relative tolerance for doubles.
template <Field T>
bool field_equal(const T& a, const T& b, double rel_tol = 1e-10) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= rel_tol * scale;
  }
}

/// Like field_equal, but the floating tolerance is relative to
/// max(|a|, |b|, scale), where scale bounds the magnitudes that cancelled
/// while computing a or b.
template <Field T>
bool scaled_equal(const T& a, const T& b, double scale, double rel_tol) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double bound = std::max({std::fabs(a), std::fabs(b), scale});
    return std::fabs(a - b) <= rel_tol * bound;
  }
}

/// Canonical text: "p/q" in lowest terms with q > 0 (just "p" when q = 1),
/// or the shortest round-tripping decimal for doubles.
std::string render(const Rational& v);
std::string render(double v);

/// Parses "p/q", an integer, or a decimal literal ("0.25", "-3e-2") exactly.
Rational parse_rational(std::string_view text);
/// Parses a decimal literal or "p/q" into a double.
double parse_double(std::string_view text);

template <Field T>
T parse_field(std::string_view text) {
  if constexpr (is_exact_v<T>) {
    return parse_rational(text);
  } else {
    return parse_double(text);
  }
}

/// A value tagged with its arithmetic mode. Arithmetic between different
/// modes throws ModeMismatch.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational v) : value_(std::move(v)) {}
  Scalar(double v) : value_(v) {}

  static Scalar parse(std::string_view text, Mode mode);

  Mode mode() const {
    return std::holds_alternative<Rational>(value_) ? Mode::exact
                                                    : Mode::floating;
  }
  const Rational& exact() const;
  double floating() const;
  double approx() const;
  std::string str() const;

  template <Field T>
  T as() const {
    if constexpr (is_exact_v<T>) {
      return exact();
    } else {
      return floating();
    }
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator<(const Scalar& a, const Scalar& b);

 private:
  std::variant<Rational, double> value_;
};

/// Error for a non-positive Ewens parameter.
class InvalidTheta : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The Ewens parameter; always strictly positive.
template <Field T>
class ThetaParam {
 public:
  explicit ThetaParam(T value) : value_(std::move(value)) {
    if (!(sign_of(value_) > 0)) {
      throw InvalidTheta("theta must be strictly positive, got " +
                         render(value_));
    }
  }
  const T& value() const { return value_; }
  operator const T&() const { return value_; }

 private:
  T value_;
};

/// (x)_m = x (x+1) ... (x+m-1); 1 when m = 0.
template <Field T>
T rising_factorial(const T& x, long m) {
  if (m < 0) throw std::invalid_argument("rising_factorial: m < 0");
  T out = from_int<T>(1);
  for (long k = 0; k < m; ++k) out *= T(x + k);
  return out;
}

/// a (a-1) ... (a-k+1) / k! for real a; 1 when k = 0 and 0 when k < 0.
template <Field T>
T gen_binomial(const T& a, long k) {
  if (k < 0) return from_int<T>(0);
  T out = from_int<T>(1);
  for (long i = 0; i < k; ++i) {
    out *= T(a - i);
    out /= from_int<T>(i + 1);
  }
  return out;
}

/// Theta(m) = (theta)_m / m! for one theta value; zero for negative m.
template <Field T>
T theta_coeff(const ThetaParam<T>& theta, long m) {
  if (m < 0) return from_int<T>(0);
  T out = from_int<T>(1);
  for (long k = 1; k <= m; ++k) {
    out *= T(theta.value() + (k - 1));
    out /= from_int<T>(k);
  }
  return out;
}

/// Memoized Theta(0..n) for a fixed (theta, n). Negative arguments read as
/// zero; arguments above n are an error.
template <Field T>
class ThetaTable {
 public:
  ThetaTable(ThetaParam<T> theta, int n) : theta_(std::move(theta)), n_(n) {
    if (n < 1) throw std::invalid_argument("ThetaTable: n must be >= 1");
    values_.reserve(static_cast<std::size_t>(n) + 1);
    values_.push_back(from_int<T>(1));
    for (int m = 1; m <= n; ++m) {
      T next = values_.back() * T(theta_.value() + (m - 1));
      next /= from_int<T>(m);
      values_.push_back(std::move(next));
    }
  }

  int n() const { return n_; }
  const T& theta() const { return theta_.value(); }
  const ThetaParam<T>& param() const { return theta_; }

  const T& operator()(long m) const {
    if (m < 0) return zero_;
    if (m > n_) throw std::out_of_range("ThetaTable: argument above n");
    return values_[static_cast<std::size_t>(m)];
  }

 private:
  ThetaParam<T> theta_;
  int n_;
  std::vector<T> values_;
  T zero_ = from_int<T>(0);
};

}  // namespace ewens
