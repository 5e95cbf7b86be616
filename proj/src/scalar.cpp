#include "ewens/scalar.hpp"

#include <charconv>
#include <cctype>
#include <system_error>

namespace ewens {

std::string_view to_string(Mode mode) {
  return mode == Mode::exact ? "exact" : "float";
}

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::exact;
  if (text == "float") return Mode::floating;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected exact or float)");
}

std::string render(const Rational& v) { return v.get_str(); }

std::string render(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw std::invalid_argument("not a numeric literal: '" + std::string(text) +
                              "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Decimal literal [+-]digits[.digits][e[+-]digits] as an exact rational.
Rational parse_decimal_exact(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto res = std::from_chars(exp_text.data(),
                               exp_text.data() + exp_text.size(), exponent);
    if (res.ec != std::errc{} || res.ptr != exp_text.data() + exp_text.size())
      bad_literal(original);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)) || (whole.empty() && frac.empty()))
      bad_literal(original);
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) bad_literal(original);
    digits = std::string(s);
  }
  mpz_class num(digits, 10);
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10,
                static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational out = exponent >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) bad_literal(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view p = trim(s.substr(0, slash));
    std::string_view q = trim(s.substr(slash + 1));
    std::string_view p_digits = p;
    if (!p_digits.empty() && (p_digits.front() == '-' || p_digits.front() == '+'))
      p_digits.remove_prefix(1);
    if (!all_digits(p_digits) || !all_digits(q)) bad_literal(text);
    mpz_class den(std::string(q), 10);
    if (den == 0) throw std::invalid_argument("zero denominator in '" +
                                              std::string(text) + "'");
    mpz_class num(std::string(p_digits), 10);
    if (p.front() == '-') num = -num;
    Rational out(num, den);
    out.canonicalize();
    return out;
  }
  return parse_decimal_exact(s, text);
}

double parse_double(std::string_view text) {
  std::string_view s = trim(text);
  if (s.find('/') != std::string_view::npos) return parse_rational(s).get_d();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double out = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    bad_literal(text);
  return out;
}

Scalar Scalar::parse(std::string_view text, Mode mode) {
  if (mode == Mode::exact) return Scalar(parse_rational(text));
  return Scalar(parse_double(text));
}

const Rational& Scalar::exact() const {
  if (const auto* v = std::get_if<Rational>(&value_)) return *v;
  throw ModeMismatch("exact value requested from a float scalar");
}

double Scalar::floating() const {
  if (const auto* v = std::get_if<double>(&value_)) return *v;
  throw ModeMismatch("float value requested from an exact scalar");
}

double Scalar::approx() const {
  if (const auto* v = std::get_if<double>(&value_)) return *v;
  return std::get<Rational>(value_).get_d();
}

std::string Scalar::str() const {
  return std::visit([](const auto& v) { return render(v); }, value_);
}

namespace {

template <class Op>
Scalar combine(const Scalar& a, const Scalar& b, Op op) {
  if (a.mode() != b.mode())
    throw ModeMismatch("arithmetic between exact and float scalars");
  if (a.mode() == Mode::exact) return Scalar(Rational(op(a.exact(), b.exact())));
  return Scalar(static_cast<double>(op(a.floating(), b.floating())));
}

void require_same_mode(const Scalar& a, const Scalar& b) {
  if (a.mode() != b.mode())
    throw ModeMismatch("comparison between exact and float scalars");
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.mode() == Mode::exact && b.mode() == a.mode() && b.exact() == 0)
    throw std::domain_error("division by exact zero");
  return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
}
bool operator==(const Scalar& a, const Scalar& b) {
  require_same_mode(a, b);
  if (a.mode() == Mode::exact) return a.exact() == b.exact();
  return a.floating() == b.floating();
}
bool operator<(const Scalar& a, const Scalar& b) {
  require_same_mode(a, b);
  if (a.mode() == Mode::exact) return a.exact() < b.exact();
  return a.floating() < b.floating();
}

}  // namespace ewens
