#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ewens/hahn.hpp"
#include "ewens/spectral.hpp"
#include "ewens/spectral_float.hpp"
#include "support.hpp"

using namespace ewens;
using ref::q;

namespace {

ThetaTable<Rational> table(const Rational& theta, int n) {
  return ThetaTable<Rational>(ThetaParam<Rational>(theta), n);
}

ThetaTable<double> ftable(double theta, int n) { return ThetaTable<double>(ThetaParam<double>(theta), n); }

const std::vector<Rational> kThetaGrid{q(1, 3), q(1, 2), q(1), q(2), q(7, 3), q(5)};

// Kernel straight from its definition with test-side Theta.
Rational ref_kernel(const Rational& theta, int n, int i, int j) {
  return ref::theta_of(theta, n - i - j) -
         ref::theta_of(theta, n - i) * ref::theta_of(theta, n - j) / ref::theta_of(theta, n);
}

}  // namespace

TEST_CASE("kernel entries") {
  const KernelMatrix<Rational> k1 = build_kernel(table(q(1), 2));
  CHECK(k1.c(0, 0) == 0);
  CHECK(k1.c(0, 1) == -1);
  CHECK(k1.c(1, 0) == -1);
  CHECK(k1.c(1, 1) == -1);
  const KernelMatrix<Rational> k2 = build_kernel(table(q(2), 2));
  CHECK(k2.c(0, 0) == q(-1, 3));
  CHECK(k2.c(0, 1) == q(-2, 3));
  CHECK(k2.c(1, 1) == q(-1, 3));

  for (const Rational& theta : kThetaGrid) {
    for (int n = 2; n <= 12; ++n) {
      const KernelMatrix<Rational> k = build_kernel(table(theta, n));
      CHECK(k.c.is_symmetric());
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) REQUIRE(k.c(i - 1, j - 1) == ref_kernel(theta, n, i, j));
    }
  }
}

TEST_CASE("diagonal kernel entries past the middle") {
  const Rational theta = q(7, 3);
  const int n = 9;
  const auto th = table(theta, n);
  const KernelMatrix<Rational> k = build_kernel(th);
  for (int i = 5; i <= n; ++i) CHECK(k.c(i - 1, i - 1) == -th(n - i) * th(n - i) / th(n));
}

TEST_CASE("float matrix and its gauge") {
  const Eigen::MatrixXd m = build_m_float(ftable(1.0, 2));
  CHECK(m(0, 0) == doctest::Approx(0.0));
  CHECK(m(0, 1) == doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK(m(1, 1) == doctest::Approx(-0.5));
  for (const Rational& theta : kThetaGrid) {
    for (int n : {2, 5, 17, 30}) {
      const auto th = table(theta, n);
      const double diff = max_rel_diff(build_m_float(ftable(theta.get_d(), n)),
                                       ungauge_symmetric(to_eigen(build_kernel(th).c), to_doubles(gauge_diag(th))));
      CHECK(diff <= 1e-12);
    }
  }
}

TEST_CASE("closed-form eigenvalues and the sharp constant") {
  for (int r = 1; r <= 8; ++r) CHECK(mu_closed(r, ThetaParam<Rational>(q(1))) == q(r % 2 ? -1 : 1, r));
  CHECK(mu_closed(2, ThetaParam<Rational>(q(2))) == q(1, 6));
  for (const Rational& theta : kThetaGrid) CHECK(mu_closed(1, ThetaParam<Rational>(theta)) == -1 / theta);
  CHECK(tau_closed(ThetaParam<Rational>(q(1))) == q(3, 2));
  CHECK(tau_closed(ThetaParam<Rational>(q(2))) == q(4, 3));

  // Decreasing toward 1 as theta grows.
  Rational prev = 2;
  for (long t = 1; t <= 200; t += 7) {
    const Rational tau = tau_closed(ThetaParam<Rational>(q(t, 3)));
    CHECK(tau < prev);
    CHECK(tau > 1);
    prev = tau;
  }
}

TEST_CASE("spectrum shape") {
  for (const Rational& theta : kThetaGrid) {
    const ThetaParam<Rational> p(theta);
    Rational best = mu_closed(1, p);
    int arg = 1;
    for (int r = 1; r <= 30; ++r) {
      const Rational mu = mu_closed(r, p);
      CHECK(sgn(mu) == (r % 2 ? -1 : 1));
      if (theta >= 1 && r > 1) CHECK(abs(mu) < abs(mu_closed(r - 1, p)));
      if (mu > best) best = mu, arg = r;
    }
    CHECK(arg == 2);
    CHECK(1 + theta * best == tau_closed(p));
  }
}

TEST_CASE("extremal weights attain the constant") {
  const auto e1 = extremal_weights(2, ThetaParam<Rational>(q(1)));
  CHECK(e1[1] == -2);
  CHECK(e1[2] == 2);
  const auto e2 = extremal_weights(2, ThetaParam<Rational>(q(2)));
  CHECK(e2[1] == -2);
  CHECK(e2[2] == 4);
  CHECK(rayleigh_ratio(table(q(1), 2), WeightVector<Rational>({q(-2), q(2)})) == q(3, 2));
  for (const Rational& theta : kThetaGrid)
    for (int n = 2; n <= 30; ++n)
      CHECK(rayleigh_ratio(table(theta, n), extremal_weights(n, ThetaParam<Rational>(theta))) ==
            tau_closed(ThetaParam<Rational>(theta)));
}

TEST_CASE("unit first weight") {
  for (const Rational& theta : kThetaGrid) {
    for (int n = 2; n <= 10; ++n) {
      const auto th = table(theta, n);
      const WeightVector<Rational> a = unit_weight<Rational>(n, 1);
      const Rational ratio = rayleigh_ratio(th, a);
      CHECK(ratio == 1 + theta * delta_form(th, a) / b_form(th, a));
      CHECK(ratio <= tau_closed(ThetaParam<Rational>(theta)));
    }
  }
}

TEST_CASE("universal bound on random weights") {
  std::mt19937_64 rng(41);
  for (const Rational& theta : {q(1, 3), q(1), q(7, 3)}) {
    for (int n : {2, 3, 7, 15}) {
      const auto th = table(theta, n);
      const Rational tau = tau_closed(ThetaParam<Rational>(theta));
      int violations = 0;
      for (int k = 0; k < 1000; ++k) {
        std::vector<Rational> a = ref::random_vector(n, rng);
        if (WeightVector<Rational>(a).is_zero()) a[0] = 1;
        if (rayleigh_ratio(th, WeightVector<Rational>(a)) > tau) ++violations;
      }
      CHECK(violations == 0);
    }
  }
}

TEST_CASE("eigen-equation in weight coordinates") {
  for (const Rational& theta : kThetaGrid) {
    for (int n = 2; n <= 12; ++n) {
      const auto th = table(theta, n);
      const KernelMatrix<Rational> k = build_kernel(th);
      const ThetaParam<Rational> p(theta);
      CHECK(rational_eigencheck(k, th, mu_closed(2, p), extremal_weights(n, p)));
      std::vector<Rational> lin;
      for (int j = 1; j <= n; ++j) lin.push_back(j);
      CHECK(rational_eigencheck(k, th, mu_closed(1, p), WeightVector<Rational>(lin)));
      CHECK_FALSE(rational_eigencheck(k, th, mu_closed(2, p), WeightVector<Rational>(lin)));
      // Scale invariance.
      std::vector<Rational> scaled;
      for (int j = 1; j <= n; ++j) scaled.push_back(q(-7, 5) * j);
      CHECK(rational_eigencheck(k, th, mu_closed(1, p), WeightVector<Rational>(scaled)));
      CHECK_FALSE(rational_eigencheck(k, th, mu_closed(1, p), WeightVector<Rational>(std::vector<Rational>(n, 0))));
    }
  }
}

TEST_CASE("eigenvalues are roots of the characteristic polynomial") {
  // D^-2 C is similar to M and rational; det(D^-2 C - mu I) = 0 exactly.
  for (const Rational& theta : kThetaGrid) {
    for (int n = 2; n <= 8; ++n) {
      std::vector<std::vector<Rational>> base(n, std::vector<Rational>(n));
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          base[i - 1][j - 1] = ref_kernel(theta, n, i, j) / (ref::theta_of(theta, n - i) * i);
      for (int r = 1; r <= n; ++r) {
        auto m = base;
        const Rational mu = mu_closed(r, ThetaParam<Rational>(theta));
        for (int i = 0; i < n; ++i) m[i][i] -= mu;
        CHECK(ref::determinant(m) == 0);
      }
      // A value that is not an eigenvalue.
      auto m = base;
      for (int i = 0; i < n; ++i) m[i][i] -= 7;
      CHECK(ref::determinant(m) != 0);
    }
  }
}

TEST_CASE("subdiagonal generator") {
  const Eigen::MatrixXd l = build_l_float(ftable(1.0, 2));
  CHECK(l(1, 0) == doctest::Approx(-std::sqrt(2.0)));
  for (double theta : {1.0 / 3, 2.0, 5.0}) {
    for (int n = 2; n <= 9; ++n) {
      const Eigen::MatrixXd ln = build_l_float(ftable(theta, n));
      CHECK(ln(n - 1, n - 2) == doctest::Approx(-std::sqrt(n * (n - 1) / theta)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j + 1) CHECK(ln(i, j) == 0.0);
    }
  }
}

TEST_CASE("exponential of the generator") {
  const Matrix<Rational> u = exp_l_gauge(table(q(1), 2));
  CHECK(u(0, 0) == 1);
  CHECK(u(0, 1) == 0);
  CHECK(u(1, 0) == -2);
  CHECK(u(1, 1) == 1);
  for (const Rational& theta : kThetaGrid) {
    for (int n = 2; n <= 14; ++n) {
      const auto th = table(theta, n);
      const Matrix<Rational> un = exp_l_gauge(th);
      CHECK(nilpotent_exp(build_l_gauge(th)) == un);
      CHECK(un * abs_entries(un) == Matrix<Rational>::identity(n));
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= i; ++j) {
          Rational expect = ref::factorial(i) / (ref::factorial(j) * ref::factorial(i - j)) *
                            ref::theta_of(theta, n - i) / ref::theta_of(theta, n - j);
          if ((i - j) % 2) expect = -expect;
          REQUIRE(un(i - 1, j - 1) == expect);
        }
    }
  }
  for (int n : {3, 10, 25}) {
    const ThetaTable<double> thf = ftable(7.0 / 3, n);
    const auto th = table(q(7, 3), n);
    const Eigen::MatrixXd l = build_l_float(thf);
    const std::vector<double> dsq = to_doubles(gauge_diag(th));
    CHECK(max_rel_diff(nilpotent_exp_float(l), ungauge(to_eigen(exp_l_gauge(th)), dsq)) <= 1e-12);
  }
}

TEST_CASE("triangularization") {
  const Matrix<Rational> r2 = triangularize(table(q(1), 2));
  CHECK(r2(0, 0) == -1);
  CHECK(r2(0, 1) == q(-1, 2));
  CHECK(r2(1, 0) == 0);
  CHECK(r2(1, 1) == q(1, 2));
  const Matrix<Rational> r5 = triangularize(table(q(1), 5));
  for (int j = 1; j <= 5; ++j) CHECK(r5(j - 1, j - 1) == q(j % 2 ? -1 : 1, j));

  for (const Rational& theta : kThetaGrid) {
    for (int n = 2; n <= 16; ++n) {
      const auto th = table(theta, n);
      const Matrix<Rational> r = triangularize(th);
      CHECK(is_upper_triangular(r));
      for (int i = 1; i <= n; ++i) {
        // Last row vanishes off the diagonal.
        if (i < n) CHECK(r(n - 1, i - 1) == 0);
        for (int j = i; j <= n; ++j) {
          Rational expect = ref::theta_of(theta, n - i) / (ref::theta_of(theta, n - j) * j) *
                            ref::factorial(j) / ref::pochhammer(theta, j) * ref::factorial(n - i) /
                            (ref::factorial(j - i) * ref::factorial(n - j));
          if (i % 2) expect = -expect;
          REQUIRE(r(i - 1, j - 1) == expect);
          REQUIRE(triangular_entry_closed(i, j, th) == expect);
        }
      }
    }
  }
}

TEST_CASE("float similarity matches the gauge image") {
  for (int n : {2, 6, 20}) {
    const auto th = table(q(1, 2), n);
    const ThetaTable<double> thf = ftable(0.5, n);
    const Eigen::MatrixXd l = build_l_float(thf);
    const Eigen::MatrixXd w = nilpotent_exp_float(l) * build_m_float(thf) * nilpotent_exp_float(-l);
    const Eigen::MatrixXd wg = ungauge(to_eigen(triangularize(th)), to_doubles(gauge_diag(th)));
    const Matrix<double> scale = triangularize_magnitude(th);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(std::fabs(w(i, j) - wg(i, j)) <= 1e-12 * scale(i, j));
  }
}

TEST_CASE("numerical spectrum") {
  const std::vector<double> s2 = float_spectrum(ftable(1.0, 2));
  REQUIRE(s2.size() == 2);
  CHECK(s2[0] == doctest::Approx(-1.0));
  CHECK(s2[1] == doctest::Approx(0.5));
  const std::vector<double> s30 = float_spectrum(ftable(1.0, 30));
  CHECK(std::fabs(s30.back() - 0.5) <= 1e-8);

  for (double theta : {1.0 / 3, 0.5, 1.0, 2.0, 7.0 / 3, 5.0}) {
    for (int n : {2, 5, 13, 30, 50}) {
      const ThetaTable<double> thf = ftable(theta, n);
      double worst = 0;
      for (const SpectrumRow& row : match_spectrum(thf)) worst = std::max(worst, row.abs_err);
      CHECK(worst <= 1e-8);
      const std::vector<double> s = float_spectrum(thf);
      const Eigen::MatrixXd m = build_m_float(thf);
      double sum = 0;
      for (double v : s) sum += v;
      CHECK(std::fabs(sum - m.trace()) <= 1e-10);
    }
  }
}

TEST_CASE("spectral routines reject n = 1") {
  CHECK_THROWS_AS(build_kernel(table(q(1), 1)), SpectralDomainError);
  CHECK_THROWS_AS(extremal_weights(1, ThetaParam<Rational>(q(1))), SpectralDomainError);
  CHECK_THROWS_AS(rayleigh_ratio(table(q(1), 3), WeightVector<Rational>(std::vector<Rational>(3, 0))),
                  std::invalid_argument);
}
