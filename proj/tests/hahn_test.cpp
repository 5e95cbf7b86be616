#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ewens/hahn.hpp"
#include "ewens/hypergeometric.hpp"
#include "ewens/identities.hpp"
#include "ewens/spectral.hpp"
#include "ewens/spectral_float.hpp"
#include "support.hpp"

using namespace ewens;
using ref::q;

namespace {

ThetaTable<Rational> table(const Rational& theta, int n) {
  return ThetaTable<Rational>(ThetaParam<Rational>(theta), n);
}

// Terminating series summed term by term from Pochhammer symbols.
Rational ref_series(long m, const std::vector<Rational>& upper, const std::vector<Rational>& lower) {
  Rational sum = 0;
  for (long k = 0; k <= m; ++k) {
    Rational t = ref::pochhammer(Rational(-m), k) / ref::factorial(k);
    for (const Rational& u : upper) t *= ref::pochhammer(u, k);
    for (const Rational& l : lower) t /= ref::pochhammer(l, k);
    sum += t;
  }
  return sum;
}

Rational ref_q(int r, int j, const Rational& theta, int n) {
  return ref_series(r, {Rational(1 - j), theta + r + 1}, {Rational(2), Rational(1 - n)});
}

const std::vector<Rational> kOrthoThetas{q(1, 3), q(1, 2), q(1), q(2), q(7, 3)};

}  // namespace

TEST_CASE("terminating series") {
  CHECK(hyper<Rational>(0, {q(3)}, {q(5)}) == 1);
  CHECK(hyper<Rational>(3, {q(1, 2)}, {q(2)}) == q(35, 64));
  CHECK(chu_vandermonde_rhs<Rational>(3, q(1, 2), q(2)) == q(35, 64));
  CHECK(pfq(PfqSpec<Rational>{2, {q(1)}, {q(1)}, q(1, 2)}) == q(1, 4));
  CHECK_THROWS_AS(hyper<Rational>(3, {q(1)}, {q(-1)}), HypergeometricPole);
  CHECK_THROWS_AS(hyper<Rational>(3, {q(1)}, {q(0)}), HypergeometricPole);
  CHECK_NOTHROW(hyper<Rational>(3, {q(1)}, {q(-5)}));
  CHECK_NOTHROW(hyper<Rational>(3, {q(1)}, {q(-1, 2)}));
}

TEST_CASE("Chu-Vandermonde on random parameters") {
  std::mt19937_64 rng(47);
  int tested = 0;
  while (tested < 300) {
    const long m = static_cast<long>(rng() % 26);
    const Rational b = ref::random_rational(rng);
    const Rational c = ref::random_rational(rng);
    // Skip poles of (c)_k.
    if (c.get_den() == 1 && c <= 0 && c > -m) continue;
    const Rational direct = ref_series(m, {b}, {c});
    CHECK(hyper<Rational>(m, {b}, {c}) == direct);
    CHECK(direct == chu_vandermonde_rhs<Rational>(m, b, c));
    ++tested;
  }
}

TEST_CASE("Hahn values") {
  for (int x = 0; x <= 6; ++x) CHECK(hahn_q_general<Rational>(0, q(x), q(1), q(3), 7) == 1);
  CHECK(hahn_q_general<Rational>(1, q(0), q(1), q(3, 2), 7) == 1);
  for (const Rational& theta : kOrthoThetas) {
    for (int n = 2; n <= 12; ++n) {
      const ThetaParam<Rational> p(theta);
      for (int j = 1; j <= n; ++j) {
        CHECK(q_poly<Rational>(1, j, p, n) == ((theta + 2) * j - (2 * n + theta)) / (2 * (1 - n)));
        Rational last = ref::pochhammer(theta + n - j, j - 1) / ref::factorial(j);
        if ((j - 1) % 2) last = -last;
        CHECK(q_poly<Rational>(n - 1, j, p, n) == last);
        for (int r = 0; r < n; ++r) REQUIRE(q_poly<Rational>(r, j, p, n) == ref_q(r, j, theta, n));
      }
    }
  }
}

TEST_CASE("floating Hahn values are the exact values rounded once") {
  const double theta = 1.0 / 3;
  const int n = 25;
  const ThetaParam<double> p(theta);
  for (int r = 0; r < n; ++r)
    for (int j = 1; j <= n; ++j) {
      const double exact = ref_q(r, j, Rational(theta), n).get_d();
      CHECK(q_poly<double>(r, j, p, n) == exact);
    }
}

TEST_CASE("orthogonality of the Hahn basis") {
  for (const Rational& theta : kOrthoThetas) {
    for (int n = 2; n <= 25; ++n) {
      const HahnBasis<Rational> basis(table(theta, n));
      for (int l = 0; l < n; ++l) {
        CHECK(basis.pi_sq(l) > 0);
        for (int r = l + 1; r < n; ++r) REQUIRE(basis.inner_product(l, r) == 0);
      }
      if (theta == 1) CHECK(basis.pi_sq(0) == n * (n + 1) / 2);
      if (theta == 2) CHECK(basis.pi_sq(0) == n * (n + 1) * (n + 2) / 6);
    }
  }
  CHECK(HahnBasis<Rational>(table(q(1), 2)).inner_product(0, 0) == 3);
}

TEST_CASE("Gram-Schmidt on monomials gives the same basis") {
  for (const Rational& theta : {q(1, 3), q(2)}) {
    for (int n : {3, 8, 15}) {
      const HahnBasis<Rational> basis(table(theta, n));
      const int count = std::min(n, 7);
      const auto gs = gram_schmidt_monomials(basis, count);
      for (int r = 0; r < count; ++r) {
        const Rational c = gs[r][0] / basis.q(r, 1);
        CHECK(c != 0);
        for (int j = 1; j <= n; ++j) CHECK(gs[r][j - 1] == c * basis.q(r, j));
      }
    }
  }
}

TEST_CASE("Hahn vectors solve the eigen-equation") {
  for (const Rational& theta : {q(1, 2), q(7, 3)}) {
    for (int n = 2; n <= 20; ++n) {
      const auto th = table(theta, n);
      const HahnBasis<Rational> basis(th);
      const KernelMatrix<Rational> k = build_kernel(th);
      for (int r = 1; r <= n; ++r)
        REQUIRE(rational_eigencheck(k, th, mu_closed(r, ThetaParam<Rational>(theta)),
                                    WeightVector<Rational>(basis.eigen_weights(r))));
    }
  }
}

TEST_CASE("orthonormal eigenbasis and spectral reconstruction") {
  for (const Rational& theta : {q(1, 3), q(1), q(5)}) {
    for (int n = 2; n <= 20; ++n) {
      const auto th = table(theta, n);
      const Eigen::MatrixXd e = eigenbasis(HahnBasis<Rational>(th));
      const Eigen::MatrixXd gram = e * e.transpose();
      CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
      Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(n, n);
      for (int r = 1; r <= n; ++r)
        rebuilt += to_double(mu_closed(r, ThetaParam<Rational>(theta))) * e.row(r - 1).transpose() * e.row(r - 1);
      const Eigen::MatrixXd m = build_m_float(ThetaTable<double>(ThetaParam<double>(theta.get_d()), n));
      CHECK((rebuilt - m).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  const Eigen::VectorXd e1 = eigenbasis_vector(HahnBasis<Rational>(table(q(1), 4)), 1);
  CHECK(e1.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(eigenbasis_vector(HahnBasis<Rational>(table(q(1), 4)), 5), std::out_of_range);
}

TEST_CASE("binomial convolution identity") {
  CHECK(check_binomial_convolution<Rational>(q(3, 7), q(-2, 5), 0).holds);
  CHECK(check_binomial_convolution<Rational>(q(3, 7), q(-2, 5), 0).lhs == 1);
  std::mt19937_64 rng(53);
  for (int k = 0; k < 200; ++k) {
    const long M = static_cast<long>(rng() % 21);
    CHECK(check_binomial_convolution(ref::random_rational(rng), ref::random_rational(rng), M).holds);
  }
  for (const Rational& theta : {q(1, 2), q(2)})
    for (int n = 2; n <= 10; ++n)
      for (int r = 1; r < n; ++r)
        for (int j = 1; j <= n - r; ++j)
          CHECK(check_binomial_convolution(Rational(theta - 1), Rational(n - r - 1), n - r - j).holds);
}

TEST_CASE("alternating binomial identity") {
  CHECK(check_alternating_binomial<Rational>(q(5, 3), 4, 0).holds);
  for (long M = 1; M <= 10; ++M)
    for (long m = 0; m < M; ++m) {
      const auto c = check_alternating_binomial<Rational>(q(9), m, M);
      CHECK(c.holds);
      CHECK(c.rhs == 0);
    }
  for (int n = 2; n <= 12; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) CHECK(check_alternating_binomial<Rational>(Rational(n), j, i).holds);
  std::mt19937_64 rng(59);
  for (int k = 0; k < 200; ++k)
    CHECK(check_alternating_binomial(ref::random_rational(rng), static_cast<long>(rng() % 21),
                                     static_cast<long>(rng() % 21))
              .holds);
}

TEST_CASE("hypergeometric convolution identity") {
  const auto c0 = check_hypergeometric_convolution<Rational>(0, q(2, 3), q(5, 4), {q(1)}, {q(3)});
  CHECK(c0.holds);
  CHECK(c0.lhs == 1);
  for (const Rational& theta : {q(1, 2), q(1), q(2)}) {
    for (int n = 3; n <= 8; ++n)
      for (int r = 0; r < n; ++r)
        for (long M = 0; M <= n - 1; ++M)
          CHECK(check_hypergeometric_convolution<Rational>(M, theta, q(1), {Rational(-r), theta + r + 1},
                                                           {q(2), Rational(1 - n)})
                    .holds);
  }
  std::mt19937_64 rng(61);
  for (int k = 0; k < 60; ++k) {
    const Rational u = ref::random_rational(rng);
    Rational l = ref::random_rational(rng);
    if (l.get_den() == 1) l += q(1, 2);
    CHECK(check_hypergeometric_convolution<Rational>(static_cast<long>(rng() % 9), ref::random_rational(rng),
                                                     ref::random_rational(rng), {u}, {l})
              .holds);
  }
}

TEST_CASE("partial sums of Hahn values") {
  const auto th2 = table(q(1), 2);
  const auto c = check_hahn_partial_sum(1, 1, th2);
  CHECK(c.holds);
  CHECK(c.lhs == q(1, 2));
  for (const Rational& theta : {q(1, 2), q(2), q(7, 3)}) {
    for (int n = 2; n <= 12; ++n) {
      const auto th = table(theta, n);
      for (int M = 0; M < n; ++M) {
        Rational tail = 0;
        for (int k = 0; k <= M; ++k) tail += th(k);
        CHECK(hahn_partial_sum(0, M, th) == tail);
        for (int r = 0; r < n; ++r) CHECK(check_hahn_partial_sum(r, M, th).holds);
      }
    }
  }
}

TEST_CASE("kernel applied to Hahn vectors") {
  for (const Rational& theta : {q(1, 2), q(1), q(2)}) {
    for (int n = 2; n <= 15; ++n) {
      const auto th = table(theta, n);
      const HahnBasis<Rational> basis(th);
      const KernelMatrix<Rational> k = build_kernel(th);
      const Eigen::MatrixXd e = eigenbasis(basis);
      const Eigen::MatrixXd m = build_m_float(ThetaTable<double>(ThetaParam<double>(theta.get_d()), n));
      std::vector<double> pi;
      for (int r = 0; r < n; ++r) pi.push_back(std::sqrt(basis.pi_sq(r).get_d()));
      for (int r = 1; r <= n; ++r) {
        const Eigen::VectorXd direct = kernel_hahn_row_direct(e, pi, m, r);
        CHECK(kernel_hahn_row(r, n, th) ==
              doctest::Approx(-std::sqrt(double(n)) / (r * (r + theta.get_d() - 1))).epsilon(1e-12));
        CHECK(kernel_row_factor<Rational>(r, q(0), ThetaParam<Rational>(theta), n) == 0);
        for (int i = 1; i <= n; ++i) {
          CHECK(check_kernel_hahn_row_gauge(r, i, basis, k, th).holds);
          const double y = kernel_hahn_row(r, i, th);
          CHECK(std::fabs(y - direct(i - 1)) <= 1e-10 * std::max(1.0, std::fabs(y)));
        }
      }
    }
  }
}

TEST_CASE("relation between the two Hahn families") {
  for (int n = 1; n <= 12; ++n) {
    const auto c = check_hahn_phi_relation<Rational>(1, 1, ThetaParam<Rational>(q(3, 5)), n);
    CHECK(c.holds);
    CHECK(c.lhs == 1);
  }
  for (const Rational& theta : {q(1, 2), q(1), q(2)})
    for (int n = 1; n <= 12; ++n)
      for (int i = 1; i <= n; ++i)
        for (int r = 1; r <= n; ++r) REQUIRE(check_hahn_phi_relation<Rational>(i, r, ThetaParam<Rational>(theta), n).holds);
}

TEST_CASE("leading coefficients") {
  for (const Rational& theta : {q(1, 3), q(1), q(7, 3)}) {
    for (int n = 3; n <= 12; ++n) {
      const ThetaParam<Rational> p(theta);
      // Degree-one Hahn polynomial q_1, read off its closed form.
      const auto r2 = check_leading_coefficients<Rational>(2, p, n);
      CHECK(r2.q_extracted == (theta + 2) / (2 * (1 - n)));
      for (int r = 1; r < n; ++r) {
        const auto rep = check_leading_coefficients<Rational>(r, p, n);
        CHECK(rep.holds);
        Rational c = ref::factorial(r) * (r + theta - 1) / (ref::pochhammer(theta, r) * n);
        if ((r - 1) % 2) c = -c;
        CHECK(rep.ratio_extracted == c);
      }
    }
  }
  CHECK(check_leading_coefficients<Rational>(2, ThetaParam<Rational>(q(1)), 4).holds);
}

TEST_CASE("floating identity checks scale with the summands") {
  // Heavy cancellation: summands near 1e10 summing to a small binomial.
  const auto c = check_alternating_binomial<double>(1.0 / 3, 2, 19);
  CHECK(c.scale > 1e3);
  CHECK(c.holds);
  const auto bad = make_check<double>(1.0, 1.0 + 1e-6, 1.0);
  CHECK_FALSE(bad.holds);
}
