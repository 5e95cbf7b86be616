#include "ewens/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ewens/esf.hpp"
#include "ewens/hahn.hpp"
#include "ewens/identities.hpp"
#include "ewens/oracle.hpp"
#include "ewens/spectral.hpp"
#include "ewens/spectral_float.hpp"

namespace ewens {

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::spectral: return "spectral";
    case Suite::hahn: return "hahn";
    case Suite::identities: return "identities";
    case Suite::oracle: return "oracle";
    case Suite::remark: return "remark";
  }
  return "?";
}

Suite parse_suite(std::string_view text) {
  for (Suite s : {Suite::spectral, Suite::hahn, Suite::identities, Suite::oracle, Suite::remark})
    if (to_string(s) == text) return s;
  throw std::invalid_argument("unknown suite '" + std::string(text) + "'");
}

std::vector<Suite> parse_suites(std::string_view text) {
  std::vector<Suite> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    if (!item.empty()) {
      const Suite s = parse_suite(item);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty suite list");
  return out;
}

nlohmann::json to_json(const CheckResult& r) {
  return {{"suite", r.suite}, {"check", r.check}, {"n", r.n},
          {"theta", r.theta}, {"holds", r.holds}, {"detail", r.detail}};
}

nlohmann::json to_json(const IdentityRecord& r) {
  return {{"identity", r.identity}, {"params", r.params}, {"holds", r.holds},
          {"lhs", r.lhs},           {"rhs", r.rhs}};
}

std::vector<Rational> random_rational_vector(int n, Rng& rng) {
  std::vector<Rational> out;
  bool nonzero = false;
  while (!nonzero) {
    out.clear();
    for (int j = 0; j < n; ++j) {
      const long p = static_cast<long>(uniform_index(rng, 41)) - 20;
      const long q = static_cast<long>(uniform_index(rng, 12)) + 1;
      out.push_back(FieldTraits<Rational>::ratio(p, q));
      nonzero = nonzero || p != 0;
    }
  }
  return out;
}

namespace {

template <Field T>
ThetaTable<double> float_table(const ThetaParam<T>& theta, int n) {
  return ThetaTable<double>(ThetaParam<double>(to_double(theta.value())), n);
}

// Accumulates pass/fail for one named check.
struct Tally {
  long evaluated = 0;
  long failed = 0;
  nlohmann::json first_failure;

  void add(bool ok, nlohmann::json where = {}) {
    ++evaluated;
    if (!ok && failed++ == 0) first_failure = std::move(where);
  }
  bool holds() const { return failed == 0; }
  nlohmann::json detail() const {
    nlohmann::json d{{"evaluated", evaluated}, {"failed", failed}};
    if (failed) d["first_failure"] = first_failure;
    return d;
  }
};

template <Field T>
class CellRunner {
 public:
  CellRunner(Suite suite, int n, const ThetaParam<T>& theta)
      : suite_(std::string(to_string(suite))), n_(n), theta_text_(render(theta.value())) {}

  void add(std::string check, bool holds, nlohmann::json detail = nlohmann::json::object()) {
    out_.push_back({suite_, std::move(check), n_, theta_text_, holds, std::move(detail)});
  }
  void add(std::string check, const Tally& t) { add(std::move(check), t.holds(), t.detail()); }

  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string suite_;
  int n_;
  std::string theta_text_;
  std::vector<CheckResult> out_;
};

template <Field T>
std::vector<CheckResult> spectral_suite(int n, const ThetaParam<T>& theta, const VerifyOptions& opts) {
  require_spectral_n(n);
  CellRunner<T> run(Suite::spectral, n, theta);
  const ThetaTable<T> th(theta, n);
  const ThetaTable<double> thf = float_table(theta, n);
  const KernelMatrix<T> kernel = build_kernel(th);
  const GaugeDiag<T> gauge = gauge_diag(th);
  const std::vector<double> dsq = to_doubles(gauge);

  run.add("kernel_symmetric", kernel.c.is_symmetric());

  {
    const double diff = max_rel_diff(build_m_float(thf), ungauge_symmetric(to_eigen(kernel.c), dsq));
    run.add("gauge_identity", diff <= 1e-12, {{"max_rel_diff", diff}, {"tolerance", 1e-12}});
  }

  const Matrix<T> r = triangularize(th);
  const Matrix<double> r_mag = triangularize_magnitude(th);
  run.add("triangular", is_upper_triangular(r, r_mag, 1e-10));
  {
    Tally t;
    for (int j = 1; j <= n; ++j)
      t.add(scaled_equal<T>(r(j - 1, j - 1), mu_closed(j, theta), r_mag(j - 1, j - 1), 1e-10),
            {{"j", j}, {"r_jj", render(r(j - 1, j - 1))}});
    run.add("diagonal_equals_mu", t);
  }
  {
    Tally t;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        t.add(scaled_equal<T>(r(i - 1, j - 1), triangular_entry_closed(i, j, th), r_mag(i - 1, j - 1), 1e-10),
              {{"i", i}, {"j", j}});
    run.add("upper_entries_closed_form", t);
  }

  const T tau = tau_closed(theta);
  {
    const T ratio = rayleigh_ratio(th, extremal_weights(n, theta));
    run.add("sharp_constant", field_equal<T>(ratio, tau, 1e-9),
            {{"rayleigh_extremal", render(ratio)}, {"tau", render(tau)}});
  }
  {
    T best = mu_closed(1, theta);
    int arg = 1;
    for (int k = 2; k <= n; ++k) {
      const T mu = mu_closed(k, theta);
      if (mu > best) best = mu, arg = k;
    }
    const T via_spectrum = 1 + theta.value() * best;
    run.add("max_eigenvalue_gives_tau", arg == 2 && field_equal<T>(via_spectrum, tau, 1e-12),
            {{"argmax_r", arg}, {"one_plus_theta_mu_max", render(via_spectrum)}});
  }
  {
    const HahnBasis<T> basis(th);
    Tally t;
    for (int k = 1; k <= n; ++k) {
      const WeightVector<T> a(basis.eigen_weights(k));
      t.add(rational_eigencheck(kernel, th, mu_closed(k, theta), a), {{"r", k}});
    }
    run.add("eigenvectors_from_hahn", t);
  }
  {
    const Matrix<T> g = build_l_gauge(th);
    const Matrix<T> u = exp_l_gauge(th);
    bool exact_ok;
    if constexpr (is_exact_v<T>) {
      exact_ok = nilpotent_exp(g) == u && u * abs_entries(u) == Matrix<T>::identity(n);
    } else {
      exact_ok = max_rel_diff(to_eigen(nilpotent_exp(g)), to_eigen(u)) <= 1e-10;
    }
    run.add("exp_series_closed_form", exact_ok);

    const Eigen::MatrixXd l = build_l_float(thf);
    const double l_diff = max_rel_diff(l, ungauge(to_eigen(g), dsq));
    const Eigen::MatrixXd v = nilpotent_exp_float(l);
    const double v_diff = max_rel_diff(v, ungauge(to_eigen(u), dsq));
    const double inv_diff = max_rel_diff(nilpotent_exp_float(-l), ungauge(to_eigen(abs_entries(u)), dsq));
    run.add("float_exp_gauge", std::max({l_diff, v_diff, inv_diff}) <= 1e-12,
            {{"l_diff", l_diff}, {"v_diff", v_diff}, {"v_inverse_diff", inv_diff}});

    // Error relative to |V| |M| |V^-1|, the entrywise scale of the rounding
    // error in the product; V has binomial-sized entries.
    const Eigen::MatrixXd m_float = build_m_float(thf);
    const Eigen::MatrixXd v_inv = nilpotent_exp_float(-l);
    const Eigen::MatrixXd w = v * m_float * v_inv;
    const Eigen::MatrixXd scale = v.cwiseAbs() * m_float.cwiseAbs() * v_inv.cwiseAbs();
    const Eigen::MatrixXd w_gauge = ungauge(to_eigen(r), dsq);
    double w_diff = 0;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        w_diff = std::max(w_diff, std::fabs(w(i, j) - w_gauge(i, j)) / std::max(1e-300, scale(i, j)));
    run.add("float_similarity", w_diff <= 1e-12, {{"max_scaled_diff", w_diff}});
  }
  {
    double worst = 0;
    for (const SpectrumRow& row : match_spectrum(thf)) worst = std::max(worst, row.abs_err);
    run.add("float_spectrum", worst <= 1e-8, {{"max_abs_err", worst}, {"tolerance", 1e-8}});
  }
  {
    Rng rng = make_stream_rng(opts.seed, static_cast<std::uint64_t>(n) * 1000003u);
    Tally t;
    for (int k = 0; k < opts.random_vectors; ++k) {
      const WeightVector<T> a(convert_vector<T>(random_rational_vector(n, rng)));
      const T bound = tau * th.theta() * b_form(th, a);
      const T var = variance_statistic(th, a);
      bool ok;
      if constexpr (is_exact_v<T>) ok = var <= bound; else ok = var <= bound * (1 + 1e-12);
      t.add(ok, {{"sample", k}});
    }
    run.add("universal_bound_random", t);
  }
  return run.take();
}

template <Field T>
std::vector<CheckResult> hahn_suite(int n, const ThetaParam<T>& theta, const VerifyOptions&) {
  require_spectral_n(n);
  CellRunner<T> run(Suite::hahn, n, theta);
  const ThetaTable<T> th(theta, n);
  const HahnBasis<T> basis(th);

  {
    Tally t;
    for (int l = 0; l < n; ++l)
      for (int r = l + 1; r < n; ++r) {
        double scale = 0;
        for (int j = 1; j <= n; ++j)
          scale += std::fabs(to_double(T(basis.weight(j) * basis.q(l, j) * basis.q(r, j))));
        t.add(scaled_equal<T>(basis.inner_product(l, r), from_int<T>(0), scale, 1e-12),
              {{"l", l}, {"r", r}});
      }
    run.add("orthogonality", t);
  }
  {
    Tally t;
    for (int r = 0; r < n; ++r) t.add(sign_of(basis.pi_sq(r)) > 0, {{"r", r}});
    run.add("norms_positive", t);
  }
  {
    const int count = std::min(7, n);
    const auto gs = gram_schmidt_monomials(basis, count);
    Tally t;
    for (int r = 0; r < count; ++r) {
      // proportional: g = c q with c != 0 (pick c from the first nonzero q).
      int pivot = 1;
      while (pivot <= n && sign_of(basis.q(r, pivot)) == 0) ++pivot;
      bool ok = pivot <= n;
      if (ok) {
        const T c = gs[r][pivot - 1] / basis.q(r, pivot);
        ok = sign_of(c) != 0;
        for (int j = 1; ok && j <= n; ++j)
          ok = field_equal<T>(T(gs[r][j - 1]), T(c * basis.q(r, j)), 1e-8);
      }
      t.add(ok, {{"r", r}});
    }
    run.add("gram_schmidt_equivalence", t);
  }
  {
    const Eigen::MatrixXd e = eigenbasis(basis);
    const Eigen::MatrixXd gram = e * e.transpose();
    const double err = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    run.add("eigenbasis_orthonormal", err <= 1e-12, {{"max_abs_err", err}, {"tolerance", 1e-12}});

    Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(n, n);
    for (int r = 1; r <= n; ++r)
      recon += to_double(mu_closed(r, theta)) * e.row(r - 1).transpose() * e.row(r - 1);
    const double rerr = (recon - build_m_float(float_table(theta, n))).cwiseAbs().maxCoeff();
    run.add("spectral_reconstruction", rerr <= 1e-8, {{"max_abs_err", rerr}, {"tolerance", 1e-8}});
  }
  {
    Tally t;
    for (int r = 1; r <= n - 1; ++r) {
      const auto rep = check_leading_coefficients(r, theta, n);
      t.add(rep.holds, {{"r", r}});
    }
    run.add("leading_coefficients", t);
  }
  {
    Tally t;
    if (n >= 2) {
      for (int j = 1; j <= n; ++j) {
        const T closed = T((theta.value() + 2) * j - (theta.value() + 2 * n)) / (2 * (1 - n));
        t.add(field_equal<T>(basis.q(1, j), closed, 1e-9), {{"j", j}});
      }
    }
    run.add("q1_closed_form", t);
  }
  return run.take();
}

template <Field T>
std::vector<CheckResult> identities_suite(int n, const ThetaParam<T>& theta, const VerifyOptions& opts) {
  CellRunner<T> run(Suite::identities, n, theta);
  std::map<std::string, Tally> tallies;
  std::vector<std::string> order;
  for (const IdentityRecord& rec : identity_records(n, theta, opts.generic_identities)) {
    if (!tallies.count(rec.identity)) order.push_back(rec.identity);
    tallies[rec.identity].add(rec.holds, rec.params);
  }
  for (const std::string& name : order) run.add(name, tallies[name]);
  return run.take();
}

template <Field T>
std::vector<CheckResult> oracle_suite(int n, const ThetaParam<T>& theta, const VerifyOptions& opts) {
  CellRunner<T> run(Suite::oracle, n, theta);
  const ThetaTable<T> th(theta, n);
  const EnumeratedMeasure<T> measure = enumerate_measure(th);
  {
    T total = from_int<T>(0);
    for (const T& p : measure.prob) total += p;
    run.add("normalization", field_equal<T>(total, from_int<T>(1), 1e-12),
            {{"types", measure.types.size()}, {"total", render(total)}});
  }
  const T tau = n >= 2 ? tau_closed(theta) : from_int<T>(1);
  Tally agree, bound;
  auto probe = [&](const WeightVector<T>& a, nlohmann::json where) {
    const OracleReport<T> rep = oracle_mean_var(th, measure, a);
    agree.add(rep.agree, where);
    if (n >= 2) {
      const T rhs = tau * th.theta() * b_form(th, a);
      if constexpr (is_exact_v<T>) bound.add(rep.var_exact <= rhs, where);
      else bound.add(rep.var_exact <= rhs * (1 + 1e-12), where);
    }
  };
  probe(ones_weight<T>(n), {{"weights", "ones"}});
  for (int j = 1; j <= n; ++j) probe(unit_weight<T>(n, j), {{"weights", "unit"}, {"j", j}});
  Rng rng = make_stream_rng(opts.seed, static_cast<std::uint64_t>(n) * 7919u + 17u);
  for (int k = 0; k < opts.random_vectors; ++k)
    probe(WeightVector<T>(convert_vector<T>(random_rational_vector(n, rng))), {{"sample", k}});
  run.add("mean_variance_agree", agree);
  if (n >= 2) {
    run.add("variance_bound", bound);
    const OracleReport<T> ext = oracle_mean_var(th, measure, extremal_weights(n, theta));
    const T rhs = tau * th.theta() * b_form(th, ext.a);
    run.add("extremal_equality", field_equal<T>(ext.var_exact, rhs, 1e-9),
            {{"var_exact", render(ext.var_exact)}, {"bound", render(rhs)}});
  }
  if (n <= kMaxPermutationN) run.add("permutation_measure", enumerate_permutations_check(th));
  return run.take();
}

template <Field T>
std::vector<CheckResult> remark_suite(int n, const ThetaParam<T>& theta, const VerifyOptions&) {
  require_spectral_n(n);
  CellRunner<T> run(Suite::remark, n, theta);
  const ThetaTable<T> th(theta, n);
  const Matrix<T> r = triangularize(th);
  const Matrix<double> r_mag = triangularize_magnitude(th);
  {
    Tally t;
    for (int i = 1; i < n; ++i)
      t.add(scaled_equal<T>(r(n - 1, i - 1), from_int<T>(0), r_mag(n - 1, i - 1), 1e-10), {{"i", i}});
    t.add(scaled_equal<T>(r(n - 1, n - 1), mu_closed(n, theta), r_mag(n - 1, n - 1), 1e-10), {{"i", n}});
    run.add("last_row", t);
  }
  {
    // Above the diagonal the last column is not zero; it follows the general
    // closed form with binom(n-i, n-i) = 1.
    Tally t;
    long nonzero = 0;
    for (int i = 1; i < n; ++i) {
      if (sign_of(r(i - 1, n - 1)) != 0) ++nonzero;
      t.add(scaled_equal<T>(r(i - 1, n - 1), triangular_entry_closed(i, n, th), r_mag(i - 1, n - 1), 1e-10),
            {{"i", i}});
    }
    nlohmann::json d = t.detail();
    d["nonzero_above_diagonal"] = nonzero;
    run.add("last_column_closed_form", t.holds(), d);
  }
  {
    Tally t;
    for (int j = 1; j <= n; ++j) t.add(check_last_hahn_closed_form(j, theta, n).holds, {{"j", j}});
    run.add("last_hahn_chu_vandermonde", t);
  }
  const HahnBasis<T> basis(th);
  {
    const KernelMatrix<T> kernel = build_kernel(th);
    run.add("last_eigenvector", rational_eigencheck(kernel, th, mu_closed(n, theta),
                                                    WeightVector<T>(basis.eigen_weights(n))));
  }
  {
    // Last row of e^L against e_n: in the gauge, v_nj / e_nj = (U_nj / q_{n-1}(j)) pi_{n-1} / D_n.
    const Matrix<T> u = exp_l_gauge(th);
    const T c = u(n - 1, n - 1) / basis.q(n - 1, n);
    bool constant = true;
    for (int j = 1; j <= n; ++j)
      constant = constant && field_equal<T>(u(n - 1, j - 1), T(c * basis.q(n - 1, j)), 1e-9);
    const double scale = to_double(c) * std::sqrt(to_double(basis.pi_sq(n - 1))) /
                         std::sqrt(to_double(gauge_diag(th)[n]));
    run.add("last_row_proportional", constant,
            {{"gauge_ratio", render(c)}, {"v_n_over_e_n", scale}});
  }
  return run.take();
}

}  // namespace

template <Field T>
std::vector<IdentityRecord> identity_records(int n, const ThetaParam<T>& theta, bool include_generic) {
  std::vector<IdentityRecord> out;
  const T& th_v = theta.value();
  auto push = [&](std::string name, nlohmann::json params, const IdentityCheck<T>& c) {
    out.push_back({std::move(name), std::move(params), c.holds, render(c.lhs), render(c.rhs)});
  };
  auto r = [](long p, long q) { return ratio<T>(p, q); };

  if (include_generic) {
    const std::vector<T> conv_a{T(th_v - 1), r(-5, 2), r(1, 3), r(2, 1), r(7, 1)};
    const std::vector<T> conv_b{T(th_v + 3), r(-3, 2), r(0, 1), r(5, 4), r(11, 1)};
    for (const T& a : conv_a)
      for (const T& b : conv_b)
        for (long M = 0; M <= 20; ++M)
          push("binomial_convolution", {{"a", render(a)}, {"b", render(b)}, {"M", M}}, check_binomial_convolution(a, b, M));

    const std::vector<T> alt_a{th_v, r(-7, 3), r(3, 2), r(12, 1), r(5, 1)};
    for (const T& a : alt_a)
      for (long m = 0; m <= 20; ++m)
        for (long M = 0; M <= 20; ++M)
          push("alternating_binomial", {{"a", render(a)}, {"m", m}, {"M", M}}, check_alternating_binomial(a, m, M));

    struct ConvolutionCase {
      T alpha, beta;
      std::vector<T> upper, lower;
    };
    const std::vector<ConvolutionCase> cases{
        {th_v, r(1, 1), {}, {}},
        {r(1, 2), r(2, 3), {r(5, 3)}, {r(7, 2)}},
        {r(-3, 4), r(5, 2), {r(-2, 1), r(1, 3)}, {r(3, 2), r(9, 4)}},
        {r(3, 1), th_v, {r(-4, 1), T(th_v + 2)}, {r(2, 1), r(-15, 2)}},
    };
    for (std::size_t c = 0; c < cases.size(); ++c)
      for (long M = 0; M <= 12; ++M)
        push("hypergeometric_convolution", {{"case", c}, {"M", M}},
             check_hypergeometric_convolution(M, cases[c].alpha, cases[c].beta, cases[c].upper, cases[c].lower));

    const std::vector<T> cv_b{r(1, 2), r(-3, 1), th_v, r(4, 3)};
    const std::vector<T> cv_c{r(2, 1), r(1, 2), r(7, 3), T(th_v + 5), r(-5, 2)};
    for (const T& b : cv_b)
      for (const T& c : cv_c)
        for (long m = 0; m <= 25; ++m)
          push("chu_vandermonde", {{"m", m}, {"b", render(b)}, {"c", render(c)}},
               make_check(hyper<T>(m, {b}, {c}), chu_vandermonde_rhs(m, b, c),
                          hyper_magnitude<T>(m, {b}, {c})));
  }

  if (n >= 2) {
    const ThetaTable<T> th(theta, n);
    // The instances used in the triangularization argument.
    for (int rr = 1; rr <= n; ++rr)
      for (int j = 1; j + rr <= n; ++j)
        push("binomial_convolution_instance", {{"r", rr}, {"j", j}},
             check_binomial_convolution(T(th_v - 1), from_int<T>(n - rr - 1), n - rr - j));
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        push("alternating_binomial_instance", {{"i", i}, {"j", j}}, check_alternating_binomial(from_int<T>(n), j, i));

    for (int rr = 0; rr <= n - 1; ++rr)
      for (int M = 0; M <= n - 1; ++M)
        push("hahn_partial_sum", {{"r", rr}, {"M", M}}, check_hahn_partial_sum(rr, M, th));

    const HahnBasis<T> basis(th);
    const KernelMatrix<T> kernel = build_kernel(th);
    for (int rr = 1; rr <= n; ++rr)
      for (int i = 1; i <= n; ++i)
        push("kernel_hahn_row_gauge", {{"r", rr}, {"i", i}}, check_kernel_hahn_row_gauge(rr, i, basis, kernel, th));

    const ThetaTable<double> thf = float_table(theta, n);
    const Eigen::MatrixXd e = eigenbasis(basis);
    const Eigen::MatrixXd m = build_m_float(thf);
    std::vector<double> pi;
    for (int k = 0; k < n; ++k) pi.push_back(std::sqrt(to_double(basis.pi_sq(k))));
    for (int rr = 1; rr <= n; ++rr) {
      const Eigen::VectorXd direct = kernel_hahn_row_direct(e, pi, m, rr);
      for (int i = 1; i <= n; ++i) {
        const double closed = kernel_hahn_row(rr, i, th);
        const double got = direct(i - 1);
        double scale = std::max(1.0, std::fabs(closed));
        if constexpr (!is_exact_v<T>) {
          // Phi is summed in floating point here; its terms set the scale.
          const double coef = std::sqrt(to_double(th(n - i)) / i) * n / (rr * (rr + to_double(th_v) - 1));
          scale = std::max(scale, coef * kernel_row_factor_magnitude<T>(rr, from_int<T>(i), theta, n));
        }
        const bool ok = std::fabs(closed - got) <= 1e-10 * scale;
        out.push_back({"kernel_hahn_row", {{"r", rr}, {"i", i}}, ok, render(got), render(closed)});
      }
    }
    for (int rr = 1; rr <= n; ++rr) {
      const T phi0 = kernel_row_factor<T>(rr, from_int<T>(0), theta, n);
      push("phi_vanishes_at_zero", {{"r", rr}},
           make_check(phi0, from_int<T>(0), kernel_row_factor_magnitude<T>(rr, from_int<T>(0), theta, n)));
    }
  }

  for (int rr = 1; rr <= n; ++rr)
    for (int i = 1; i <= n; ++i)
      push("hahn_phi_relation", {{"i", i}, {"r", rr}}, check_hahn_phi_relation(i, rr, theta, n));
  return out;
}

template <Field T>
std::vector<CheckResult> run_suite(Suite suite, int n, const ThetaParam<T>& theta,
                                   const VerifyOptions& opts) {
  switch (suite) {
    case Suite::spectral: return spectral_suite(n, theta, opts);
    case Suite::hahn: return hahn_suite(n, theta, opts);
    case Suite::identities: return identities_suite(n, theta, opts);
    case Suite::oracle: return oracle_suite(n, theta, opts);
    case Suite::remark: return remark_suite(n, theta, opts);
  }
  throw std::logic_error("unhandled suite");
}

template std::vector<CheckResult> run_suite<Rational>(Suite, int, const ThetaParam<Rational>&,
                                                      const VerifyOptions&);
template std::vector<CheckResult> run_suite<double>(Suite, int, const ThetaParam<double>&,
                                                    const VerifyOptions&);
template std::vector<IdentityRecord> identity_records<Rational>(int, const ThetaParam<Rational>&, bool);
template std::vector<IdentityRecord> identity_records<double>(int, const ThetaParam<double>&, bool);

}  // namespace ewens
