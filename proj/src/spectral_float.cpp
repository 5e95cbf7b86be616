#include "ewens/spectral_float.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ewens {

Eigen::MatrixXd build_m_float(const ThetaTable<double>& th) {
  const int n = th.n();
  require_spectral_n(n);
  Eigen::MatrixXd m(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const double first =
          th(n - i - j) / std::sqrt(static_cast<double>(i) * j * th(n - i) * th(n - j));
      const double second = std::sqrt(th(n - i) / (i * th(n))) *
                            std::sqrt(th(n - j) / (j * th(n)));
      m(i - 1, j - 1) = first - second;
      m(j - 1, i - 1) = first - second;
    }
  }
  return m;
}

Eigen::MatrixXd build_l_float(const ThetaTable<double>& th) {
  const int n = th.n();
  require_spectral_n(n);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j)
    l(j, j - 1) = -std::sqrt(static_cast<double>(j + 1) * j * th(n - j - 1) / th(n - j));
  return l;
}

Eigen::MatrixXd nilpotent_exp_float(const Eigen::MatrixXd& nil) {
  const auto n = nil.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    term = (term * nil) / static_cast<double>(k);
    out += term;
  }
  return out;
}

Eigen::MatrixXd ungauge(const Eigen::MatrixXd& x, const std::vector<double>& dsq) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out(i, j) *= std::sqrt(dsq[static_cast<std::size_t>(j)] / dsq[static_cast<std::size_t>(i)]);
  return out;
}

Eigen::MatrixXd ungauge_symmetric(const Eigen::MatrixXd& x, const std::vector<double>& dsq) {
  Eigen::MatrixXd out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out(i, j) /= std::sqrt(dsq[static_cast<std::size_t>(i)] * dsq[static_cast<std::size_t>(j)]);
  return out;
}

std::vector<double> float_spectrum(const ThetaTable<double>& th) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_m_float(th),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw SolverError("symmetric eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

std::vector<SpectrumRow> match_spectrum(const ThetaTable<double>& th) {
  const int n = th.n();
  const std::vector<double> numeric = float_spectrum(th);
  std::vector<SpectrumRow> rows;
  for (int r = 1; r <= n; ++r) rows.push_back({r, mu_closed(r, th.param()), 0.0, 0.0});
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].mu_closed < rows[b].mu_closed;
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    SpectrumRow& row = rows[order[k]];
    row.mu_numeric = numeric[k];
    row.abs_err = std::fabs(row.mu_numeric - row.mu_closed);
  }
  return rows;
}

double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("max_rel_diff: shapes differ");
  double worst = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::fabs(a(i, j) - b(i, j)) / std::max(1.0, std::fabs(b(i, j))));
  return worst;
}

}  // namespace ewens
