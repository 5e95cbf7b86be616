#pragma once

// Floating-point views of the spectral objects, for cross-checks against the
// exact gauge forms.

#include <Eigen/Dense>

#include <vector>

#include "ewens/matrix.hpp"
#include "ewens/scalar.hpp"
#include "ewens/spectral.hpp"

namespace ewens {

/// m_ij built straight from the square-root formula.
Eigen::MatrixXd build_m_float(const ThetaTable<double>& th);

/// L with l_{j+1,j} = -sqrt((j+1) j Theta(n-j-1) / Theta(n-j)).
Eigen::MatrixXd build_l_float(const ThetaTable<double>& th);

/// sum_{k<n} L^k / k! for a nilpotent L.
Eigen::MatrixXd nilpotent_exp_float(const Eigen::MatrixXd& nil);

/// D^-1 X D for the gauge D = diag(sqrt(dsq)).
Eigen::MatrixXd ungauge(const Eigen::MatrixXd& x, const std::vector<double>& dsq);
/// D^-1 X D^-1.
Eigen::MatrixXd ungauge_symmetric(const Eigen::MatrixXd& x, const std::vector<double>& dsq);

template <Field T>
Eigen::MatrixXd to_eigen(const Matrix<T>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
  return out;
}

template <Field T>
std::vector<double> to_doubles(const GaugeDiag<T>& g) {
  std::vector<double> out;
  for (const T& v : g.dsq) out.push_back(to_double(v));
  return out;
}

/// Raised when the symmetric eigensolver fails to converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ascending eigenvalues of the symmetric matrix M_n.
std::vector<double> float_spectrum(const ThetaTable<double>& th);

struct SpectrumRow {
  int r;
  double mu_closed;
  double mu_numeric;
  double abs_err;
};

/// Closed-form eigenvalues paired one-to-one with the numeric ones (both
/// sorted), reported in order of r.
std::vector<SpectrumRow> match_spectrum(const ThetaTable<double>& th);

/// Largest |a_ij - b_ij| / max(1, |b_ij|).
double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace ewens
