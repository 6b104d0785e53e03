#ifndef KERRMZI_LINALG_HPP
#define KERRMZI_LINALG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace kerrmzi {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Binomial pmf P(k successes | m trials, success prob p), stable for m up to
/// a few hundred. Exact at the p = 0 and p = 1 edges.
inline double binomial_pmf(int k, int m, double p) {
  if (k < 0 || k > m) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == m ? 1.0 : 0.0;
  return std::exp(log_binomial(m, k) + k * std::log(p) + (m - k) * std::log1p(-p));
}

/// Largest |U U^dag - I| entry; zero for an exactly unitary matrix.
inline double unitarity_defect(const Matrix& u) {
  Matrix d = u * u.adjoint();
  d.diagonal().array() -= 1.0;
  return d.cwiseAbs().maxCoeff();
}

/// Largest |A - A^dag| entry.
inline double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace kerrmzi

#endif
