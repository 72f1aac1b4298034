#include "apw/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace apw {

double spectral_norm(const CMat& a, double tol, Eigen::Index exact_limit) {
  if (a.size() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) <= exact_limit) {
    const CMat gram = a.cols() <= a.rows() ? CMat(a.adjoint() * a) : CMat(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  return spectral_norm_implicit(
      a.cols(), [&](const CVec& x) -> CVec { return a * x; },
      [&](const CVec& x) -> CVec { return a.adjoint() * x; }, tol);
}

double spectral_norm_implicit(Eigen::Index n, const std::function<CVec(const CVec&)>& apply,
                              const std::function<CVec(const CVec&)>& apply_adjoint, double tol,
                              int max_iter) {
  // fixed, non-symmetric start so no eigenvector is systematically missed
  CVec x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = cplx(1.0 + 0.37 * std::sin(1.3 * double(i) + 0.2), 0.21 * std::cos(0.7 * double(i)));
  x.normalize();
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    CVec y = apply_adjoint(apply(x));
    const double lambda = std::abs(x.dot(y));
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (it > 3 && std::abs(lambda - prev) <= tol * lambda) return std::sqrt(lambda);
    prev = lambda;
  }
  return std::sqrt(prev);
}

double max_abs(const CMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMat& a) { return max_abs(a - a.adjoint()); }

CMat inverse_sqrt_hpd(const CMat& s) {
  Eigen::SelfAdjointEigenSolver<CMat> es(s);
  RVec inv = es.eigenvalues().array().rsqrt().matrix();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace apw
