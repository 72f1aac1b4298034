#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace apw {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Largest singular value. Matrices up to `exact_limit` columns go through a
/// dense Hermitian eigensolve of A^H A; larger ones use power iteration
/// with relative tolerance `tol`.
double spectral_norm(const CMat& a, double tol = 1e-9, Eigen::Index exact_limit = 256);

/// Power iteration on an implicitly given operator: `apply` maps x to A x and
/// `apply_adjoint` maps x to A^H x. Deterministic start vector.
double spectral_norm_implicit(Eigen::Index n, const std::function<CVec(const CVec&)>& apply,
                              const std::function<CVec(const CVec&)>& apply_adjoint,
                              double tol = 1e-9, int max_iter = 5000);

double max_abs(const CMat& a);

/// max |A - A^H| entrywise.
double hermiticity_defect(const CMat& a);

/// S^{-1/2} for Hermitian positive-definite S.
CMat inverse_sqrt_hpd(const CMat& s);

}  // namespace apw
