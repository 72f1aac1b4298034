#include "apw/magnetics.hpp"

#include <cmath>

#include "apw/errors.hpp"

namespace apw {

MagneticCocycle::MagneticCocycle(const RMat& theta) {
  if (theta.rows() != theta.cols() || theta.rows() < 1)
    throw Error(Errc::invalid_argument, "theta must be a non-empty square matrix");
  theta_ = 0.5 * (theta - theta.transpose());
}

MagneticCocycle MagneticCocycle::zero(int dim) { return MagneticCocycle(RMat::Zero(dim, dim)); }

MagneticCocycle MagneticCocycle::from_upper(int dim, const std::vector<double>& upper) {
  if (std::size_t(dim * (dim - 1) / 2) != upper.size())
    throw Error(Errc::invalid_argument, "theta upper triangle needs d(d-1)/2 entries");
  RMat t = RMat::Zero(dim, dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      t(i, j) = upper[k++];
      t(j, i) = -t(i, j);
    }
  return MagneticCocycle(t);
}

MagneticCocycle MagneticCocycle::from_flux(int dim, double alpha) {
  if (dim < 2) {
    if (alpha != 0.0) throw Error(Errc::invalid_argument, "a magnetic flux needs dim >= 2");
    return zero(dim);
  }
  RMat t = RMat::Zero(dim, dim);
  t(0, 1) = kPi * alpha;
  t(1, 0) = -t(0, 1);
  return MagneticCocycle(t);
}

std::vector<double> MagneticCocycle::upper() const {
  std::vector<double> u;
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j) u.push_back(theta_(i, j));
  return u;
}

cplx MagneticCocycle::sigma(const RVec& x, const RVec& y) const {
  return std::polar(1.0, -form(x, y));
}

double cocycle_identity_residual(const MagneticCocycle& c, const RVec& x, const RVec& y,
                                 const RVec& z) {
  const cplx lhs = c.sigma(x, y) * c.sigma(x + y, z);
  const cplx rhs = c.sigma(x, y + z) * c.sigma(y, z);
  return std::abs(lhs - rhs);
}

std::pair<double, double> inverse_conjugation_residuals(const MagneticCocycle& c, const RVec& x,
                                                        const RVec& y) {
  const cplx s = c.sigma(x, y);
  return {std::abs(s - std::conj(c.sigma(x + y, -y))), std::abs(s - std::conj(c.sigma(-y, -x)))};
}

}  // namespace apw
