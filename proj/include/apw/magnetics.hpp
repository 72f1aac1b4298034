#pragma once

#include <vector>

#include "apw/linalg.hpp"

namespace apw {

/// Constant magnetic field given by an antisymmetric d x d matrix theta.
/// The groupoid 2-cocycle is sigma(x, y) = exp(-i <x, theta y>), magnetic
/// translations act as (U_a psi)(x) = exp(-i <x, theta a>) psi(x - a), and the
/// gauge potential commuting with them is A = -theta x, i.e. the field strength
/// in the (j,k) plane is 2 theta_jk.
class MagneticCocycle {
 public:
  MagneticCocycle() = default;
  /// Antisymmetrizes the input; d = 1 always yields the trivial cocycle.
  explicit MagneticCocycle(const RMat& theta);

  static MagneticCocycle zero(int dim);
  /// Upper-triangle entries, row-major: theta_12, theta_13, ..., theta_23, ...
  static MagneticCocycle from_upper(int dim, const std::vector<double>& upper);
  /// Flux `alpha` (flux quanta per unit area) in the (0,1) plane: theta_01 = pi * alpha.
  static MagneticCocycle from_flux(int dim, double alpha);

  int dim() const { return int(theta_.rows()); }
  const RMat& theta() const { return theta_; }
  std::vector<double> upper() const;
  bool trivial() const { return theta_.isZero(0.0); }

  /// <x, theta y>
  double form(const RVec& x, const RVec& y) const { return x.dot(theta_ * y); }
  cplx sigma(const RVec& x, const RVec& y) const;

  bool operator==(const MagneticCocycle& o) const {
    if (trivial() && o.trivial()) return true;
    return theta_.rows() == o.theta_.rows() && theta_ == o.theta_;
  }

 private:
  RMat theta_;
};

double cocycle_identity_residual(const MagneticCocycle& c, const RVec& x, const RVec& y,
                                 const RVec& z);

/// |sigma(x,y) - conj sigma(x+y, -y)| and |sigma(x,y) - conj sigma(-y, -x)|.
std::pair<double, double> inverse_conjugation_residuals(const MagneticCocycle& c, const RVec& x,
                                                        const RVec& y);

}  // namespace apw
