#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "apw/basis.hpp"
#include "apw/magnetics.hpp"

namespace apw {

/// Finite matrix of a represented kernel on a geometric basis.
struct KernelOperator {
  CMat matrix;
  BasisPtr basis;
  bool hermitian = false;
  MagneticCocycle twist;

  std::size_t size() const { return std::size_t(matrix.rows()); }
};

/// Complex hopping amplitude as a function of the separation q - p. Must
/// satisfy amplitude(s) = conj(amplitude(-s)) and vanish for |s| >= range.
struct HoppingProfile {
  std::function<cplx(const RVec&)> amplitude;
  double range = 0.0;

  /// -t exp(-(|s| - a0)/decay) for |s| <= cut, smoothly switched off between
  /// cut and range. decay = 0 gives a distance-independent amplitude -t.
  static HoppingProfile exponential(double t, double a0, double decay, double cut, double range);
  static HoppingProfile zero(double range = 1.0);
};

/// Neighbourhood of one site, handed to onsite-energy rules.
struct LocalPattern {
  std::size_t site = 0;
  RVec position;
  std::vector<RVec> neighbours;  // displacements within the hopping range
};

using OnsiteRule = std::function<double(const LocalPattern&)>;

/// Atomic potential v with compact support B(0; support).
struct AtomicPotential {
  std::function<double(const RVec&)> profile;
  double support = 0.0;

  /// -depth exp(-|x|^2 / 2 width^2), multiplied by a C-infinity cutoff that
  /// reaches zero at `support`.
  static AtomicPotential gaussian_well(double depth, double width, double support);
  static AtomicPotential zero();
};

/// C-infinity step: 1 for s <= s0, 0 for s >= s1.
double smooth_step_down(double s, double s0, double s1);

/// Magnetic Schroedinger operator (-i grad - A)^2 + sum_p v(x - p) with
/// A = -theta x on a cell-centred grid; second-order stencil with link
/// phases exp(-i int A.dl).
KernelOperator assemble_continuum(const DeloneSet& set, const AtomicPotential& v,
                                  const MagneticCocycle& c, const BasisPtr& grid);

/// Kernel M[p][q] = exp(-i <p, theta q>) amplitude(q - p) for q != p and
/// onsite(pattern at p) on the diagonal. Periodic bases use the minimum image
/// and magnetic periodic boundary conditions.
KernelOperator assemble_tightbinding(const BasisPtr& sites, const HoppingProfile& hop,
                                     const MagneticCocycle& c, const OnsiteRule& onsite = {});

/// Product of the plaquette phases M[p0][p1] M[p1][p2] ... M[pn][p0] / |...|.
cplx loop_phase(const KernelOperator& h, const std::vector<std::size_t>& loop);

/// pi(f * g) = pi(f) pi(g).
KernelOperator twisted_convolve(const KernelOperator& f, const KernelOperator& g);

/// sum_{|alpha| <= n} || d^alpha f || / alpha!, where d^alpha multiplies entry
/// (p,q) by (q - p)^alpha.
double frechet_seminorm(const KernelOperator& f, int n);

/// Entry-wise (q - p)_axis * f[p][q].
CMat position_derivative(const KernelOperator& f, int axis);

struct ResolventBoundReport {
  double lhs = 0.0;        // ||R1 - R2||
  double rhs = 0.0;        // vsup ||R1|| ||R2||
  double norm_r1 = 0.0;
  double norm_r2 = 0.0;
  bool holds = false;
};

/// ||(z - H1)^-1 - (z - H2)^-1|| <= vsup ||(z - H1)^-1|| ||(z - H2)^-1||.
ResolventBoundReport resolvent_distance_bound_check(const KernelOperator& h1,
                                                    const KernelOperator& h2, cplx z, double vsup);

/// Binary container: magic, basis descriptor, hermitian flag, dims, then the
/// matrix row-major as little-endian complex doubles.
void write_operator(std::ostream& out, const KernelOperator& op);
KernelOperator read_operator(std::istream& in);

}  // namespace apw
