#pragma once

#include <vector>

#include "apw/spectral.hpp"

namespace apw {

/// Rows of the basis inside the centred sub-window scaled by `fraction`.
std::vector<Eigen::Index> interior_indices(const Basis& b, double fraction);

/// Trace per unit volume over the centred sub-window: the sum of diagonal
/// entries divided by (#indices in the sub-window) * cell_measure.
cplx trace_per_volume(const CMat& a, const Basis& b, double fraction);

struct ChernOptions {
  std::vector<double> fractions{0.3, 0.4, 0.5};
  double tolerance = 0.05;
};

struct ChernResult {
  double value = 0.0;  // at the largest fraction
  double imag = 0.0;   // largest |Im| over fractions
  std::vector<double> fractions;
  std::vector<double> per_fraction;
  double extrapolated = 0.0;  // linear fit in 1/fraction, evaluated at 0
  double spread = 0.0;        // max - min over the two largest fractions
  int k = 2;
  long nearest = 0;
  bool integral = false;
};

/// Orientation sign multiplying the commutator formula, fixed against the
/// momentum-space oracle.
inline constexpr double kChernOrientation = -1.0;

/// (-2 pi i)^{k/2} / (k/2)! sum_{rho in S_k} sgn(rho) Tr_Vol(P prod_j [X_{axes[rho(j)]}, P]).
ChernResult chern_weak(const CMat& p, const Basis& b, const std::vector<int>& axes,
                       const ChernOptions& opt = {});
ChernResult chern_weak(const SpectralProjection& p, const std::vector<int>& axes,
                       const ChernOptions& opt = {});
/// All axes; OddDimension unless d is even.
ChernResult chern_top(const SpectralProjection& p, const ChernOptions& opt = {});
ChernResult chern_top(const CMat& p, const Basis& b, const ChernOptions& opt = {});

/// Square-lattice Harper model at flux p/q in Landau gauge, unit hopping and
/// onsite energies depending on x mod q (empty = zero).
CMat bloch_hamiltonian(int p, int q, const std::vector<double>& onsite, double kx, double ky);

struct OracleResult {
  long chern = 0;
  double raw = 0.0;
  double min_gap = 0.0;  // smallest separation of the band range from the rest over the k grid
};

/// Chern number of bands [band_lo, band_hi] (0 = lowest) from plaquette
/// Berry fluxes on an nk x nk grid of the magnetic Brillouin zone.
/// GaplessBand if the range touches another band on the grid.
OracleResult bloch_oracle(int p, int q, const std::vector<double>& onsite, int band_lo, int band_hi,
                          int nk = 24);

}  // namespace apw
