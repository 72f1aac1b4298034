#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apw/operators.hpp"

namespace apw {

struct Eigensystem {
  RVec values;   // ascending
  CMat vectors;  // orthonormal columns
};

/// Dense Hermitian eigensolve. Throws NotHermitian if |H - H^H| exceeds
/// 1e-10 (1 + max|H|).
Eigensystem eig(const KernelOperator& h);
Eigensystem eig(const CMat& h);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Open intervals (lambda_k, lambda_{k+1}) with width >= min_gap, in order.
std::vector<Interval> detect_gaps(const RVec& sorted_values, double min_gap);

enum class ProjectionBackend { eigensum, chebyshev };
std::string to_string(ProjectionBackend b);
ProjectionBackend backend_from_string(const std::string& name);

struct SpectralProjection {
  CMat matrix;
  Interval delta;
  double gap_margin = 0.0;
  int rank = 0;
  BasisPtr basis;
  CMat range;  // orthonormal basis of the range (eigensum backend only)
  ProjectionBackend backend = ProjectionBackend::eigensum;
  int degree = 0;
};

struct ProjectionOptions {
  double min_gap = 0.1;
  ProjectionBackend backend = ProjectionBackend::eigensum;
  /// Chebyshev degree; 0 picks one from the erf width and spectral radius.
  int degree = 0;
};

/// chi_delta(H). EndpointInSpectrum if an endpoint of delta lies within
/// min_gap/10 of an eigenvalue. The Chebyshev backend smooths chi with erf
/// steps of width gap_margin/5 and never diagonalizes; it needs the margin.
SpectralProjection spectral_projection(const KernelOperator& h, const Interval& delta,
                                       const ProjectionOptions& opt = {});
SpectralProjection spectral_projection(const KernelOperator& h, const Eigensystem& es,
                                       const Interval& delta, const ProjectionOptions& opt = {});
SpectralProjection chebyshev_projection(const KernelOperator& h, const Interval& delta,
                                        double gap_margin, int degree = 0);

/// Degree the Chebyshev backend picks by default.
int chebyshev_default_degree(double spectral_halfwidth, double gap_margin);

/// Distance from the endpoints of delta to the nearest eigenvalue outside it.
double gap_margin(const RVec& values, const Interval& delta);

/// Delta from just below the spectrum to the midpoint of gap k.
Interval below_gap(const RVec& values, const std::vector<Interval>& gaps, std::size_t k);
/// Delta between the midpoints of gaps k1 < k2; k1 = -1 means below the
/// spectrum and k2 = gaps.size() above it.
Interval between_gaps(const RVec& values, const std::vector<Interval>& gaps, int k1, int k2);

/// Orthonormal basis of range(P) (eigenvectors with eigenvalue > 1/2).
CMat range_basis(const SpectralProjection& p);

double idempotency_defect(const CMat& p);

}  // namespace apw
