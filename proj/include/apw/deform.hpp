#pragma once

#include <string>
#include <vector>

#include "apw/chern.hpp"
#include "apw/model.hpp"

namespace apw {

enum class Verdict { constant, gap_closed, drift };
std::string to_string(Verdict v);

struct PathSample {
  double t = 0.0;
  Interval gap;        // detected gap containing the tracked point
  Interval delta;      // (lambda_min - 1, gap midpoint)
  double margin = 0.0;
  int rank = 0;
  ChernResult chern;
};

struct GappedPathReport {
  std::vector<PathSample> samples;  // good samples only, ordered by t
  Verdict verdict = Verdict::constant;
  double t_closed = 0.0;            // first sample whose gap is gone (gap_closed)
  double max_drift = 0.0;           // max |C(t) - C(0)|
  double tolerance = 0.05;
};

struct DeformOptions {
  double min_gap = 0.1;
  double tolerance = 0.05;
  ChernOptions chern;
};

/// Follows the gap containing `tracked` (an energy inside a gap of the first
/// operator) through a sequence of Hamiltonians. A missing gap ends the run
/// with verdict gap_closed; earlier samples are kept.
GappedPathReport track_gapped_path(const std::vector<double>& t, const std::vector<KernelOperator>& ops,
                                   double tracked, const DeformOptions& opt = {});

GappedPathReport run_lattice_deformation(const DeformationPath& path, const LatticeModel& model,
                                         double tracked, const DeformOptions& opt = {});

GappedPathReport run_field_deformation(const DeloneSet& set, const std::vector<double>& t,
                                       const std::vector<MagneticCocycle>& thetas,
                                       const LatticeModel& model, double tracked,
                                       const DeformOptions& opt = {});

/// Flux path alpha0 + k * step for k = 0 .. steps.
std::vector<MagneticCocycle> flux_path(int dim, double alpha0, double step, int steps);

struct ResolventSweep {
  std::vector<ResolventBoundReport> steps;
  double median_lhs = 0.0;
  bool all_hold = true;
};

/// Bound check for every consecutive pair of the continuum path; vsup is the
/// sup of the potential change on the grid.
ResolventSweep resolvent_continuity_sweep(const DeformationPath& path, cplx z, const ContinuumModel& model);

struct HalvingStudy {
  ResolventSweep coarse;
  ResolventSweep fine;
  double ratio = 0.0;  // fine median / coarse median
};

HalvingStudy resolvent_halving(const DeloneSet& a, const DeloneSet& b, int coarse_samples, cplx z,
                               const ContinuumModel& model);

}  // namespace apw
