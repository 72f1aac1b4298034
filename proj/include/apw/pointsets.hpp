#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "apw/linalg.hpp"

namespace apw {

/// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return int(lo.size()); }
  double edge(int axis) const { return hi[axis] - lo[axis]; }
  double volume() const;
  bool empty() const;
  bool contains(const RVec& x, double tol = 0.0) const;
  Box eroded(double margin) const;
  RVec centre() const;
  /// Sub-box sharing the centre, each edge scaled by `fraction`.
  Box scaled(double fraction) const;

  static Box cube(int dim, double lo, double hi);
  bool operator==(const Box&) const = default;
};

/// Finite window of an (r,R)-Delone set. Points are the rows of `points`.
struct DeloneSet {
  int dim = 0;
  RMat points;  // n x dim
  double r = 0.0;
  double R = 0.0;
  Box window;

  std::size_t size() const { return std::size_t(points.rows()); }
  RVec point(std::size_t i) const { return points.row(Eigen::Index(i)).transpose(); }
};

/// Uniform cell grid over a point cloud for nearest-neighbour and radius queries.
class PointIndex {
 public:
  PointIndex(const RMat& points, double cell);

  /// Index of the nearest point and its distance; `exclude` skips one index.
  std::pair<std::size_t, double> nearest(const RVec& x,
                                         std::optional<std::size_t> exclude = {}) const;
  /// Indices of points with |p - x| < radius.
  std::vector<std::size_t> within(const RVec& x, double radius) const;

 private:
  std::vector<long> cell_of(const RVec& x) const;
  long flat(const std::vector<long>& c) const;
  void visit_shell(const std::vector<long>& centre, long k,
                   const std::function<void(long)>& visit) const;

  RMat points_;
  int dim_;
  double cell_;
  std::vector<double> origin_;
  std::vector<long> extent_;
  std::vector<std::vector<std::size_t>> buckets_;
};

enum class GeneratorKind {
  periodic_square,
  periodic_triangular,
  cut_and_project,
  jittered_periodic,
  random_hardcore,
};

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);

struct GeneratorParams {
  double spacing = 1.0;      // lattice constant / tile edge length
  double jitter = 0.0;       // jittered-periodic: displacement radius
  double r = 0.25;           // random-hardcore: discreteness radius
  double R = 0.75;           // random-hardcore: target density radius
  int max_darts = 20000;     // random-hardcore dart budget
};

DeloneSet generate(GeneratorKind kind, const GeneratorParams& params, const Box& window,
                   std::uint64_t seed);

struct VerificationReport {
  double min_pair_dist = 0.0;
  double covering_radius = 0.0;
  bool is_r_discrete = false;
  bool is_R_dense = false;
  double probe_pitch = 0.0;
  std::size_t probes = 0;
};

VerificationReport verify(const DeloneSet& set);

/// Two-sided Hausdorff distance of the restrictions to the open ball B(0;M).
double hausdorff_window_distance(const DeloneSet& a, const DeloneSet& b, double M);

enum class Interpolation { matched_points, piecewise_constant };

struct DeformationPath {
  std::vector<double> t;
  std::vector<DeloneSet> samples;
  Interpolation interpolation = Interpolation::matched_points;
  std::vector<std::size_t> matching;  // a-index -> b-index
  double max_displacement = 0.0;
};

DeformationPath make_path(const DeloneSet& a, const DeloneSet& b, int n_samples);

/// Translate so that site `index` sits at the origin (a point of the transversal).
DeloneSet recentre(const DeloneSet& set, std::size_t index);

void write_pointset(std::ostream& out, const DeloneSet& set);
DeloneSet read_pointset(std::istream& in);

}  // namespace apw
