#pragma once

#include <memory>
#include <vector>

#include "apw/linalg.hpp"
#include "apw/pointsets.hpp"

namespace apw {

enum class Boundary { open, periodic };
enum class BasisKind { grid, site };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

/// Geometric basis of a finite operator: either a cell-centred grid
/// discretizing L^2 of a box, or the sites of a Delone set (times internal
/// orbitals). Periodic boundaries identify opposite faces of the window.
class Basis {
 public:
  static Basis grid(const Box& window, double pitch, Boundary boundary = Boundary::open);
  /// Sites are stored in lexicographic coordinate order.
  static Basis sites(const DeloneSet& set, Boundary boundary = Boundary::open, int orbitals = 1);

  BasisKind kind() const { return kind_; }
  int dim() const { return window_.dim(); }
  const Box& window() const { return window_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::periodic; }

  std::size_t size() const { return std::size_t(positions_.rows()); }
  const RMat& positions() const { return positions_; }
  RVec position(std::size_t i) const { return positions_.row(Eigen::Index(i)).transpose(); }

  // grid
  double pitch() const { return pitch_; }
  const std::vector<long>& shape() const { return shape_; }
  std::size_t grid_index(const std::vector<long>& n) const;
  std::vector<long> grid_coords(std::size_t index) const;

  // sites
  const DeloneSet& set() const { return set_; }
  int orbitals() const { return orbitals_; }
  std::size_t site_of(std::size_t index) const { return index / std::size_t(orbitals_); }
  std::size_t n_sites() const { return size() / std::size_t(orbitals_); }

  /// Lattice vector a (a multiple of the window edges, zero for open
  /// boundaries) such that x + a is the image of x closest to y.
  RVec image_shift(const RVec& x, const RVec& y) const;
  /// Minimum-image displacement (to - from).
  RVec displacement(const RVec& from, const RVec& to) const;
  RVec displacement(std::size_t i, std::size_t j) const;

  /// Volume attributed to one basis index: pitch^d on grids; window volume per
  /// site on site bases.
  double cell_measure() const;

  bool same_as(const Basis& other) const;

 private:
  BasisKind kind_ = BasisKind::site;
  Box window_;
  Boundary boundary_ = Boundary::open;
  RMat positions_;
  double pitch_ = 0.0;
  std::vector<long> shape_;
  DeloneSet set_;
  int orbitals_ = 1;
};

using BasisPtr = std::shared_ptr<const Basis>;

}  // namespace apw
