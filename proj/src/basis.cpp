#include "apw/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apw/errors.hpp"

namespace apw {

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string& name) {
  if (name == "open") return Boundary::open;
  if (name == "periodic") return Boundary::periodic;
  throw Error(Errc::invalid_argument, "unknown boundary '" + name + "'");
}

Basis Basis::grid(const Box& window, double pitch, Boundary boundary) {
  if (window.empty()) throw Error(Errc::invalid_argument, "grid basis: empty window");
  if (!(pitch > 0.0)) throw Error(Errc::invalid_argument, "grid basis: pitch must be positive");
  Basis b;
  b.kind_ = BasisKind::grid;
  b.window_ = window;
  b.boundary_ = boundary;
  b.pitch_ = pitch;
  const int d = window.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) {
    const double cells = window.edge(i) / pitch;
    const long n = std::lround(cells);
    if (n < 1 || std::abs(cells - double(n)) > 1e-9 * std::max(1.0, cells))
      throw Error(Errc::invalid_argument, "grid basis: pitch does not divide window edge");
    b.shape_.push_back(n);
    total *= std::size_t(n);
  }
  b.positions_.resize(Eigen::Index(total), d);
  for (std::size_t k = 0; k < total; ++k) {
    const auto n = b.grid_coords(k);
    for (int i = 0; i < d; ++i)
      b.positions_(Eigen::Index(k), i) = window.lo[std::size_t(i)] + (double(n[std::size_t(i)]) + 0.5) * pitch;
  }
  return b;
}

Basis Basis::sites(const DeloneSet& set, Boundary boundary, int orbitals) {
  if (set.points.rows() == 0) throw Error(Errc::invalid_argument, "site basis: empty point set");
  if (orbitals < 1) throw Error(Errc::invalid_argument, "site basis: orbitals must be >= 1");
  Basis b;
  b.kind_ = BasisKind::site;
  b.window_ = set.window;
  b.boundary_ = boundary;
  b.orbitals_ = orbitals;
  std::vector<Eigen::Index> order(std::size_t(set.points.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index c) {
    for (int j = 0; j < set.dim; ++j) {
      if (set.points(a, j) < set.points(c, j)) return true;
      if (set.points(a, j) > set.points(c, j)) return false;
    }
    return false;
  });
  b.set_ = set;
  for (std::size_t i = 0; i < order.size(); ++i)
    b.set_.points.row(Eigen::Index(i)) = set.points.row(order[i]);
  b.positions_.resize(set.points.rows() * orbitals, set.dim);
  for (Eigen::Index i = 0; i < set.points.rows(); ++i)
    for (int o = 0; o < orbitals; ++o) b.positions_.row(i * orbitals + o) = b.set_.points.row(i);
  return b;
}

std::size_t Basis::grid_index(const std::vector<long>& n) const {
  std::size_t idx = 0;
  for (int i = dim() - 1; i >= 0; --i) idx = idx * std::size_t(shape_[std::size_t(i)]) + std::size_t(n[std::size_t(i)]);
  return idx;
}

std::vector<long> Basis::grid_coords(std::size_t index) const {
  std::vector<long> n(shape_.size());
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    n[i] = long(index % std::size_t(shape_[i]));
    index /= std::size_t(shape_[i]);
  }
  return n;
}

RVec Basis::image_shift(const RVec& x, const RVec& y) const {
  RVec a = RVec::Zero(dim());
  if (!periodic()) return a;
  for (int i = 0; i < dim(); ++i) {
    const double L = window_.edge(i);
    a[i] = L * std::round((y[i] - x[i]) / L);
  }
  return a;
}

RVec Basis::displacement(const RVec& from, const RVec& to) const {
  return to - (from + image_shift(from, to));
}

RVec Basis::displacement(std::size_t i, std::size_t j) const {
  return displacement(position(i), position(j));
}

double Basis::cell_measure() const {
  if (kind_ == BasisKind::grid) return std::pow(pitch_, dim());
  return window_.volume() / double(n_sites());
}

bool Basis::same_as(const Basis& o) const {
  return this == &o || (kind_ == o.kind_ && boundary_ == o.boundary_ && window_ == o.window_ &&
                        orbitals_ == o.orbitals_ && positions_.rows() == o.positions_.rows() &&
                        positions_.cols() == o.positions_.cols() && positions_ == o.positions_);
}

}  // namespace apw
