#include "apw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>

#include "apw/errors.hpp"

namespace apw {

Eigensystem eig(const CMat& h) {
  if (h.rows() != h.cols()) throw Error(Errc::invalid_argument, "eig: matrix is not square");
  if (h.rows() == 0) return {};
  if (hermiticity_defect(h) > 1e-10 * (1.0 + max_abs(h)))
    throw Error(Errc::not_hermitian, "eig: operator is not Hermitian");
  const CMat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym);
  if (es.info() != Eigen::Success) throw Error(Errc::invalid_argument, "eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigensystem eig(const KernelOperator& h) { return eig(h.matrix); }

std::vector<Interval> detect_gaps(const RVec& v, double min_gap) {
  std::vector<Interval> gaps;
  for (Eigen::Index k = 0; k + 1 < v.size(); ++k)
    if (v[k + 1] - v[k] >= min_gap) gaps.push_back({v[k], v[k + 1]});
  return gaps;
}

std::string to_string(ProjectionBackend b) {
  return b == ProjectionBackend::eigensum ? "eigensum" : "chebyshev";
}

ProjectionBackend backend_from_string(const std::string& name) {
  if (name == "eigensum") return ProjectionBackend::eigensum;
  if (name == "chebyshev") return ProjectionBackend::chebyshev;
  throw Error(Errc::invalid_argument, "unknown projection backend '" + name + "'");
}

double gap_margin(const RVec& values, const Interval& delta) {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < values.size(); ++k)
    m = std::min({m, std::abs(values[k] - delta.lo), std::abs(values[k] - delta.hi)});
  return m;
}

Interval below_gap(const RVec& values, const std::vector<Interval>& gaps, std::size_t k) {
  if (k >= gaps.size()) throw Error(Errc::gap_closed, "requested gap " + std::to_string(k) + " not found");
  return {values[0] - 1.0, gaps[k].mid()};
}

Interval between_gaps(const RVec& values, const std::vector<Interval>& gaps, int k1, int k2) {
  if (k2 <= k1 || k2 > int(gaps.size()) || k1 < -1)
    throw Error(Errc::gap_closed, "requested gap range not available");
  return {k1 < 0 ? values[0] - 1.0 : gaps[std::size_t(k1)].mid(),
          k2 == int(gaps.size()) ? values[values.size() - 1] + 1.0 : gaps[std::size_t(k2)].mid()};
}

SpectralProjection spectral_projection(const KernelOperator& h, const Eigensystem& es,
                                       const Interval& delta, const ProjectionOptions& opt) {
  if (!(delta.hi > delta.lo)) throw Error(Errc::invalid_argument, "spectral_projection: empty interval");
  const double margin = gap_margin(es.values, delta);
  if (margin < opt.min_gap / 10.0)
    throw Error(Errc::endpoint_in_spectrum, "spectral_projection: interval endpoint within min_gap/10 of an eigenvalue");
  if (opt.backend == ProjectionBackend::chebyshev) return chebyshev_projection(h, delta, margin, opt.degree);

  std::vector<Eigen::Index> inside;
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    if (es.values[k] > delta.lo && es.values[k] < delta.hi) inside.push_back(k);
  SpectralProjection p;
  p.delta = delta;
  p.gap_margin = margin;
  p.basis = h.basis;
  p.rank = int(inside.size());
  p.range.resize(es.vectors.rows(), Eigen::Index(inside.size()));
  for (std::size_t j = 0; j < inside.size(); ++j) p.range.col(Eigen::Index(j)) = es.vectors.col(inside[j]);
  p.matrix = p.range * p.range.adjoint();
  p.backend = ProjectionBackend::eigensum;
  return p;
}

SpectralProjection spectral_projection(const KernelOperator& h, const Interval& delta,
                                       const ProjectionOptions& opt) {
  return spectral_projection(h, eig(h), delta, opt);
}

int chebyshev_default_degree(double halfwidth, double margin) {
  const double w = margin / 5.0;
  return int(std::ceil(2.0 * std::sqrt(std::log(1e12)) * halfwidth / w)) + 10;
}

SpectralProjection chebyshev_projection(const KernelOperator& h, const Interval& delta,
                                        double margin, int degree) {
  if (!(margin > 0.0)) throw Error(Errc::endpoint_in_spectrum, "chebyshev projection needs a positive gap margin");
  if (hermiticity_defect(h.matrix) > 1e-10 * (1.0 + max_abs(h.matrix)))
    throw Error(Errc::not_hermitian, "spectral_projection: operator is not Hermitian");
  const Eigen::Index n = h.matrix.rows();
  double a = std::numeric_limits<double>::infinity(), b = -a;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double radius = h.matrix.row(i).cwiseAbs().sum() - std::abs(h.matrix(i, i));
    a = std::min(a, h.matrix(i, i).real() - radius);
    b = std::max(b, h.matrix(i, i).real() + radius);
  }
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a) * (1.0 + 1e-9) + 1e-12;
  if (degree <= 0) degree = chebyshev_default_degree(half, margin);

  const double w = margin / 5.0;
  auto f = [&](double x) { return 0.5 * (std::erf((x - delta.lo) / w) - std::erf((x - delta.hi) / w)); };
  const int nodes = std::max(4 * degree, 512);
  std::vector<double> coef(std::size_t(degree) + 1, 0.0);
  for (int j = 0; j < nodes; ++j) {
    const double th = kPi * (j + 0.5) / nodes;
    const double fx = f(centre + half * std::cos(th));
    for (int k = 0; k <= degree; ++k) coef[std::size_t(k)] += fx * std::cos(k * th);
  }
  for (int k = 0; k <= degree; ++k) coef[std::size_t(k)] *= (k == 0 ? 1.0 : 2.0) / nodes;

  Eigen::SparseMatrix<cplx> hs = ((h.matrix - centre * CMat::Identity(n, n)) / half).sparseView(1.0, 0.0);
  hs.makeCompressed();
  CMat prev = CMat::Identity(n, n);
  CMat cur = hs * prev;
  CMat acc = coef[0] * prev;
  if (degree >= 1) acc += coef[1] * cur;
  for (int k = 2; k <= degree; ++k) {
    CMat next = 2.0 * (hs * cur) - prev;
    acc += coef[std::size_t(k)] * next;
    prev.swap(cur);
    cur.swap(next);
  }
  SpectralProjection p;
  p.matrix = 0.5 * (acc + acc.adjoint());
  p.delta = delta;
  p.gap_margin = margin;
  p.basis = h.basis;
  p.rank = int(std::lround(p.matrix.trace().real()));
  p.backend = ProjectionBackend::chebyshev;
  p.degree = degree;
  return p;
}

CMat range_basis(const SpectralProjection& p) {
  if (p.range.cols() == p.rank && p.range.rows() == p.matrix.rows() && p.rank > 0) return p.range;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (p.matrix + p.matrix.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()[k] > 0.5) keep.push_back(k);
  CMat v(p.matrix.rows(), Eigen::Index(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) v.col(Eigen::Index(j)) = es.eigenvectors().col(keep[j]);
  return v;
}

double idempotency_defect(const CMat& p) { return spectral_norm(p * p - p); }

}  // namespace apw
