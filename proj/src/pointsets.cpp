#include "apw/pointsets.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "apw/errors.hpp"

namespace apw {

// ---------------------------------------------------------------- Box

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= std::max(0.0, edge(i));
  return v;
}

bool Box::empty() const {
  for (int i = 0; i < dim(); ++i)
    if (!(hi[i] > lo[i])) return true;
  return dim() == 0;
}

bool Box::contains(const RVec& x, double tol) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  return true;
}

Box Box::eroded(double margin) const {
  Box b = *this;
  for (int i = 0; i < dim(); ++i) {
    b.lo[i] += margin;
    b.hi[i] -= margin;
  }
  return b;
}

RVec Box::centre() const {
  RVec c(dim());
  for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Box Box::scaled(double fraction) const {
  Box b = *this;
  for (int i = 0; i < dim(); ++i) {
    const double mid = 0.5 * (lo[i] + hi[i]);
    const double half = 0.5 * fraction * edge(i);
    b.lo[i] = mid - half;
    b.hi[i] = mid + half;
  }
  return b;
}

Box Box::cube(int dim, double lo, double hi) {
  return Box{std::vector<double>(std::size_t(dim), lo), std::vector<double>(std::size_t(dim), hi)};
}

// ---------------------------------------------------------------- PointIndex

PointIndex::PointIndex(const RMat& points, double cell)
    : points_(points), dim_(int(points.cols())), cell_(cell) {
  if (!(cell > 0.0)) throw Error(Errc::invalid_argument, "PointIndex: cell size must be positive");
  origin_.assign(std::size_t(dim_), 0.0);
  extent_.assign(std::size_t(dim_), 1);
  if (points.rows() == 0) {
    buckets_.resize(1);
    return;
  }
  for (int a = 0; a < dim_; ++a) {
    const double lo = points.col(a).minCoeff();
    const double hi = points.col(a).maxCoeff();
    origin_[std::size_t(a)] = lo;
    extent_[std::size_t(a)] = std::max(1L, long(std::floor((hi - lo) / cell)) + 1);
  }
  long total = 1;
  for (long e : extent_) total *= e;
  buckets_.resize(static_cast<std::size_t>(total));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    auto c = cell_of(points.row(i).transpose());
    buckets_[std::size_t(flat(c))].push_back(static_cast<std::size_t>(i));
  }
}

std::vector<long> PointIndex::cell_of(const RVec& x) const {
  std::vector<long> c(static_cast<std::size_t>(dim_));
  for (int a = 0; a < dim_; ++a)
    c[std::size_t(a)] = long(std::floor((x[a] - origin_[std::size_t(a)]) / cell_));
  return c;
}

long PointIndex::flat(const std::vector<long>& c) const {
  long f = 0;
  for (int a = dim_ - 1; a >= 0; --a) f = f * extent_[std::size_t(a)] + c[std::size_t(a)];
  return f;
}

void PointIndex::visit_shell(const std::vector<long>& centre, long k,
                             const std::function<void(long)>& visit) const {
  std::vector<long> lo(static_cast<std::size_t>(dim_)), hi(static_cast<std::size_t>(dim_)), cur(static_cast<std::size_t>(dim_));
  for (int a = 0; a < dim_; ++a) {
    lo[std::size_t(a)] = std::max(0L, centre[std::size_t(a)] - k);
    hi[std::size_t(a)] = std::min(extent_[std::size_t(a)] - 1, centre[std::size_t(a)] + k);
    if (lo[std::size_t(a)] > hi[std::size_t(a)]) return;
  }
  cur = lo;
  for (;;) {
    long cheb = 0;
    for (int a = 0; a < dim_; ++a)
      cheb = std::max(cheb, std::abs(cur[std::size_t(a)] - centre[std::size_t(a)]));
    if (cheb == k) visit(flat(cur));
    int a = 0;
    while (a < dim_) {
      if (++cur[std::size_t(a)] <= hi[std::size_t(a)]) break;
      cur[std::size_t(a)] = lo[std::size_t(a)];
      ++a;
    }
    if (a == dim_) return;
  }
}

std::pair<std::size_t, double> PointIndex::nearest(const RVec& x,
                                                   std::optional<std::size_t> exclude) const {
  const auto c = cell_of(x);
  long kmax = 0;
  for (int a = 0; a < dim_; ++a) {
    kmax = std::max(kmax, std::abs(c[std::size_t(a)]));
    kmax = std::max(kmax, std::abs(c[std::size_t(a)] - extent_[std::size_t(a)] + 1));
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = std::numeric_limits<std::size_t>::max();
  for (long k = 0; k <= kmax; ++k) {
    visit_shell(c, k, [&](long cell) {
      for (std::size_t i : buckets_[std::size_t(cell)]) {
        if (exclude && *exclude == i) continue;
        const double d = (points_.row(Eigen::Index(i)).transpose() - x).norm();
        if (d < best || (d == best && i < best_i)) {
          best = d;
          best_i = i;
        }
      }
    });
    if (best <= double(k) * cell_) break;
  }
  return {best_i, best};
}

std::vector<std::size_t> PointIndex::within(const RVec& x, double radius) const {
  std::vector<std::size_t> out;
  const auto c = cell_of(x);
  const long reach = long(std::ceil(radius / cell_));
  for (long k = 0; k <= reach; ++k) {
    visit_shell(c, k, [&](long cell) {
      for (std::size_t i : buckets_[std::size_t(cell)])
        if ((points_.row(Eigen::Index(i)).transpose() - x).norm() < radius) out.push_back(i);
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- generators

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::periodic_square: return "periodic-square";
    case GeneratorKind::periodic_triangular: return "periodic-triangular";
    case GeneratorKind::cut_and_project: return "cut-and-project";
    case GeneratorKind::jittered_periodic: return "jittered-periodic";
    case GeneratorKind::random_hardcore: return "random-hardcore";
  }
  return "?";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  for (auto k : {GeneratorKind::periodic_square, GeneratorKind::periodic_triangular,
                 GeneratorKind::cut_and_project, GeneratorKind::jittered_periodic,
                 GeneratorKind::random_hardcore})
    if (to_string(k) == name) return k;
  throw Error(Errc::invalid_argument, "unknown generator kind '" + name + "'");
}

namespace {

constexpr double kTightEps = 1e-12;

RMat to_matrix(const std::vector<RVec>& pts, int dim) {
  RMat m(Eigen::Index(pts.size()), dim);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(Eigen::Index(i)) = pts[i].transpose();
  return m;
}

std::vector<RVec> square_lattice(const Box& w, double a) {
  const int d = w.dim();
  std::vector<long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    lo[std::size_t(i)] = long(std::ceil(w.lo[i] / a - kTightEps));
    hi[std::size_t(i)] = long(std::floor(w.hi[i] / a + kTightEps));
    if (hi[std::size_t(i)] < lo[std::size_t(i)]) return {};
  }
  std::vector<RVec> pts;
  std::vector<long> n = lo;
  for (;;) {
    RVec p(d);
    for (int i = 0; i < d; ++i) p[i] = a * double(n[std::size_t(i)]);
    pts.push_back(p);
    int i = 0;
    while (i < d) {
      if (++n[std::size_t(i)] <= hi[std::size_t(i)]) break;
      n[std::size_t(i)] = lo[std::size_t(i)];
      ++i;
    }
    if (i == d) break;
  }
  return pts;
}

std::vector<RVec> triangular_lattice(const Box& w, double a) {
  std::vector<RVec> pts;
  const double h = a * std::sqrt(3.0) / 2.0;
  const long j0 = long(std::ceil(w.lo[1] / h - kTightEps));
  const long j1 = long(std::floor(w.hi[1] / h + kTightEps));
  for (long j = j0; j <= j1; ++j) {
    const double shift = 0.5 * a * double(j);
    const long i0 = long(std::ceil((w.lo[0] - shift) / a - kTightEps));
    const long i1 = long(std::floor((w.hi[0] - shift) / a + kTightEps));
    for (long i = i0; i <= i1; ++i) {
      RVec p(2);
      p << a * double(i) + shift, h * double(j);
      if (w.contains(p, 1e-12)) pts.push_back(p);
    }
  }
  return pts;
}

/// Ammann-Beenker vertex set from Z^4 with an octagonal acceptance window
/// shifted by `gamma` in internal space.
std::vector<RVec> ammann_beenker(const Box& w, double a, const RVec& gamma) {
  double e[4][2], ep[4][2], u[4][2], h[4];
  for (int k = 0; k < 4; ++k) {
    e[k][0] = std::cos(k * kPi / 4);
    e[k][1] = std::sin(k * kPi / 4);
    ep[k][0] = std::cos(3 * k * kPi / 4);
    ep[k][1] = std::sin(3 * k * kPi / 4);
    u[k][0] = -ep[k][1];
    u[k][1] = ep[k][0];
  }
  for (int k = 0; k < 4; ++k) {
    h[k] = 0.0;
    for (int j = 0; j < 4; ++j) h[k] += 0.5 * std::abs(ep[j][0] * u[k][0] + ep[j][1] * u[k][1]);
  }
  double rho = 0.0;
  for (int k = 0; k < 4; ++k) rho += 0.5 * std::hypot(ep[k][0], ep[k][1]);
  rho += gamma.norm();
  // n_k = (<e_k, x/a> + <ep_k, y>) / 2
  long lo[4], hi[4];
  for (int k = 0; k < 4; ++k) {
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy) {
        const double x = cx ? w.hi[0] : w.lo[0];
        const double y = cy ? w.hi[1] : w.lo[1];
        const double v = (e[k][0] * x + e[k][1] * y) / a;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    lo[k] = long(std::floor(0.5 * (mn - rho))) - 1;
    hi[k] = long(std::ceil(0.5 * (mx + rho))) + 1;
  }
  std::vector<RVec> pts;
  for (long n0 = lo[0]; n0 <= hi[0]; ++n0)
    for (long n1 = lo[1]; n1 <= hi[1]; ++n1)
      for (long n2 = lo[2]; n2 <= hi[2]; ++n2)
        for (long n3 = lo[3]; n3 <= hi[3]; ++n3) {
          const long n[4] = {n0, n1, n2, n3};
          double y0 = -gamma[0], y1 = -gamma[1];
          for (int k = 0; k < 4; ++k) {
            y0 += double(n[k]) * ep[k][0];
            y1 += double(n[k]) * ep[k][1];
          }
          bool inside = true;
          for (int k = 0; k < 4 && inside; ++k)
            inside = std::abs(y0 * u[k][0] + y1 * u[k][1]) <= h[k];
          if (!inside) continue;
          RVec p = RVec::Zero(2);
          for (int k = 0; k < 4; ++k) {
            p[0] += a * double(n[k]) * e[k][0];
            p[1] += a * double(n[k]) * e[k][1];
          }
          if (w.contains(p)) pts.push_back(p);
        }
  return pts;
}

RVec uniform_in_ball(std::mt19937_64& rng, int d, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    RVec v(d);
    for (int i = 0; i < d; ++i) v[i] = u(rng);
    if (v.squaredNorm() <= 1.0) return radius * v;
  }
}

double covering_radius_on(const RMat& pts, const Box& region, double pitch, std::size_t* probes) {
  PointIndex index(pts, std::max(pitch * 4.0, 1e-6));
  const int d = region.dim();
  std::vector<long> count(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    count[std::size_t(i)] = std::max(1L, long(std::ceil(region.edge(i) / pitch))) + 1;
  std::vector<long> n(std::size_t(d), 0);
  double worst = 0.0;
  std::size_t total = 0;
  for (;;) {
    RVec x(d);
    for (int i = 0; i < d; ++i)
      x[i] = region.lo[i] + region.edge(i) * double(n[std::size_t(i)]) /
                                double(count[std::size_t(i)] - 1);
    worst = std::max(worst, index.nearest(x).second);
    ++total;
    int i = 0;
    while (i < d) {
      if (++n[std::size_t(i)] < count[std::size_t(i)]) break;
      n[std::size_t(i)] = 0;
      ++i;
    }
    if (i == d) break;
  }
  if (probes) *probes = total;
  return worst;
}

double min_pair_distance(const RMat& pts, double cell) {
  if (pts.rows() < 2) return std::numeric_limits<double>::infinity();
  PointIndex index(pts, cell);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    best = std::min(best, index.nearest(pts.row(i).transpose(), std::size_t(i)).second);
  return best;
}

void check_window(const Box& window) {
  if (window.empty()) throw Error(Errc::invalid_argument, "generate: window is empty");
}

}  // namespace

DeloneSet generate(GeneratorKind kind, const GeneratorParams& params, const Box& window,
                   std::uint64_t seed) {
  check_window(window);
  const int d = window.dim();
  const double a = params.spacing;
  if (!(a > 0.0)) throw Error(Errc::invalid_argument, "generate: spacing must be positive");
  std::mt19937_64 rng(seed);
  DeloneSet set;
  set.dim = d;
  set.window = window;

  switch (kind) {
    case GeneratorKind::periodic_square: {
      set.points = to_matrix(square_lattice(window, a), d);
      set.r = 0.5 * a * (1.0 - kTightEps);
      set.R = std::max(0.75 * a, 1.06 * 0.5 * a * std::sqrt(double(d)));
      break;
    }
    case GeneratorKind::periodic_triangular: {
      if (d != 2) throw Error(Errc::invalid_argument, "periodic-triangular requires dim 2");
      set.points = to_matrix(triangular_lattice(window, a), d);
      set.r = 0.5 * a * (1.0 - kTightEps);
      set.R = 1.05 * a / std::sqrt(3.0);
      break;
    }
    case GeneratorKind::jittered_periodic: {
      const double delta = params.jitter;
      if (!(delta >= 0.0) || delta >= 0.5 * a)
        throw Error(Errc::invalid_argument, "jittered-periodic: jitter must lie in [0, spacing/2)");
      std::vector<RVec> pts;
      for (const RVec& p : square_lattice(window, a)) {
        RVec q = p + uniform_in_ball(rng, d, delta);
        if (window.contains(q)) pts.push_back(q);
      }
      set.points = to_matrix(pts, d);
      set.r = 0.5 * (a - 2.0 * delta) * (1.0 - kTightEps);
      set.R = 1.05 * (0.5 * a * std::sqrt(double(d)) + delta);
      set.R = std::max(set.R, 0.75 * a);
      break;
    }
    case GeneratorKind::cut_and_project: {
      if (d != 2) throw Error(Errc::invalid_argument, "cut-and-project (Ammann-Beenker) requires dim 2");
      std::uniform_real_distribution<double> u(-0.05, 0.05);
      RVec gamma(2);
      gamma << u(rng), u(rng);
      set.points = to_matrix(ammann_beenker(window, a, gamma), d);
      if (set.points.rows() < 2)
        throw Error(Errc::generation_failed, "cut-and-project: window holds fewer than two points");
      set.r = 0.5 * min_pair_distance(set.points, a) * (1.0 - 1e-9);
      double R = a;
      for (int it = 0; it < 3; ++it) {
        const Box eroded = window.eroded(R);
        if (eroded.empty()) break;
        R = 1.05 * covering_radius_on(set.points, eroded, set.r / 4.0, nullptr);
      }
      set.R = std::max(R, set.r * 1.0001);
      break;
    }
    case GeneratorKind::random_hardcore: {
      const double r = params.r;
      if (!(r > 0.0) || !(params.R > r))
        throw Error(Errc::invalid_argument, "random-hardcore: need 0 < r < R");
      const double cell = 2.0 * r;
      std::vector<long> extent(static_cast<std::size_t>(d));
      long total = 1;
      for (int i = 0; i < d; ++i) {
        extent[std::size_t(i)] = long(std::floor(window.edge(i) / cell)) + 1;
        total *= extent[std::size_t(i)];
      }
      std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(total));
      std::vector<RVec> pts;
      auto cell_coords = [&](const RVec& x) {
        std::vector<long> c(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
          c[std::size_t(i)] = std::clamp(long(std::floor((x[i] - window.lo[i]) / cell)), 0L,
                                         extent[std::size_t(i)] - 1);
        return c;
      };
      auto flat = [&](const std::vector<long>& c) {
        long f = 0;
        for (int i = d - 1; i >= 0; --i) f = f * extent[std::size_t(i)] + c[std::size_t(i)];
        return f;
      };
      auto admissible = [&](const RVec& x) {
        const auto c = cell_coords(x);
        std::vector<long> off(std::size_t(d), -1);
        for (;;) {
          std::vector<long> nb(static_cast<std::size_t>(d));
          bool ok = true;
          for (int i = 0; i < d; ++i) {
            nb[std::size_t(i)] = c[std::size_t(i)] + off[std::size_t(i)];
            ok = ok && nb[std::size_t(i)] >= 0 && nb[std::size_t(i)] < extent[std::size_t(i)];
          }
          if (ok)
            for (std::size_t j : buckets[std::size_t(flat(nb))])
              if ((pts[j] - x).norm() < 2.0 * r) return false;
          int i = 0;
          while (i < d) {
            if (++off[std::size_t(i)] <= 1) break;
            off[std::size_t(i)] = -1;
            ++i;
          }
          if (i == d) return true;
        }
      };
      auto insert = [&](const RVec& x) {
        buckets[std::size_t(flat(cell_coords(x)))].push_back(pts.size());
        pts.push_back(x);
      };
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int dart = 0; dart < params.max_darts; ++dart) {
        RVec x(d);
        for (int i = 0; i < d; ++i) x[i] = window.lo[i] + u(rng) * window.edge(i);
        if (admissible(x)) insert(x);
      }
      // gap filling on a probe lattice
      const double pitch = r / 4.0;
      std::vector<long> count(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i)
        count[std::size_t(i)] = long(std::floor(window.edge(i) / pitch)) + 1;
      std::vector<long> n(std::size_t(d), 0);
      for (;;) {
        RVec x(d);
        for (int i = 0; i < d; ++i) x[i] = window.lo[i] + pitch * double(n[std::size_t(i)]);
        if (admissible(x)) insert(x);
        int i = 0;
        while (i < d) {
          if (++n[std::size_t(i)] < count[std::size_t(i)]) break;
          n[std::size_t(i)] = 0;
          ++i;
        }
        if (i == d) break;
      }
      set.points = to_matrix(pts, d);
      set.r = r;
      set.R = params.R;
      const auto rep = verify(set);
      if (!rep.is_R_dense || !rep.is_r_discrete)
        throw Error(Errc::generation_failed,
                    "random-hardcore: covering radius " + std::to_string(rep.covering_radius) +
                        " does not reach R = " + std::to_string(params.R));
      break;
    }
  }
  if (set.points.rows() == 0) throw Error(Errc::generation_failed, "generate: no points in window");
  return set;
}

VerificationReport verify(const DeloneSet& set) {
  if (set.points.rows() == 0) throw Error(Errc::invalid_argument, "verify: empty point set");
  const Box eroded = set.window.eroded(set.R);
  if (eroded.empty())
    throw Error(Errc::empty_window, "verify: window eroded by R is empty");
  VerificationReport rep;
  rep.min_pair_dist = min_pair_distance(set.points, std::max(set.r, 1e-6) * 2.0);
  rep.probe_pitch = set.r / 4.0;
  rep.covering_radius = covering_radius_on(set.points, eroded, rep.probe_pitch, &rep.probes);
  rep.is_r_discrete = rep.min_pair_dist >= 2.0 * set.r;
  rep.is_R_dense = rep.covering_radius < set.R;
  return rep;
}

double hausdorff_window_distance(const DeloneSet& a, const DeloneSet& b, double M) {
  if (a.dim != b.dim) throw Error(Errc::invalid_argument, "hausdorff: dimension mismatch");
  auto restrict_ball = [M](const DeloneSet& s) {
    std::vector<RVec> in;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.point(i).norm() < M) in.push_back(s.point(i));
    return to_matrix(in, s.dim);
  };
  const RMat pa = restrict_ball(a);
  const RMat pb = restrict_ball(b);
  if (pa.rows() == 0 || pb.rows() == 0)
    throw Error(Errc::empty_intersection, "hausdorff: a restriction to B(0;M) is empty");
  const double cell = std::max({a.r, b.r, 1e-3});
  auto directed = [cell](const RMat& from, const RMat& to) {
    PointIndex index(to, cell);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < from.rows(); ++i)
      worst = std::max(worst, index.nearest(from.row(i).transpose()).second);
    return worst;
  };
  return std::max(directed(pa, pb), directed(pb, pa));
}

DeformationPath make_path(const DeloneSet& a, const DeloneSet& b, int n_samples) {
  if (n_samples < 2) throw Error(Errc::invalid_argument, "make_path: need at least two samples");
  if (a.dim != b.dim || !(a.window == b.window))
    throw Error(Errc::invalid_argument, "make_path: sets must share dimension and window");
  if (a.size() != b.size())
    throw Error(Errc::no_bijection, "make_path: cardinalities differ");
  const double r = std::min(a.r, b.r);
  PointIndex index(b.points, std::max(r, 1e-6) * 2.0);
  DeformationPath path;
  path.matching.resize(a.size());
  std::vector<char> used(b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto [j, dist] = index.nearest(a.point(i));
    if (used[j] || !(dist < r))
      throw Error(Errc::no_bijection, "make_path: nearest-neighbour matching is not a bijection with "
                                      "displacement below r");
    used[j] = 1;
    path.matching[i] = j;
    path.max_displacement = std::max(path.max_displacement, dist);
  }
  RMat target(a.points.rows(), a.dim);
  for (std::size_t i = 0; i < a.size(); ++i)
    target.row(Eigen::Index(i)) = b.points.row(Eigen::Index(path.matching[i]));

  const double r_path = r - path.max_displacement;
  const double R_path = std::max(a.R, b.R) + path.max_displacement;
  for (int k = 0; k < n_samples; ++k) {
    const double t = double(k) / double(n_samples - 1);
    DeloneSet s;
    s.dim = a.dim;
    s.window = a.window;
    if (k == 0) {
      s.points = a.points;
      s.r = a.r;
      s.R = a.R;
    } else if (k == n_samples - 1) {
      s.points = b.points;
      s.r = b.r;
      s.R = b.R;
    } else {
      s.points = (1.0 - t) * a.points + t * target;
      s.r = r_path;
      s.R = R_path;
    }
    const auto rep = verify(s);
    if (!rep.is_r_discrete || !rep.is_R_dense)
      throw Error(Errc::density_violated,
                  "make_path: interpolant at t=" + std::to_string(t) + " fails verification");
    path.t.push_back(t);
    path.samples.push_back(std::move(s));
  }
  return path;
}

DeloneSet recentre(const DeloneSet& set, std::size_t index) {
  DeloneSet out = set;
  const RVec y = set.point(index);
  out.points.rowwise() -= y.transpose();
  for (int i = 0; i < set.dim; ++i) {
    out.window.lo[std::size_t(i)] -= y[i];
    out.window.hi[std::size_t(i)] -= y[i];
  }
  return out;
}

void write_pointset(std::ostream& out, const DeloneSet& set) {
  out << std::setprecision(17);
  out << set.dim << ' ' << set.r << ' ' << set.R << '\n';
  out << "window";
  for (int i = 0; i < set.dim; ++i) out << ' ' << set.window.lo[std::size_t(i)] << ' ' << set.window.hi[std::size_t(i)];
  out << '\n';
  for (Eigen::Index i = 0; i < set.points.rows(); ++i) {
    for (int j = 0; j < set.dim; ++j) out << (j ? " " : "") << set.points(i, j);
    out << '\n';
  }
}

DeloneSet read_pointset(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  if (lines.size() < 2) throw Error(Errc::io_error, "pointset: missing header lines");
  DeloneSet set;
  {
    std::istringstream h(lines[0]);
    if (!(h >> set.dim >> set.r >> set.R) || set.dim < 1)
      throw Error(Errc::io_error, "pointset: header must be 'dim r R'");
  }
  {
    std::istringstream w(lines[1]);
    std::string tag;
    w >> tag;
    if (tag != "window") throw Error(Errc::io_error, "pointset: second line must start with 'window'");
    set.window.lo.resize(std::size_t(set.dim));
    set.window.hi.resize(std::size_t(set.dim));
    for (int i = 0; i < set.dim; ++i)
      if (!(w >> set.window.lo[std::size_t(i)] >> set.window.hi[std::size_t(i)]))
        throw Error(Errc::io_error, "pointset: window needs lo/hi per axis");
  }
  set.points.resize(Eigen::Index(lines.size() - 2), set.dim);
  for (std::size_t k = 2; k < lines.size(); ++k) {
    std::istringstream p(lines[k]);
    for (int j = 0; j < set.dim; ++j)
      if (!(p >> set.points(Eigen::Index(k - 2), j)))
        throw Error(Errc::io_error, "pointset: malformed point on data line " + std::to_string(k - 1));
  }
  return set;
}

}  // namespace apw
