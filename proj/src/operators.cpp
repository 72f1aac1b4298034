#include "apw/operators.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "apw/errors.hpp"
#include "apw/parallel.hpp"

namespace apw {

double smooth_step_down(double s, double s0, double s1) {
  if (s <= s0) return 1.0;
  if (s >= s1) return 0.0;
  const double u = (s - s0) / (s1 - s0);
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  return f(1.0 - u) / (f(1.0 - u) + f(u));
}

HoppingProfile HoppingProfile::exponential(double t, double a0, double decay, double cut,
                                           double range) {
  if (!(range > 0.0) || cut > range)
    throw Error(Errc::invalid_argument, "hopping: need 0 < cut <= range");
  HoppingProfile h;
  h.range = range;
  h.amplitude = [=](const RVec& s) -> cplx {
    const double d = s.norm();
    if (d >= range || d == 0.0) return 0.0;
    const double radial = decay > 0.0 ? std::exp(-(d - a0) / decay) : 1.0;
    return -t * radial * smooth_step_down(d, cut, range);
  };
  return h;
}

HoppingProfile HoppingProfile::zero(double range) {
  HoppingProfile h;
  h.range = range;
  h.amplitude = [](const RVec&) -> cplx { return 0.0; };
  return h;
}

AtomicPotential AtomicPotential::gaussian_well(double depth, double width, double support) {
  AtomicPotential v;
  v.support = support;
  v.profile = [=](const RVec& x) {
    const double d = x.norm();
    if (d >= support) return 0.0;
    return -depth * std::exp(-d * d / (2.0 * width * width)) * smooth_step_down(d, 0.6 * support, support);
  };
  return v;
}

AtomicPotential AtomicPotential::zero() {
  AtomicPotential v;
  v.support = 1.0;
  v.profile = [](const RVec&) { return 0.0; };
  return v;
}

namespace {

void check_commensurate(const Basis& b, const MagneticCocycle& c) {
  if (!b.periodic() || c.trivial()) return;
  for (int i = 0; i < b.dim(); ++i)
    for (int j = i + 1; j < b.dim(); ++j) {
      const double phase = c.theta()(i, j) * b.window().edge(i) * b.window().edge(j);
      if (std::abs(std::sin(phase)) > 1e-9)
        throw Error(Errc::flux_not_commensurate,
                    "periodic boundary needs an integer number of flux quanta through the torus");
    }
}

}  // namespace

KernelOperator assemble_continuum(const DeloneSet& set, const AtomicPotential& v,
                                  const MagneticCocycle& c, const BasisPtr& grid) {
  const Basis& g = *grid;
  if (g.kind() != BasisKind::grid) throw Error(Errc::invalid_argument, "assemble_continuum needs a grid basis");
  if (set.dim != g.dim() || c.dim() != g.dim())
    throw Error(Errc::invalid_argument, "assemble_continuum: dimension mismatch");
  if (g.pitch() > set.r / 4.0 * (1.0 + 1e-12))
    throw Error(Errc::pitch_too_coarse, "assemble_continuum: grid pitch exceeds r/4");
  if (!v.profile || !(v.support > 0.0) || !std::isfinite(v.support))
    throw Error(Errc::potential_not_compact, "assemble_continuum: potential needs finite support");
  check_commensurate(g, c);

  const int d = g.dim();
  const double h = g.pitch();
  const double inv_h2 = 1.0 / (h * h);
  const Eigen::Index n = Eigen::Index(g.size());
  KernelOperator op;
  op.matrix = CMat::Zero(n, n);
  op.basis = grid;
  op.twist = c;
  op.hermitian = true;

  parallel_for(g.size(), [&](std::size_t k) {
    const RVec x = g.position(k);
    double diag = 2.0 * d * inv_h2;
    for (std::size_t p = 0; p < set.size(); ++p) {
      const RVec sep = g.displacement(set.point(p), x);
      if (sep.norm() < v.support) diag += v.profile(sep);
    }
    op.matrix(Eigen::Index(k), Eigen::Index(k)) = diag;
    const auto coords = g.grid_coords(k);
    for (int axis = 0; axis < d; ++axis)
      for (int dir : {-1, 1}) {
        auto nb = coords;
        nb[std::size_t(axis)] += dir;
        RVec shift = RVec::Zero(d);
        const long len = g.shape()[std::size_t(axis)];
        if (nb[std::size_t(axis)] < 0 || nb[std::size_t(axis)] >= len) {
          if (!g.periodic()) continue;
          if (len == 1) continue;
          const long wrapped = (nb[std::size_t(axis)] + len) % len;
          shift[axis] = double(nb[std::size_t(axis)] - wrapped) / double(len) * g.window().edge(axis);
          nb[std::size_t(axis)] = wrapped;
        }
        const std::size_t q = g.grid_index(nb);
        const RVec xq = g.position(q);
        const double phase = -c.form(x, xq + shift) - c.form(xq, shift);
        op.matrix(Eigen::Index(k), Eigen::Index(q)) += -inv_h2 * std::polar(1.0, phase);
      }
  });
  return op;
}

KernelOperator assemble_tightbinding(const BasisPtr& sites, const HoppingProfile& hop,
                                     const MagneticCocycle& c, const OnsiteRule& onsite) {
  const Basis& b = *sites;
  if (b.kind() != BasisKind::site) throw Error(Errc::invalid_argument, "assemble_tightbinding needs a site basis");
  if (c.dim() != b.dim()) throw Error(Errc::invalid_argument, "assemble_tightbinding: dimension mismatch");
  double min_edge = std::numeric_limits<double>::infinity();
  for (int i = 0; i < b.dim(); ++i) min_edge = std::min(min_edge, b.window().edge(i));
  if (!(hop.range < min_edge / 4.0))
    throw Error(Errc::range_too_large, "assemble_tightbinding: hopping range must be below window edge / 4");
  check_commensurate(b, c);

  const std::size_t ns = b.n_sites();
  const int orb = b.orbitals();
  const DeloneSet& set = b.set();
  KernelOperator op;
  op.matrix = CMat::Zero(Eigen::Index(b.size()), Eigen::Index(b.size()));
  op.basis = sites;
  op.twist = c;
  op.hermitian = true;

  parallel_for(ns, [&](std::size_t p) {
    const RVec xp = set.point(p);
    LocalPattern pattern;
    pattern.site = p;
    pattern.position = xp;
    for (std::size_t q = 0; q < ns; ++q) {
      if (q == p) continue;
      const RVec xq = set.point(q);
      const RVec a = b.image_shift(xq, xp);
      const RVec sep = xq + a - xp;
      if (sep.norm() >= hop.range) continue;
      pattern.neighbours.push_back(sep);
      const cplx amp = hop.amplitude(sep);
      if (amp == cplx(0.0)) continue;
      const cplx value = amp * std::polar(1.0, -c.form(xp, xq + a) - c.form(xq, a));
      for (int o = 0; o < orb; ++o)
        op.matrix(Eigen::Index(p * orb + o), Eigen::Index(q * orb + o)) += value;
    }
    const double e = onsite ? onsite(pattern) : 0.0;
    for (int o = 0; o < orb; ++o) op.matrix(Eigen::Index(p * orb + o), Eigen::Index(p * orb + o)) = e;
  });
  if (hermiticity_defect(op.matrix) > 1e-12)
    throw Error(Errc::not_hermitian, "assemble_tightbinding: hopping profile is not conjugate-symmetric");
  return op;
}

cplx loop_phase(const KernelOperator& h, const std::vector<std::size_t>& loop) {
  cplx prod = 1.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const cplx m = h.matrix(Eigen::Index(loop[k]), Eigen::Index(loop[(k + 1) % loop.size()]));
    if (m == cplx(0.0)) return 0.0;
    prod *= m / std::abs(m);
  }
  return prod;
}

KernelOperator twisted_convolve(const KernelOperator& f, const KernelOperator& g) {
  if (!f.basis || !g.basis || !f.basis->same_as(*g.basis) || !(f.twist == g.twist))
    throw Error(Errc::basis_mismatch, "twisted_convolve: operands live on different bases or twists");
  KernelOperator out;
  out.matrix = f.matrix * g.matrix;
  out.basis = f.basis;
  out.twist = f.twist;
  out.hermitian = false;
  return out;
}

CMat position_derivative(const KernelOperator& f, int axis) {
  const Basis& b = *f.basis;
  const Eigen::Index n = f.matrix.rows();
  CMat out(n, n);
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < n; ++p)
      out(p, q) = f.matrix(p, q) * b.displacement(std::size_t(p), std::size_t(q))[axis];
  return out;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void multi_indices(int dim, int max_order, std::vector<int>& cur, int axis,
                   std::vector<std::vector<int>>& out) {
  if (axis == dim) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int i = 0; i < axis; ++i) used += cur[std::size_t(i)];
  for (int k = 0; k + used <= max_order; ++k) {
    cur[std::size_t(axis)] = k;
    multi_indices(dim, max_order, cur, axis + 1, out);
  }
  cur[std::size_t(axis)] = 0;
}

}  // namespace

double frechet_seminorm(const KernelOperator& f, int n) {
  if (n < 0) throw Error(Errc::invalid_argument, "frechet_seminorm: n must be >= 0");
  const Basis& b = *f.basis;
  const int d = b.dim();
  const Eigen::Index size = f.matrix.rows();
  std::vector<RMat> disp(std::size_t(d), RMat(size, size));
  for (Eigen::Index p = 0; p < size; ++p)
    for (Eigen::Index q = 0; q < size; ++q) {
      const RVec s = b.displacement(std::size_t(p), std::size_t(q));
      for (int a = 0; a < d; ++a) disp[std::size_t(a)](p, q) = s[a];
    }
  std::vector<std::vector<int>> alphas;
  std::vector<int> cur(std::size_t(d), 0);
  multi_indices(d, n, cur, 0, alphas);
  double total = 0.0;
  for (const auto& alpha : alphas) {
    CMat m = f.matrix;
    double weight = 1.0;
    for (int a = 0; a < d; ++a) {
      for (int k = 0; k < alpha[std::size_t(a)]; ++k) m = m.cwiseProduct(disp[std::size_t(a)].cast<cplx>());
      weight *= factorial(alpha[std::size_t(a)]);
    }
    total += spectral_norm(m) / weight;
  }
  return total;
}

// ---------------------------------------------------------------- resolvents

namespace {

/// Applies (z - H)^{-1} and its adjoint through LU factorizations.
class ResolventSolver {
 public:
  ResolventSolver(const CMat& h, cplx z) : n_(h.rows()) {
    const CMat id = CMat::Identity(n_, n_);
    if (n_ <= kDenseLimit) {
      dense_ = Eigen::PartialPivLU<CMat>(z * id - h);
      dense_adj_ = Eigen::PartialPivLU<CMat>(std::conj(z) * id - h.adjoint());
    } else {
      sparse_.analyzePattern(to_sparse(z * id - h));
      sparse_.factorize(to_sparse(z * id - h));
      sparse_adj_.analyzePattern(to_sparse(std::conj(z) * id - h.adjoint()));
      sparse_adj_.factorize(to_sparse(std::conj(z) * id - h.adjoint()));
    }
  }
  CVec apply(const CVec& x) const { return n_ <= kDenseLimit ? CVec(dense_.solve(x)) : CVec(sparse_.solve(x)); }
  CVec apply_adjoint(const CVec& x) const {
    return n_ <= kDenseLimit ? CVec(dense_adj_.solve(x)) : CVec(sparse_adj_.solve(x));
  }
  CMat dense_inverse() const { return dense_.inverse(); }
  bool dense() const { return n_ <= kDenseLimit; }

 private:
  static constexpr Eigen::Index kDenseLimit = 400;
  static Eigen::SparseMatrix<cplx> to_sparse(const CMat& m) {
    Eigen::SparseMatrix<cplx> s = m.sparseView(1.0, 0.0);
    s.makeCompressed();
    return s;
  }
  Eigen::Index n_;
  Eigen::PartialPivLU<CMat> dense_, dense_adj_;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> sparse_, sparse_adj_;
};

}  // namespace

ResolventBoundReport resolvent_distance_bound_check(const KernelOperator& h1,
                                                    const KernelOperator& h2, cplx z, double vsup) {
  if (z.imag() == 0.0) throw Error(Errc::real_shift, "resolvent check: Im z must be nonzero");
  if (h1.matrix.rows() != h2.matrix.rows())
    throw Error(Errc::basis_mismatch, "resolvent check: operator sizes differ");
  const CMat diff = h1.matrix - h2.matrix;
  const double diag_sup = diff.diagonal().cwiseAbs().maxCoeff();
  CMat off = diff;
  off.diagonal().setZero();
  if (max_abs(off) > 1e-12)
    throw Error(Errc::invalid_argument, "resolvent check: H1 and H2 must differ only on the diagonal");
  if (vsup < diag_sup * (1.0 - 1e-12))
    throw Error(Errc::invalid_argument, "resolvent check: vsup is below the actual potential difference");

  ResolventBoundReport rep;
  const Eigen::Index n = h1.matrix.rows();
  ResolventSolver r1(h1.matrix, z), r2(h2.matrix, z);
  if (r1.dense()) {
    const CMat a = r1.dense_inverse(), b = r2.dense_inverse();
    rep.lhs = spectral_norm(a - b);
    rep.norm_r1 = spectral_norm(a);
    rep.norm_r2 = spectral_norm(b);
  } else {
    rep.lhs = spectral_norm_implicit(
        n, [&](const CVec& x) -> CVec { return r1.apply(x) - r2.apply(x); },
        [&](const CVec& x) -> CVec { return r1.apply_adjoint(x) - r2.apply_adjoint(x); }, 1e-11);
    rep.norm_r1 = spectral_norm_implicit(
        n, [&](const CVec& x) { return r1.apply(x); }, [&](const CVec& x) { return r1.apply_adjoint(x); },
        1e-11);
    rep.norm_r2 = spectral_norm_implicit(
        n, [&](const CVec& x) { return r2.apply(x); }, [&](const CVec& x) { return r2.apply_adjoint(x); },
        1e-11);
  }
  rep.rhs = vsup * rep.norm_r1 * rep.norm_r2;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-10);
  return rep;
}

// ---------------------------------------------------------------- binary container

namespace {

constexpr std::array<char, 8> kMagic = {'A', 'P', 'W', 'K', 'O', 'P', '1', '\0'};

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::is_arithmetic_v<T>);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw Error(Errc::io_error, "operator file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return v;
}

}  // namespace

void write_operator(std::ostream& out, const KernelOperator& op) {
  const Basis& b = *op.basis;
  out.write(kMagic.data(), kMagic.size());
  put<std::uint8_t>(out, b.kind() == BasisKind::grid ? 0 : 1);
  put<std::uint8_t>(out, b.periodic() ? 1 : 0);
  put<std::uint8_t>(out, op.hermitian ? 1 : 0);
  put<std::int32_t>(out, b.dim());
  put<std::int32_t>(out, b.orbitals());
  put<double>(out, b.pitch());
  for (int i = 0; i < b.dim(); ++i) {
    put<double>(out, b.window().lo[std::size_t(i)]);
    put<double>(out, b.window().hi[std::size_t(i)]);
  }
  if (b.kind() == BasisKind::site) {
    put<double>(out, b.set().r);
    put<double>(out, b.set().R);
    put<std::uint64_t>(out, b.n_sites());
    for (std::size_t s = 0; s < b.n_sites(); ++s)
      for (int j = 0; j < b.dim(); ++j) put<double>(out, b.set().points(Eigen::Index(s), j));
  }
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) put<double>(out, op.twist.theta()(i, j));
  put<std::uint64_t>(out, std::uint64_t(op.matrix.rows()));
  for (Eigen::Index p = 0; p < op.matrix.rows(); ++p)
    for (Eigen::Index q = 0; q < op.matrix.cols(); ++q) {
      put<double>(out, op.matrix(p, q).real());
      put<double>(out, op.matrix(p, q).imag());
    }
}

KernelOperator read_operator(std::istream& in) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw Error(Errc::io_error, "not an operator file");
  const auto kind = get<std::uint8_t>(in);
  const Boundary boundary = get<std::uint8_t>(in) ? Boundary::periodic : Boundary::open;
  const bool hermitian = get<std::uint8_t>(in) != 0;
  const int dim = get<std::int32_t>(in);
  const int orbitals = get<std::int32_t>(in);
  const double pitch = get<double>(in);
  if (dim < 1 || dim > 16 || orbitals < 1) throw Error(Errc::io_error, "operator file: bad header");
  Box window;
  for (int i = 0; i < dim; ++i) {
    window.lo.push_back(get<double>(in));
    window.hi.push_back(get<double>(in));
  }
  BasisPtr basis;
  if (kind == 0) {
    basis = std::make_shared<Basis>(Basis::grid(window, pitch, boundary));
  } else {
    DeloneSet set;
    set.dim = dim;
    set.window = window;
    set.r = get<double>(in);
    set.R = get<double>(in);
    const auto ns = get<std::uint64_t>(in);
    set.points.resize(Eigen::Index(ns), dim);
    for (std::uint64_t s = 0; s < ns; ++s)
      for (int j = 0; j < dim; ++j) set.points(Eigen::Index(s), j) = get<double>(in);
    basis = std::make_shared<Basis>(Basis::sites(set, boundary, orbitals));
  }
  RMat theta(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) theta(i, j) = get<double>(in);
  const auto n = get<std::uint64_t>(in);
  if (n != basis->size()) throw Error(Errc::io_error, "operator file: dimension does not match basis");
  KernelOperator op;
  op.basis = basis;
  op.hermitian = hermitian;
  op.twist = MagneticCocycle(theta);
  op.matrix.resize(Eigen::Index(n), Eigen::Index(n));
  for (Eigen::Index p = 0; p < op.matrix.rows(); ++p)
    for (Eigen::Index q = 0; q < op.matrix.cols(); ++q) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      op.matrix(p, q) = cplx(re, im);
    }
  return op;
}

}  // namespace apw
