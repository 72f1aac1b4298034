#include "apw/translations.hpp"

#include <cmath>

#include "apw/errors.hpp"

namespace apw {

cplx boundary_phase(const MagneticCocycle& c, const RVec& x, const RVec& shift) {
  if (shift.isZero(0.0)) return 1.0;
  return std::polar(1.0, c.form(x, shift));
}

namespace {

TranslatedVector translate_grid(const MagneticCocycle& c, const RVec& a, const CVec& psi,
                                const BasisPtr& basis) {
  const Basis& b = *basis;
  const int d = b.dim();
  std::vector<long> step(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double s = a[i] / b.pitch();
    step[std::size_t(i)] = std::lround(s);
    if (std::abs(s - double(step[std::size_t(i)])) > 1e-9)
      throw Error(Errc::off_grid, "magnetic_translate: shift is not a multiple of the grid pitch");
  }
  CVec out = CVec::Zero(psi.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    auto n = b.grid_coords(k);
    bool inside = true;
    RVec wrap = RVec::Zero(d);
    for (int i = 0; i < d; ++i) {
      long m = n[std::size_t(i)] - step[std::size_t(i)];
      const long len = b.shape()[std::size_t(i)];
      if (m < 0 || m >= len) {
        if (!b.periodic()) {
          inside = false;
          break;
        }
        const long q = (m >= 0 ? m / len : -((-m + len - 1) / len));
        m -= q * len;
        wrap[i] = double(q) * b.window().edge(i);
      }
      n[std::size_t(i)] = m;
    }
    if (!inside) continue;
    const RVec x = b.position(k);
    const std::size_t src = b.grid_index(n);
    // psi(x - a) with x - a = x_src + wrap
    const cplx image = std::polar(1.0, -c.form(b.position(src), wrap));
    out[Eigen::Index(k)] = std::polar(1.0, -c.form(x, a)) * image * psi[Eigen::Index(src)];
  }
  return {out, basis};
}

}  // namespace

TranslatedVector magnetic_translate(const MagneticCocycle& c, const RVec& a, const CVec& psi,
                                    const BasisPtr& basis, SiteTranslation mode) {
  const Basis& b = *basis;
  if (std::size_t(psi.size()) != b.size())
    throw Error(Errc::invalid_argument, "magnetic_translate: vector does not match basis");
  if (a.size() != b.dim()) throw Error(Errc::invalid_argument, "magnetic_translate: dimension mismatch");
  if (b.kind() == BasisKind::grid) return translate_grid(c, a, psi, basis);

  const int orb = b.orbitals();
  if (mode == SiteTranslation::reindex) {
    DeloneSet moved = b.set();
    moved.points.rowwise() += a.transpose();
    for (int i = 0; i < b.dim(); ++i) {
      moved.window.lo[std::size_t(i)] += a[i];
      moved.window.hi[std::size_t(i)] += a[i];
    }
    auto target = std::make_shared<Basis>(Basis::sites(moved, b.boundary(), orb));
    // translation preserves lexicographic order, so index k maps to index k
    CVec out(psi.size());
    for (std::size_t k = 0; k < b.size(); ++k)
      out[Eigen::Index(k)] = std::polar(1.0, -c.form(target->position(k), a)) * psi[Eigen::Index(k)];
    return {out, target};
  }

  const DeloneSet& set = b.set();
  PointIndex index(set.points, std::max(set.r, 1e-6) * 2.0);
  const Box interior = set.window.eroded(set.r / 2.0);
  CVec out = CVec::Zero(psi.size());
  std::size_t matched = 0;
  for (std::size_t s = 0; s < b.n_sites(); ++s) {
    const RVec x = set.point(s);
    RVec pre = x - a;
    RVec wrap = RVec::Zero(b.dim());
    if (b.periodic()) {
      for (int i = 0; i < b.dim(); ++i) {
        const double L = set.window.edge(i);
        const double q = std::floor((pre[i] - set.window.lo[std::size_t(i)]) / L);
        wrap[i] = q * L;
      }
      pre -= wrap;
    }
    const auto [src, dist] = index.nearest(pre);
    if (dist < set.r / 2.0) {
      ++matched;
      const cplx image = std::polar(1.0, -c.form(set.point(src), wrap));
      for (int o = 0; o < orb; ++o)
        out[Eigen::Index(s * orb + o)] =
            std::polar(1.0, -c.form(x, a)) * image * psi[Eigen::Index(src * orb + o)];
    } else if (b.periodic() || interior.contains(pre)) {
      throw Error(Errc::no_matching_sites,
                  "magnetic_translate: shift does not map the pattern onto itself");
    }
  }
  if (matched == 0)
    throw Error(Errc::no_matching_sites, "magnetic_translate: no site has a preimage");
  return {out, basis};
}

CMat translation_matrix(const MagneticCocycle& c, const RVec& a, const Basis& from, const Basis& to) {
  if (from.size() != to.size() || from.kind() != BasisKind::site || to.kind() != BasisKind::site)
    throw Error(Errc::basis_mismatch, "translation_matrix: needs site bases of equal size");
  CMat u = CMat::Zero(Eigen::Index(to.size()), Eigen::Index(from.size()));
  for (std::size_t k = 0; k < from.size(); ++k) {
    const RVec target = from.position(k) + a;
    if ((to.position(k) - target).norm() > 1e-9)
      throw Error(Errc::basis_mismatch, "translation_matrix: 'to' is not the translated pattern");
    u(Eigen::Index(k), Eigen::Index(k)) = std::polar(1.0, -c.form(target, a));
  }
  return u;
}

}  // namespace apw
