#include "apw/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "apw/chern.hpp"
#include "apw/errors.hpp"
#include "apw/parallel.hpp"
#include "apw/translations.hpp"

namespace apw {

Seed gaussian_seed(double width, double cutoff) {
  if (!(width > 0.0) || !(cutoff > 0.0)) throw Error(Errc::invalid_argument, "gaussian seed: width and cutoff must be positive");
  return {[width, cutoff](const RVec& s) {
            const double d2 = s.squaredNorm();
            return d2 < cutoff * cutoff ? std::exp(-d2 / (2.0 * width * width)) : 0.0;
          },
          cutoff};
}

Seed bump_seed(double width) {
  if (!(width > 0.0)) throw Error(Errc::invalid_argument, "bump seed: width must be positive");
  return {[width](const RVec& s) {
            const double u = s.squaredNorm() / (width * width);
            return u < 1.0 ? std::exp(-1.0 / (1.0 - u)) : 0.0;
          },
          width};
}

CVec translated_seed(const Seed& seed, const MagneticCocycle& c, const Basis& b, const RVec& y) {
  CVec v = CVec::Zero(Eigen::Index(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) {
    const RVec x = b.position(i);
    const RVec a = b.image_shift(x, y);
    const RVec xi = x + a;
    const double w = seed.profile(xi - y);
    if (w == 0.0) continue;
    v[Eigen::Index(i)] = boundary_phase(c, x, a) * std::polar(w, -c.form(xi, y));
  }
  const double n = v.norm();
  if (n == 0.0) throw Error(Errc::invalid_argument, "seed has no samples on the basis");
  return v / n;
}

CVec make_bump_seed(const DeloneSet& set, const RVec& centre, double width, const Basis& grid) {
  if (width > set.r / 2.0 * (1.0 + 1e-12))
    throw Error(Errc::width_too_large, "bump width exceeds r/2");
  bool member = false;
  for (std::size_t i = 0; i < set.size() && !member; ++i) member = (set.point(i) - centre).norm() < 1e-9;
  if (!member) throw Error(Errc::invalid_argument, "bump centre is not a point of the set");
  return translated_seed(bump_seed(width), MagneticCocycle::zero(grid.dim()), grid, centre);
}

std::vector<RVec> lattice_centres(const Basis& b, const std::vector<int>& stride,
                                  const std::vector<int>& offset, double margin) {
  std::vector<RVec> out;
  const Box inner = b.window().eroded(margin);
  for (std::size_t i = 0; i < b.size(); i += std::size_t(b.kind() == BasisKind::site ? b.orbitals() : 1)) {
    const RVec x = b.position(i);
    bool keep = true;
    for (std::size_t k = 0; k < stride.size() && keep; ++k) {
      const long s = stride[k];
      const long o = k < offset.size() ? offset[k] : 0;
      const long n = std::lround(x[Eigen::Index(k)]);
      keep = ((n - o) % s + s) % s == 0;
    }
    if (keep && !b.periodic() && margin > 0.0) keep = inner.contains(x);
    if (keep) out.push_back(x);
  }
  return out;
}

CMat translate_family(const std::vector<Seed>& seeds, const std::vector<RVec>& centres,
                      const MagneticCocycle& c, const Basis& b) {
  if (seeds.empty()) throw Error(Errc::invalid_argument, "translate_family: no seeds");
  const std::size_t m = seeds.size();
  CMat f(Eigen::Index(b.size()), Eigen::Index(m * centres.size()));
  parallel_for(centres.size() * m, [&](std::size_t k) {
    f.col(Eigen::Index(k)) = translated_seed(seeds[k % m], c, b, centres[k / m]);
  });
  return f;
}

FrameOperator frame_operator(const CMat& family, const CMat& range) {
  if (range.cols() == 0) throw Error(Errc::rank_zero, "frame operator: projection has rank zero");
  if (family.rows() != range.rows()) throw Error(Errc::basis_mismatch, "frame operator: family lives on a different basis");
  const CMat b = range.adjoint() * family;
  FrameOperator op;
  op.s = b * b.adjoint();
  op.s = 0.5 * (op.s + op.s.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(op.s, Eigen::EigenvaluesOnly);
  op.lower = es.eigenvalues()[0];
  op.upper = es.eigenvalues()[es.eigenvalues().size() - 1];
  return op;
}

TranslateFrame parseval_normalize(const CMat& family, const CMat& range, std::vector<RVec> centres) {
  TranslateFrame fr;
  fr.frame_op = frame_operator(family, range);
  if (!(fr.frame_op.lower > 1e-8 * fr.frame_op.upper))
    throw Error(Errc::not_a_frame, "family does not span the range of the projection");
  const CMat b = range.adjoint() * family;
  fr.vectors = range * (inverse_sqrt_hpd(fr.frame_op.s) * b);
  fr.range = range;
  fr.centres = std::move(centres);
  return fr;
}

CMat interior_probes(const CMat& range, const Basis& b, double margin, int count, std::uint64_t seed) {
  std::vector<Eigen::Index> idx;
  const Box inner = b.window().eroded(margin);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.periodic() || inner.contains(b.position(i))) idx.push_back(Eigen::Index(i));
  if (idx.empty()) throw Error(Errc::empty_interior, "no basis elements in the probe interior");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMat x = CMat::Zero(range.rows(), count);
  for (int k = 0; k < count; ++k)
    for (auto i : idx) {
      const double re = g(rng), im = g(rng);
      x(i, k) = cplx(re, im);
    }
  return range * (range.adjoint() * x);
}

double parseval_residual(const CMat& vectors, const CMat& probes) {
  const CMat coeff = vectors.adjoint() * probes;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < probes.cols(); ++k) {
    const double n2 = probes.col(k).squaredNorm();
    if (n2 == 0.0) continue;
    worst = std::max(worst, std::abs(coeff.col(k).squaredNorm() - n2) / n2);
  }
  return worst;
}

double dual_reconstruction_residual(const CMat& family, const CMat& range, const CMat& probes) {
  const CMat b = range.adjoint() * family;
  const FrameOperator op = frame_operator(family, range);
  const Eigen::LDLT<CMat> s(op.s);
  const CMat coeff = family.adjoint() * probes;  // <g, psi>
  const CMat rec = range * s.solve(b * coeff);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < probes.cols(); ++k) {
    const double n = probes.col(k).norm();
    if (n > 0.0) worst = std::max(worst, (rec.col(k) - probes.col(k)).norm() / n);
  }
  return worst;
}

LocalizationReport localization_report(const CMat& vectors, const std::vector<RVec>& centres,
                                       const Basis& b, double bin) {
  if (std::size_t(vectors.cols()) != centres.size())
    throw Error(Errc::invalid_argument, "localization report: one centre per vector required");
  if (!(bin > 0.0)) throw Error(Errc::invalid_argument, "localization report: bin width must be positive");
  const std::size_t m = centres.size();
  LocalizationReport rep;
  rep.second_moments.assign(m, 0.0);
  rep.decay_exponents.assign(m, 0.0);
  rep.fit_residuals.assign(m, 0.0);
  parallel_for(m, [&](std::size_t j) {
    const CVec w = vectors.col(Eigen::Index(j));
    const double n2 = w.squaredNorm();
    if (n2 == 0.0) return;
    double moment = 0.0;
    std::vector<double> envelope;
    double rmax = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double r = b.displacement(centres[j], b.position(i)).norm();
      const double a2 = std::norm(w[Eigen::Index(i)]) / n2;
      moment += (1.0 + r * r) * a2;
      const auto k = std::size_t(r / bin);
      if (k >= envelope.size()) envelope.resize(k + 1, 0.0);
      envelope[k] = std::max(envelope[k], std::sqrt(a2));
      rmax = std::max(rmax, r);
    }
    rep.second_moments[j] = moment;
    std::vector<double> lx, ly;
    for (std::size_t k = 1; k < envelope.size(); ++k) {
      const double r = (double(k) + 0.5) * bin;
      if (r > 0.9 * rmax || envelope[k] <= 1e-300) continue;
      lx.push_back(std::log(r));
      ly.push_back(std::log(envelope[k]));
    }
    if (lx.size() >= 2) {
      const double n = double(lx.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double icpt = (sy - slope * sx) / n;
      double res = 0.0;
      for (std::size_t k = 0; k < lx.size(); ++k) res += std::pow(ly[k] - icpt - slope * lx[k], 2);
      rep.decay_exponents[j] = -slope;
      rep.fit_residuals[j] = std::sqrt(res / n);
    }
  });
  double sum = 0.0, esum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    rep.max_moment = std::max(rep.max_moment, rep.second_moments[j]);
    sum += rep.second_moments[j];
    esum += rep.decay_exponents[j];
  }
  rep.mean_moment = m ? sum / double(m) : 0.0;
  rep.mean_exponent = m ? esum / double(m) : 0.0;
  return rep;
}

LoewdinResult loewdin(const CMat& family, double eps) {
  if (family.cols() == 0) throw Error(Errc::invalid_argument, "loewdin: empty family");
  CMat g = family.adjoint() * family;
  g = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  LoewdinResult res;
  const RVec& ev = es.eigenvalues();
  res.min_eigenvalue = ev[0];
  res.kappa = ev[0] > 0.0 ? ev[ev.size() - 1] / ev[0] : std::numeric_limits<double>::infinity();
  if (ev[0] <= eps) {
    res.gram_singular = true;
    return res;
  }
  const RVec inv = ev.cwiseSqrt().cwiseInverse();
  res.vectors = family * (es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint());
  return res;
}

std::vector<DichotomyRow> dichotomy_experiment(LatticeModel model, const std::vector<int>& sizes,
                                               const DichotomyOptions& opt) {
  if (sizes.empty()) throw Error(Errc::invalid_argument, "dichotomy: no window sizes");
  std::vector<DichotomyRow> rows;
  for (int size : sizes) {
    model.size = size;
    const DeloneSet sites = lattice_sites(model);
    const MagneticCocycle c = MagneticCocycle::from_flux(model.dim, model.flux);
    const KernelOperator h = build_lattice_operator(model, sites, c);
    const Eigensystem es = eig(h);
    const auto gaps = detect_gaps(es.values, opt.min_gap);
    if (opt.gap_index >= gaps.size())
      throw Error(Errc::gap_closed, "dichotomy: gap closed at window " + std::to_string(size));
    ProjectionOptions po;
    po.min_gap = opt.min_gap;
    const SpectralProjection p = spectral_projection(h, es, below_gap(es.values, gaps, opt.gap_index), po);
    const Basis& b = *h.basis;
    const Seed seed = gaussian_seed(opt.seed_width, opt.seed_cutoff);

    DichotomyRow row;
    row.window = size;
    row.rank = p.rank;
    row.chern = chern_top(p).value;

    const auto all = lattice_centres(b);
    const CMat fam = translate_family({seed}, all, c, b);
    const TranslateFrame fr = parseval_normalize(fam, p.range, all);
    row.parseval_residual = parseval_residual(fr.vectors, interior_probes(p.range, b, 0.0, 20, 7));
    row.parseval_max_moment = localization_report(fr.vectors, all, b, sites.r).max_moment;

    const auto sub = lattice_centres(b, opt.stride, opt.offset);
    const CMat wfam = p.matrix * translate_family({seed}, sub, c, b);
    const LoewdinResult lw = loewdin(wfam, opt.loewdin_eps);
    row.kappa = lw.kappa;
    row.gram_singular = lw.gram_singular;
    row.loewdin_max_moment = lw.gram_singular ? std::numeric_limits<double>::infinity()
                                              : localization_report(lw.vectors, sub, b, sites.r).max_moment;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace apw
