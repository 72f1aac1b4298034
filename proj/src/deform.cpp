#include "apw/deform.hpp"

#include <algorithm>
#include <cmath>

#include "apw/errors.hpp"
#include "apw/parallel.hpp"

namespace apw {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::constant: return "constant";
    case Verdict::gap_closed: return "gap-closed";
    case Verdict::drift: return "drift";
  }
  return "?";
}

GappedPathReport track_gapped_path(const std::vector<double>& t, const std::vector<KernelOperator>& ops,
                                   double tracked, const DeformOptions& opt) {
  if (t.size() != ops.size() || ops.empty()) throw Error(Errc::invalid_argument, "deformation: need one operator per sample");
  std::vector<Eigensystem> es(ops.size());
  parallel_for(ops.size(), [&](std::size_t i) { es[i] = eig(ops[i]); });

  GappedPathReport rep;
  rep.tolerance = opt.tolerance;
  std::size_t good = 0;
  std::vector<Interval> gap(ops.size());
  double point = tracked;
  for (; good < ops.size(); ++good) {
    const auto gaps = detect_gaps(es[good].values, opt.min_gap);
    auto it = std::find_if(gaps.begin(), gaps.end(), [&](const Interval& g) { return g.lo < point && point < g.hi; });
    if (it == gaps.end()) break;
    gap[good] = *it;
    point = it->mid();
  }
  if (good == 0) throw Error(Errc::gap_closed, "deformation: tracked energy is not in a gap at the first sample");
  rep.samples.resize(good);
  ProjectionOptions po;
  po.min_gap = opt.min_gap;
  parallel_for(good, [&](std::size_t i) {
    PathSample& s = rep.samples[i];
    s.t = t[i];
    s.gap = gap[i];
    s.delta = {es[i].values[0] - 1.0, gap[i].mid()};
    const SpectralProjection p = spectral_projection(ops[i], es[i], s.delta, po);
    s.margin = p.gap_margin;
    s.rank = p.rank;
    s.chern = chern_top(p, opt.chern);
  });
  for (const auto& s : rep.samples)
    rep.max_drift = std::max(rep.max_drift, std::abs(s.chern.value - rep.samples.front().chern.value));
  if (good < ops.size()) {
    rep.verdict = Verdict::gap_closed;
    rep.t_closed = t[good];
  } else {
    rep.verdict = rep.max_drift < opt.tolerance ? Verdict::constant : Verdict::drift;
  }
  return rep;
}

GappedPathReport run_lattice_deformation(const DeformationPath& path, const LatticeModel& model,
                                         double tracked, const DeformOptions& opt) {
  std::vector<KernelOperator> ops(path.samples.size());
  const MagneticCocycle c = MagneticCocycle::from_flux(model.dim, model.flux);
  parallel_for(ops.size(), [&](std::size_t i) { ops[i] = build_lattice_operator(model, path.samples[i], c); });
  return track_gapped_path(path.t, ops, tracked, opt);
}

GappedPathReport run_field_deformation(const DeloneSet& set, const std::vector<double>& t,
                                       const std::vector<MagneticCocycle>& thetas,
                                       const LatticeModel& model, double tracked,
                                       const DeformOptions& opt) {
  if (t.size() != thetas.size()) throw Error(Errc::invalid_argument, "field deformation: one theta per sample");
  std::vector<KernelOperator> ops(thetas.size());
  parallel_for(ops.size(), [&](std::size_t i) { ops[i] = build_lattice_operator(model, set, thetas[i]); });
  return track_gapped_path(t, ops, tracked, opt);
}

std::vector<MagneticCocycle> flux_path(int dim, double alpha0, double step, int steps) {
  std::vector<MagneticCocycle> out;
  for (int k = 0; k <= steps; ++k) out.push_back(MagneticCocycle::from_flux(dim, alpha0 + k * step));
  return out;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ResolventSweep resolvent_continuity_sweep(const DeformationPath& path, cplx z, const ContinuumModel& model) {
  if (z.imag() == 0.0) throw Error(Errc::real_shift, "resolvent sweep: Im z must be nonzero");
  const BasisPtr grid = continuum_grid(model);
  std::vector<KernelOperator> ops(path.samples.size());
  parallel_for(ops.size(), [&](std::size_t i) { ops[i] = build_continuum_operator(model, path.samples[i], grid); });
  ResolventSweep sweep;
  if (ops.size() < 2) return sweep;
  sweep.steps.resize(ops.size() - 1);
  parallel_for(sweep.steps.size(), [&](std::size_t i) {
    const double vsup = (ops[i + 1].matrix.diagonal() - ops[i].matrix.diagonal()).cwiseAbs().maxCoeff();
    sweep.steps[i] = resolvent_distance_bound_check(ops[i], ops[i + 1], z, vsup);
  });
  std::vector<double> lhs;
  for (const auto& s : sweep.steps) {
    lhs.push_back(s.lhs);
    sweep.all_hold = sweep.all_hold && s.holds;
  }
  sweep.median_lhs = median(lhs);
  return sweep;
}

HalvingStudy resolvent_halving(const DeloneSet& a, const DeloneSet& b, int coarse_samples, cplx z,
                               const ContinuumModel& model) {
  HalvingStudy h;
  h.coarse = resolvent_continuity_sweep(make_path(a, b, coarse_samples), z, model);
  h.fine = resolvent_continuity_sweep(make_path(a, b, 2 * coarse_samples - 1), z, model);
  h.ratio = h.coarse.median_lhs > 0.0 ? h.fine.median_lhs / h.coarse.median_lhs : 0.0;
  return h;
}

}  // namespace apw
