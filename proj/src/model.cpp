#include "apw/model.hpp"

#include <cmath>

#include "apw/errors.hpp"

namespace apw {

Box LatticeModel::window() const { return Box::cube(dim, -0.5, double(size) - 0.5); }

DeloneSet lattice_sites(const LatticeModel& m, double jitter, std::uint64_t seed) {
  if (m.size < 1) throw Error(Errc::invalid_argument, "lattice size must be positive");
  GeneratorParams p;
  p.spacing = 1.0;
  p.jitter = jitter;
  return jitter > 0.0 ? generate(GeneratorKind::jittered_periodic, p, m.window(), seed)
                      : generate(GeneratorKind::periodic_square, p, m.window(), seed);
}

HoppingProfile lattice_hopping(const LatticeModel& m) {
  if (m.hopping == "exponential") return HoppingProfile::exponential(m.t, 1.0, m.decay, m.cut, m.range);
  if (m.hopping != "nearest") throw Error(Errc::invalid_argument, "unknown hopping kind '" + m.hopping + "'");
  HoppingProfile h;
  h.range = 1.1;
  const double t = m.t, ts = m.t_stack;
  h.amplitude = [t, ts](const RVec& s) -> cplx {
    const double d = s.norm();
    if (d == 0.0 || d >= 1.1) return 0.0;
    const double in_plane = s.size() >= 2 ? std::hypot(s[0], s[1]) : std::abs(s[0]);
    const double value = in_plane > 0.5 * d ? t : ts;
    return -value * smooth_step_down(d, 1.05, 1.1);
  };
  return h;
}

OnsiteRule stripe_onsite(const LatticeModel& m) {
  if (m.stripe.empty()) return {};
  const std::vector<double> stripe = m.stripe;
  return [stripe](const LocalPattern& p) {
    const long n = long(stripe.size());
    const long col = ((std::lround(p.position[0]) % n) + n) % n;
    return stripe[std::size_t(col)];
  };
}

KernelOperator build_lattice_operator(const LatticeModel& m, const DeloneSet& sites,
                                      const MagneticCocycle& c) {
  if (m.boundary == Boundary::periodic && !m.stripe.empty() && m.size % int(m.stripe.size()) != 0)
    throw Error(Errc::invalid_argument, "stripe period must divide the lattice size on a torus");
  auto basis = std::make_shared<Basis>(Basis::sites(sites, m.boundary));
  return assemble_tightbinding(basis, lattice_hopping(m), c, stripe_onsite(m));
}

KernelOperator build_lattice_operator(const LatticeModel& m, const DeloneSet& sites) {
  return build_lattice_operator(m, sites, MagneticCocycle::from_flux(m.dim, m.flux));
}

Box ContinuumModel::window() const { return Box::cube(dim, -0.5, extent - 0.5); }

BasisPtr continuum_grid(const ContinuumModel& m) {
  return std::make_shared<Basis>(Basis::grid(m.window(), m.pitch, m.boundary));
}

KernelOperator build_continuum_operator(const ContinuumModel& m, const DeloneSet& atoms,
                                        const BasisPtr& grid) {
  return assemble_continuum(atoms, AtomicPotential::gaussian_well(m.depth, m.width, m.support),
                            MagneticCocycle::from_flux(m.dim, m.flux), grid);
}

}  // namespace apw
