#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apw/operators.hpp"

namespace apw {

/// Tight-binding model on (a deformation of) the square lattice Z^d in the
/// window [-1/2, L - 1/2]^d.
struct LatticeModel {
  int dim = 2;
  int size = 24;                 // L sites per axis
  double flux = 1.0 / 3.0;       // flux quanta per unit cell in the (0,1) plane
  std::string hopping = "nearest";  // "nearest" | "exponential"
  double t = 1.0;
  double t_stack = 1.0;          // hopping along axes >= 2
  double decay = 0.25;           // exponential: decay length
  double cut = 1.6;              // exponential: start of the smooth cutoff
  double range = 1.9;            // exponential: hopping range
  std::vector<double> stripe;    // onsite energy by lattice column (x mod stripe.size())
  Boundary boundary = Boundary::periodic;

  Box window() const;
};

/// Lattice sites, optionally displaced by uniform jitter in a ball of radius
/// `jitter` (lattice units).
DeloneSet lattice_sites(const LatticeModel& m, double jitter = 0.0, std::uint64_t seed = 0);
HoppingProfile lattice_hopping(const LatticeModel& m);
/// Onsite energy of the stripe pattern at the lattice column nearest to x.
OnsiteRule stripe_onsite(const LatticeModel& m);
KernelOperator build_lattice_operator(const LatticeModel& m, const DeloneSet& sites,
                                      const MagneticCocycle& c);
KernelOperator build_lattice_operator(const LatticeModel& m, const DeloneSet& sites);

/// Continuum magnetic Schroedinger operator with Gaussian wells at the atoms.
struct ContinuumModel {
  int dim = 2;
  double extent = 4.0;   // window [-1/2, extent - 1/2]^d
  double pitch = 0.1;
  double flux = 0.0;
  double depth = 10.0;
  double width = 0.2;
  double support = 0.45;
  Boundary boundary = Boundary::open;

  Box window() const;
};

BasisPtr continuum_grid(const ContinuumModel& m);
KernelOperator build_continuum_operator(const ContinuumModel& m, const DeloneSet& atoms,
                                        const BasisPtr& grid);

}  // namespace apw
