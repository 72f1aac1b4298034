#pragma once

#include "apw/basis.hpp"
#include "apw/magnetics.hpp"

namespace apw {

/// Value at basis point x of a function given near y by `value(x_image)`,
/// where x_image is the periodic image of x closest to y. Under magnetic
/// periodic boundary conditions psi(x + a) = exp(-i <x, theta a>) psi(x), so
/// the image carries the phase exp(i <x, theta a>).
cplx boundary_phase(const MagneticCocycle& c, const RVec& x, const RVec& shift);

enum class SiteTranslation {
  same_pattern,  // a maps L onto itself (periodic patterns); result on the same basis
  reindex,       // result lives on the translated pattern L + a
};

struct TranslatedVector {
  CVec values;
  BasisPtr basis;
};

/// (U_a psi)(x) = exp(-i <x, theta a>) psi(x - a).
/// Grid bases need a to be a multiple of the pitch (OffGrid otherwise).
/// Site bases in same_pattern mode need every interior site to have a
/// preimage within r/2 (NoMatchingSites otherwise).
TranslatedVector magnetic_translate(const MagneticCocycle& c, const RVec& a, const CVec& psi,
                                    const BasisPtr& basis,
                                    SiteTranslation mode = SiteTranslation::same_pattern);

/// Unitary matrix of U_a from `from` (pattern L) to `to` (pattern L + a), for
/// site bases; entries exp(-i <p + a, theta a>) at (p + a, p).
CMat translation_matrix(const MagneticCocycle& c, const RVec& a, const Basis& from, const Basis& to);

}  // namespace apw
