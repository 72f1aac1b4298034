#include "apw/errors.hpp"

namespace apw {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::generation_failed: return "GenerationFailed";
    case Errc::empty_window: return "EmptyWindow";
    case Errc::empty_intersection: return "EmptyIntersection";
    case Errc::no_bijection: return "NoBijection";
    case Errc::density_violated: return "DensityViolated";
    case Errc::off_grid: return "OffGrid";
    case Errc::no_matching_sites: return "NoMatchingSites";
    case Errc::pitch_too_coarse: return "PitchTooCoarse";
    case Errc::potential_not_compact: return "PotentialNotCompact";
    case Errc::range_too_large: return "RangeTooLarge";
    case Errc::flux_not_commensurate: return "FluxNotCommensurate";
    case Errc::basis_mismatch: return "BasisMismatch";
    case Errc::real_shift: return "RealShift";
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::endpoint_in_spectrum: return "EndpointInSpectrum";
    case Errc::rank_zero: return "RankZero";
    case Errc::not_a_frame: return "NotAFrame";
    case Errc::width_too_large: return "WidthTooLarge";
    case Errc::gram_singular: return "GramSingular";
    case Errc::odd_dimension: return "OddDimension";
    case Errc::gap_closed: return "GapClosed";
    case Errc::empty_interior: return "EmptyInterior";
    case Errc::gapless_band: return "GaplessBand";
    case Errc::config_error: return "ConfigError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(Errc code) {
  switch (code) {
    case Errc::generation_failed:
    case Errc::density_violated:
    case Errc::not_a_frame:
    case Errc::gram_singular:
    case Errc::gap_closed:
    case Errc::gapless_band:
    case Errc::endpoint_in_spectrum:
      return true;
    default:
      return false;
  }
}

}  // namespace apw
