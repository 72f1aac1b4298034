#pragma once

#include <stdexcept>
#include <string>

namespace apw {

enum class Errc {
  invalid_argument,
  generation_failed,
  empty_window,
  empty_intersection,
  no_bijection,
  density_violated,
  off_grid,
  no_matching_sites,
  pitch_too_coarse,
  potential_not_compact,
  range_too_large,
  flux_not_commensurate,
  basis_mismatch,
  real_shift,
  not_hermitian,
  endpoint_in_spectrum,
  rank_zero,
  not_a_frame,
  width_too_large,
  gram_singular,
  odd_dimension,
  gap_closed,
  empty_interior,
  gapless_band,
  config_error,
  io_error,
};

const char* to_string(Errc code);

/// Numerical failures (exit code 3) as opposed to bad input (exit code 2).
bool is_numerical(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace apw
