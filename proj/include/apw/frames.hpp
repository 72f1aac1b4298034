#pragma once

#include <cstdint>
#include <vector>

#include "apw/model.hpp"
#include "apw/spectral.hpp"

namespace apw {

/// Real, even seed profile as a function of the displacement from its centre.
struct Seed {
  std::function<double(const RVec&)> profile;
  double support = 0.0;
};

/// exp(-|s|^2 / 2 width^2), truncated at `cutoff`.
Seed gaussian_seed(double width, double cutoff);
/// exp(-1 / (1 - |s/width|^2)) inside the ball of radius width.
Seed bump_seed(double width);

/// Bump of radius `width` centred at a point of the set, sampled on the grid and
/// normalized in l^2. WidthTooLarge if width > r/2.
CVec make_bump_seed(const DeloneSet& set, const RVec& centre, double width, const Basis& grid);

/// U_y w sampled on the basis and normalized: exp(-i <x, theta y>) w(x - y),
/// with magnetic periodic images on periodic bases.
CVec translated_seed(const Seed& seed, const MagneticCocycle& c, const Basis& b, const RVec& y);

/// Site positions with lattice column i = x mod stride[0] == offset[0], etc.
/// Empty stride selects every site. Open bases drop centres closer than
/// `margin` to the window boundary.
std::vector<RVec> lattice_centres(const Basis& b, const std::vector<int>& stride = {},
                                  const std::vector<int>& offset = {}, double margin = 0.0);

/// Columns U_y w_j, ordered (y major, j minor).
CMat translate_family(const std::vector<Seed>& seeds, const std::vector<RVec>& centres,
                      const MagneticCocycle& c, const Basis& b);

struct FrameOperator {
  CMat s;  // on range(P), in the coordinates of `range`
  double lower = 0.0;  // C
  double upper = 0.0;  // D
};

/// S = sum_g (Pg)(Pg)^H in the orthonormal basis `range` of range(P).
FrameOperator frame_operator(const CMat& family, const CMat& range);

struct TranslateFrame {
  CMat vectors;  // N x m
  std::vector<RVec> centres;
  CMat range;
  FrameOperator frame_op;        // of the input family
  double parseval_residual = 0;  // filled by parseval_residual()
};

/// g~ = S^{-1/2} P g. NotAFrame if C <= 1e-8 D.
TranslateFrame parseval_normalize(const CMat& family, const CMat& range,
                                  std::vector<RVec> centres = {});

/// Random vectors supported on indices at least `margin` inside the window
/// (periodic bases: anywhere), projected onto range(P). Columns.
CMat interior_probes(const CMat& range, const Basis& b, double margin, int count, std::uint64_t seed);

/// max over probes of |sum |<g, psi>|^2 - |psi|^2| / |psi|^2.
double parseval_residual(const CMat& vectors, const CMat& probes);
/// max over probes of |psi - sum S^{-1} Pg <Pg, psi>| / |psi|.
double dual_reconstruction_residual(const CMat& family, const CMat& range, const CMat& probes);

struct LocalizationReport {
  std::vector<double> second_moments;  // sum (1 + |x - y|^2) |w(x)|^2 per normalized vector
  std::vector<double> decay_exponents;
  std::vector<double> fit_residuals;
  double max_moment = 0.0;
  double mean_moment = 0.0;
  double mean_exponent = 0.0;
};

/// `bin` is the radial bin width of the decay fit (typically r).
LocalizationReport localization_report(const CMat& vectors, const std::vector<RVec>& centres,
                                       const Basis& b, double bin);

struct LoewdinResult {
  CMat vectors;  // W G^{-1/2}, empty if singular
  double kappa = 0.0;
  double min_eigenvalue = 0.0;
  bool gram_singular = false;
};

/// Symmetric orthonormalization. Gram eigenvalues <= eps flag GramSingular
/// instead of throwing.
LoewdinResult loewdin(const CMat& family, double eps = 1e-10);

struct DichotomyRow {
  int window = 0;
  int rank = 0;
  double chern = 0.0;
  double kappa = 0.0;
  bool gram_singular = false;
  double loewdin_max_moment = 0.0;
  double parseval_max_moment = 0.0;
  double parseval_residual = 0.0;
};

struct DichotomyOptions {
  double seed_width = 0.8;
  double seed_cutoff = 3.0;
  std::vector<int> stride{3, 1};  // magnetic sublattice for the Loewdin family
  std::vector<int> offset{0, 0};
  double min_gap = 0.1;
  std::size_t gap_index = 0;
  double loewdin_eps = 1e-10;
};

/// One row per lattice size; GapClosed if the selected gap is missing.
std::vector<DichotomyRow> dichotomy_experiment(LatticeModel model, const std::vector<int>& sizes,
                                               const DichotomyOptions& opt = {});

}  // namespace apw
