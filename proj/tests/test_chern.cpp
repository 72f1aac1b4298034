#include <doctest.h>

#include <cmath>

#include "apw/chern.hpp"
#include "apw/errors.hpp"
#include "apw/frames.hpp"
#include "apw/model.hpp"
#include "apw/spectral.hpp"

using namespace apw;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::invalid_argument;
}

// Band projection [k1, k2) of a periodic lattice model, bands counted from gaps of width >= 0.5.
SpectralProjection bands(const LatticeModel& m, int k1, int k2) {
  const auto h = build_lattice_operator(m, lattice_sites(m));
  const auto es = eig(h);
  const auto gaps = detect_gaps(es.values, 0.5);
  return spectral_projection(h, es, between_gaps(es.values, gaps, k1 - 1, k2 - 1));
}

LatticeModel hofstadter(int size, double flux) {
  LatticeModel m;
  m.size = size;
  m.flux = flux;
  return m;
}

}  // namespace

TEST_CASE("trace per unit volume") {
  const Basis grid = Basis::grid(Box::cube(2, 0, 2), 0.1);
  const CMat id = CMat::Identity(Eigen::Index(grid.size()), Eigen::Index(grid.size()));
  CHECK(trace_per_volume(id, grid, 0.5).real() == doctest::Approx(100.0));
  const auto p = bands(hofstadter(12, 1.0 / 3.0), 0, 1);
  const CMat sid = CMat::Identity(144, 144);
  CHECK(trace_per_volume(sid, *p.basis, 0.5).real() == doctest::Approx(1.0));
  // translation invariance of the periodic band makes the density exact
  CHECK(trace_per_volume(p.matrix, *p.basis, 0.5).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(code_of([&] { trace_per_volume(sid, *p.basis, 0.01); }) == Errc::empty_interior);

  const Basis two = Basis::sites(lattice_sites(hofstadter(6, 0)), Boundary::periodic, 2);
  CHECK(trace_per_volume(CMat::Identity(72, 72), two, 1.0).real() == doctest::Approx(2.0));
}

TEST_CASE("trivial projections have zero Chern number") {
  const auto p = bands(hofstadter(12, 1.0 / 3.0), 0, 1);
  const CMat zero = CMat::Zero(144, 144);
  const CMat one = CMat::Identity(144, 144);
  CHECK(chern_top(zero, *p.basis).value == 0.0);
  CHECK(std::abs(chern_top(one, *p.basis).value) < 1e-14);
}

TEST_CASE("Bloch oracle") {
  CHECK(bloch_oracle(0, 1, {}, 0, 0).chern == 0);
  const auto b0 = bloch_oracle(1, 3, {}, 0, 0);
  const auto b1 = bloch_oracle(1, 3, {}, 1, 1);
  const auto b2 = bloch_oracle(1, 3, {}, 2, 2);
  CHECK(b0.chern == 1);
  CHECK(b1.chern == -2);
  CHECK(b0.chern + b1.chern + b2.chern == 0);
  CHECK(bloch_oracle(1, 3, {}, 0, 2).chern == 0);
  CHECK(std::abs(b0.raw - 1.0) < 1e-9);
  CHECK(bloch_oracle(1, 3, {}, 0, 0, 12).chern == b0.chern);
  CHECK(bloch_oracle(1, 4, {}, 0, 0).chern == 1);
  CHECK(bloch_oracle(1, 2, {3.0, -3.0}, 0, 0).chern == 0);
  CHECK(code_of([] { bloch_oracle(1, 2, {}, 0, 0); }) == Errc::gapless_band);
  CHECK(code_of([] { bloch_oracle(1, 13, {}, 0, 0); }) == Errc::invalid_argument);
}

TEST_CASE("real-space Chern numbers match the oracle at flux 1/3") {
  const auto m = hofstadter(24, 1.0 / 3.0);
  const auto p0 = bands(m, 0, 1);
  const auto c0 = chern_top(p0);
  CHECK(c0.k == 2);
  CHECK(c0.per_fraction.size() == 3);
  CHECK(std::abs(c0.value - double(bloch_oracle(1, 3, {}, 0, 0).chern)) < 0.05);
  CHECK(c0.imag < 1e-6);
  CHECK(c0.integral);
  CHECK(c0.spread < 0.05);
  const auto c1 = chern_top(bands(m, 1, 2));
  CHECK(std::abs(c1.value - double(bloch_oracle(1, 3, {}, 1, 1).chern)) < 0.05);

  const auto weak = chern_weak(p0, {0, 1});
  CHECK(weak.value == c0.value);
  const auto swapped = chern_weak(p0, {1, 0});
  CHECK(std::abs(swapped.value + c0.value) < 1e-9);
}

TEST_CASE("block-diagonal projections add") {
  const auto m = hofstadter(12, 1.0 / 3.0);
  const auto p0 = bands(m, 0, 1);
  const auto p1 = bands(m, 1, 2);
  const Basis two = Basis::sites(p0.basis->set(), Boundary::periodic, 2);
  CMat sum = CMat::Zero(288, 288);
  for (Eigen::Index i = 0; i < 144; ++i)
    for (Eigen::Index j = 0; j < 144; ++j) {
      sum(2 * i, 2 * j) = p0.matrix(i, j);
      sum(2 * i + 1, 2 * j + 1) = p1.matrix(i, j);
    }
  const double a = chern_top(p0).value, b = chern_top(p1).value;
  CHECK(std::abs(chern_top(sum, two).value - (a + b)) < 0.02);
  CHECK(trace_per_volume(sum, two, 0.5).real() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("orthonormal localized translates span a trivial projection") {
  LatticeModel m = hofstadter(12, 0.0);
  const Basis b = Basis::sites(lattice_sites(m), Boundary::periodic);
  const auto centres = lattice_centres(b, {2, 1});
  const CMat fam = translate_family({gaussian_seed(0.8, 3.0)}, centres, MagneticCocycle::zero(2), b);
  const auto lw = loewdin(fam);
  REQUIRE(!lw.gram_singular);
  const CMat p = lw.vectors * lw.vectors.adjoint();
  CHECK(idempotency_defect(p) < 1e-10);
  CHECK(std::abs(chern_top(p, b).value) < 0.02);
}

TEST_CASE("weak Chern numbers of a stacked model") {
  LatticeModel m3 = hofstadter(9, 1.0 / 3.0);
  m3.dim = 3;
  m3.t_stack = 0.2;
  const auto p3 = bands(m3, 0, 1);
  CHECK(p3.rank == 243);
  const auto in_plane = chern_weak(p3, {0, 1});
  const auto cross = chern_weak(p3, {0, 2});
  const double layer = chern_top(bands(hofstadter(9, 1.0 / 3.0), 0, 1)).value;
  CHECK(std::abs(in_plane.value - layer) < 0.05);
  CHECK(in_plane.nearest == 1);
  CHECK(std::abs(cross.value) < 0.02);
  CHECK(in_plane.imag < 1e-6);
  CHECK(code_of([&] { chern_top(p3); }) == Errc::odd_dimension);
  CHECK(code_of([&] { chern_weak(p3, {0}); }) == Errc::odd_dimension);
  CHECK(code_of([&] { chern_weak(p3, {0, 0}); }) == Errc::invalid_argument);
}
