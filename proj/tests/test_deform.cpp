#include <doctest.h>

#include <cmath>

#include "apw/deform.hpp"
#include "apw/errors.hpp"
#include "apw/model.hpp"

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

LatticeModel small_model() {
  LatticeModel m;
  m.size = 12;
  return m;
}

DeformOptions lattice_options() {
  DeformOptions opt;
  opt.min_gap = 0.5;
  return opt;
}

}  // namespace

TEST_CASE("constant paths are constant") {
  const auto m = small_model();
  const auto sites = lattice_sites(m);
  const auto path = make_path(sites, sites, 4);
  const auto rep = run_lattice_deformation(path, m, -1.3, lattice_options());
  CHECK(rep.verdict == Verdict::constant);
  CHECK(rep.samples.size() == 4);
  CHECK(rep.max_drift < 1e-12);
  for (const auto& s : rep.samples) {
    CHECK(s.rank == 48);
    CHECK(s.chern.nearest == 1);
    CHECK(s.margin > 0.0);
  }

  const std::vector<MagneticCocycle> same(3, MagneticCocycle::from_flux(2, m.flux));
  const auto field = run_field_deformation(sites, {0.0, 0.5, 1.0}, same, m, -1.3, lattice_options());
  CHECK(field.verdict == Verdict::constant);
  CHECK(field.max_drift == 0.0);
}

TEST_CASE("jittered lattice path keeps the gap and the Chern number") {
  LatticeModel m = small_model();
  m.hopping = "exponential";
  const auto a = lattice_sites(m);
  const auto b = lattice_sites(m, 0.05, 42);
  const auto rep = run_lattice_deformation(make_path(a, b, 6), m, -1.3, lattice_options());
  CHECK(rep.verdict == Verdict::constant);
  CHECK(rep.samples.size() == 6);
  CHECK(rep.max_drift < 0.05);
  // the tracked gap moves continuously
  for (std::size_t k = 0; k + 1 < rep.samples.size(); ++k)
    CHECK(std::abs(rep.samples[k + 1].gap.mid() - rep.samples[k].gap.mid()) < 0.1);
}

TEST_CASE("sweeping the flux towards one half") {
  const auto m = small_model();
  const auto sites = lattice_sites(m);
  const int steps = 24;
  const auto thetas = flux_path(2, 1.0 / 3.0, 1.0 / 144.0, steps);
  REQUIRE(thetas.size() == std::size_t(steps + 1));
  CHECK(thetas.back().theta()(0, 1) == doctest::Approx(kPi / 2));
  std::vector<double> t;
  for (int k = 0; k <= steps; ++k) t.push_back(double(k) / steps);

  // On a 12 x 12 torus the Dirac points at flux 1/2 leave a finite-size gap near 0
  // wider than 0.5: the gap is still found but the invariant leaves 1.
  const auto drift = run_field_deformation(sites, t, thetas, m, -1.3, lattice_options());
  CHECK(drift.verdict == Verdict::drift);
  REQUIRE(drift.samples.size() == std::size_t(steps + 1));
  CHECK(drift.samples.front().chern.nearest == 1);
  CHECK(std::abs(drift.samples.back().chern.value) < 0.05);

  // With a threshold above that finite-size gap the sweep reports the closing.
  DeformOptions strict = lattice_options();
  strict.min_gap = 1.0;
  const auto rep = run_field_deformation(sites, t, thetas, m, -1.3, strict);
  CHECK(rep.verdict == Verdict::gap_closed);
  CHECK(rep.t_closed > 0.5);
  CHECK(rep.t_closed <= 1.0);
  REQUIRE(!rep.samples.empty());
  CHECK(rep.samples.back().t < rep.t_closed);
  for (const auto& s : rep.samples) CHECK(s.chern.nearest == 1);
}

TEST_CASE("a tracked energy outside every gap is an error") {
  const auto m = small_model();
  const auto sites = lattice_sites(m);
  CHECK(code_of([&] { run_lattice_deformation(make_path(sites, sites, 2), m, -3.5, lattice_options()); }) ==
        Errc::gap_closed);
  CHECK(code_of([&] { run_field_deformation(sites, {0.0}, {}, m, -1.3); }) == Errc::invalid_argument);
}

TEST_CASE("resolvent continuity along a jitter path") {
  ContinuumModel cm;
  cm.extent = 2.0;
  const auto a = generate(GeneratorKind::periodic_square, {}, cm.window(), 0);
  GeneratorParams jp;
  jp.jitter = 0.05;
  const auto b = generate(GeneratorKind::jittered_periodic, jp, cm.window(), 3);

  const auto flat = resolvent_continuity_sweep(make_path(a, a, 3), cplx(0, 1), cm);
  CHECK(flat.all_hold);
  for (const auto& s : flat.steps) CHECK(s.lhs == 0.0);

  const auto study = resolvent_halving(a, b, 6, cplx(0, 1), cm);
  CHECK(study.coarse.steps.size() == 5);
  CHECK(study.fine.steps.size() == 10);
  CHECK(study.coarse.all_hold);
  CHECK(study.fine.all_hold);
  CHECK(study.ratio >= 0.3);
  CHECK(study.ratio <= 0.7);
  CHECK(code_of([&] { resolvent_continuity_sweep(make_path(a, b, 3), cplx(1, 0), cm); }) == Errc::real_shift);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::constant) == "constant");
  CHECK(to_string(Verdict::gap_closed) == "gap-closed");
  CHECK(to_string(Verdict::drift) == "drift");
}
