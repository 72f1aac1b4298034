#include <doctest.h>

#include <cmath>
#include <random>

#include "apw/errors.hpp"
#include "apw/magnetics.hpp"
#include "apw/model.hpp"
#include "apw/translations.hpp"

using namespace apw;

namespace {

RVec vec(std::initializer_list<double> v) {
  RVec x(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

RVec random_vec(std::mt19937_64& rng, int d, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RVec x(d);
  for (int i = 0; i < d; ++i) x[i] = u(rng);
  return x;
}

CVec random_cvec(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("cocycle values") {
  const auto c = MagneticCocycle::from_flux(2, 0.5);
  CHECK(c.theta()(0, 1) == doctest::Approx(kPi / 2));
  CHECK(c.theta()(1, 0) == doctest::Approx(-kPi / 2));
  const cplx s = c.sigma(vec({1, 0}), vec({0, 1}));
  CHECK(s.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.imag() == doctest::Approx(-1.0));
  CHECK(std::abs(c.sigma(vec({1, 2}), vec({1, 2})) - 1.0) < 1e-15);

  const auto z = MagneticCocycle::zero(3);
  CHECK(z.trivial());
  CHECK(z.sigma(vec({1, 2, 3}), vec({-4, 5, 0.5})) == cplx(1.0, 0.0));
}

TEST_CASE("one dimension is always trivial") {
  RMat t(1, 1);
  t << 2.0;
  CHECK(MagneticCocycle(t).trivial());
  CHECK(MagneticCocycle::from_upper(1, {}).trivial());
  CHECK_THROWS(MagneticCocycle::from_flux(1, 0.3));
}

TEST_CASE("input is antisymmetrized") {
  RMat t(2, 2);
  t << 1.0, 3.0, 1.0, 2.0;
  const MagneticCocycle c(t);
  CHECK(c.theta()(0, 0) == 0.0);
  CHECK(c.theta()(0, 1) == doctest::Approx(1.0));
  CHECK(c.theta()(1, 0) == doctest::Approx(-1.0));
  const auto u = MagneticCocycle::from_upper(3, {0.1, 0.2, 0.3});
  CHECK(u.theta()(1, 2) == doctest::Approx(0.3));
  CHECK(u.upper() == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("cocycle identity and inverse conjugation hold for random arguments") {
  std::mt19937_64 rng(17);
  for (int d : {2, 3, 4}) {
    std::vector<double> up;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < d * (d - 1) / 2; ++k) up.push_back(u(rng));
    const auto c = MagneticCocycle::from_upper(d, up);
    for (int trial = 0; trial < 200; ++trial) {
      const RVec x = random_vec(rng, d, 5), y = random_vec(rng, d, 5), z = random_vec(rng, d, 5);
      CHECK(cocycle_identity_residual(c, x, y, z) < 1e-12);
      const auto [r1, r2] = inverse_conjugation_residuals(c, x, y);
      CHECK(r1 < 1e-12);
      CHECK(r2 < 1e-12);
      CHECK(std::abs(std::abs(c.sigma(x, y)) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("magnetic translations compose with the cocycle phase on a torus") {
  LatticeModel m;
  m.size = 6;
  m.flux = 1.0 / 3.0;
  const auto basis = std::make_shared<Basis>(Basis::sites(lattice_sites(m), Boundary::periodic));
  const auto c = MagneticCocycle::from_flux(2, m.flux);
  std::mt19937_64 rng(3);
  const CVec psi = random_cvec(rng, Eigen::Index(basis->size()));
  for (auto [a, b] : {std::pair{vec({1, 0}), vec({0, 1})}, std::pair{vec({2, 1}), vec({-1, 3})},
                      std::pair{vec({0, 1}), vec({1, 0})}}) {
    const CVec ub = magnetic_translate(c, b, psi, basis).values;
    const CVec uaub = magnetic_translate(c, a, ub, basis).values;
    const CVec uab = magnetic_translate(c, a + b, psi, basis).values;
    const cplx phase = std::polar(1.0, c.form(a, b));
    CHECK((uaub - phase * uab).norm() < 1e-10 * psi.norm());
    CHECK(std::abs(uab.norm() - psi.norm()) < 1e-10);
  }
}

TEST_CASE("grid translations compose and are unitary where defined") {
  const auto grid = std::make_shared<Basis>(Basis::grid(Box::cube(2, 0, 3), 0.25, Boundary::periodic));
  const auto c = MagneticCocycle::from_flux(2, 2.0 / 9.0);
  std::mt19937_64 rng(5);
  const CVec psi = random_cvec(rng, Eigen::Index(grid->size()));
  // shifts in the magnetic translation lattice (1.5 Z)^2 preserve the torus boundary condition
  const RVec a = vec({1.5, -1.5}), b = vec({0.0, 1.5});
  const CVec uaub = magnetic_translate(c, a, magnetic_translate(c, b, psi, grid).values, grid).values;
  const CVec uab = magnetic_translate(c, a + b, psi, grid).values;
  CHECK((uaub - std::polar(1.0, c.form(a, b)) * uab).norm() < 1e-10 * psi.norm());
  CHECK(std::abs(uab.norm() - psi.norm()) < 1e-10);
}

TEST_CASE("translation errors") {
  const auto grid = std::make_shared<Basis>(Basis::grid(Box::cube(2, 0, 2), 0.25));
  const auto c = MagneticCocycle::zero(2);
  const CVec psi = CVec::Ones(Eigen::Index(grid->size()));
  try {
    magnetic_translate(c, vec({0.1, 0}), psi, grid);
    FAIL("expected OffGrid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::off_grid);
  }
  LatticeModel m;
  m.size = 6;
  const auto sites = std::make_shared<Basis>(Basis::sites(lattice_sites(m), Boundary::periodic));
  try {
    magnetic_translate(c, vec({0.5, 0}), CVec::Ones(Eigen::Index(sites->size())), sites);
    FAIL("expected NoMatchingSites");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_matching_sites);
  }
}

TEST_CASE("reindexing moves the pattern and keeps the values up to phase") {
  LatticeModel m;
  m.size = 4;
  m.boundary = Boundary::open;
  const auto basis = std::make_shared<Basis>(Basis::sites(lattice_sites(m)));
  const auto c = MagneticCocycle::from_flux(2, 0.25);
  const RVec a = vec({0.3, -0.7});
  const CVec psi = CVec::LinSpaced(Eigen::Index(basis->size()), 1.0, 2.0);
  const auto t = magnetic_translate(c, a, psi, basis, SiteTranslation::reindex);
  CHECK((t.basis->position(0) - basis->position(0) - a).norm() < 1e-12);
  CHECK(t.values.cwiseAbs().isApprox(psi.cwiseAbs()));
  const CMat u = translation_matrix(c, a, *basis, *t.basis);
  CHECK((u * psi - t.values).norm() < 1e-12);
  CHECK((u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).norm() < 1e-12);
}
