#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "apw/chern.hpp"
#include "apw/errors.hpp"
#include "apw/model.hpp"
#include "apw/operators.hpp"
#include "apw/spectral.hpp"
#include "apw/translations.hpp"

using namespace apw;

namespace {

RVec vec(std::initializer_list<double> v) {
  RVec x(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

DeloneSet single_atom(int d, double r) {
  DeloneSet s;
  s.dim = d;
  s.points = RMat::Zero(1, d);
  s.r = r;
  s.R = 2 * r;
  s.window = Box::cube(d, -1, 1);
  return s;
}

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

std::size_t site_index(const Basis& b, double x, double y) {
  for (std::size_t i = 0; i < b.size(); ++i)
    if (std::abs(b.position(i)[0] - x) < 1e-9 && std::abs(b.position(i)[1] - y) < 1e-9) return i;
  FAIL("site not found");
  return 0;
}

KernelOperator random_kernel(std::mt19937_64& rng, const BasisPtr& b) {
  std::normal_distribution<double> g;
  const Eigen::Index n = Eigen::Index(b->size());
  KernelOperator k;
  k.matrix = CMat(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      // decaying kernels keep the seminorms moderate
      const double decay = std::exp(-b->displacement(std::size_t(i), std::size_t(j)).norm());
      k.matrix(i, j) = decay * cplx(g(rng), g(rng));
    }
  k.basis = b;
  return k;
}

}  // namespace

TEST_CASE("free periodic 1D grid is the circulant second difference") {
  const int n = 40;
  const double h = 0.1;
  const auto grid = std::make_shared<Basis>(Basis::grid(Box::cube(1, 0, n * h), h, Boundary::periodic));
  const auto op = assemble_continuum(single_atom(1, 1.0), AtomicPotential::zero(), MagneticCocycle::zero(1), grid);
  CHECK(op.hermitian);
  std::vector<double> expected;
  for (int k = 0; k < n; ++k) expected.push_back((2.0 - 2.0 * std::cos(2 * kPi * k / n)) / (h * h));
  std::sort(expected.begin(), expected.end());
  const RVec ev = eig(op).values;
  for (int k = 0; k < n; ++k) CHECK(ev[k] == doctest::Approx(expected[std::size_t(k)]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("Gaussian well ground state converges under grid refinement") {
  ContinuumModel m;
  m.extent = 2.0;
  m.depth = 40.0;
  const DeloneSet atom = [] {
    DeloneSet s;
    s.dim = 2;
    s.points = RMat::Constant(1, 2, 0.5);
    s.r = 0.45;
    s.R = 1.5;
    s.window = Box::cube(2, -0.5, 1.5);
    return s;
  }();
  m.pitch = 0.1;
  const double coarse = eig(build_continuum_operator(m, atom, continuum_grid(m))).values[0];
  m.pitch = 0.05;
  const double fine = eig(build_continuum_operator(m, atom, continuum_grid(m))).values[0];
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  CHECK(std::abs(fine - extrapolated) <= 0.02 * std::abs(extrapolated));
  // the five-point Laplacian underestimates kinetic energy, so levels rise with refinement
  CHECK(fine > coarse);
}

TEST_CASE("Landau levels on a magnetic torus") {
  const double L = 4.0, h = 0.1;
  const double theta = 4.0 * kPi / (L * L);  // four flux quanta
  const double b = 2.0 * theta;
  const auto grid = std::make_shared<Basis>(Basis::grid(Box::cube(2, 0, L), h, Boundary::periodic));
  const auto c = MagneticCocycle::from_upper(2, {theta});
  const auto op = assemble_continuum(single_atom(2, 1.0), AtomicPotential::zero(), c, grid);
  const RVec ev = eig(op).values;
  for (int n = 0; n < 2; ++n)
    for (int j = 0; j < 4; ++j) CHECK(ev[4 * n + j] == doctest::Approx((2 * n + 1) * b).epsilon(0.05));
  CHECK(ev[3] - ev[0] < 0.01 * b);
}

TEST_CASE("magnetic translations commute with the free grid Hamiltonian") {
  const double L = 3.0, h = 0.25;
  const auto grid = std::make_shared<Basis>(Basis::grid(Box::cube(2, 0, L), h, Boundary::periodic));
  const auto c = MagneticCocycle::from_upper(2, {2.0 * kPi / (L * L)});
  const auto op = assemble_continuum(single_atom(2, 1.0), AtomicPotential::zero(), c, grid);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  CVec psi(op.matrix.rows());
  for (auto& x : psi) x = cplx(g(rng), g(rng));
  // shifts must commute with the boundary translations: (1.5 Z)^2 here
  for (const RVec& a : {vec({1.5, 0}), vec({0, 1.5}), vec({1.5, -3.0})}) {
    const CVec lhs = op.matrix * magnetic_translate(c, a, psi, grid).values;
    const CVec rhs = magnetic_translate(c, a, CVec(op.matrix * psi), grid).values;
    CHECK((lhs - rhs).norm() < 1e-10 * lhs.norm());
  }
}

TEST_CASE("free square lattice band") {
  LatticeModel m;
  m.size = 12;
  m.flux = 0.0;
  const auto op = build_lattice_operator(m, lattice_sites(m));
  const RVec ev = eig(op).values;
  CHECK(ev[0] >= -4.0 - 1e-12);
  CHECK(ev[ev.size() - 1] <= 4.0 + 1e-12);
  std::vector<double> expected;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) expected.push_back(-2 * std::cos(2 * kPi * i / 12) - 2 * std::cos(2 * kPi * j / 12));
  std::sort(expected.begin(), expected.end());
  for (Eigen::Index k = 0; k < ev.size(); ++k) CHECK(std::abs(ev[k] - expected[std::size_t(k)]) < 1e-10);
}

TEST_CASE("Hofstadter flux 1/3 gives three bands inside the Bloch bands") {
  LatticeModel m;
  m.size = 12;
  const auto op = build_lattice_operator(m, lattice_sites(m));
  const RVec ev = eig(op).values;
  const auto gaps = detect_gaps(ev, 0.5);
  REQUIRE(gaps.size() == 2);
  CHECK(std::count_if(ev.begin(), ev.end(), [&](double e) { return e < gaps[0].lo + 1e-12; }) == 48);
  CHECK(std::count_if(ev.begin(), ev.end(), [&](double e) { return e > gaps[1].hi - 1e-12; }) == 48);

  // band ranges from the magnetic Bloch Hamiltonian on a dense k grid
  std::vector<double> lo(3, INFINITY), hi(3, -INFINITY);
  const int nk = 60;
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) {
      const RVec e = eig(bloch_hamiltonian(1, 3, {}, 2 * kPi * a / nk, 2 * kPi * b / nk)).values;
      for (int n = 0; n < 3; ++n) {
        lo[std::size_t(n)] = std::min(lo[std::size_t(n)], e[n]);
        hi[std::size_t(n)] = std::max(hi[std::size_t(n)], e[n]);
      }
    }
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const std::size_t band = std::size_t(k / 48);
    CHECK(ev[k] >= lo[band] - 1e-2);
    CHECK(ev[k] <= hi[band] + 1e-2);
  }
  CHECK(gaps[0].lo <= hi[0] + 1e-2);
  CHECK(gaps[0].hi >= lo[1] - 1e-2);
}

TEST_CASE("every plaquette carries the flux") {
  for (double alpha : {1.0 / 3.0, 0.25, 1.0 / 6.0}) {
    LatticeModel m;
    m.size = 12;
    m.flux = alpha;
    const auto op = build_lattice_operator(m, lattice_sites(m));
    const cplx expected = std::polar(1.0, -2.0 * kPi * alpha);
    for (int x = 0; x < 12; ++x)
      for (int y = 0; y < 12; ++y) {
        const auto& b = *op.basis;
        const double x1 = (x + 1) % 12, y1 = (y + 1) % 12;
        const std::vector<std::size_t> loop{site_index(b, x, y), site_index(b, x1, y), site_index(b, x1, y1),
                                            site_index(b, x, y1)};
        CHECK(std::abs(loop_phase(op, loop) - expected) < 1e-10);
      }
  }
}

TEST_CASE("tight-binding on translated patterns is unitarily equivalent") {
  LatticeModel m;
  m.size = 8;
  m.boundary = Boundary::open;
  m.flux = 0.2;
  const DeloneSet set = lattice_sites(m, 0.1, 5);
  const auto hop = HoppingProfile::exponential(1.0, 1.0, 0.4, 1.4, 1.8);
  const auto c = MagneticCocycle::from_flux(2, m.flux);
  const OnsiteRule count = [](const LocalPattern& p) { return 0.1 * double(p.neighbours.size()); };
  const auto base = std::make_shared<Basis>(Basis::sites(set));
  const auto h0 = assemble_tightbinding(base, hop, c, count);
  for (const RVec& a : {vec({1.0, 0.0}), vec({0.37, -2.5})}) {
    DeloneSet moved = set;
    moved.points.rowwise() += a.transpose();
    for (int i = 0; i < 2; ++i) {
      moved.window.lo[std::size_t(i)] += a[i];
      moved.window.hi[std::size_t(i)] += a[i];
    }
    const auto target = std::make_shared<Basis>(Basis::sites(moved));
    const auto h1 = assemble_tightbinding(target, hop, c, count);
    const CMat u = translation_matrix(c, a, *base, *target);
    CHECK((u * h0.matrix * u.adjoint() - h1.matrix).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("zero hopping leaves the onsite diagonal") {
  LatticeModel m;
  m.size = 6;
  m.stripe = {1.0, -2.0, 0.5};
  const auto b = std::make_shared<Basis>(Basis::sites(lattice_sites(m), Boundary::periodic));
  const auto op = assemble_tightbinding(b, HoppingProfile::zero(1.1), MagneticCocycle::from_flux(2, 1.0 / 3.0),
                                        stripe_onsite(m));
  CMat off = op.matrix;
  off.diagonal().setZero();
  CHECK(off.isZero(0.0));
  for (std::size_t i = 0; i < b->size(); ++i) {
    const long col = std::lround(b->position(i)[0]) % 3;
    CHECK(op.matrix(Eigen::Index(i), Eigen::Index(i)).real() == m.stripe[std::size_t(col)]);
  }
}

TEST_CASE("assembly preconditions") {
  LatticeModel m;
  m.size = 6;
  const auto b = std::make_shared<Basis>(Basis::sites(lattice_sites(m), Boundary::periodic));
  CHECK(code_of([&] { assemble_tightbinding(b, HoppingProfile::zero(1.6), MagneticCocycle::zero(2)); }) ==
        Errc::range_too_large);
  CHECK(code_of([&] { assemble_tightbinding(b, HoppingProfile::zero(1.1), MagneticCocycle::from_flux(2, 0.1)); }) ==
        Errc::flux_not_commensurate);
  HoppingProfile skew;
  skew.range = 1.1;
  skew.amplitude = [](const RVec& s) -> cplx { return s.norm() < 1.05 ? cplx(0, 1) : cplx(0); };
  CHECK(code_of([&] { assemble_tightbinding(b, skew, MagneticCocycle::zero(2)); }) == Errc::not_hermitian);

  const auto grid = std::make_shared<Basis>(Basis::grid(Box::cube(2, 0, 2), 0.2));
  CHECK(code_of([&] { assemble_continuum(single_atom(2, 0.4), AtomicPotential::zero(), MagneticCocycle::zero(2), grid); }) ==
        Errc::pitch_too_coarse);
  AtomicPotential wide;
  wide.profile = [](const RVec&) { return -1.0; };
  wide.support = INFINITY;
  CHECK(code_of([&] { assemble_continuum(single_atom(2, 1.0), wide, MagneticCocycle::zero(2), grid); }) ==
        Errc::potential_not_compact);
}

TEST_CASE("twisted convolution is the represented product") {
  std::mt19937_64 rng(8);
  LatticeModel m;
  m.size = 6;
  m.boundary = Boundary::open;
  const auto b = std::make_shared<Basis>(Basis::sites(lattice_sites(m, 0.1, 2)));
  const auto f = random_kernel(rng, b), g = random_kernel(rng, b), h = random_kernel(rng, b);
  KernelOperator one;
  one.matrix = CMat::Identity(f.matrix.rows(), f.matrix.cols());
  one.basis = b;
  CHECK(twisted_convolve(f, one).matrix == f.matrix);
  const CMat left = twisted_convolve(twisted_convolve(f, g), h).matrix;
  const CMat right = twisted_convolve(f, twisted_convolve(g, h)).matrix;
  CHECK((left - right).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(!twisted_convolve(f, g).hermitian);

  KernelOperator other = g;
  other.twist = MagneticCocycle::from_flux(2, 0.1);
  CHECK(code_of([&] { twisted_convolve(f, other); }) == Errc::basis_mismatch);
  const auto b2 = std::make_shared<Basis>(Basis::sites(lattice_sites(m, 0.1, 3)));
  KernelOperator moved = g;
  moved.basis = b2;
  CHECK(code_of([&] { twisted_convolve(f, moved); }) == Errc::basis_mismatch);
}

TEST_CASE("Frechet seminorms") {
  LatticeModel m;
  m.size = 8;
  m.flux = 0.0;
  m.t = -1.0;
  const auto nn = build_lattice_operator(m, lattice_sites(m));
  CHECK(frechet_seminorm(nn, 0) == doctest::Approx(4.0));
  CHECK(spectral_norm(position_derivative(nn, 0)) == doctest::Approx(2.0));
  CHECK(frechet_seminorm(nn, 1) == doctest::Approx(8.0));

  KernelOperator diag = nn;
  diag.matrix = CMat::Zero(nn.matrix.rows(), nn.matrix.cols());
  diag.matrix.diagonal() = CVec::LinSpaced(nn.matrix.rows(), -1.0, 3.0);
  CHECK(frechet_seminorm(diag, 0) == doctest::Approx(3.0));
  CHECK(frechet_seminorm(diag, 2) == doctest::Approx(3.0));
  CHECK(code_of([&] { frechet_seminorm(diag, -1); }) == Errc::invalid_argument);
}

TEST_CASE("seminorms are submultiplicative") {
  std::mt19937_64 rng(12);
  LatticeModel m;
  m.size = 5;
  m.boundary = Boundary::open;
  const auto b = std::make_shared<Basis>(Basis::sites(lattice_sites(m, 0.1, 4)));
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, b), g = random_kernel(rng, b);
    const auto fg = twisted_convolve(f, g);
    for (int n = 0; n <= 2; ++n)
      CHECK(frechet_seminorm(fg, n) <= frechet_seminorm(f, n) * frechet_seminorm(g, n) * (1 + 1e-9));
  }
}

TEST_CASE("resolvent distance bound") {
  LatticeModel m;
  m.size = 8;
  m.flux = 0.25;
  const auto h1 = build_lattice_operator(m, lattice_sites(m));
  const cplx z(0.3, 0.5);
  const auto same = resolvent_distance_bound_check(h1, h1, z, 0.0);
  CHECK(same.lhs == 0.0);
  CHECK(same.holds);

  const double eps = 0.05;
  KernelOperator h2 = h1;
  h2.matrix(5, 5) += eps;
  const auto rep = resolvent_distance_bound_check(h1, h2, z, eps);
  CHECK(rep.holds);
  CHECK(rep.lhs <= eps / (z.imag() * z.imag()));
  CHECK(rep.norm_r1 <= 1.0 / z.imag() + 1e-12);
  CHECK(code_of([&] { resolvent_distance_bound_check(h1, h2, cplx(0.3, 0.0), eps); }) == Errc::real_shift);
  CHECK(code_of([&] { resolvent_distance_bound_check(h1, h2, z, eps / 2); }) == Errc::invalid_argument);

  ContinuumModel cm;
  cm.extent = 2.0;
  const auto grid = continuum_grid(cm);
  const Box w = cm.window();
  const auto a = generate(GeneratorKind::periodic_square, {}, w, 0);
  GeneratorParams jp;
  jp.jitter = 0.05;
  const auto path = make_path(a, generate(GeneratorKind::jittered_periodic, jp, w, 1), 5);
  for (std::size_t k = 0; k + 1 < path.samples.size(); ++k) {
    const auto p = build_continuum_operator(cm, path.samples[k], grid);
    const auto q = build_continuum_operator(cm, path.samples[k + 1], grid);
    const double vsup = (p.matrix - q.matrix).diagonal().cwiseAbs().maxCoeff();
    CHECK(resolvent_distance_bound_check(p, q, cplx(0, 1), vsup).holds);
  }
}

TEST_CASE("binary operator round trip") {
  LatticeModel m;
  m.size = 6;
  m.flux = 1.0 / 3.0;
  m.stripe = {0.5, -0.5};
  const auto op = build_lattice_operator(m, lattice_sites(m));
  std::stringstream ss;
  write_operator(ss, op);
  const auto back = read_operator(ss);
  CHECK(back.matrix == op.matrix);
  CHECK(back.hermitian == op.hermitian);
  CHECK(back.twist == op.twist);
  CHECK(back.basis->same_as(*op.basis));

  ContinuumModel cm;
  cm.extent = 1.0;
  const auto grid = continuum_grid(cm);
  LatticeModel one;
  one.size = 1;
  one.flux = 0.0;
  const auto cop = build_continuum_operator(cm, lattice_sites(one), grid);
  std::stringstream cs;
  write_operator(cs, cop);
  const auto cback = read_operator(cs);
  CHECK(cback.matrix == cop.matrix);
  CHECK(cback.basis->kind() == BasisKind::grid);
  CHECK(cback.basis->pitch() == cop.basis->pitch());

  std::stringstream bad("not an operator");
  CHECK(code_of([&] { read_operator(bad); }) == Errc::io_error);
}
