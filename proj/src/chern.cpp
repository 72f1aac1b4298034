#include "apw/chern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apw/errors.hpp"

namespace apw {

std::vector<Eigen::Index> interior_indices(const Basis& b, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw Error(Errc::invalid_argument, "interior fraction must lie in (0,1]");
  const Box sub = b.window().scaled(fraction);
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (sub.contains(b.position(i))) rows.push_back(Eigen::Index(i));
  if (rows.empty()) throw Error(Errc::empty_interior, "interior sub-window contains no basis elements");
  return rows;
}

namespace {

// Volume covered by `count` basis indices; internal orbitals share a site.
double covered_volume(const Basis& b, std::size_t count) {
  return double(count) / double(b.orbitals()) * b.cell_measure();
}

}  // namespace

cplx trace_per_volume(const CMat& a, const Basis& b, double fraction) {
  const auto rows = interior_indices(b, fraction);
  cplx sum = 0.0;
  for (auto i : rows) sum += a(i, i);
  return sum / covered_volume(b, rows.size());
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

int permutation_sign(const std::vector<int>& perm) {
  int sign = 1;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = std::size_t(perm[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

// Adds sgn * diag(Z * prod_{j >= level} A[perm[j]])[rows] for every
// permutation extending the prefix, sharing prefix products.
void accumulate(const CMat& z, const std::vector<CMat>& comm, const std::vector<Eigen::Index>& rows,
                std::vector<int>& perm, std::vector<bool>& used, std::size_t level,
                std::vector<cplx>& diag) {
  const std::size_t k = comm.size();
  if (level + 1 == k) {
    std::size_t last = 0;
    while (used[last]) ++last;
    perm[level] = int(last);
    const int sgn = permutation_sign(perm);
    const CMat& a = comm[last];
    for (std::size_t r = 0; r < rows.size(); ++r)
      diag[r] += double(sgn) * z.row(Eigen::Index(r)).transpose().cwiseProduct(a.col(rows[r])).sum();
    return;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (used[j]) continue;
    used[j] = true;
    perm[level] = int(j);
    const CMat next = z * comm[j];
    accumulate(next, comm, rows, perm, used, level + 1, diag);
    used[j] = false;
  }
}

}  // namespace

ChernResult chern_weak(const CMat& p, const Basis& b, const std::vector<int>& axes,
                       const ChernOptions& opt) {
  const int k = int(axes.size());
  if (k == 0 || k % 2 != 0) throw Error(Errc::odd_dimension, "Chern degree must be even and positive");
  for (int i = 0; i < k; ++i) {
    if (axes[std::size_t(i)] < 0 || axes[std::size_t(i)] >= b.dim())
      throw Error(Errc::invalid_argument, "Chern axis out of range");
    for (int j = 0; j < i; ++j)
      if (axes[std::size_t(i)] == axes[std::size_t(j)]) throw Error(Errc::invalid_argument, "Chern axes must be distinct");
  }
  if (opt.fractions.empty()) throw Error(Errc::invalid_argument, "no interior fractions");
  std::vector<double> fractions = opt.fractions;
  std::sort(fractions.begin(), fractions.end());

  const Eigen::Index n = p.rows();
  std::vector<CMat> comm;
  for (int axis : axes) {
    CMat a(n, n);
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index r = 0; r < n; ++r)
        a(r, q) = -b.displacement(std::size_t(r), std::size_t(q))[axis] * p(r, q);
    comm.push_back(std::move(a));
  }

  const auto rows = interior_indices(b, fractions.back());
  CMat z(Eigen::Index(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) z.row(Eigen::Index(r)) = p.row(rows[r]);
  std::vector<cplx> diag(rows.size(), 0.0);
  std::vector<int> perm(std::size_t(k), 0);
  std::vector<bool> used(std::size_t(k), false);
  accumulate(z, comm, rows, perm, used, 0, diag);

  const cplx prefactor = std::pow(cplx(0.0, -2.0 * kPi), k / 2) / factorial(k / 2) * kChernOrientation;
  ChernResult res;
  res.k = k;
  res.fractions = fractions;
  for (double f : fractions) {
    const Box sub = b.window().scaled(f);
    cplx sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (f == fractions.back() || sub.contains(b.position(std::size_t(rows[r])))) {
        sum += diag[r];
        ++count;
      }
    if (count == 0) throw Error(Errc::empty_interior, "interior sub-window contains no basis elements");
    const cplx value = prefactor * sum / covered_volume(b, count);
    res.per_fraction.push_back(value.real());
    res.imag = std::max(res.imag, std::abs(value.imag()));
  }
  res.value = res.per_fraction.back();
  const std::size_t m = res.per_fraction.size();
  res.spread = m >= 2 ? std::abs(res.per_fraction[m - 1] - res.per_fraction[m - 2]) : 0.0;
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = 1.0 / fractions[i], y = res.per_fraction[i];
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    res.extrapolated = (sy - slope * sx) / double(m);
  } else {
    res.extrapolated = res.value;
  }
  res.nearest = std::lround(res.value);
  res.integral = std::abs(res.value - double(res.nearest)) < opt.tolerance;
  return res;
}

ChernResult chern_weak(const SpectralProjection& p, const std::vector<int>& axes, const ChernOptions& opt) {
  return chern_weak(p.matrix, *p.basis, axes, opt);
}

ChernResult chern_top(const CMat& p, const Basis& b, const ChernOptions& opt) {
  if (b.dim() % 2 != 0) throw Error(Errc::odd_dimension, "top Chern number needs even dimension");
  std::vector<int> axes(std::size_t(b.dim()));
  std::iota(axes.begin(), axes.end(), 0);
  return chern_weak(p, b, axes, opt);
}

ChernResult chern_top(const SpectralProjection& p, const ChernOptions& opt) {
  return chern_top(p.matrix, *p.basis, opt);
}

CMat bloch_hamiltonian(int p, int q, const std::vector<double>& onsite, double kx, double ky) {
  if (q < 1) throw Error(Errc::invalid_argument, "bloch oracle: q must be >= 1");
  if (!onsite.empty() && int(onsite.size()) != q)
    throw Error(Errc::invalid_argument, "bloch oracle: onsite pattern must have length q");
  const double alpha = double(p) / double(q);
  CMat h = CMat::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    h(j, j) = -2.0 * std::cos(ky - 2.0 * kPi * alpha * j) + (onsite.empty() ? 0.0 : onsite[std::size_t(j)]);
    if (j + 1 < q) {
      h(j + 1, j) += -1.0;
      h(j, j + 1) += -1.0;
    }
  }
  h(q - 1, 0) += -std::polar(1.0, kx);
  h(0, q - 1) += -std::polar(1.0, -kx);
  return h;
}

OracleResult bloch_oracle(int p, int q, const std::vector<double>& onsite, int band_lo, int band_hi,
                          int nk) {
  if (q < 1 || q > 12) throw Error(Errc::invalid_argument, "bloch oracle: need 1 <= q <= 12");
  if (band_lo < 0 || band_hi < band_lo || band_hi >= q)
    throw Error(Errc::invalid_argument, "bloch oracle: band range out of bounds");
  if (nk < 2) throw Error(Errc::invalid_argument, "bloch oracle: nk must be >= 2");
  const int nb = band_hi - band_lo + 1;
  std::vector<CMat> u(std::size_t(nk * nk));
  OracleResult res;
  res.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      const double kx = 2.0 * kPi * i / nk, ky = 2.0 * kPi * j / nk;
      Eigen::SelfAdjointEigenSolver<CMat> es(bloch_hamiltonian(p, q, onsite, kx, ky));
      const RVec& e = es.eigenvalues();
      if (band_lo > 0) res.min_gap = std::min(res.min_gap, e[band_lo] - e[band_lo - 1]);
      if (band_hi + 1 < q) res.min_gap = std::min(res.min_gap, e[band_hi + 1] - e[band_hi]);
      u[std::size_t(i * nk + j)] = es.eigenvectors().middleCols(band_lo, nb);
    }
  if (res.min_gap < 1e-6) throw Error(Errc::gapless_band, "bloch oracle: band range is not isolated");
  auto link = [&](int i1, int j1, int i2, int j2) {
    const CMat& a = u[std::size_t(((i1 % nk) * nk) + (j1 % nk))];
    const CMat& b = u[std::size_t(((i2 % nk) * nk) + (j2 % nk))];
    const cplx d = (a.adjoint() * b).determinant();
    return d / std::abs(d);
  };
  double total = 0.0;
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      const cplx f = link(i, j, i + 1, j) * link(i + 1, j, i + 1, j + 1) *
                     std::conj(link(i, j + 1, i + 1, j + 1)) * std::conj(link(i, j, i, j + 1));
      total += std::arg(f);
    }
  res.raw = total / (2.0 * kPi);
  res.chern = std::lround(res.raw);
  return res;
}

}  // namespace apw
