#include <cmath>
#include <vector>

#include "iscat/energies.hpp"
#include "iscat/errors.hpp"
#include "iscat/parallel.hpp"

namespace iscat {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Coefficients by wavenumber over the smallest symmetric band holding all
// non-negligible modes (Nyquist dropped).
struct Band {
  int lo = 0, hi = -1;  // wavenumbers
  std::vector<cplx> c;  // c[m - lo]
  double dxi = 0.0;
  cplx at(int m) const { return c[m - lo]; }
};

Band active_band(const GridFunction& u) {
  const auto sp = to_spectral(u);
  const Grid& g = u.grid;
  double peak = 0.0;
  for (const auto& c : sp.coeffs) peak = std::max(peak, std::abs(c));
  Band b;
  b.dxi = g.dxi();
  if (peak == 0.0) return b;
  int mmax = 0;
  for (int k = 0; k < g.N; ++k) {
    const int m = g.wavenumber(k);
    if (m == -g.N / 2) continue;
    if (std::abs(sp.coeffs[k]) > 1e-15 * peak) mmax = std::max(mmax, std::abs(m));
  }
  b.lo = -mmax;
  b.hi = mmax;
  b.c.assign(2 * mmax + 1, 0.0);
  for (int k = 0; k < g.N; ++k) {
    const int m = g.wavenumber(k);
    if (m >= b.lo && m <= b.hi && m != -g.N / 2) b.c[m - b.lo] = sp.coeffs[k];
  }
  return b;
}

}  // namespace

double quartic_term(const GridFunction& u, double s) {
  if (!(s > -0.5)) throw Error(ErrorCode::Domain, "quartic_term needs s > -1/2");
  const Band b = active_band(u);
  const int n = b.hi - b.lo + 1;
  if (n <= 0) return 0.0;
  // symbol f(x) = (1 + x^2)^s and its first two derivatives on the band and its doubles
  const int lo2 = 2 * b.lo, n2 = 4 * b.hi + 1;
  std::vector<double> f(n2), f1(n2), f2(n2);
  for (int i = 0; i < n2; ++i) {
    const double x = (lo2 + i) * b.dxi, q = 1.0 + x * x;
    f[i] = std::pow(q, s);
    f1[i] = 2 * s * x * std::pow(q, s - 1);
    f2[i] = 2 * s * std::pow(q, s - 1) + 4 * s * (s - 1) * x * x * std::pow(q, s - 2);
  }
  auto F = [&](const std::vector<double>& t, int m) { return t[m - lo2]; };

  // xi1 + xi2 = eta1 + eta2; kernel [f(xi1) + f(xi2) - f(eta1) - f(eta2)] / ((xi1 - eta1)(xi1 - eta2))
  std::vector<double> partial(n, 0.0);
  parallel_for(n, [&](int i1) {
    const int m1 = b.lo + i1;
    const cplx c1 = std::conj(b.at(m1));
    if (c1 == 0.0) return;
    double acc = 0.0;
    for (int n1 = b.lo; n1 <= b.hi; ++n1) {
      const cplx cn1 = b.at(n1);
      if (cn1 == 0.0) continue;
      for (int n2 = b.lo; n2 <= b.hi; ++n2) {
        const int m2 = n1 + n2 - m1;
        if (m2 < b.lo || m2 > b.hi) continue;
        const cplx prod = c1 * std::conj(b.at(m2)) * cn1 * b.at(n2);
        if (prod == 0.0) continue;
        const int ia = m1 - n1, ib = m1 - n2;
        double k;
        if (ia != 0 && ib != 0) {
          k = (F(f, m1) + F(f, m2) - F(f, n1) - F(f, n2)) / (ia * b.dxi * ib * b.dxi);
        } else if (ia == 0 && ib != 0) {
          k = (F(f1, m1) - F(f1, n2)) / (ib * b.dxi);
        } else if (ib == 0 && ia != 0) {
          k = (F(f1, m1) - F(f1, n1)) / (ia * b.dxi);
        } else {
          k = F(f2, m1);
        }
        acc += k * prod.real();
      }
    }
    partial[i1] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total * b.dxi * b.dxi * b.dxi / (4 * kPi);
}

double kdv_cubic_term(const GridFunction& u, double s) {
  if (!(s >= -1.0)) throw Error(ErrorCode::Domain, "kdv_cubic_term needs s >= -1");
  if (!u.is_real(1e-12 * (1.0 + l2_norm(u)))) throw Error(ErrorCode::InvalidInput, "kdv_cubic_term needs real data");
  const Band b = active_band(u);
  const int n = b.hi - b.lo + 1;
  if (n <= 0) return 0.0;
  auto g = [&](int m) {
    const double x = m * b.dxi;
    return x * std::pow(1.0 + x * x, s);
  };
  auto g1 = [&](int m) {
    const double x = m * b.dxi, q = 1.0 + x * x;
    return std::pow(q, s - 1) * (1.0 + (1.0 + 2 * s) * x * x);
  };
  std::vector<double> partial(n, 0.0);
  parallel_for(n, [&](int i1) {
    const int m1 = b.lo + i1;
    double acc = 0.0;
    for (int m2 = b.lo; m2 <= b.hi; ++m2) {
      const int m3 = -m1 - m2;
      if (m3 < b.lo || m3 > b.hi) continue;
      const cplx prod = b.at(m1) * b.at(m2) * b.at(m3);
      if (prod == 0.0) continue;
      double k;
      const int zeros = (m1 == 0) + (m2 == 0) + (m3 == 0);
      if (zeros == 0) {
        k = (g(m1) + g(m2) + g(m3)) / (m1 * b.dxi * m2 * b.dxi * m3 * b.dxi);
      } else if (zeros == 1) {
        const int m = m1 != 0 ? m1 : m2;
        const double x = m * b.dxi;
        k = (g1(m) - g1(0)) / (x * x);
      } else {
        k = 3 * s;
      }
      acc += k * prod.real();
    }
    partial[i1] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total * b.dxi * b.dxi * 2.0 / (3.0 * std::sqrt(2 * kPi));
}

}  // namespace iscat
