#include "iscat/hierarchy.hpp"

#include <cmath>
#include <mutex>

#include "iscat/errors.hpp"

namespace iscat {

HierarchyMode parse_hierarchy_mode(const std::string& s) {
  if (s == "focusing") return HierarchyMode::Focusing;
  if (s == "defocusing") return HierarchyMode::Defocusing;
  if (s == "kdv") return HierarchyMode::KdV;
  throw Error(ErrorCode::InvalidInput, "unknown hierarchy mode: " + s);
}

DiffPolynomial apply_mode(const DiffPolynomial& p, HierarchyMode mode) {
  switch (mode) {
    case HierarchyMode::Focusing: return p;
    case HierarchyMode::Defocusing: return p.defocusing();
    case HierarchyMode::KdV: return p.kdv_reduction();
  }
  return p;
}

HierarchyState HierarchyState::initial(HierarchyMode mode) {
  HierarchyState s;
  s.k = 0;
  s.p = DiffPolynomial();
  s.r = DiffPolynomial::constant(1);
  s.mode = mode;
  return s;
}

DiffPolynomial HierarchyState::p_in_mode() const { return apply_mode(p, mode); }
DiffPolynomial HierarchyState::r_in_mode() const { return apply_mode(r, mode); }

HierarchyState recursion_step(const HierarchyState& s) {
  const GaussRational half_i(0, Rational(1, 2));
  HierarchyState n;
  n.k = s.k + 1;
  n.mode = s.mode;
  n.p = half_i * s.p.derivative() + s.r * DiffPolynomial::u();
  DiffPolynomial rhs = GaussRational::I() * (n.p * DiffPolynomial::ubar() - n.p.conj() * DiffPolynomial::u());
  n.r = antiderivative(rhs);
  return n;
}

std::pair<DiffPolynomial, DiffPolynomial> hierarchy_pair(int k) {
  static std::mutex mu;
  static std::vector<HierarchyState> memo;
  std::lock_guard<std::mutex> lock(mu);
  if (memo.empty()) memo.push_back(HierarchyState::initial());
  while (static_cast<int>(memo.size()) <= k) memo.push_back(recursion_step(memo.back()));
  return {memo[k].p, memo[k].r};
}

namespace {

// Fourier symbol of the quadratic part: int u^{(a)} conj(u)^{(b)} = i^a (-i)^b int xi^{a+b} |uhat|^2.
GaussRational quadratic_symbol(const DiffPolynomial& q, bool kdv) {
  GaussRational acc;
  const GaussRational I = GaussRational::I();
  auto ipow = [](GaussRational base, int n) {
    GaussRational r(1);
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
  };
  for (const auto& [mon, c] : q.terms()) {
    if (mon.size() != 2) continue;
    const int a = Factor::order(mon[0]);
    const int b = Factor::order(mon[1]);
    if (kdv && (a + b) % 2) continue;  // odd symbols integrate to zero for real u
    // for real u (KdV) both factors are u; the second behaves like conj(u)
    const bool second_conj = kdv || Factor::conj(mon[1]);
    const bool first_conj = !kdv && Factor::conj(mon[0]);
    GaussRational sym = ipow(first_conj ? -I : I, a) * ipow(second_conj ? -I : I, b);
    acc = acc + c * sym;
  }
  return acc;
}

}  // namespace

CalibratedDensity hamiltonian_density(int k, HierarchyMode mode, int cap) {
  if (k < 0 || k > cap)
    throw Error(ErrorCode::Domain, "hamiltonian index out of range [0, " + std::to_string(cap) + "]");
  CalibratedDensity out;
  out.k = k;
  out.mode = mode;
  out.raw = apply_mode(hierarchy_pair(k + 2).second, mode);
  const bool kdv = mode == HierarchyMode::KdV;
  const GaussRational sym = quadratic_symbol(out.raw, kdv);
  if (sym.is_zero()) {
    if (!kdv) throw Error(ErrorCode::Domain, "quadratic part of the density vanishes");
    // the lowest KdV density is linear: normalize to int u
    auto lin = out.raw.degree_part(1).terms();
    auto it = lin.find(Monomial{Factor::make(0, false)});
    if (it != lin.end()) {
      out.constant = GaussRational(1) / it->second;
      out.density = out.constant * out.raw;
      return out;
    }
    out.trivial = true;
    out.constant = 1;
    out.density = out.raw;
    return out;
  }
  // target quadratic part: (-1)^k int xi^k |uhat|^2; for KdV unit symbol
  const GaussRational target = (kdv || k % 2 == 0) ? GaussRational(1) : GaussRational(-1);
  out.constant = target / sym;
  if (out.constant.im != 0)
    throw Error(ErrorCode::Domain, "calibration ratio is not a real rational for k=" + std::to_string(k));
  out.density = out.constant * out.raw;
  return out;
}

cplx eval_density(const DiffPolynomial& p, const GridFunction& u) { return p.integrate(u); }

namespace {

std::vector<cvec> derivatives(const GridFunction& u, int kmax) {
  std::vector<cvec> d(kmax + 1);
  auto spec = to_spectral(u);
  for (int k = 0; k <= kmax; ++k) d[k] = to_physical(spectral_derivative(spec, k)).values;
  return d;
}

cplx ipow(int n) {
  static const cplx table[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  return table[((n % 4) + 4) % 4];
}

double quadratic_part(int j, const GridFunction& u) {
  auto s = to_spectral(u);
  const Grid& g = u.grid;
  double acc = 0.0;
  for (int k = 0; k < g.N; ++k) {
    if (g.wavenumber(k) == -g.N / 2 && j > 0) continue;
    acc += std::pow(g.xi(k), j) * std::norm(s.coeffs[k]);
  }
  return (j % 2 ? -1.0 : 1.0) * acc * g.dxi();
}

double quartic_part(int j, const GridFunction& u) {
  const int n = u.grid.N;
  auto d = derivatives(u, j - 2);
  cvec acc(n, 0.0);
  for (int a1 = 0; a1 <= j - 2; ++a1)
    for (int a2 = 0; a1 + a2 <= j - 2; ++a2) {
      const int a3 = j - 2 - a1 - a2;
      const double sgn = a1 % 2 ? -1.0 : 1.0;
      for (int x = 0; x < n; ++x) acc[x] += sgn * d[a2][x] * d[a3][x] * std::conj(d[a1][x] * d[0][x]);
    }
  return -(ipow(j) * integrate(u.grid, acc)).real();
}

double sextic_part(int j, const GridFunction& u) {
  const int n = u.grid.N;
  const int m = j - 4;
  auto d = derivatives(u, m);
  const Grid& g = u.grid;
  cvec acc(n, 0.0);
  for (int a1 = 0; a1 <= m; ++a1)
    for (int a2 = 0; a1 + a2 <= m; ++a2)
      for (int a3 = 0; a1 + a2 + a3 <= m; ++a3)
        for (int a4 = 0; a1 + a2 + a3 + a4 <= m; ++a4) {
          const int a5 = m - a1 - a2 - a3 - a4;
          const double sgn = (a1 + a2) % 2 ? -1.0 : 1.0;
          GridFunction inner(g);
          for (int x = 0; x < n; ++x) inner.values[x] = d[0][x] * std::conj(d[a4][x] * d[a5][x]);
          auto dinner = spectral_derivative(inner, a3);
          for (int x = 0; x < n; ++x) {
            acc[x] += sgn * (d[a1][x] * d[a2][x] * d[0][x] * std::conj(d[a3][x] * d[a4][x] * d[a5][x]) +
                             d[a1][x] * d[a2][x] * std::conj(d[0][x]) * dinner.values[x]);
          }
        }
  // overall phase (-i)^j; i^j gives the wrong sign at odd j
  return (ipow(-j) * integrate(g, acc)).real();
}

}  // namespace

double h_component(int j, int degree, const GridFunction& u) {
  switch (degree) {
    case 2:
      if (j < 0) throw Error(ErrorCode::Domain, "H_{j,2} needs j >= 0");
      return quadratic_part(j, u);
    case 4:
      if (j < 2) throw Error(ErrorCode::Domain, "H_{j,4} needs j >= 2");
      return quartic_part(j, u);
    case 6:
      if (j < 4) throw Error(ErrorCode::Domain, "H_{j,6} needs j >= 4");
      return sextic_part(j, u);
    default:
      throw Error(ErrorCode::Domain, "degree must be 2, 4 or 6");
  }
}

double h_exact_signed(int j, const GridFunction& u, bool focusing) {
  if (j < 0 || j > 5) throw Error(ErrorCode::Domain, "h_exact supports 0 <= j <= 5");
  double v = quadratic_part(j, u);
  if (j >= 2) v += (focusing ? -1.0 : 1.0) * quartic_part(j, u);
  if (j >= 4) v += sextic_part(j, u);
  return v;
}

double h_exact(int j, const GridFunction& u) { return h_exact_signed(j, u, false); }

double kdv_poly_energy(int k, const GridFunction& u) {
  if (!u.is_real(1e-12 * (1.0 + l2_norm(u))))
    throw Error(ErrorCode::InvalidInput, "KdV energies need real-valued data");
  const int n = u.grid.N;
  auto d = derivatives(u, 2);
  cvec f(n);
  for (int x = 0; x < n; ++x) {
    const double v = d[0][x].real(), v1 = d[1][x].real(), v2 = d[2][x].real();
    switch (k) {
      case -1: f[x] = v; break;
      case 0: f[x] = v * v; break;
      case 1: f[x] = v1 * v1 + 2 * v * v * v; break;
      case 2: f[x] = v2 * v2 + 10 * v * v1 * v1 + 5 * v * v * v * v; break;
      default: throw Error(ErrorCode::Domain, "KdV energies available for k in {-1,0,1,2}");
    }
  }
  return integrate(u.grid, f).real();
}

}  // namespace iscat
