#include "iscat/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "iscat/errors.hpp"
#include "iscat/parallel.hpp"

namespace iscat {

ScatterMode parse_scatter_mode(const std::string& s) {
  if (s == "defocusing") return ScatterMode::Defocusing;
  if (s == "focusing") return ScatterMode::Focusing;
  if (s == "kdv") return ScatterMode::KdV;
  if (s == "general") return ScatterMode::General;
  throw Error(ErrorCode::InvalidInput, "unknown scattering mode: " + s);
}

std::string to_string(ScatterMode m) {
  switch (m) {
    case ScatterMode::Defocusing: return "defocusing";
    case ScatterMode::Focusing: return "focusing";
    case ScatterMode::KdV: return "kdv";
    case ScatterMode::General: return "general";
  }
  return "?";
}

namespace {

double max_abs(const cvec& v) {
  double m = 0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(double x) {
  int r = 1;
  while (r < x) r *= 2;
  return r;
}

struct Mat2 {
  cplx a, b, c, d;
};

inline Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
inline Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
inline Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

// exp of a 2x2 matrix W = t I + M, M traceless with eigenvalues +-delta.
// The diagonal uses (delta +- m) written without cancellation so that nearly
// diagonal steps (large |z|, weak coupling) carry no rounding bias.
inline Mat2 expm2(const Mat2& W) {
  const cplx t = 0.5 * (W.a + W.d);
  const cplx ma = W.a - t;
  const cplx d2 = ma * ma + W.b * W.c;
  cplx delta = std::sqrt(d2);
  if (std::abs(delta) < 1e-4) {
    const cplx ch = 1.0 + d2 * (0.5 + d2 / 24.0);
    const cplx sc = 1.0 + d2 * (1.0 / 6.0 + d2 / 120.0);
    const cplx e = std::exp(t);
    return {e * (ch + sc * ma), e * sc * W.b, e * sc * W.c, e * (ch - sc * ma)};
  }
  // delta aligned with ma; exact (delta == ma) when the coupling vanishes
  if (ma != 0.0) delta = ma * std::sqrt(1.0 + W.b * W.c / (ma * ma));
  const cplx p = delta + ma;              // |p| >= |delta|
  const cplx m = W.b * W.c / p;           // delta - ma
  // eigenvalues t +- delta = W.a + m, W.d - m
  const cplx ep = std::exp(W.a + m), em = std::exp(W.d - m);
  const cplx sc = std::exp(t) * std::sinh(delta) / delta;
  const cplx wp = p / (2.0 * delta), wm = m / (2.0 * delta);  // wp == 1 exactly without coupling
  return {wp * ep + wm * em, sc * W.b, sc * W.c, wm * ep + wp * em};
}

// Fourth-order Magnus with Simpson nodes: Omega = H/6 (A0 + 4Am + A1) - H^2/12 [A0, A1].
template <class AFn>
std::pair<cplx, cplx> propagate(AFn A, int steps, int stride, double H, cplx y1, cplx y2, double bound) {
  const cplx h6 = H / 6.0;
  const cplx h12 = -H * H / 12.0;
  Mat2 A0 = A(0);
  for (int m = 0; m < steps; ++m) {
    const Mat2 Am = A((2 * m + 1) * stride);
    const Mat2 A1 = A((2 * m + 2) * stride);
    const Mat2 c1 = mul(A0, A1), c2 = mul(A1, A0);
    Mat2 W = h6 * (A0 + 4.0 * Am + A1);
    W = W + h12 * Mat2{c1.a - c2.a, c1.b - c2.b, c1.c - c2.c, c1.d - c2.d};
    const Mat2 E = expm2(W);
    const cplx n1 = E.a * y1 + E.b * y2;
    const cplx n2 = E.c * y1 + E.d * y2;
    y1 = n1;
    y2 = n2;
    if (!(std::abs(y1) < bound) || !(std::abs(y2) < bound))
      throw Error(ErrorCode::OverflowGuard, "Jost solution exceeded the overflow bound");
    A0 = A1;
  }
  return {y1, y2};
}

int substeps_for(const Grid& g, const SolverConfig& cfg, double scale) {
  const double need = g.h() * scale / cfg.step_bound;
  return next_pow2(std::max<double>(cfg.min_substeps, std::ceil(need)));
}

}  // namespace

ScatteringProblem::ScatteringProblem(GridFunction u, ScatterMode mode, SolverConfig cfg)
    : u_(std::move(u)), mode_(mode), cfg_(cfg) {
  if (mode == ScatterMode::General)
    throw Error(ErrorCode::InvalidInput, "general mode needs an explicit second potential");
  if (mode == ScatterMode::KdV && !u_.is_real(1e-12 * (1.0 + max_abs(u_.values))))
    throw Error(ErrorCode::InvalidInput, "KdV scattering needs a real potential");
  v_ = u_;
  if (mode == ScatterMode::Focusing)
    for (auto& c : v_.values) c = -c;
  max_coupling_ = max_abs(u_.values);
  if (mode == ScatterMode::KdV) max_coupling_ = std::max(1.0, max_coupling_);
}

ScatteringProblem::ScatteringProblem(GridFunction u, GridFunction v, SolverConfig cfg)
    : u_(std::move(u)), v_(std::move(v)), mode_(ScatterMode::General), cfg_(cfg) {
  if (!(u_.grid == v_.grid)) throw Error(ErrorCode::InvalidInput, "potentials must share a grid");
  max_coupling_ = std::max(max_abs(u_.values), max_abs(v_.values));
}

double ScatteringProblem::tail_magnitude() const {
  const int n = u_.grid.N;
  return std::max({std::abs(u_.values[0]), std::abs(u_.values[n - 1]), std::abs(v_.values[0]),
                   std::abs(v_.values[n - 1])});
}

std::shared_ptr<const Coupling> ScatteringProblem::coupling(int factor) const {
  if (!is_pow2(factor)) throw Error(ErrorCode::InvalidInput, "refinement factor must be a power of two");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(factor);
    if (it != cache_.end()) return it->second;
  }
  auto c = std::make_shared<Coupling>();
  c->factor = factor;
  const Grid& g = u_.grid;
  cvec fu = upsample(g, u_.values, factor);
  cvec fv = upsample(g, v_.values, factor);
  fu.push_back(fu.front());  // periodic closure at x = L/2
  fv.push_back(fv.front());
  if (mode_ == ScatterMode::KdV) {
    c->p.assign(fu.size(), 1.0);
    c->q = fu;
    for (auto& x : c->q) x = x.real();
  } else {
    c->p = fu;
    c->q.resize(fv.size());
    for (size_t i = 0; i < fv.size(); ++i) c->q[i] = std::conj(fv[i]);
  }
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(factor, std::move(c)).first->second;
}

ScatteringSample transmission_scaled(const ScatteringProblem& prob, cplx z, cplx w) {
  if (z.imag() < 0) throw Error(ErrorCode::Domain, "transmission needs Im z >= 0");
  const bool kdv = prob.mode() == ScatterMode::KdV;
  if (kdv && std::abs(z) < 1e-12) throw Error(ErrorCode::Domain, "KdV transmission is singular at z = 0");
  const Grid& g = prob.potential().grid;
  const SolverConfig& cfg = prob.config();
  const double scale = std::max(std::abs(z), prob.max_coupling() * std::max(1.0, std::abs(w)));
  const int r = substeps_for(g, cfg, scale);
  const int levels = cfg.richardson ? 2 : 1;
  auto cp = prob.coupling(2 * r * levels);
  const cplx d = cplx(0, 2) * z;

  auto run = [&](int sub) {
    const int stride = cp->factor / (2 * sub);
    const double H = g.h() / sub;
    auto A = [&](int idx) -> Mat2 {
      if (kdv) return {0.0, 1.0, w * cp->q[idx], d};
      return {0.0, w * cp->p[idx], cp->q[idx], d};
    };
    auto [a, c] = propagate(A, g.N * sub, stride, H, 1.0, 0.0, cfg.overflow_bound);
    const cplx tinv = kdv ? a - c / d : a;
    return std::make_tuple(tinv, a, c);
  };

  ScatteringSample s;
  s.z = z;
  s.tail = prob.tail_magnitude();
  auto [t1, a1, c1] = run(r);
  if (levels == 1) {
    s.Tinv = t1;
    s.a_end = a1;
    s.c_end = c1;
    s.substeps = r;
    s.err = 0.0;
    return s;
  }
  auto [t2, a2, c2] = run(2 * r);
  s.Tinv = t2 + (t2 - t1) / 15.0;
  s.err = std::abs(t2 - t1) / 15.0 + 1e-15 * std::abs(t2);
  s.a_end = a2;
  s.c_end = c2;
  s.substeps = 2 * r;
  return s;
}

ScatteringSample transmission(const ScatteringProblem& prob, cplx z) { return transmission_scaled(prob, z, 1.0); }

std::vector<ScatteringSample> transmission_batch(const ScatteringProblem& prob, const std::vector<cplx>& zs) {
  std::vector<ScatteringSample> out(zs.size());
  parallel_for(static_cast<int>(zs.size()), [&](int i) { out[i] = transmission(prob, zs[i]); });
  return out;
}

cplx t2_quadratic(const GridFunction& u, const GridFunction& v, cplx z) {
  if (!(z.imag() > 0)) throw Error(ErrorCode::Domain, "t2_quadratic needs Im z > 0");
  if (!(u.grid == v.grid)) throw Error(ErrorCode::InvalidInput, "potentials must share a grid");
  auto U = to_spectral(u), V = to_spectral(v);
  const Grid& g = u.grid;
  cplx acc = 0.0;
  for (int k = 0; k < g.N; ++k) acc += U.coeffs[k] * std::conj(V.coeffs[k]) / (2.0 * z + g.xi(k));
  return cplx(0, 1) * acc * g.dxi();
}

Components homogeneous_components(const ScatteringProblem& prob, cplx z, int max_j) {
  if (max_j < 1 || max_j > 6) throw Error(ErrorCode::Domain, "max_j must be in [1, 6]");
  if (!(z.imag() > 0)) throw Error(ErrorCode::Domain, "homogeneous components need Im z > 0");
  const bool kdv = prob.mode() == ScatterMode::KdV;
  const double b = besov_smallness(prob.potential());
  // scaled potential sqrt(w) u (NLS) or w u (KdV) kept in the small-data regime
  const double eps0 = b > 0 ? std::min(1.0, 0.1 / b) : 1.0;
  const double rho = kdv ? eps0 : eps0 * eps0;
  const int K = 32;
  std::vector<cplx> ws(K);
  for (int k = 0; k < K; ++k) ws[k] = std::polar(rho, 2.0 * M_PI * k / K);
  std::vector<ScatteringSample> vals(K);
  parallel_for(K, [&](int k) { vals[k] = transmission_scaled(prob, z, ws[k]); });

  std::vector<cplx> logs(K);
  double phase = 0.0;
  for (int k = 0; k < K; ++k) {
    logs[k] = std::log(vals[k].Tinv);
    if (k > 0) phase += std::arg(vals[k].Tinv / vals[k - 1].Tinv);
  }
  phase += std::arg(vals[0].Tinv / vals[K - 1].Tinv);
  if (std::abs(phase) > M_PI)
    throw Error(ErrorCode::IllConditionedFit, "T^{-1} winds around zero on the sampling circle");
  // continuous branch of the log along the circle
  for (int k = 1; k < K; ++k) {
    while (logs[k].imag() - logs[k - 1].imag() > M_PI) logs[k] -= cplx(0, 2 * M_PI);
    while (logs[k].imag() - logs[k - 1].imag() < -M_PI) logs[k] += cplx(0, 2 * M_PI);
  }

  auto coeffs = [&](const std::vector<cplx>& f, int stride) {
    std::vector<cplx> c(max_j);
    const int n = K / stride;
    for (int j = 1; j <= max_j; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < K; k += stride) acc += f[k] * std::pow(ws[k], -j);
      c[j - 1] = acc / static_cast<double>(n);
    }
    return c;
  };
  std::vector<cplx> tv(K);
  double ode_err = 0.0;
  for (int k = 0; k < K; ++k) {
    tv[k] = vals[k].Tinv;
    ode_err = std::max(ode_err, vals[k].err);
  }
  Components out;
  out.radius = rho;
  out.direct = coeffs(tv, 1);
  out.log = coeffs(logs, 1);
  auto dh = coeffs(tv, 2), lh = coeffs(logs, 2);
  double scale = 0.0, err = 0.0;
  for (int j = 0; j < max_j; ++j) {
    const double rj = std::pow(rho, j + 1);
    scale = std::max({scale, std::abs(out.direct[j]) * rj, std::abs(out.log[j]) * rj});
    err = std::max({err, std::abs(out.direct[j] - dh[j]) * rj, std::abs(out.log[j] - lh[j]) * rj});
  }
  out.err = err + ode_err;
  if (out.err > 1e-6 * std::max(scale, 1e-300) + 1e-13)
    throw Error(ErrorCode::IllConditionedFit, "homogeneous expansion did not resolve on the sampling circle");
  return out;
}

RenormalizedSample transmission_kdv_renormalized(const GridFunction& u, double tau, SolverConfig cfg) {
  if (!(tau >= 0.25)) throw Error(ErrorCode::Domain, "renormalized transmission needs tau >= 1/4");
  if (!u.is_real(1e-12 * (1.0 + max_abs(u.values))))
    throw Error(ErrorCode::InvalidInput, "KdV scattering needs a real potential");
  const Grid& g = u.grid;
  // U = int_{-inf}^x e^{-tau (x-y)} u(y) dy, i.e. Uhat = uhat / (tau + i xi)
  SpectralFunction s = to_spectral(u);
  for (int k = 0; k < g.N; ++k) s.coeffs[k] /= cplx(tau, g.xi(k));
  GridFunction Ucoarse = to_physical(s);
  const double umax = max_abs(Ucoarse.values);
  const int r = substeps_for(g, cfg, std::max(tau, umax));
  const int levels = cfg.richardson ? 2 : 1;
  const int factor = 2 * r * levels;
  cvec U = upsample(g, Ucoarse.values, factor);
  U.push_back(U.front());
  for (auto& x : U) x = x.real();

  auto run = [&](int sub) {
    const int stride = factor / (2 * sub);
    const double H = g.h() / sub;
    auto A = [&](int idx) -> Mat2 {
      const cplx Ui = U[idx];
      return {0.0, 1.0, -Ui * Ui, -(tau + 2.0 * Ui)};
    };
    return propagate(A, g.N * sub, stride, H, 1.0, 0.0, cfg.overflow_bound).first;
  };
  RenormalizedSample out;
  out.tau = tau;
  const cplx w1 = run(r);
  if (levels == 1) {
    out.S = 1.0 / w1;
    return out;
  }
  const cplx w2 = run(2 * r);
  const cplx w = w2 + (w2 - w1) / 15.0;
  out.S = 1.0 / w;
  out.err = std::abs(w2 - w1) / 15.0 / std::norm(w) * std::abs(w) + 1e-15;
  return out;
}

int PoleSet::total_multiplicity() const {
  int m = 0;
  for (const auto& p : poles) m += p.multiplicity;
  return m;
}

}  // namespace iscat
