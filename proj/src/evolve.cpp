#include "iscat/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iscat/errors.hpp"
#include "iscat/hierarchy.hpp"

namespace iscat {

Equation parse_equation(const std::string& s) {
  if (s == "nls-focusing") return Equation::NlsFocusing;
  if (s == "nls-defocusing") return Equation::NlsDefocusing;
  if (s == "mkdv-focusing") return Equation::MkdvFocusing;
  if (s == "mkdv-defocusing") return Equation::MkdvDefocusing;
  if (s == "kdv") return Equation::Kdv;
  throw Error(ErrorCode::InvalidInput, "unknown equation: " + s);
}

std::string to_string(Equation e) {
  switch (e) {
    case Equation::NlsFocusing: return "nls-focusing";
    case Equation::NlsDefocusing: return "nls-defocusing";
    case Equation::MkdvFocusing: return "mkdv-focusing";
    case Equation::MkdvDefocusing: return "mkdv-defocusing";
    case Equation::Kdv: return "kdv";
  }
  return "?";
}

ScatterMode scatter_mode(Equation e) {
  switch (e) {
    case Equation::NlsFocusing:
    case Equation::MkdvFocusing: return ScatterMode::Focusing;
    case Equation::NlsDefocusing:
    case Equation::MkdvDefocusing: return ScatterMode::Defocusing;
    case Equation::Kdv: return ScatterMode::KdV;
  }
  return ScatterMode::Defocusing;
}

namespace {

bool is_nls(Equation e) { return e == Equation::NlsFocusing || e == Equation::NlsDefocusing; }
bool is_focusing(Equation e) { return e == Equation::NlsFocusing || e == Equation::MkdvFocusing; }

// Spectral workspace for one grid: multipliers and dealiasing mask.
struct Stepper {
  Grid g;
  Equation eq;
  bool dealias;
  cvec half_linear;   // linear propagator over dt / 2
  std::vector<double> ik;  // xi by FFT index
  std::vector<char> keep;

  Stepper(const Grid& grid, Equation e, double dt, bool dl) : g(grid), eq(e), dealias(dl) {
    const int n = g.N;
    half_linear.resize(n);
    ik.resize(n);
    keep.resize(n);
    for (int k = 0; k < n; ++k) {
      const double xi = g.xi(k);
      ik[k] = xi;
      // NLS: uhat_t = -i xi^2 uhat; third-order flows: uhat_t = i xi^3 uhat
      const double phase = is_nls(eq) ? -xi * xi : xi * xi * xi;
      half_linear[k] = std::polar(1.0, phase * 0.5 * dt);
      const int m = g.wavenumber(k);
      keep[k] = 3 * std::abs(m) <= n && m != -n / 2;
    }
  }

  void linear_half(cvec& uh) const {
    for (size_t k = 0; k < uh.size(); ++k) uh[k] *= half_linear[k];
  }

  void truncate(cvec& uh) const {
    if (!dealias) return;
    for (size_t k = 0; k < uh.size(); ++k)
      if (!keep[k]) uh[k] = 0.0;
  }

  // physical values from raw spectral coefficients
  cvec to_x(const cvec& uh) const {
    cvec u = uh;
    fft_backward(u);
    const double inv = 1.0 / g.N;
    for (auto& v : u) v *= inv;
    return u;
  }

  // d/dx of physical data f, returned spectrally
  cvec dx_hat(cvec f) const {
    fft_forward(f);
    for (size_t k = 0; k < f.size(); ++k) f[k] *= cplx(0.0, ik[k]);
    return f;
  }

  // right-hand side of the nonlinear substep, spectral in and out
  cvec rhs(const cvec& uh) const {
    const cvec u = to_x(uh);
    cvec f(u.size());
    if (eq == Equation::Kdv) {
      // u_t = 6 u u_x = 3 (u^2)_x
      for (size_t j = 0; j < u.size(); ++j) f[j] = 3.0 * u[j].real() * u[j].real();
    } else {
      // u_t = -+ 2 (|u|^2 u)_x
      const double c = is_focusing(eq) ? -2.0 : 2.0;
      for (size_t j = 0; j < u.size(); ++j) f[j] = c * std::norm(u[j]) * u[j];
    }
    return dx_hat(std::move(f));
  }

  void nonlinear(cvec& uh, double dt) const {
    if (is_nls(eq)) {
      // exact pointwise phase rotation e^{+-2i|u|^2 dt}
      cvec u = to_x(uh);
      const double c = is_focusing(eq) ? 2.0 : -2.0;
      for (auto& v : u) v *= std::polar(1.0, c * std::norm(v) * dt);
      fft_forward(u);
      uh = std::move(u);
    } else {
      const size_t n = uh.size();
      auto axpy = [&](const cvec& a, double s, const cvec& b) {
        cvec r(n);
        for (size_t k = 0; k < n; ++k) r[k] = a[k] + s * b[k];
        return r;
      };
      const cvec k1 = rhs(uh);
      const cvec k2 = rhs(axpy(uh, 0.5 * dt, k1));
      const cvec k3 = rhs(axpy(uh, 0.5 * dt, k2));
      const cvec k4 = rhs(axpy(uh, dt, k3));
      for (size_t k = 0; k < n; ++k) uh[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    truncate(uh);
  }

  void step(cvec& uh, double dt) const {
    linear_half(uh);
    nonlinear(uh, dt);
    linear_half(uh);
  }
};

void check_blowup(const cvec& u, double bound, double t) {
  for (const auto& v : u) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > bound) {
      std::ostringstream os;
      os << "solution exceeded sup bound " << bound << " at t = " << t;
      throw Error(ErrorCode::BlowupDetected, os.str());
    }
  }
}

double mass_of(const cvec& u, double h) {
  double m = 0.0;
  for (const auto& v : u) m += std::norm(v);
  return m * h;
}

GridFunction from_hat(const Stepper& st, const cvec& uh, Equation eq) {
  GridFunction out(st.g, st.to_x(uh));
  if (eq == Equation::Kdv)
    for (auto& v : out.values) v = v.real();
  return out;
}

void check_input(const GridFunction& u, Equation eq) {
  if (u.grid.N < 4 || u.grid.N % 2) throw Error(ErrorCode::InvalidInput, "grid size must be even and >= 4");
  if (eq == Equation::Kdv && !u.is_real(1e-12 * (1.0 + l2_norm(u))))
    throw Error(ErrorCode::InvalidInput, "KdV needs real-valued data");
}

}  // namespace

GridFunction advance(const GridFunction& u, Equation eq, double dt, int steps, bool dealias, double blowup_bound) {
  check_input(u, eq);
  if (steps < 0) throw Error(ErrorCode::InvalidInput, "negative step count");
  const Stepper st(u.grid, eq, dt, dealias);
  cvec uh = u.values;
  fft_forward(uh);
  for (int i = 0; i < steps; ++i) {
    st.step(uh, dt);
    if (blowup_bound > 0) check_blowup(st.to_x(uh), blowup_bound, (i + 1) * dt);
  }
  return from_hat(st, uh, eq);
}

Trajectory evolve(const GridFunction& u0, const FlowConfig& cfg) {
  check_input(u0, cfg.equation);
  if (!(cfg.dt > 0) || !(cfg.t_end >= 0)) throw Error(ErrorCode::InvalidInput, "need dt > 0 and t_end >= 0");
  // the step is shrunk slightly so that a whole number of steps lands on t_end
  const int steps = static_cast<int>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double dt = steps > 0 ? cfg.t_end / steps : cfg.dt;
  const Stepper st(u0.grid, cfg.equation, dt, cfg.dealias);
  const double h = u0.grid.h();

  Trajectory tr;
  tr.steps = steps;
  tr.snapshots.push_back({0.0, u0});
  tr.mass.push_back(mass_of(u0.values, h));
  cvec uh = u0.values;
  fft_forward(uh);
  for (int i = 1; i <= steps; ++i) {
    st.step(uh, dt);
    const cvec u = st.to_x(uh);
    if (cfg.blowup_bound > 0) check_blowup(u, cfg.blowup_bound, i * dt);
    tr.mass.push_back(mass_of(u, h));
    if (i == steps || (cfg.snapshot_every > 0 && i % cfg.snapshot_every == 0))
      tr.snapshots.push_back({i * dt, from_hat(st, uh, cfg.equation)});
  }
  return tr;
}

Quantity parse_quantity(const std::string& s) {
  if (s.size() < 2) throw Error(ErrorCode::InvalidInput, "bad quantity: " + s);
  Quantity q;
  q.name = s;
  switch (s[0]) {
    case 'H': q.kind = Quantity::Kind::H; break;
    case 'E': q.kind = Quantity::Kind::E; break;
    case 'P': q.kind = Quantity::Kind::P; break;
    default: throw Error(ErrorCode::InvalidInput, "bad quantity: " + s);
  }
  size_t used = 0;
  try {
    q.index = std::stod(s.substr(1), &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "bad quantity: " + s);
  }
  if (used != s.size() - 1) throw Error(ErrorCode::InvalidInput, "bad quantity: " + s);
  if (q.kind == Quantity::Kind::H && q.index != std::floor(q.index))
    throw Error(ErrorCode::InvalidInput, "H index must be an integer: " + s);
  return q;
}

std::vector<Quantity> parse_quantities(const std::string& csv) {
  std::vector<Quantity> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (!item.empty()) out.push_back(parse_quantity(item));
  }
  return out;
}

double evaluate_quantity(const Quantity& q, const GridFunction& u, Equation eq, double* err) {
  if (err) *err = 0.0;
  const int k = static_cast<int>(q.index);
  EnergySpec sp;
  sp.s = q.index;
  sp.mode = scatter_mode(eq);
  switch (q.kind) {
    case Quantity::Kind::H:
      if (eq == Equation::Kdv) return kdv_poly_energy(k, u);
      return h_exact_signed(k, u, is_focusing(eq));
    case Quantity::Kind::E: {
      const auto r = energy_Es(u, sp);
      if (err) *err = r.err;
      return r.value;
    }
    case Quantity::Kind::P: {
      const auto r = momentum_Ps(u, sp);
      if (err) *err = r.err;
      return r.value;
    }
  }
  return 0.0;
}

namespace {

// size of the quadratic form that leads the quantity, used to normalise drifts
double quadratic_scale(const Quantity& q, const GridFunction& u, Equation eq) {
  double s = q.index;
  if (q.kind == Quantity::Kind::H) {
    if (q.index < 0) return 0.0;
    s = eq == Equation::Kdv ? q.index : 0.5 * q.index;
  }
  if (!(s > -0.5) && eq != Equation::Kdv) return 0.0;
  return energy_quadratic(u, s);
}

}  // namespace

std::vector<DriftRow> conservation_report(const Trajectory& traj, Equation eq, const std::vector<Quantity>& quantities) {
  std::vector<DriftRow> rows;
  if (traj.snapshots.empty()) return rows;
  const auto& u0 = traj.snapshots.front().u;
  for (const auto& q : quantities) {
    std::optional<double> q0;
    double scale = 0.0;
    for (const auto& snap : traj.snapshots) {
      DriftRow row;
      row.t = snap.t;
      row.quantity = q.name;
      try {
        row.value = evaluate_quantity(q, snap.u, eq, &row.err);
        if (!q0) {
          q0 = row.value;
          scale = std::max(std::abs(*q0), quadratic_scale(q, u0, eq));
        }
        row.abs_drift = std::abs(row.value - *q0);
        row.rel_drift = scale > 0 ? row.abs_drift / scale : row.abs_drift;
      } catch (const Error& e) {
        row.error = std::string(error_name(e.code())) + ": " + e.what();
        row.value = row.abs_drift = row.rel_drift = std::nan("");
      }
      rows.push_back(row);
    }
  }
  return rows;
}

GridFunction nls_soliton(const Grid& g, double t) {
  GridFunction u(g);
  for (int j = 0; j < g.N; ++j) u.values[j] = std::polar(1.0 / std::cosh(g.x(j)), t);
  return u;
}

GridFunction kdv_soliton(const Grid& g, double t) {
  GridFunction u(g);
  for (int j = 0; j < g.N; ++j) {
    const double c = std::cosh(g.x(j) - 4.0 * t);
    u.values[j] = -2.0 / (c * c);
  }
  return u;
}

GridFunction mkdv_soliton(const Grid& g, double c, double t) {
  GridFunction u(g);
  const double r = std::sqrt(c);
  for (int j = 0; j < g.N; ++j) u.values[j] = r / std::cosh(r * (g.x(j) - c * t));
  return u;
}

GridFunction linear_propagate(const GridFunction& u, Equation eq, double t) {
  auto sp = to_spectral(u);
  for (int k = 0; k < u.grid.N; ++k) {
    const double xi = u.grid.xi(k);
    const double phase = is_nls(eq) ? -xi * xi : xi * xi * xi;
    sp.coeffs[k] *= std::polar(1.0, phase * t);
  }
  return to_physical(sp);
}

}  // namespace iscat
