#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iscat/grid.hpp"
#include "iscat/scattering.hpp"

namespace iscat {

// Defocusing/Focusing cover both NLS and mKdV (same scattering problem).
struct EnergySpec {
  double s = 0.0;
  ScatterMode mode = ScatterMode::Defocusing;
  std::optional<int> N;         // number of subtracted Hamiltonians; default floor(s) (floor(s - 1/2) for P_s)
  double tau_max = 0.0;         // quadrature cutoff, analytic tail beyond; 0 picks 64 / 2^floor(max(s, 0))
  int jacobi_nodes = 24;        // Gauss-Jacobi nodes on [1, 2]
  bool check_poles = true;      // reject poles near the ray i[1/2, inf) (focusing, KdV)
  double pole_distance = 1e-3;
  SolverConfig solver{};
};

struct EnergyParts {
  double contour = 0.0;     // prefactor * ray integral (tail included)
  double correction = 0.0;  // sum of binomial(s, j) * H terms
  double poles = 0.0;       // pole contributions (trace formula only)
};

struct EnergyResult {
  double value = 0.0;
  EnergyParts parts;
  double err = 0.0;
  int N = 0;
  int evaluations = 0;                               // transmission solves
  std::vector<std::pair<std::string, double>> hvalues;  // Hamiltonians used
};

// cutoff actually used by the ray quadrature
double effective_tau_max(const EnergySpec& spec);

// binomial(s, j) for real s
double binom_real(double s, int j);

// Im int_0^z (1 + zeta^2)^s dzeta; throws BranchCut on i[1, inf) for non-integer s.
double xi_s(cplx z, double s);
// one-sided limit onto the cut, where both sides agree: z = i y, y >= 0
double xi_s_axis(double y, double s);
// int_0^t zeta^2 (1 - zeta^2)^s dzeta (real part past t = 1)
double xi_s_kdv(double t, double s);

EnergyResult energy_Es(const GridFunction& u, const EnergySpec& spec);
EnergyResult momentum_Ps(const GridFunction& u, const EnergySpec& spec);

// Real-line side of the trace formula plus the pole terms of `poles`.
EnergyResult trace_line_side(const GridFunction& u, const EnergySpec& spec, const PoleSet& poles);

// quadratic part of E_s: int (1 + xi^2)^s |uhat|^2
double energy_quadratic(const GridFunction& u, double s);
// quadratic part of P_s: <u, i u_x>_{H^{s-1/2}} = -int xi (1 + xi^2)^{s-1/2} |uhat|^2
double momentum_quadratic(const GridFunction& u, double s);

// Quartic part of the NLS energy E_s (defocusing sign).
double quartic_term(const GridFunction& u, double s);
// Cubic part of the KdV energy E_s for real u.
double kdv_cubic_term(const GridFunction& u, double s);

}  // namespace iscat
