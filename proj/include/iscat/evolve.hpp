#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iscat/energies.hpp"
#include "iscat/grid.hpp"

namespace iscat {

// i u_t + u_xx +- 2 u|u|^2 = 0; u_t + u_xxx +- 2 (|u|^2 u)_x = 0; u_t + u_xxx - 6 u u_x = 0.
// The upper sign is focusing.
enum class Equation { NlsFocusing, NlsDefocusing, MkdvFocusing, MkdvDefocusing, Kdv };

Equation parse_equation(const std::string& s);
std::string to_string(Equation e);
// scattering problem whose transmission coefficient the flow preserves
ScatterMode scatter_mode(Equation e);

struct FlowConfig {
  Equation equation = Equation::NlsDefocusing;
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_every = 0;       // steps between snapshots; 0 keeps only the endpoints
  bool dealias = true;          // 2/3 rule after each nonlinear substep
  double blowup_bound = 1e3;    // sup |u| above which BlowupDetected is raised
};

struct Snapshot {
  double t;
  GridFunction u;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<double> mass;  // ||u||^2 after every step, mass[0] at t = 0
  int steps = 0;
};

// Strang steps L(dt/2) N(dt) L(dt/2); dt may be negative.
GridFunction advance(const GridFunction& u, Equation eq, double dt, int steps, bool dealias = true,
                     double blowup_bound = 1e3);

Trajectory evolve(const GridFunction& u0, const FlowConfig& cfg);

// "H2", "E0.25", "P0.5"; H_k is the NLS/mKdV Hamiltonian or, under KdV, the polynomial energy E_k.
struct Quantity {
  enum class Kind { H, E, P } kind;
  double index;
  std::string name;
};

Quantity parse_quantity(const std::string& s);
std::vector<Quantity> parse_quantities(const std::string& csv);

struct DriftRow {
  double t;
  std::string quantity;
  double value = 0.0;
  double abs_drift = 0.0;
  double rel_drift = 0.0;  // abs_drift / max(|Q(0)|, size of the matching quadratic form at t = 0)
  double err = 0.0;        // evaluation error estimate
  std::optional<std::string> error;
};

double evaluate_quantity(const Quantity& q, const GridFunction& u, Equation eq, double* err = nullptr);

std::vector<DriftRow> conservation_report(const Trajectory& traj, Equation eq, const std::vector<Quantity>& quantities);

// exact solutions used as references
GridFunction nls_soliton(const Grid& g, double t);             // e^{it} sech x, focusing
GridFunction kdv_soliton(const Grid& g, double t);             // -2 sech^2(x - 4t)
GridFunction mkdv_soliton(const Grid& g, double c, double t);  // sqrt(c) sech(sqrt(c)(x - ct)), focusing
GridFunction linear_propagate(const GridFunction& u, Equation eq, double t);

}  // namespace iscat
