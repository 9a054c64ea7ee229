#pragma once

#include <utility>

#include "iscat/diffpoly.hpp"
#include "iscat/grid.hpp"

namespace iscat {

enum class HierarchyMode { Focusing, Defocusing, KdV };

HierarchyMode parse_hierarchy_mode(const std::string& s);

// (p_k, r_k) are kept in the focusing variables; the other modes are
// obtained by substituting conj(u) -> -conj(u) or conj(u) -> 1.
struct HierarchyState {
  int k = 0;
  DiffPolynomial p, r;
  HierarchyMode mode = HierarchyMode::Focusing;

  static HierarchyState initial(HierarchyMode mode = HierarchyMode::Focusing);
  DiffPolynomial p_in_mode() const;
  DiffPolynomial r_in_mode() const;
};

// p_{k+1} = (i/2) p_k' + r_k u,  r_{k+1}' = i (p_{k+1} conj(u) - conj(p_{k+1}) u)
HierarchyState recursion_step(const HierarchyState& s);
// memoized (p_k, r_k) in focusing variables
std::pair<DiffPolynomial, DiffPolynomial> hierarchy_pair(int k);

DiffPolynomial apply_mode(const DiffPolynomial& p, HierarchyMode mode);

struct CalibratedDensity {
  int k = 0;
  HierarchyMode mode = HierarchyMode::Focusing;
  DiffPolynomial raw;      // r_{k+2} in the requested mode
  GaussRational constant;  // density = constant * raw
  DiffPolynomial density;
  bool trivial = false;    // quadratic part vanishes (KdV odd orders)
};

CalibratedDensity hamiltonian_density(int k, HierarchyMode mode, int cap = 8);

cplx eval_density(const DiffPolynomial& p, const GridFunction& u);

// Degree 2, 4, 6 parts of H_j (defocusing sign convention).
double h_component(int j, int degree, const GridFunction& u);
// H_{j,2} + H_{j,4} + H_{j,6}, j <= 5
double h_exact(int j, const GridFunction& u);
// focusing Hamiltonians flip the sign of the quartic part
double h_exact_signed(int j, const GridFunction& u, bool focusing);

// KdV polynomial energies E_{-1}..E_2 for real u
double kdv_poly_energy(int k, const GridFunction& u);

}  // namespace iscat
