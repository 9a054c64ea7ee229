#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "iscat/grid.hpp"

namespace iscat {

enum class ScatterMode { Defocusing, Focusing, KdV, General };

ScatterMode parse_scatter_mode(const std::string& s);
std::string to_string(ScatterMode m);

struct SolverConfig {
  int min_substeps = 2;         // Magnus steps per grid cell, rounded up to a power of two
  double step_bound = 0.2;      // max of |z| H and |coupling| H per step
  double overflow_bound = 1e100;
  double decay_threshold = 1e-8;  // |u| at the domain ends
  bool richardson = true;       // combine r and 2r substeps (error estimate from the difference)
};

// Coupling samples on a refined grid: Simpson nodes at even indices.
struct Coupling {
  int factor = 1;  // refinement relative to the base grid
  cvec p, q;       // length N*factor + 1
};

// Gauge-transformed scattering system a' = p c, c' = 2iz c + q a with
// (p, q) = (u, conj v), v = u (defocusing), v = -u (focusing), or
// (p, q) = (1, u) for KdV.
class ScatteringProblem {
 public:
  ScatteringProblem(GridFunction u, ScatterMode mode, SolverConfig cfg = {});
  // general mode with an explicit second potential v
  ScatteringProblem(GridFunction u, GridFunction v, SolverConfig cfg = {});

  const GridFunction& potential() const { return u_; }
  const GridFunction& second() const { return v_; }
  ScatterMode mode() const { return mode_; }
  const SolverConfig& config() const { return cfg_; }
  double tail_magnitude() const;
  bool decays() const { return tail_magnitude() <= cfg_.decay_threshold; }
  double max_coupling() const { return max_coupling_; }

  std::shared_ptr<const Coupling> coupling(int factor) const;

 private:
  GridFunction u_, v_;
  ScatterMode mode_;
  SolverConfig cfg_;
  double max_coupling_ = 0.0;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const Coupling>> cache_;
};

struct ScatteringSample {
  cplx z;
  cplx Tinv;
  double err = 0.0;
  cplx a_end, c_end;  // final Jost state (finer resolution)
  int substeps = 0;   // Magnus steps per cell at the finer resolution
  double tail = 0.0;  // |u| at the domain ends
};

ScatteringSample transmission(const ScatteringProblem& prob, cplx z);
std::vector<ScatteringSample> transmission_batch(const ScatteringProblem& prob, const std::vector<cplx>& zs);

// T^{-1} with the first-row coupling scaled by w (NLS modes) or the second row
// scaled by w (KdV); w = 1 reproduces transmission().
ScatteringSample transmission_scaled(const ScatteringProblem& prob, cplx z, cplx w);

// i int uhat conj(vhat) / (2z + xi) dxi
cplx t2_quadratic(const GridFunction& u, const GridFunction& v, cplx z);

struct Components {
  std::vector<cplx> direct;  // T_{2j} (NLS) or T_j (KdV), j = 1..max_j
  std::vector<cplx> log;     // components of ln T^{-1} = -ln T
  double radius = 0.0;       // |w| of the sampling circle
  double err = 0.0;
};

Components homogeneous_components(const ScatteringProblem& prob, cplx z, int max_j);

struct RenormalizedSample {
  double tau;
  cplx S;  // T(i tau/2) exp((1/tau) int u)
  double err = 0.0;
};

RenormalizedSample transmission_kdv_renormalized(const GridFunction& u, double tau, SolverConfig cfg = {});

struct Rect {
  double re0, re1, im0, im1;
};

struct Pole {
  cplx z;
  int multiplicity = 1;
};

struct PoleSet {
  std::vector<Pole> poles;
  Rect rect{};
  int winding = 0;  // argument-principle count on the search contour
  int total_multiplicity() const;
};

struct PoleConfig {
  double zero_tol = 1e-8;      // |T^{-1}| below this on a contour is rejected
  double newton_tol = 1e-11;
  int max_newton = 60;
  double min_size = 1e-3;      // stop subdividing below this edge length
};

PoleSet find_poles(const ScatteringProblem& prob, const Rect& rect, PoleConfig cfg = {});
// winding number of T^{-1} around 0 along the boundary of rect
int winding_number(const ScatteringProblem& prob, const Rect& rect, const PoleConfig& cfg = {});

}  // namespace iscat
