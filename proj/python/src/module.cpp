#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iscat/cli.hpp"
#include "iscat/energies.hpp"
#include "iscat/errors.hpp"
#include "iscat/evolve.hpp"
#include "iscat/hierarchy.hpp"
#include "iscat/hopf.hpp"
#include "iscat/scattering.hpp"

namespace py = pybind11;
using namespace iscat;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

GridFunction to_grid_function(const CArray& values, double L) {
  if (values.ndim() != 1) throw Error(ErrorCode::InvalidInput, "samples must be one-dimensional");
  const Grid g(L, static_cast<int>(values.shape(0)));
  cvec v(values.data(), values.data() + values.shape(0));
  return GridFunction(g, std::move(v));
}

CArray to_array(const GridFunction& u) {
  CArray out(u.grid.N);
  std::copy(u.values.begin(), u.values.end(), out.mutable_data());
  return out;
}

py::dict result_dict(const EnergyResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["contour"] = r.parts.contour;
  d["correction"] = r.parts.correction;
  d["poles"] = r.parts.poles;
  d["err"] = r.err;
  d["N"] = r.N;
  return d;
}

EnergySpec make_spec(double s, const std::string& mode, double tau_max) {
  EnergySpec sp;
  sp.s = s;
  sp.mode = parse_scatter_mode(mode);
  sp.tau_max = tau_max;
  return sp;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> exc_storage;
  exc_storage.call_once_and_store_result([&]() { return py::exception<Error>(m, "IscatError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc_storage.get_stored(), (std::string(error_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "grid_points",
      [](double L, int N) {
        const Grid g(L, N);
        py::array_t<double> x(N);
        for (int j = 0; j < N; ++j) x.mutable_data()[j] = g.x(j);
        return x;
      },
      py::arg("L"), py::arg("N"));

  m.def(
      "generate",
      [](const std::string& kind, double L, int N, double amplitude, double carrier, double width, double center) {
        PotentialParams p{kind, amplitude, carrier, width, center};
        return to_array(generate_potential(p, Grid(L, N)));
      },
      py::arg("kind"), py::arg("L") = 64.0, py::arg("N") = 1024, py::arg("amplitude") = 1.0, py::arg("carrier") = 1.0,
      py::arg("width") = 1.0, py::arg("center") = 0.0);

  m.def(
      "transmission_inverse",
      [](const CArray& u, double L, const std::string& mode, const std::vector<cplx>& zs) {
        ScatteringProblem p(to_grid_function(u, L), parse_scatter_mode(mode));
        std::vector<cplx> out;
        for (const auto& s : transmission_batch(p, zs)) out.push_back(s.Tinv);
        return out;
      },
      py::arg("u"), py::arg("L"), py::arg("mode"), py::arg("z"));

  m.def(
      "find_poles",
      [](const CArray& u, double L, const std::string& mode, std::array<double, 4> rect) {
        ScatteringProblem p(to_grid_function(u, L), parse_scatter_mode(mode));
        std::vector<std::pair<cplx, int>> out;
        for (const auto& pole : find_poles(p, {rect[0], rect[1], rect[2], rect[3]}).poles)
          out.emplace_back(pole.z, pole.multiplicity);
        return out;
      },
      py::arg("u"), py::arg("L"), py::arg("mode"), py::arg("rect"));

  m.def(
      "energy",
      [](const CArray& u, double L, double s, const std::string& mode, double tau_max) {
        return result_dict(energy_Es(to_grid_function(u, L), make_spec(s, mode, tau_max)));
      },
      py::arg("u"), py::arg("L"), py::arg("s"), py::arg("mode") = "defocusing", py::arg("tau_max") = 0.0);

  m.def(
      "momentum",
      [](const CArray& u, double L, double s, const std::string& mode, double tau_max) {
        return result_dict(momentum_Ps(to_grid_function(u, L), make_spec(s, mode, tau_max)));
      },
      py::arg("u"), py::arg("L"), py::arg("s"), py::arg("mode") = "defocusing", py::arg("tau_max") = 0.0);

  m.def(
      "energy_quadratic", [](const CArray& u, double L, double s) { return energy_quadratic(to_grid_function(u, L), s); },
      py::arg("u"), py::arg("L"), py::arg("s"));
  m.def(
      "quartic_term", [](const CArray& u, double L, double s) { return quartic_term(to_grid_function(u, L), s); },
      py::arg("u"), py::arg("L"), py::arg("s"));
  m.def(
      "hamiltonian", [](int j, const CArray& u, double L) { return h_exact(j, to_grid_function(u, L)); }, py::arg("j"),
      py::arg("u"), py::arg("L"));

  m.def(
      "hamiltonian_density",
      [](int k, const std::string& mode) {
        return hamiltonian_density(k, parse_hierarchy_mode(mode)).density.to_string();
      },
      py::arg("k"), py::arg("mode") = "defocusing");

  m.def(
      "expand_log_t",
      [](int max_degree) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [w, c] : hopf::logT_expansion(max_degree).sorted()) out.emplace_back(w, hopf::to_string(c));
        return out;
      },
      py::arg("max_degree"));

  m.def(
      "evolve",
      [](const CArray& u, double L, const std::string& eq, double dt, double t_end) {
        FlowConfig c;
        c.equation = parse_equation(eq);
        c.dt = dt;
        c.t_end = t_end;
        return to_array(evolve(to_grid_function(u, L), c).snapshots.back().u);
      },
      py::arg("u"), py::arg("L"), py::arg("equation"), py::arg("dt"), py::arg("t_end"));
}
