#include "iscat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iscat/energies.hpp"
#include "iscat/errors.hpp"
#include "iscat/evolve.hpp"
#include "iscat/hierarchy.hpp"
#include "iscat/hopf.hpp"
#include "iscat/parallel.hpp"
#include "iscat/scattering.hpp"

namespace iscat {

using nlohmann::json;

GridFunction generate_potential(const PotentialParams& p, const Grid& g) {
  if (!(p.width > 0)) throw Error(ErrorCode::InvalidInput, "width must be positive");
  if (!std::isfinite(p.amplitude) || !std::isfinite(p.carrier) || !std::isfinite(p.center))
    throw Error(ErrorCode::InvalidInput, "parameters must be finite");
  GridFunction u(g);
  for (int j = 0; j < g.N; ++j) {
    const double y = (g.x(j) - p.center) / p.width;
    cplx v;
    if (p.kind == "gaussian") v = std::exp(-y * y);
    else if (p.kind == "sech") v = 1.0 / std::cosh(y);
    else if (p.kind == "sech2") v = 1.0 / (std::cosh(y) * std::cosh(y));
    else if (p.kind == "modulated") v = std::polar(std::exp(-y * y), p.carrier * g.x(j));
    else throw Error(ErrorCode::InvalidInput, "unknown potential kind: " + p.kind);
    u.values[j] = p.amplitude * v;
  }
  return u;
}

namespace {

void dump_to(std::ostringstream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',';
        first = false;
        os << json(k).dump() << ':';
        dump_to(os, v);
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        dump_to(os, j[i]);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
      }
      break;
    }
    default: os << j.dump();
  }
}

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "empty complex number");
  // forms: a, bi, a+bi, a-bi, i, -i
  double re = 0.0, im = 0.0;
  if (s.back() == 'i' || s.back() == 'j') {
    s.pop_back();
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;)
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
        split = k;
        break;
      }
    std::string rs = split == std::string::npos ? "" : s.substr(0, split);
    std::string is = split == std::string::npos ? s : s.substr(split);
    if (is.empty() || is == "+") is = "1";
    if (is == "-") is = "-1";
    try {
      size_t used = 0;
      if (!rs.empty()) {
        re = std::stod(rs, &used);
        if (used != rs.size()) throw std::invalid_argument(rs);
      }
      im = std::stod(is, &used);
      if (used != is.size()) throw std::invalid_argument(is);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "cannot parse complex number: " + text);
    }
  } else {
    try {
      size_t used = 0;
      re = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "cannot parse complex number: " + text);
    }
  }
  return {re, im};
}

std::vector<double> parse_colon_list(const std::string& s, size_t min_n, size_t max_n, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, std::string("cannot parse ") + what + ": " + s);
    }
  }
  if (out.size() < min_n || out.size() > max_n) throw Error(ErrorCode::InvalidInput, std::string("bad ") + what + ": " + s);
  return out;
}

json sample_json(const ScatteringSample& s) {
  return {{"z", cjson(s.z)},
          {"Tinv", cjson(s.Tinv)},
          {"T", cjson(1.0 / s.Tinv)},
          {"err", s.err},
          {"substeps", s.substeps},
          {"tail", s.tail}};
}

json poles_json(const PoleSet& ps) {
  json arr = json::array();
  for (const auto& p : ps.poles) arr.push_back({{"z", cjson(p.z)}, {"multiplicity", p.multiplicity}});
  return {{"poles", arr},
          {"winding", ps.winding},
          {"total_multiplicity", ps.total_multiplicity()},
          {"rect", {ps.rect.re0, ps.rect.re1, ps.rect.im0, ps.rect.im1}}};
}

json energy_json(const EnergyResult& r) {
  json h = json::object();
  for (const auto& [k, v] : r.hvalues) h[k] = v;
  return {{"value", r.value},
          {"err", r.err},
          {"N", r.N},
          {"evaluations", r.evaluations},
          {"parts", {{"contour", r.parts.contour}, {"correction", r.parts.correction}, {"poles", r.parts.poles}}},
          {"hamiltonians", h}};
}

// search rectangle for bound states when none is given
Rect default_rect(const GridFunction& u, ScatterMode mode) {
  double sup = 0.0, neg = 0.0;
  for (const auto& v : u.values) {
    sup = std::max(sup, std::abs(v));
    neg = std::max(neg, -v.real());
  }
  if (mode == ScatterMode::KdV) return {-0.5, 0.5, 0.02, std::sqrt(neg) + 0.5};
  return {-4.0, 4.0, 0.02, sup + 1.0};
}

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Missing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GridFunction load(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw Missing("input file not found: " + path);
  return read_grid_function(path);
}

}  // namespace

std::string dump_json(const json& j) {
  std::ostringstream os;
  dump_to(os, j);
  return os.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering-transform conserved energies for NLS, mKdV and KdV"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (ISCAT_THREADS overrides)")->check(CLI::NonNegativeNumber);

  // gen
  auto* gen = app.add_subcommand("gen", "write a sampled potential");
  PotentialParams pp;
  double L = 64.0;
  int N = 1024;
  std::string gen_out;
  gen->add_option("--kind", pp.kind, "gaussian|sech|sech2|modulated")
      ->check(CLI::IsMember({"gaussian", "sech", "sech2", "modulated"}));
  gen->add_option("--amplitude", pp.amplitude);
  gen->add_option("--carrier", pp.carrier);
  gen->add_option("--width", pp.width);
  gen->add_option("--center", pp.center);
  gen->add_option("--L", L)->check(CLI::PositiveNumber);
  gen->add_option("--N", N)->check(CLI::Range(4, 1 << 22));
  gen->add_option("--out", gen_out, "output file (.json or .csv); stdout when absent");

  // scatter [poles]
  auto* sc = app.add_subcommand("scatter", "transmission coefficient T(z)");
  std::string input, mode_s = "defocusing", zs = "0+1i", sweep;
  double sweep_im = 0.0;
  sc->add_option("--input", input);
  sc->add_option("--mode", mode_s)->check(CLI::IsMember({"defocusing", "focusing", "kdv"}));
  sc->add_option("--z", zs, "complex spectral parameter, e.g. 0.0+1.0i");
  sc->add_option("--sweep", sweep, "re0:re1:n[:im] sweep along a horizontal line");
  sc->add_option("--im", sweep_im, "imaginary part of the sweep line");
  auto* poles = sc->add_subcommand("poles", "poles of T in a rectangle");
  std::string rect_s;
  poles->add_option("--rect", rect_s, "re0:re1:im0:im1");
  poles->add_option("--input", input);
  poles->add_option("--mode", mode_s)->check(CLI::IsMember({"focusing", "defocusing", "kdv"}));

  // energy
  auto* en = app.add_subcommand("energy", "conserved energy E_s or momentum P_s");
  EnergySpec spec;
  bool trace = false, quartic = false, momentum = false;
  int Nsub = -100;
  en->add_option("--input", input)->required();
  en->add_option("--s", spec.s)->required();
  en->add_option("--mode", mode_s)->check(CLI::IsMember({"defocusing", "focusing", "kdv"}));
  en->add_option("--N", Nsub, "number of subtracted Hamiltonians");
  en->add_option("--tau-max", spec.tau_max);
  en->add_option("--rect", rect_s, "pole search rectangle for --trace-check");
  en->add_flag("--momentum", momentum, "compute P_s instead of E_s");
  en->add_flag("--trace-check", trace, "also evaluate the real-line side of the trace formula");
  en->add_flag("--quartic", quartic, "also evaluate the explicit quartic (NLS) or cubic (KdV) kernel");

  // evolve
  auto* ev = app.add_subcommand("evolve", "split-step evolution with a conservation report");
  FlowConfig fc;
  std::string eq_s = "nls-defocusing", check = "H0", csv_out = "drift.csv", final_out;
  ev->add_option("--input", input)->required();
  ev->add_option("--eq", eq_s)
      ->check(CLI::IsMember({"nls-focusing", "nls-defocusing", "mkdv-focusing", "mkdv-defocusing", "kdv"}));
  ev->add_option("--dt", fc.dt)->check(CLI::PositiveNumber);
  ev->add_option("--t-end", fc.t_end)->check(CLI::NonNegativeNumber);
  ev->add_option("--snapshot-every", fc.snapshot_every)->check(CLI::NonNegativeNumber);
  ev->add_option("--check", check, "comma-separated quantities, e.g. H0,H2,E0.25,P0.5");
  ev->add_option("--out", csv_out, "drift table (CSV)");
  ev->add_option("--final", final_out, "write u(t_end) to this file");

  // hopf expand-logT
  auto* hopf_cmd = app.add_subcommand("hopf", "word expansions");
  hopf_cmd->require_subcommand(1);
  auto* logt = hopf_cmd->add_subcommand("expand-logT", "-ln T as connected words with exact coefficients");
  int max_degree = 5;
  std::string format = "json";
  logt->add_option("--max-degree", max_degree)->check(CLI::Range(1, 10));
  logt->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  // hierarchy print
  auto* hier = app.add_subcommand("hierarchy", "Hamiltonian densities");
  hier->require_subcommand(1);
  auto* hprint = hier->add_subcommand("print", "calibrated density of H_k");
  int hk = 2;
  std::string hmode = "defocusing";
  hprint->add_option("--k", hk)->check(CLI::Range(0, 8));
  hprint->add_option("--mode", hmode)->check(CLI::IsMember({"focusing", "defocusing", "kdv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  set_threads(resolve_threads(threads));

  try {
    json result;
    if (gen->parsed()) {
      const auto u = generate_potential(pp, Grid(L, N));
      if (gen_out.empty()) {
        out << grid_function_to_json(u) << "\n";
        return kExitOk;
      }
      write_grid_function(u, gen_out);
      result = {{"written", gen_out}, {"kind", pp.kind}, {"L", L}, {"N", N}};
    } else if (poles->parsed()) {
      if (input.empty()) throw Usage("--input is required");
      const auto u = load(input);
      const auto mode = parse_scatter_mode(mode_s);
      ScatteringProblem prob(u, mode);
      Rect r = default_rect(u, mode);
      if (!rect_s.empty()) {
        const auto v = parse_colon_list(rect_s, 4, 4, "rectangle");
        r = {v[0], v[1], v[2], v[3]};
      }
      result = poles_json(find_poles(prob, r));
    } else if (sc->parsed()) {
      if (input.empty()) throw Usage("--input is required");
      const auto u = load(input);
      ScatteringProblem prob(u, parse_scatter_mode(mode_s));
      std::vector<cplx> zlist;
      if (!sweep.empty()) {
        const auto v = parse_colon_list(sweep, 3, 4, "sweep");
        const int n = static_cast<int>(v[2]);
        if (n < 1 || v[2] != n) throw Error(ErrorCode::InvalidInput, "sweep count must be a positive integer");
        const double im = v.size() == 4 ? v[3] : sweep_im;
        for (int k = 0; k < n; ++k) zlist.emplace_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * k / (n - 1), im);
      } else {
        zlist.push_back(parse_complex(zs));
      }
      json arr = json::array();
      for (const auto& s : transmission_batch(prob, zlist)) arr.push_back(sample_json(s));
      result = {{"mode", mode_s}, {"samples", arr}};
    } else if (en->parsed()) {
      const auto u = load(input);
      spec.mode = parse_scatter_mode(mode_s);
      if (Nsub != -100) spec.N = Nsub;
      const auto r = momentum ? momentum_Ps(u, spec) : energy_Es(u, spec);
      result = {{"quantity", momentum ? "P_s" : "E_s"}, {"s", spec.s}, {"mode", mode_s}, {"result", energy_json(r)}};
      if (trace) {
        if (momentum) throw Error(ErrorCode::InvalidInput, "--trace-check applies to E_s");
        PoleSet ps;
        if (spec.mode != ScatterMode::Defocusing) {
          Rect rr = default_rect(u, spec.mode);
          if (!rect_s.empty()) {
            const auto v = parse_colon_list(rect_s, 4, 4, "rectangle");
            rr = {v[0], v[1], v[2], v[3]};
          }
          ps = find_poles(ScatteringProblem(u, spec.mode), rr);
        }
        const auto l = trace_line_side(u, spec, ps);
        result["trace"] = {{"line_side", energy_json(l)},
                           {"poles", poles_json(ps)},
                           {"difference", l.value - r.value},
                           {"relative_difference", std::abs(l.value - r.value) / std::max(std::abs(r.value), 1e-300)}};
      }
      if (quartic) {
        if (spec.mode == ScatterMode::KdV) result["cubic_term"] = kdv_cubic_term(u, spec.s);
        else result["quartic_term"] = spec.mode == ScatterMode::Focusing ? 0.0 - quartic_term(u, spec.s) : quartic_term(u, spec.s);
        result["quadratic_term"] = momentum ? momentum_quadratic(u, spec.s) : energy_quadratic(u, spec.s);
      }
    } else if (ev->parsed()) {
      const auto u0 = load(input);
      fc.equation = parse_equation(eq_s);
      const auto qs = parse_quantities(check);
      const auto tr = evolve(u0, fc);
      const auto rows = conservation_report(tr, fc.equation, qs);
      std::ofstream csv(csv_out);
      if (!csv) throw Error(ErrorCode::InvalidInput, "cannot write " + csv_out);
      csv << "t,quantity,value,abs_drift,rel_drift\n";
      char buf[256];
      json summary = json::object();
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%.17g\n", r.t, r.quantity.c_str(), r.value, r.abs_drift,
                      r.rel_drift);
        csv << buf;
        auto& s = summary[r.quantity];
        if (r.error) s["error"] = *r.error;
        if (!s.contains("max_rel_drift") || r.rel_drift > s["max_rel_drift"].get<double>()) s["max_rel_drift"] = r.rel_drift;
        s["final_value"] = r.value;
        s["eval_err"] = r.err;
      }
      if (!final_out.empty()) write_grid_function(tr.snapshots.back().u, final_out);
      double mass_drift = 0.0;
      for (double m : tr.mass) mass_drift = std::max(mass_drift, std::abs(m - tr.mass[0]));
      result = {{"equation", eq_s},   {"steps", tr.steps},      {"t_end", tr.snapshots.back().t},
                {"drift_csv", csv_out}, {"quantities", summary}, {"max_mass_drift", mass_drift}};
    } else if (logt->parsed()) {
      const auto series = hopf::logT_expansion(max_degree, std::max(8, max_degree));
      if (format == "text") {
        for (const auto& [w, c] : series.sorted()) out << w << " " << hopf::to_string(c) << "\n";
        return kExitOk;
      }
      json arr = json::array();
      for (const auto& [w, c] : series.sorted()) arr.push_back({{"word", w}, {"coefficient", hopf::to_string(c)}});
      result = {{"max_degree", max_degree}, {"terms", arr}};
    } else if (hprint->parsed()) {
      const auto d = hamiltonian_density(hk, parse_hierarchy_mode(hmode));
      json mons = json::array();
      for (const auto& [m, c] : d.density.terms()) {
        json factors = json::array();
        for (int f : m) factors.push_back({{"order", Factor::order(f)}, {"conj", Factor::conj(f)}});
        mons.push_back({{"coefficient", {{"re", hopf::to_string(c.re)}, {"im", hopf::to_string(c.im)}}}, {"factors", factors}});
      }
      result = {{"k", hk},
                {"mode", hmode},
                {"text", d.density.to_string()},
                {"constant", d.constant.str()},
                {"trivial", d.trivial},
                {"monomials", mons}};
    }
    out << dump_json(result) << "\n";
    return kExitOk;
  } catch (const Usage& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Missing& e) {
    err << dump_json({{"error", "MissingFile"}, {"message", e.what()}}) << "\n";
    return kExitMissingFile;
  } catch (const Error& e) {
    err << dump_json({{"error", error_name(e.code())}, {"code", static_cast<int>(e.code())}, {"message", e.what()}}) << "\n";
    return kExitModuleError;
  } catch (const std::exception& e) {
    err << dump_json({{"error", "Failure"}, {"message", e.what()}}) << "\n";
    return kExitFailure;
  }
}

}  // namespace iscat
