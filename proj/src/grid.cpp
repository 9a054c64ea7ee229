#include "iscat/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "iscat/errors.hpp"
#include "json.hpp"

namespace iscat {

namespace {

struct Plans {
  fftw_plan fwd;
  fftw_plan bwd;
};

// FFTW planning is not thread-safe; execution with new-array API is.
const Plans& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  cvec tmp(n);
  auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
  Plans pl;
  pl.fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  pl.bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, pl).first->second;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double sign_of(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::ContourZero: return "ContourZero";
    case ErrorCode::NonConvergedNewton: return "NonConvergedNewton";
    case ErrorCode::PoleOnRay: return "PoleOnRay";
    case ErrorCode::UnsupportedRange: return "UnsupportedRange";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
    case ErrorCode::NonIntegrableRHS: return "NonIntegrableRHS";
  }
  return "Unknown";
}

Grid::Grid(double L_, int N_) : L(L_), N(N_) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw Error(ErrorCode::InvalidInput, "grid length must be positive");
  if (N < 8 || !is_pow2(N))
    throw Error(ErrorCode::InvalidInput, "grid size must be a power of two >= 8");
}

GridFunction::GridFunction(Grid g, cvec v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.N)
    throw Error(ErrorCode::InvalidInput, "sample count does not match grid");
  for (const auto& c : values)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::InvalidInput, "non-finite sample");
}

bool GridFunction::is_real(double tol) const {
  for (const auto& c : values)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

void fft_forward(cvec& data) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(static_cast<int>(data.size())).fwd, p, p);
}

void fft_backward(cvec& data) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_for(static_cast<int>(data.size())).bwd, p, p);
}

SpectralFunction to_spectral(const GridFunction& f) {
  const Grid& g = f.grid;
  cvec c = f.values;
  fft_forward(c);
  const double scale = g.h() / std::sqrt(2.0 * M_PI);
  for (int k = 0; k < g.N; ++k) c[k] *= scale * sign_of(g.wavenumber(k));
  return {g, std::move(c)};
}

GridFunction to_physical(const SpectralFunction& f) {
  const Grid& g = f.grid;
  cvec c = f.coeffs;
  const double scale = std::sqrt(2.0 * M_PI) / g.h() / g.N;
  for (int k = 0; k < g.N; ++k) c[k] *= scale * sign_of(g.wavenumber(k));
  fft_backward(c);
  GridFunction out(g);
  out.values = std::move(c);
  return out;
}

SpectralFunction spectral_derivative(const SpectralFunction& f, int order) {
  if (order < 0 || order > 8)
    throw Error(ErrorCode::Domain, "derivative order must be in [0, 8]");
  SpectralFunction out = f;
  if (order == 0) return out;
  const Grid& g = f.grid;
  for (int k = 0; k < g.N; ++k) {
    if (g.wavenumber(k) == -g.N / 2) {
      out.coeffs[k] = 0.0;
      continue;
    }
    out.coeffs[k] *= std::pow(cplx(0.0, g.xi(k)), order);
  }
  return out;
}

GridFunction spectral_derivative(const GridFunction& f, int order) {
  if (order == 0) return f;
  return to_physical(spectral_derivative(to_spectral(f), order));
}

double sobolev_norm_sq(const GridFunction& f, double s) {
  if (!(s > -1.0)) throw Error(ErrorCode::Domain, "sobolev exponent must exceed -1");
  auto F = to_spectral(f);
  const Grid& g = f.grid;
  double acc = 0.0;
  for (int k = 0; k < g.N; ++k) {
    const double xi = g.xi(k);
    acc += std::pow(1.0 + xi * xi, s) * std::norm(F.coeffs[k]);
  }
  return acc * g.dxi();
}

double besov_smallness(const GridFunction& f) {
  auto F = to_spectral(f);
  const Grid& g = f.grid;
  std::map<int, double> blocks;
  for (int k = 0; k < g.N; ++k) {
    const double a = std::abs(g.xi(k));
    const int j = a < 2.0 ? 0 : static_cast<int>(std::floor(std::log2(a)));
    blocks[j] += std::norm(F.coeffs[k]);
  }
  double acc = 0.0;
  for (const auto& [j, e] : blocks) acc += std::pow(2.0, -0.5 * j) * std::sqrt(e * g.dxi());
  return acc;
}

cplx integrate(const Grid& g, const cvec& values) {
  cplx acc = 0.0;
  for (const auto& v : values) acc += v;
  return acc * g.h();
}

double l2_norm(const GridFunction& f) {
  double acc = 0.0;
  for (const auto& v : f.values) acc += std::norm(v);
  return std::sqrt(acc * f.grid.h());
}

cvec upsample(const Grid& g, const cvec& values, int factor) {
  if (factor == 1) return values;
  if (factor < 1 || !is_pow2(factor))
    throw Error(ErrorCode::InvalidInput, "upsampling factor must be a power of two");
  const int n = g.N;
  const int m = n * factor;
  cvec c = values;
  fft_forward(c);
  cvec big(m, 0.0);
  for (int k = 0; k < n; ++k) {
    const int w = g.wavenumber(k);
    if (w == -n / 2) {
      // split the Nyquist coefficient symmetrically
      big[m - n / 2] += 0.5 * c[k];
      big[n / 2] += 0.5 * c[k];
    } else {
      big[w >= 0 ? w : m + w] = c[k];
    }
  }
  fft_backward(big);
  const double inv = 1.0 / n;
  for (auto& v : big) v *= inv;
  return big;
}

GridFunction circular_shift(const GridFunction& f, int shift) {
  const int n = f.grid.N;
  GridFunction out(f.grid);
  for (int j = 0; j < n; ++j) out.values[((j + shift) % n + n) % n] = f.values[j];
  return out;
}

std::string grid_function_to_json(const GridFunction& f) {
  nlohmann::json j;
  j["L"] = f.grid.L;
  j["N"] = f.grid.N;
  std::vector<double> re(f.values.size()), im(f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) {
    re[i] = f.values[i].real();
    im[i] = f.values[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

GridFunction grid_function_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed grid function JSON: ") + e.what());
  }
  if (!j.contains("L") || !j.contains("N") || !j.contains("re"))
    throw Error(ErrorCode::InvalidInput, "grid function JSON needs L, N, re");
  Grid g(j["L"].get<double>(), j["N"].get<int>());
  auto re = j["re"].get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = j["im"].get<std::vector<double>>();
  if (re.size() != im.size() || static_cast<int>(re.size()) != g.N)
    throw Error(ErrorCode::InvalidInput, "re/im length must equal N");
  cvec v(re.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = {re[i], im[i]};
  return GridFunction(g, std::move(v));
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

GridFunction read_csv(std::istream& in) {
  std::string line;
  std::vector<double> xs, re, im;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.find_first_of("xX") != std::string::npos && xs.empty() && re.empty()) continue;
    std::stringstream ss(line);
    double x, a, b = 0.0;
    char comma;
    if (!(ss >> x >> comma >> a)) throw Error(ErrorCode::InvalidInput, "bad CSV row: " + line);
    if (ss >> comma) ss >> b;
    xs.push_back(x);
    re.push_back(a);
    im.push_back(b);
  }
  if (xs.size() < 2) throw Error(ErrorCode::InvalidInput, "CSV needs at least two rows");
  const int n = static_cast<int>(xs.size());
  Grid g((xs[1] - xs[0]) * n, n);
  cvec v(n);
  for (int i = 0; i < n; ++i) v[i] = {re[i], im[i]};
  return GridFunction(g, std::move(v));
}

}  // namespace

GridFunction read_grid_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  if (ends_with(path, ".csv")) return read_csv(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return grid_function_from_json(ss.str());
}

void write_grid_function(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  if (ends_with(path, ".csv")) {
    out.precision(17);
    out << "x,re,im\n";
    for (int j = 0; j < f.grid.N; ++j)
      out << f.grid.x(j) << ',' << f.values[j].real() << ',' << f.values[j].imag() << '\n';
    return;
  }
  out << grid_function_to_json(f) << '\n';
}

}  // namespace iscat
