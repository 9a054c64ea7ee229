#pragma once

#include <complex>
#include <string>
#include <vector>

namespace iscat {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Uniform periodic grid on [-L/2, L/2).
struct Grid {
  double L = 64.0;
  int N = 1024;

  Grid() = default;
  Grid(double L_, int N_);

  double h() const { return L / N; }
  double dxi() const { return 2.0 * M_PI / L; }
  double x(int j) const { return -0.5 * L + j * h(); }
  // frequency of FFT-ordered index k
  int wavenumber(int k) const { return k < N / 2 ? k : k - N; }
  double xi(int k) const { return wavenumber(k) * dxi(); }
  bool operator==(const Grid& o) const { return L == o.L && N == o.N; }
};

struct GridFunction {
  Grid grid;
  cvec values;

  GridFunction() = default;
  GridFunction(Grid g, cvec v);
  explicit GridFunction(Grid g) : grid(g), values(g.N) {}

  int size() const { return grid.N; }
  bool is_real(double tol = 0.0) const;
};

// Unitary Fourier coefficients, FFT ordering. coeffs[k] ~ uhat(xi(k)).
struct SpectralFunction {
  Grid grid;
  cvec coeffs;
};

SpectralFunction to_spectral(const GridFunction& f);
GridFunction to_physical(const SpectralFunction& f);

GridFunction spectral_derivative(const GridFunction& f, int order);
// derivative acting on a spectral representation, returns spectral
SpectralFunction spectral_derivative(const SpectralFunction& f, int order);

double sobolev_norm_sq(const GridFunction& f, double s);
double besov_smallness(const GridFunction& f);

// h * sum
cplx integrate(const Grid& g, const cvec& values);
double l2_norm(const GridFunction& f);

// Trigonometric interpolation of the periodic samples onto a grid refined by
// `factor` (power of two). Output has N*factor points starting at -L/2.
cvec upsample(const Grid& g, const cvec& values, int factor);

// Raw unnormalized DFTs (FFTW), forward uses e^{-2 pi i jk/N}.
void fft_forward(cvec& data);
void fft_backward(cvec& data);

GridFunction circular_shift(const GridFunction& f, int shift);

// I/O: JSON {"L","N","re","im"} or CSV x,re,im (chosen by extension).
GridFunction read_grid_function(const std::string& path);
void write_grid_function(const GridFunction& f, const std::string& path);
std::string grid_function_to_json(const GridFunction& f);
GridFunction grid_function_from_json(const std::string& text);

}  // namespace iscat
