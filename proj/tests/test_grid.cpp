#include <cmath>
#include <random>

#include "doctest.h"
#include "iscat/grid.hpp"

using namespace iscat;

namespace {

GridFunction sample(const Grid& g, auto f) {
  GridFunction u(g);
  for (int j = 0; j < g.N; ++j) u.values[j] = f(g.x(j));
  return u;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS(Grid(64.0, 1000));
  CHECK_THROWS(Grid(64.0, 4));
  CHECK_THROWS(Grid(-1.0, 64));
  Grid g(64.0, 1024);
  CHECK(g.h() == doctest::Approx(1.0 / 16));
  CHECK(g.xi(g.N / 2) == doctest::Approx(-M_PI * 1024 / 64));
}

TEST_CASE("zero function transforms to zero") {
  Grid g(16.0, 64);
  auto s = to_spectral(GridFunction(g));
  for (auto c : s.coeffs) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("pure mode has a single coefficient") {
  Grid g(20.0, 64);
  const int k = 5;
  auto u = sample(g, [&](double x) { return std::exp(cplx(0, g.xi(k) * x)); });
  auto s = to_spectral(u);
  for (int m = 0; m < g.N; ++m) {
    if (m == k) CHECK(std::abs(s.coeffs[m]) == doctest::Approx(g.L / std::sqrt(2 * M_PI)));
    else CHECK(std::abs(s.coeffs[m]) < 1e-12);
  }
}

TEST_CASE("gaussian transform matches the closed form") {
  Grid g(64.0, 1024);
  auto u = sample(g, [](double x) { return std::exp(-x * x); });
  auto s = to_spectral(u);
  double err = 0;
  for (int k = 0; k < g.N; ++k) {
    const double xi = g.xi(k);
    err = std::max(err, std::abs(s.coeffs[k] - std::exp(-xi * xi / 4) / std::sqrt(2.0)));
  }
  CHECK(err < 1e-12);
  auto back = to_physical(s);
  for (int j = 0; j < g.N; ++j) CHECK(std::abs(back.values[j] - u.values[j]) < 1e-14);
}

TEST_CASE("spectral derivatives") {
  Grid g(64.0, 1024);
  auto c = sample(g, [](double) { return 3.0; });
  for (auto v : spectral_derivative(c, 1).values) CHECK(std::abs(v) < 1e-13);

  auto s = sample(g, [&](double x) { return std::sin(2 * M_PI * x / g.L); });
  auto d2 = spectral_derivative(s, 2);
  const double w = 2 * M_PI / g.L;
  for (int j = 0; j < g.N; ++j) CHECK(std::abs(d2.values[j] + w * w * s.values[j]) < 1e-11);

  auto u = sample(g, [](double x) { return std::exp(-x * x); });
  auto d1 = spectral_derivative(u, 1);
  double err = 0;
  for (int j = 0; j < g.N; ++j) {
    const double x = g.x(j);
    err = std::max(err, std::abs(d1.values[j] + 2 * x * std::exp(-x * x)));
  }
  CHECK(err < 1e-10);

  auto a = spectral_derivative(spectral_derivative(u, 2), 3);
  auto b = spectral_derivative(u, 5);
  for (int j = 0; j < g.N; ++j) CHECK(std::abs(a.values[j] - b.values[j]) < 1e-9);
  CHECK_THROWS(spectral_derivative(u, 9));
}

TEST_CASE("sobolev norms") {
  Grid g(64.0, 1024);
  CHECK(sobolev_norm_sq(GridFunction(g), 0.5) == 0.0);
  auto u = sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(sobolev_norm_sq(u, 0.0) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-12));
  CHECK(std::abs(sobolev_norm_sq(u, 0.0) - std::pow(l2_norm(u), 2)) < 1e-12);
  // H^1 norm: |u|^2 + |u'|^2 with int 4x^2 e^{-2x^2} = sqrt(pi/2)
  CHECK(sobolev_norm_sq(u, 1.0) == doctest::Approx(2 * std::sqrt(M_PI / 2)).epsilon(1e-12));
  CHECK_THROWS(sobolev_norm_sq(u, -1.5));
}

TEST_CASE("besov smallness") {
  Grid g(64.0, 1024);
  CHECK(besov_smallness(GridFunction(g)) == 0.0);
  // a single mode inside block j = 3 (8 <= |xi| < 16)
  int k = 0;
  while (g.xi(k) < 10.0) ++k;
  auto u = sample(g, [&](double x) { return 0.3 * std::exp(cplx(0, g.xi(k) * x)); });
  CHECK(besov_smallness(u) == doctest::Approx(std::pow(2.0, -1.5) * l2_norm(u)).epsilon(1e-12));
  auto small = sample(g, [](double x) { return 0.1 * std::exp(-x * x); });
  CHECK(besov_smallness(small) < 0.2);

  // embedding direction: ratio bounded below on random band-limited data
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  double worst = 1e9;
  for (int trial = 0; trial < 20; ++trial) {
    SpectralFunction s{g, cvec(g.N)};
    for (int m = 0; m < g.N; ++m)
      if (std::abs(g.xi(m)) < 30) s.coeffs[m] = cplx(nd(rng), nd(rng)) * std::exp(-0.01 * m);
    auto f = to_physical(s);
    worst = std::min(worst, besov_smallness(f) / std::sqrt(sobolev_norm_sq(f, -0.5)));
  }
  CHECK(worst > 0.3);
}

TEST_CASE("upsampling interpolates band-limited data") {
  Grid g(32.0, 256);
  auto u = sample(g, [](double x) { return std::exp(-x * x) * cplx(1, 0.5 * x); });
  auto fine = upsample(g, u.values, 4);
  REQUIRE(fine.size() == 1024);
  for (size_t m = 0; m < fine.size(); ++m) {
    const double x = -g.L / 2 + m * g.h() / 4;
    CHECK(std::abs(fine[m] - std::exp(-x * x) * cplx(1, 0.5 * x)) < 1e-13);
  }
}

TEST_CASE("json round trip") {
  Grid g(8.0, 16);
  auto u = sample(g, [](double x) { return cplx(x, -x * x); });
  auto v = grid_function_from_json(grid_function_to_json(u));
  CHECK(v.grid == g);
  for (int j = 0; j < g.N; ++j) CHECK(v.values[j] == u.values[j]);
}
