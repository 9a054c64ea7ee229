#include <algorithm>
#include <cmath>

#include "iscat/errors.hpp"
#include "iscat/parallel.hpp"
#include "iscat/scattering.hpp"

namespace iscat {

namespace {

struct ContourPoint {
  cplx z, f;
};

std::vector<cplx> evaluate(const ScatteringProblem& prob, const std::vector<cplx>& zs) {
  std::vector<cplx> out(zs.size());
  parallel_for(static_cast<int>(zs.size()), [&](int i) { out[i] = transmission(prob, zs[i]).Tinv; });
  return out;
}

int contour_winding(const ScatteringProblem& prob, const Rect& r, const PoleConfig& cfg) {
  if (!(r.im0 > 0) || !(r.re1 > r.re0) || !(r.im1 > r.im0))
    throw Error(ErrorCode::Domain, "search rectangle must lie in the open upper half-plane");
  const cplx c[4] = {{r.re0, r.im0}, {r.re1, r.im0}, {r.re1, r.im1}, {r.re0, r.im1}};
  const int per_edge = 12;
  std::vector<cplx> zs;
  for (int e = 0; e < 4; ++e)
    for (int k = 0; k < per_edge; ++k) zs.push_back(c[e] + (c[(e + 1) % 4] - c[e]) * (double(k) / per_edge));
  std::vector<cplx> fs = evaluate(prob, zs);
  for (int round = 0; round < 14; ++round) {
    std::vector<size_t> refine;
    const size_t n = zs.size();
    for (size_t i = 0; i < n; ++i) {
      const cplx a = fs[i], b = fs[(i + 1) % n];
      if (std::abs(a) < cfg.zero_tol || std::abs(b) < cfg.zero_tol)
        throw Error(ErrorCode::ContourZero, "T^{-1} vanishes on the search contour");
      if (std::abs(std::arg(b / a)) > M_PI / 6) refine.push_back(i);
    }
    if (refine.empty()) break;
    std::vector<cplx> mids;
    for (size_t i : refine) mids.push_back(0.5 * (zs[i] + zs[(i + 1) % n]));
    auto fm = evaluate(prob, mids);
    std::vector<cplx> nz, nf;
    size_t j = 0;
    for (size_t i = 0; i < n; ++i) {
      nz.push_back(zs[i]);
      nf.push_back(fs[i]);
      if (j < refine.size() && refine[j] == i) {
        nz.push_back(mids[j]);
        nf.push_back(fm[j]);
        ++j;
      }
    }
    zs.swap(nz);
    fs.swap(nf);
    if (round == 13) throw Error(ErrorCode::ContourZero, "phase of T^{-1} could not be resolved on the contour");
  }
  double total = 0.0;
  const size_t n = fs.size();
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(fs[i]) < cfg.zero_tol) throw Error(ErrorCode::ContourZero, "T^{-1} vanishes on the search contour");
    total += std::arg(fs[(i + 1) % n] / fs[i]);
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

bool inside(const Rect& r, cplx z) { return z.real() >= r.re0 && z.real() <= r.re1 && z.imag() >= r.im0 && z.imag() <= r.im1; }

// Newton iteration z <- z - m f/f' with central differences
bool newton(const ScatteringProblem& prob, cplx& z, int m, const PoleConfig& cfg) {
  for (int it = 0; it < cfg.max_newton; ++it) {
    const double h = 1e-5 * (1.0 + std::abs(z));
    auto f = evaluate(prob, {z, z + h, z - h});
    const cplx df = (f[1] - f[2]) / (2.0 * h);
    if (std::abs(df) == 0.0) return false;
    const cplx step = double(m) * f[0] / df;
    z -= step;
    if (!(z.imag() > 0)) return false;
    if (std::abs(step) < cfg.newton_tol * (1.0 + std::abs(z))) return true;
  }
  return false;
}

void search(const ScatteringProblem& prob, const Rect& r, int count, const PoleConfig& cfg, std::vector<Pole>& out) {
  if (count == 0) return;
  const double size = std::max(r.re1 - r.re0, r.im1 - r.im0);
  if (count == 1 || size < cfg.min_size) {
    cplx z(0.5 * (r.re0 + r.re1), 0.5 * (r.im0 + r.im1));
    if (newton(prob, z, count, cfg) && inside(r, z)) {
      out.push_back({z, count});
      return;
    }
    if (size < cfg.min_size)
      throw Error(ErrorCode::NonConvergedNewton, "Newton refinement did not converge inside the rectangle");
  }
  // subdivide, nudging the cut lines if a zero sits on them
  const double offsets[] = {0.5, 0.5 + 0.0371, 0.5 - 0.0433, 0.5 + 0.113};
  for (double f : offsets) {
    const double xm = r.re0 + f * (r.re1 - r.re0);
    const double ym = r.im0 + f * (r.im1 - r.im0);
    const Rect q[4] = {{r.re0, xm, r.im0, ym}, {xm, r.re1, r.im0, ym}, {r.re0, xm, ym, r.im1}, {xm, r.re1, ym, r.im1}};
    int counts[4];
    try {
      for (int i = 0; i < 4; ++i) counts[i] = contour_winding(prob, q[i], cfg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ContourZero) continue;
      throw;
    }
    for (int i = 0; i < 4; ++i) search(prob, q[i], counts[i], cfg, out);
    return;
  }
  throw Error(ErrorCode::ContourZero, "could not place subdivision lines away from zeros");
}

}  // namespace

int winding_number(const ScatteringProblem& prob, const Rect& rect, const PoleConfig& cfg) {
  return contour_winding(prob, rect, cfg);
}

PoleSet find_poles(const ScatteringProblem& prob, const Rect& rect, PoleConfig cfg) {
  PoleSet ps;
  ps.rect = rect;
  ps.winding = contour_winding(prob, rect, cfg);
  search(prob, rect, ps.winding, cfg, ps.poles);
  std::sort(ps.poles.begin(), ps.poles.end(), [](const Pole& a, const Pole& b) {
    return a.z.imag() != b.z.imag() ? a.z.imag() > b.z.imag() : a.z.real() < b.z.real();
  });
  return ps;
}

}  // namespace iscat
