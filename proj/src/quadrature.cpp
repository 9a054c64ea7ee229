#include "iscat/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "iscat/errors.hpp"

namespace iscat::quad {

Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1 || !(a > -1.0) || !(b > -1.0)) throw Error(ErrorCode::Domain, "invalid Gauss-Jacobi parameters");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    double diag;
    if (k == 0) diag = (b - a) / (a + b + 2.0);
    else diag = (b * b - a * a) / (s * (s + 2.0));
    J(k, k) = diag;
    if (k + 1 < n) {
      const double kk = k + 1.0;
      const double t = 2.0 * kk + a + b;
      const double off = std::sqrt(4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (t * t * (t + 1.0) * (t - 1.0)));
      J(k, k + 1) = J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::exp(boost::math::lgamma(a + 1.0) + boost::math::lgamma(b + 1.0) -
                                                          boost::math::lgamma(a + b + 2.0));
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int k = 0; k < n; ++k) {
    r.x[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    r.w[k] = mu0 * v * v;
  }
  return r;
}

Rule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

const KronrodRule& gauss_kronrod21() {
  static const KronrodRule rule = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& xa = GK::abscissa();
    const auto& wk = GK::weights();
    auto gauss_weight = [](double x) {
      for (size_t j = 0; j < G::abscissa().size(); ++j)
        if (std::abs(G::abscissa()[j] - x) < 1e-14) return G::weights()[j];
      return 0.0;
    };
    KronrodRule r;
    for (size_t i = xa.size(); i-- > 1;) {
      r.x.push_back(-xa[i]);
      r.wk.push_back(wk[i]);
      r.wg.push_back(gauss_weight(xa[i]));
    }
    for (size_t i = 0; i < xa.size(); ++i) {
      r.x.push_back(xa[i]);
      r.wk.push_back(wk[i]);
      r.wg.push_back(gauss_weight(xa[i]));
    }
    return r;
  }();
  return rule;
}

namespace {

struct Panel {
  double a, b, value, err;
};

std::vector<Panel> evaluate(const BatchFn& f, const std::vector<std::pair<double, double>>& spans, int& evals) {
  const auto& R = gauss_kronrod21();
  const size_t m = R.x.size();
  std::vector<double> nodes;
  nodes.reserve(spans.size() * m);
  for (const auto& [a, b] : spans)
    for (double x : R.x) nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * x);
  auto vals = f(nodes);
  evals += static_cast<int>(nodes.size());
  std::vector<Panel> out;
  for (size_t p = 0; p < spans.size(); ++p) {
    const auto [a, b] = spans[p];
    double k = 0, g = 0;
    for (size_t i = 0; i < m; ++i) {
      k += R.wk[i] * vals[p * m + i];
      g += R.wg[i] * vals[p * m + i];
    }
    const double half = 0.5 * (b - a);
    out.push_back({a, b, k * half, std::abs(k - g) * half});
  }
  return out;
}

}  // namespace

Result fixed_panels(const BatchFn& f, const std::vector<double>& breaks) {
  std::vector<std::pair<double, double>> spans;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) spans.emplace_back(breaks[i], breaks[i + 1]);
  Result r;
  for (const auto& p : evaluate(f, spans, r.evaluations)) {
    r.value += p.value;
    r.err += p.err;
  }
  return r;
}

Result adaptive(const BatchFn& f, const std::vector<double>& breaks, double abs_tol, double rel_tol, int max_panels) {
  std::vector<std::pair<double, double>> spans;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) spans.emplace_back(breaks[i], breaks[i + 1]);
  Result r;
  std::vector<Panel> done, active = evaluate(f, spans, r.evaluations);
  while (true) {
    double value = 0, err = 0;
    for (const auto& p : done) value += p.value, err += p.err;
    for (const auto& p : active) value += p.value, err += p.err;
    const double tol = std::max(abs_tol, rel_tol * std::abs(value));
    if (err <= tol || static_cast<int>(done.size() + active.size()) >= max_panels) {
      r.value = value;
      r.err = err;
      if (err > tol) throw Error(ErrorCode::QuadratureNotConverged, "adaptive quadrature exceeded its panel budget");
      return r;
    }
    // split every panel whose error exceeds its share of the budget
    const double share = tol / static_cast<double>(done.size() + active.size());
    spans.clear();
    std::vector<Panel> keep;
    for (const auto& p : active) {
      if (p.err > share) {
        const double m = 0.5 * (p.a + p.b);
        spans.emplace_back(p.a, m);
        spans.emplace_back(m, p.b);
      } else {
        keep.push_back(p);
      }
    }
    if (spans.empty()) {
      // budget is spread over converged panels; refine the worst one
      auto worst = std::max_element(done.begin(), done.end(), [](auto& x, auto& y) { return x.err < y.err; });
      if (worst == done.end()) {
        r.value = value;
        r.err = err;
        return r;
      }
      const double m = 0.5 * (worst->a + worst->b);
      spans.emplace_back(worst->a, m);
      spans.emplace_back(m, worst->b);
      done.erase(worst);
    }
    done.insert(done.end(), keep.begin(), keep.end());
    std::sort(done.begin(), done.end(), [](auto& x, auto& y) { return x.a < y.a; });
    active = evaluate(f, spans, r.evaluations);
  }
}

}  // namespace iscat::quad
