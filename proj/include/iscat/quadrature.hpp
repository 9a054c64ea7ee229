#pragma once

#include <functional>
#include <vector>

namespace iscat::quad {

struct Rule {
  std::vector<double> x, w;
};

// Nodes/weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta (Golub-Welsch).
Rule gauss_jacobi(int n, double alpha, double beta);
Rule gauss_legendre(int n);

// Kronrod-extended rule: kronrod weights wk and embedded Gauss weights wg
// (zero on the Kronrod-only nodes), nodes on [-1, 1].
struct KronrodRule {
  std::vector<double> x, wk, wg;
};
const KronrodRule& gauss_kronrod21();

struct Result {
  double value = 0.0;
  double err = 0.0;
  int evaluations = 0;
};

// Evaluates all nodes of one sweep in a batch so callers can parallelize.
using BatchFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Adaptive Gauss-Kronrod over the initial panels given by `breaks`.
Result adaptive(const BatchFn& f, const std::vector<double>& breaks, double abs_tol, double rel_tol,
                int max_panels = 512);

// Fixed Gauss-Kronrod on each panel [breaks[i], breaks[i+1]].
Result fixed_panels(const BatchFn& f, const std::vector<double>& breaks);

}  // namespace iscat::quad
