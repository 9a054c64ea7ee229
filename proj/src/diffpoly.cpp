#include "iscat/diffpoly.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

#include "iscat/errors.hpp"

namespace iscat {

cplx GaussRational::to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }

std::string GaussRational::str() const {
  auto q = [](const Rational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
  };
  if (im == 0) return q(re);
  if (re == 0) return q(im) + "i";
  return "(" + q(re) + (im > 0 ? "+" : "") + q(im) + "i)";
}

GaussRational operator+(const GaussRational& a, const GaussRational& b) { return {a.re + b.re, a.im + b.im}; }
GaussRational operator-(const GaussRational& a, const GaussRational& b) { return {a.re - b.re, a.im - b.im}; }
GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
GaussRational operator*(const GaussRational& a, const GaussRational& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
GaussRational operator/(const GaussRational& a, const GaussRational& b) {
  const Rational d = b.re * b.re + b.im * b.im;
  if (d == 0) throw Error(ErrorCode::Domain, "division by zero");
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }

DiffPolynomial DiffPolynomial::constant(const GaussRational& c) { return monomial(c, {}); }
DiffPolynomial DiffPolynomial::u(int order) { return monomial(1, {Factor::make(order, false)}); }
DiffPolynomial DiffPolynomial::ubar(int order) { return monomial(1, {Factor::make(order, true)}); }

DiffPolynomial DiffPolynomial::monomial(const GaussRational& c, Monomial m) {
  DiffPolynomial p;
  std::sort(m.begin(), m.end());
  p.add(m, c);
  return p;
}

void DiffPolynomial::add(const Monomial& m, const GaussRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int DiffPolynomial::max_order() const {
  int m = 0;
  for (const auto& [mon, c] : terms_)
    for (int f : mon) m = std::max(m, Factor::order(f));
  return m;
}

DiffPolynomial DiffPolynomial::derivative() const {
  DiffPolynomial out;
  for (const auto& [mon, c] : terms_)
    for (size_t i = 0; i < mon.size(); ++i) {
      Monomial m = mon;
      m[i] += 2;
      std::sort(m.begin(), m.end());
      out.add(m, c);
    }
  return out;
}

DiffPolynomial DiffPolynomial::conj() const {
  DiffPolynomial out;
  for (const auto& [mon, c] : terms_) {
    Monomial m = mon;
    for (int& f : m) f ^= 1;
    std::sort(m.begin(), m.end());
    out.add(m, c.conj());
  }
  return out;
}

DiffPolynomial DiffPolynomial::defocusing() const {
  DiffPolynomial out;
  for (const auto& [mon, c] : terms_) {
    const auto nb = std::count_if(mon.begin(), mon.end(), [](int f) { return Factor::conj(f); });
    out.add(mon, nb % 2 ? -c : c);
  }
  return out;
}

DiffPolynomial DiffPolynomial::kdv_reduction() const {
  DiffPolynomial out;
  for (const auto& [mon, c] : terms_) {
    Monomial m;
    bool dead = false;
    int flips = 0;
    for (int f : mon) {
      if (!Factor::conj(f)) m.push_back(f);
      else if (Factor::order(f) > 0) dead = true;
      else ++flips;
    }
    if (!dead) out.add(m, flips % 2 ? -c : c);
  }
  return out;
}

DiffPolynomial DiffPolynomial::degree_part(int deg) const {
  DiffPolynomial out;
  for (const auto& [mon, c] : terms_)
    if (static_cast<int>(mon.size()) == deg) out.add(mon, c);
  return out;
}

DiffPolynomial& DiffPolynomial::operator+=(const DiffPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

DiffPolynomial& DiffPolynomial::operator-=(const DiffPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

DiffPolynomial& DiffPolynomial::operator*=(const GaussRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v = v * c;
  return *this;
}

DiffPolynomial operator+(DiffPolynomial a, const DiffPolynomial& b) { return a += b; }
DiffPolynomial operator-(DiffPolynomial a, const DiffPolynomial& b) { return a -= b; }
DiffPolynomial operator*(const GaussRational& c, DiffPolynomial a) { return a *= c; }

DiffPolynomial operator*(const DiffPolynomial& a, const DiffPolynomial& b) {
  DiffPolynomial out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      std::sort(m.begin(), m.end());
      out.add(m, ca * cb);
    }
  return out;
}

namespace {

std::string factor_name(int f) {
  const int k = Factor::order(f);
  std::string base = Factor::conj(f) ? "\\bar u" : "u";
  if (k == 0) return base;
  if (k <= 3) return base + "_{" + std::string(k, 'x') + "}";
  return base + "^{(" + std::to_string(k) + ")}";
}

}  // namespace

std::string DiffPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mon, c] : terms_) {
    std::string coeff = c.str();
    bool neg = coeff[0] == '-';
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    if (neg) coeff = coeff.substr(1);
    first = false;
    if (mon.empty()) {
      os << coeff;
      continue;
    }
    if (coeff != "1") os << coeff << " ";
    // group equal factors as powers
    for (size_t i = 0; i < mon.size();) {
      size_t j = i;
      while (j < mon.size() && mon[j] == mon[i]) ++j;
      if (i > 0) os << " ";
      os << factor_name(mon[i]);
      if (j - i > 1) os << "^" << (j - i);
      i = j;
    }
  }
  return os.str();
}

cplx DiffPolynomial::integrate(const GridFunction& u) const {
  const int n = u.grid.N;
  const int kmax = max_order();
  std::vector<cvec> d(kmax + 1), db(kmax + 1);
  auto spec = to_spectral(u);
  for (int k = 0; k <= kmax; ++k) {
    d[k] = to_physical(spectral_derivative(spec, k)).values;
    db[k].resize(n);
    for (int j = 0; j < n; ++j) db[k][j] = std::conj(d[k][j]);
  }
  cvec acc(n, 0.0);
  for (const auto& [mon, c] : terms_) {
    const cplx cc = c.to_complex();
    for (int j = 0; j < n; ++j) {
      cplx v = cc;
      for (int f : mon) v *= Factor::conj(f) ? db[Factor::order(f)][j] : d[Factor::order(f)][j];
      acc[j] += v;
    }
  }
  return iscat::integrate(u.grid, acc);
}

namespace {

// Enumerate non-increasing sequences of `count` nonnegative ints summing to `total`.
void partitions(int total, int count, int maxpart, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (count == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (int p = std::min(total, maxpart); p >= 0; --p) {
    if (p * count < total) break;
    cur.push_back(p);
    partitions(total - p, count - 1, p, cur, out);
    cur.pop_back();
  }
}

std::vector<Monomial> candidates(int nu, int nb, int order_sum) {
  std::vector<Monomial> out;
  for (int su = 0; su <= order_sum; ++su) {
    std::vector<std::vector<int>> pu, pb;
    std::vector<int> cur;
    partitions(su, nu, su, cur, pu);
    partitions(order_sum - su, nb, order_sum - su, cur, pb);
    for (const auto& a : pu)
      for (const auto& b : pb) {
        Monomial m;
        for (int k : a) m.push_back(Factor::make(k, false));
        for (int k : b) m.push_back(Factor::make(k, true));
        std::sort(m.begin(), m.end());
        out.push_back(m);
      }
  }
  return out;
}

// Solve M x = rhs exactly (dense Gauss-Jordan); returns false when inconsistent.
bool solve_exact(std::vector<std::vector<Rational>> a, int ncols, int nrhs, std::vector<std::vector<Rational>>& x) {
  const int rows = static_cast<int>(a.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < ncols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][c];
    for (auto& v : a[r]) v *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (int k = c; k < ncols + nrhs; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    for (int k = 0; k < nrhs; ++k)
      if (a[i][ncols + k] != 0) return false;
  x.assign(nrhs, std::vector<Rational>(ncols, 0));
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < nrhs; ++k) x[k][pivot_col[i]] = a[i][ncols + k];
  return true;
}

bool try_antiderivative(const DiffPolynomial& d, DiffPolynomial& result) {
  // group by (number of u factors, number of conj factors, derivative-order sum)
  std::map<std::tuple<int, int, int>, DiffPolynomial> groups;
  for (const auto& [mon, c] : d.terms()) {
    int nu = 0, nb = 0, os = 0;
    for (int f : mon) {
      (Factor::conj(f) ? nb : nu)++;
      os += Factor::order(f);
    }
    groups[{nu, nb, os}].add(mon, c);
  }
  result = DiffPolynomial();
  for (const auto& [key, part] : groups) {
    const auto [nu, nb, os] = key;
    if (os == 0 || nu + nb == 0) return false;
    auto cand = candidates(nu, nb, os - 1);
    std::map<Monomial, int> row_of;
    std::vector<DiffPolynomial> derivs;
    for (const auto& m : cand) {
      derivs.push_back(DiffPolynomial::monomial(1, m).derivative());
      for (const auto& [dm, dc] : derivs.back().terms()) row_of.emplace(dm, 0);
    }
    for (const auto& [m, c] : part.terms())
      if (!row_of.count(m)) return false;
    int idx = 0;
    for (auto& [m, i] : row_of) i = idx++;
    const int nc = static_cast<int>(cand.size());
    std::vector<std::vector<Rational>> a(row_of.size(), std::vector<Rational>(nc + 2, 0));
    for (int j = 0; j < nc; ++j)
      for (const auto& [dm, dc] : derivs[j].terms()) a[row_of[dm]][j] = dc.re;
    for (const auto& [m, c] : part.terms()) {
      a[row_of[m]][nc] = c.re;
      a[row_of[m]][nc + 1] = c.im;
    }
    std::vector<std::vector<Rational>> x;
    if (!solve_exact(std::move(a), nc, 2, x)) return false;
    for (int j = 0; j < nc; ++j) result.add(cand[j], GaussRational(x[0][j], x[1][j]));
  }
  return true;
}

}  // namespace

DiffPolynomial antiderivative(const DiffPolynomial& d) {
  DiffPolynomial r;
  if (!try_antiderivative(d, r))
    throw Error(ErrorCode::NonIntegrableRHS, "expression is not a total derivative: " + d.to_string());
  return r;
}

bool is_total_derivative(const DiffPolynomial& d) {
  DiffPolynomial r;
  return try_antiderivative(d, r);
}

bool equal_mod_derivatives(const DiffPolynomial& a, const DiffPolynomial& b) {
  return is_total_derivative(a - b);
}

}  // namespace iscat
