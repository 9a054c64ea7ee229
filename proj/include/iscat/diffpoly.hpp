#pragma once

#include <map>
#include <string>
#include <vector>

#include "iscat/grid.hpp"
#include "iscat/hopf.hpp"

namespace iscat {

using Rational = hopf::Rational;

struct GaussRational {
  Rational re, im;

  GaussRational() = default;
  GaussRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussRational(int r) : re(r), im(0) {}
  static GaussRational I() { return {0, 1}; }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRational conj() const { return {re, -im}; }
  cplx to_complex() const;
  std::string str() const;
};

GaussRational operator+(const GaussRational& a, const GaussRational& b);
GaussRational operator-(const GaussRational& a, const GaussRational& b);
GaussRational operator-(const GaussRational& a);
GaussRational operator*(const GaussRational& a, const GaussRational& b);
GaussRational operator/(const GaussRational& a, const GaussRational& b);
bool operator==(const GaussRational& a, const GaussRational& b);

// A factor u^{(k)} or conj(u)^{(k)}, encoded as 2k + conj.
struct Factor {
  static int make(int order, bool conj) { return 2 * order + (conj ? 1 : 0); }
  static int order(int code) { return code / 2; }
  static bool conj(int code) { return code % 2 == 1; }
};

using Monomial = std::vector<int>;  // sorted factor codes

class DiffPolynomial {
 public:
  DiffPolynomial() = default;
  static DiffPolynomial constant(const GaussRational& c);
  static DiffPolynomial u(int order = 0);
  static DiffPolynomial ubar(int order = 0);
  static DiffPolynomial monomial(const GaussRational& c, Monomial m);

  const std::map<Monomial, GaussRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_order() const;

  DiffPolynomial derivative() const;
  DiffPolynomial conj() const;
  // conj(u) -> -conj(u)
  DiffPolynomial defocusing() const;
  // conj(u) -> -1, which yields the hierarchy of u_t + u_xxx - 6 u u_x = 0
  DiffPolynomial kdv_reduction() const;
  // keep monomials with the given number of factors
  DiffPolynomial degree_part(int deg) const;

  DiffPolynomial& operator+=(const DiffPolynomial& o);
  DiffPolynomial& operator-=(const DiffPolynomial& o);
  DiffPolynomial& operator*=(const GaussRational& c);
  bool operator==(const DiffPolynomial& o) const { return terms_ == o.terms_; }

  std::string to_string() const;
  // integral over the grid using spectral derivatives
  cplx integrate(const GridFunction& u) const;

  void add(const Monomial& m, const GaussRational& c);

 private:
  std::map<Monomial, GaussRational> terms_;
};

DiffPolynomial operator+(DiffPolynomial a, const DiffPolynomial& b);
DiffPolynomial operator-(DiffPolynomial a, const DiffPolynomial& b);
DiffPolynomial operator*(const DiffPolynomial& a, const DiffPolynomial& b);
DiffPolynomial operator*(const GaussRational& c, DiffPolynomial a);

// Unique antiderivative without constant term; throws NonIntegrableRHS.
DiffPolynomial antiderivative(const DiffPolynomial& d);
bool is_total_derivative(const DiffPolynomial& d);
// Equality of integrals over decaying data.
bool equal_mod_derivatives(const DiffPolynomial& a, const DiffPolynomial& b);

}  // namespace iscat
