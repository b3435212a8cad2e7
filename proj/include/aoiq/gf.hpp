#pragma once

#include <cstdint>
#include <vector>

#include "aoiq/error.hpp"

namespace aoiq {

// Dense polynomial in z, coefficients in ascending powers.
using Poly = std::vector<double>;

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, double c);
Poly poly_shift(const Poly& a, int k);  // multiply by z^k
double poly_eval(const Poly& a, double z);

// Exact synthetic division of p by (1 - z). Requires p(1) == 0; the division
// remainder equals p(1) and is rejected when its magnitude exceeds root_tol.
Poly poly_div_one_minus_z(const Poly& p, double root_tol);

// Truncation policy for the infinite sums behind the special functions and
// the conditional-transform builders.
struct SeriesAccuracy {
  double abs_tol = 1e-12;
  std::uint64_t max_terms = 10'000'000;

  void validate() const;
};

// Ratio of two polynomials in z. Probability generating functions of every
// model in this library are of this form, which makes coefficient extraction
// (numerical inverse transform) an exact long division.
class RationalGF {
public:
  RationalGF() : num_{0.0}, den_{1.0} {}
  RationalGF(Poly num, Poly den);

  static RationalGF constant(double c);
  // p z / (1 - (1-p) z): generating function of a geometric variable on {1,2,...}.
  static RationalGF geometric(double p);

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  // Exact rational evaluation; denominators within 1e-14 of zero are poles.
  double evaluate(double z) const;

  // First `count` power-series coefficients by long division. The recurrence
  // walks only the nonzero span of the denominator.
  std::vector<double> coefficients(int count) const;

  // |evaluate(1) - 1|; meaningful when the function is meant to be a pgf.
  double pgf_error() const;

  RationalGF operator+(const RationalGF& o) const;
  RationalGF operator-(const RationalGF& o) const;
  RationalGF operator*(const RationalGF& o) const;
  RationalGF scaled(double c) const;
  RationalGF shifted(int k) const;  // multiply by z^k

  // Divides by (1 - z) after checking that the numerator vanishes at z = 1;
  // a residual above vanish_tol means the inputs were not consistent.
  RationalGF divided_by_one_minus_z(double vanish_tol) const;

private:
  Poly num_;
  Poly den_;
  void normalize();
};

// Lerch transcendent sum_{eta >= 0} z^eta (eta + beta)^{-s} for integer s <= 0
// and |z| < 1, with any eta + beta == 0 term excluded. Evaluated through the
// exact rational closed form (binomial expansion into negative-order
// polylogarithms); `acc` only gates the input guards.
double lerch_phi(double z, int s, double beta, const SeriesAccuracy& acc = {});

// Polylogarithm Li_s(z) for integer s <= 0 and |z| < 1, via the Eulerian-number
// closed form. Satisfies z * lerch_phi(z, s, 1) == polylog(s, z).
double polylog(int s, double z);

double binomial_coefficient(int n, int k);
double eulerian_number(int n, int k);

}  // namespace aoiq
