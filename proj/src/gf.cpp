#include "aoiq/gf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aoiq {

namespace {

void strip_trailing_zeros(Poly& p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
}

}  // namespace

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  strip_trailing_zeros(r);
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  strip_trailing_zeros(r);
  return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  strip_trailing_zeros(r);
  return r;
}

Poly poly_scale(const Poly& a, double c) {
  Poly r = a;
  for (double& v : r) v *= c;
  strip_trailing_zeros(r);
  return r;
}

Poly poly_shift(const Poly& a, int k) {
  if (k < 0) raise(ErrorCode::InvalidInput, "poly_shift: negative shift");
  Poly r(a.size() + static_cast<size_t>(k), 0.0);
  std::copy(a.begin(), a.end(), r.begin() + k);
  strip_trailing_zeros(r);
  return r;
}

double poly_eval(const Poly& a, double z) {
  double acc = 0.0;
  for (size_t i = a.size(); i-- > 0;) acc = acc * z + a[i];
  return acc;
}

Poly poly_div_one_minus_z(const Poly& p, double root_tol) {
  // p(z) = (1 - z) Q(z) + p(1) z^n with Q given by the prefix sums of p.
  double running = 0.0;
  Poly q;
  q.reserve(p.size());
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    running += p[i];
    q.push_back(running);
  }
  const double remainder = running + (p.empty() ? 0.0 : p.back());
  if (std::abs(remainder) > root_tol)
    raise(ErrorCode::InconsistentInputs,
          "division by (1 - z): numerator does not vanish at z = 1 (residual " +
              std::to_string(remainder) + ")");
  if (q.empty()) q.push_back(0.0);
  strip_trailing_zeros(q);
  return q;
}

void SeriesAccuracy::validate() const {
  if (!(abs_tol > 0.0)) raise(ErrorCode::InvalidInput, "SeriesAccuracy: abs_tol must be > 0");
  if (max_terms < 1) raise(ErrorCode::InvalidInput, "SeriesAccuracy: max_terms must be >= 1");
}

RationalGF::RationalGF(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void RationalGF::normalize() {
  if (num_.empty()) num_.push_back(0.0);
  if (den_.empty()) den_.push_back(0.0);
  strip_trailing_zeros(num_);
  strip_trailing_zeros(den_);
  if (den_[0] == 0.0)
    raise(ErrorCode::InvalidInput, "RationalGF: denominator constant term is zero");
}

RationalGF RationalGF::constant(double c) { return RationalGF{{c}, {1.0}}; }

RationalGF RationalGF::geometric(double p) {
  if (!(p > 0.0) || p > 1.0)
    raise(ErrorCode::InvalidInput, "geometric gf: parameter must lie in (0, 1]");
  return RationalGF{{0.0, p}, {1.0, -(1.0 - p)}};
}

double RationalGF::evaluate(double z) const {
  const double d = poly_eval(den_, z);
  if (std::abs(d) < 1e-14)
    raise(ErrorCode::Pole, "RationalGF: pole at z = " + std::to_string(z));
  return poly_eval(num_, z) / d;
}

std::vector<double> RationalGF::coefficients(int count) const {
  if (count < 0) raise(ErrorCode::InvalidInput, "coefficients: count must be >= 0");
  // Nonzero span of the denominator, constant term excluded.
  std::vector<size_t> taps;
  for (size_t j = 1; j < den_.size(); ++j)
    if (den_[j] != 0.0) taps.push_back(j);
  const double d0 = den_[0];
  std::vector<double> c(static_cast<size_t>(count), 0.0);
  for (size_t x = 0; x < c.size(); ++x) {
    double acc = x < num_.size() ? num_[x] : 0.0;
    for (size_t j : taps) {
      if (j > x) break;
      acc -= den_[j] * c[x - j];
    }
    c[x] = acc / d0;
  }
  return c;
}

double RationalGF::pgf_error() const { return std::abs(evaluate(1.0) - 1.0); }

RationalGF RationalGF::operator+(const RationalGF& o) const {
  return RationalGF{poly_add(poly_mul(num_, o.den_), poly_mul(o.num_, den_)),
                    poly_mul(den_, o.den_)};
}

RationalGF RationalGF::operator-(const RationalGF& o) const {
  return RationalGF{poly_sub(poly_mul(num_, o.den_), poly_mul(o.num_, den_)),
                    poly_mul(den_, o.den_)};
}

RationalGF RationalGF::operator*(const RationalGF& o) const {
  return RationalGF{poly_mul(num_, o.num_), poly_mul(den_, o.den_)};
}

RationalGF RationalGF::scaled(double c) const { return RationalGF{poly_scale(num_, c), den_}; }

RationalGF RationalGF::shifted(int k) const { return RationalGF{poly_shift(num_, k), den_}; }

RationalGF RationalGF::divided_by_one_minus_z(double vanish_tol) const {
  return RationalGF{poly_div_one_minus_z(num_, vanish_tol), den_};
}

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double eulerian_number(int n, int k) {
  if (n < 0 || k < 0 || k >= std::max(n, 1)) return (n == 0 && k == 0) ? 1.0 : 0.0;
  // A(n, k) = (k+1) A(n-1, k) + (n-k) A(n-1, k-1), A(0, 0) = 1.
  std::vector<double> row{1.0};
  for (int m = 1; m <= n; ++m) {
    std::vector<double> next(static_cast<size_t>(m), 0.0);
    for (int j = 0; j < m; ++j) {
      const double left = j < static_cast<int>(row.size()) ? row[j] : 0.0;
      const double diag = (j - 1) >= 0 && (j - 1) < static_cast<int>(row.size()) ? row[j - 1] : 0.0;
      next[j] = (j + 1) * left + (m - j) * diag;
    }
    row = std::move(next);
  }
  return row[static_cast<size_t>(k)];
}

namespace {

constexpr int kMaxNegativeOrder = 60;

void check_polylog_domain(int s, double z) {
  if (s > 0) raise(ErrorCode::Unsupported, "polylog: positive orders are not supported");
  if (-s > kMaxNegativeOrder)
    raise(ErrorCode::Unsupported, "polylog: order below -60 is not supported");
  if (!(std::abs(z) < 1.0)) raise(ErrorCode::Domain, "polylog: |z| must be < 1");
}

}  // namespace

double polylog(int s, double z) {
  check_polylog_domain(s, z);
  const int n = -s;
  if (z == 0.0) return 0.0;
  if (n == 0) return z / (1.0 - z);
  // Li_{-n}(z) = sum_{k=0}^{n-1} A(n, k) z^{n-k} / (1 - z)^{n+1}
  double num = 0.0;
  for (int k = 0; k < n; ++k) num += eulerian_number(n, k) * std::pow(z, n - k);
  return num / std::pow(1.0 - z, n + 1);
}

double lerch_phi(double z, int s, double beta, const SeriesAccuracy& acc) {
  acc.validate();
  if (s > 0) raise(ErrorCode::Unsupported, "lerch_phi: positive orders are not supported");
  if (-s > kMaxNegativeOrder)
    raise(ErrorCode::Unsupported, "lerch_phi: order below -60 is not supported");
  if (!(std::abs(z) < 1.0)) raise(ErrorCode::Domain, "lerch_phi: |z| must be < 1");
  const int n = -s;
  // sum_{eta>=0} z^eta (eta + beta)^n expanded binomially over the moment sums
  // M_0 = 1/(1-z) and M_k = Li_{-k}(z).
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double weight = binomial_coefficient(n, k) * std::pow(beta, n - k);
    if (weight == 0.0) continue;
    total += weight * (k == 0 ? 1.0 / (1.0 - z) : polylog(-k, z));
  }
  // Exclude the eta + beta == 0 term when beta is a non-positive integer. The
  // term is z^{-beta} 0^n, nonzero only for n == 0.
  const double rounded = std::round(beta);
  if (rounded <= 0.0 && std::abs(beta - rounded) < 1e-12 && n == 0)
    total -= std::pow(z, -rounded);
  return total;
}

}  // namespace aoiq
