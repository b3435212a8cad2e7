#pragma once

#include <utility>
#include <vector>

#include "aoiq/distributions.hpp"
#include "aoiq/gf.hpp"
#include "aoiq/models.hpp"

namespace aoiq {

enum class CostKind { Linear, Power, AffineQuad, Exponential, Logarithmic, Series };
enum class CostMetric { Coud, Pcoud };

// Non-negative, non-decreasing age penalty with f(0) = 0.
//   Linear:      alpha * t
//   Power:       alpha * t^n
//   AffineQuad:  alpha * t^2 + beta * t
//   Exponential: exp(alpha * t) - 1
//   Logarithmic: log(alpha * t + 1)
//   Series:      sum_k omega_k t^k  (series[i] = omega_{i+1})
struct AgeFunction {
  CostKind kind = CostKind::Linear;
  double alpha = 1.0;
  double beta = 0.0;
  int power = 1;
  std::vector<double> series;

  static AgeFunction linear(double a);
  static AgeFunction power_of(double a, int n);
  static AgeFunction affine_quad(double a, double b);
  static AgeFunction exponential(double a);
  static AgeFunction logarithmic(double a);
  static AgeFunction power_series(std::vector<double> omegas);

  double operator()(double t) const;
  // Largest power of t in the cost, or -1 for the non-polynomial kinds.
  int polynomial_degree() const;
  // alpha > 0, beta >= 0, n >= 1; Series checked non-decreasing by sampling.
  void validate() const;
};

struct TailReport {
  double bound = 0.0;  // estimated mass-weighted cost beyond the stored support
  double decay = 0.0;  // geometric decay rate estimated from the stored tail
};

// Cost means by direct summation over a stationary pmf (the general route).
// Exponential costs against a geometric tail are admitted only when
// decay * e^alpha < 1; otherwise the combination diverges.
double coud_mean_numeric(const DiscretePmf& age_pmf, const AgeFunction& f,
                         TailReport* report = nullptr);
double pcoud_mean_numeric(const DiscretePmf& paoi_pmf, const AgeFunction& f,
                          TailReport* report = nullptr);

// Closed-form means for Linear, Power, and AffineQuad costs. Power orders use
// the rational Lerch/polylogarithm forms. Other kinds are not closed-form; use
// the series route or the numeric route.
double coud_mean_closed(const QueueParams& params, const AgeFunction& f);
double pcoud_mean_closed(const QueueParams& params, const AgeFunction& f);

// Power-series approximation of a non-polynomial cost, driven by the pointwise
// gap at a fixed probe age.
struct SeriesApproximation {
  enum class Basis {
    PowerOfT,     // exponential cost: terms are (alpha t)^k / k!
    LogRational,  // logarithmic cost: odd powers of alpha t / (alpha t + 2)
  };
  Basis basis = Basis::PowerOfT;
  std::vector<std::pair<int, double>> terms;  // (power, coefficient) in the basis variable
  int k = 0;                                  // number of summed terms
  double gap = 0.0;                           // |f(probe_t) - f_approx(k)(probe_t)|
  std::vector<double> gap_trajectory;         // gap after 1, 2, ..., k terms
  int probe_t = 1;
  double epsilon = 0.0;
  AgeFunction target;
};

// Grows the expansion until the probe-point gap drops below epsilon.
SeriesApproximation approximate(const AgeFunction& f, int probe_t, double epsilon,
                                const SeriesAccuracy& accuracy = {});

// Mean through the approximation: power terms go through the closed forms;
// the logarithmic expansion is not polynomial in t, so it falls back to the
// numeric summation of the exact cost.
double coud_mean_series(const QueueParams& params, const SeriesApproximation& approx,
                        CostMetric metric = CostMetric::Coud);

}  // namespace aoiq
