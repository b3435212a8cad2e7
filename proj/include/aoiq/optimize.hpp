#pragma once

#include "aoiq/coud.hpp"
#include "aoiq/models.hpp"

namespace aoiq {

struct OptimizationResult {
  enum class Method { ClosedForm, GoldenSection };
  double lambda_star = 0.0;
  double objective_value = 0.0;
  Method method = Method::GoldenSection;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Arrival probability minimizing the peak cost mean of the FCFS queue; the
// same value for every non-negative non-decreasing polynomial cost.
double optimal_lambda_pcoud_closed(double mu);

// Bracketed golden-section minimum of the closed-form cost mean over the
// arrival probability. A coarse scan first checks unimodality inside the
// stability bracket. `p` applies to the bufferless model only.
OptimizationResult optimal_lambda_numeric(Model model, const AgeFunction& f, CostMetric metric,
                                          double mu, double p = 1.0, double tol = 1e-7);

}  // namespace aoiq
