#include "aoiq/optimize.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace aoiq {

double optimal_lambda_pcoud_closed(double mu) {
  if (!(mu > 0.0) || !(mu < 1.0))
    raise(ErrorCode::InvalidInput, "optimal_lambda_pcoud_closed: mu must lie in (0, 1)");
  return 1.0 - std::sqrt(1.0 - mu);
}

OptimizationResult optimal_lambda_numeric(Model model, const AgeFunction& f, CostMetric metric,
                                          double mu, double p, double tol) {
  f.validate();
  if (!(tol > 0.0)) raise(ErrorCode::InvalidInput, "optimal_lambda_numeric: tol must be > 0");
  if (model != Model::BufferlessDrop && (!(mu > 0.0) || !(mu < 1.0)))
    raise(ErrorCode::InvalidInput, "optimal_lambda_numeric: mu must lie in (0, 1)");

  double lo = 1e-6;
  double hi = model == Model::FcfsGeoGeo1 ? mu - 1e-6 : 1.0 - 1e-6;
  if (!(lo < hi))
    raise(ErrorCode::InvalidInput, "optimal_lambda_numeric: empty stability bracket");

  const auto objective = [&](double lambda) {
    QueueParams params{model, lambda, mu, p};
    return metric == CostMetric::Coud ? coud_mean_closed(params, f)
                                      : pcoud_mean_closed(params, f);
  };

  // Coarse scan: confirms the objective is finite and unimodal inside the
  // bracket (convexity holds only while the stability condition does), and
  // narrows the bracket around the best cell.
  constexpr int kScanPoints = 32;
  std::vector<double> xs(kScanPoints), ys(kScanPoints);
  int best = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    xs[i] = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / kScanPoints;
    ys[i] = objective(xs[i]);
    if (!std::isfinite(ys[i]))
      raise(ErrorCode::Accuracy, "optimal_lambda_numeric: objective not finite at lambda = " +
                                     std::to_string(xs[i]));
    if (ys[i] < ys[best]) best = i;
  }
  int direction_changes = 0;
  for (int i = 2; i < kScanPoints; ++i) {
    const bool was_down = ys[i - 1] < ys[i - 2];
    const bool is_down = ys[i] < ys[i - 1];
    if (was_down != is_down) ++direction_changes;
  }
  if (direction_changes > 1)
    raise(ErrorCode::Accuracy, "optimal_lambda_numeric: objective is not unimodal on the bracket");
  double a = best > 0 ? xs[best - 1] : lo;
  double b = best + 1 < kScanPoints ? xs[best + 1] : hi;

  // Golden-section refinement.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  int iterations = 0;
  while (b - a > tol && iterations < 200) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
    ++iterations;
  }

  OptimizationResult out;
  out.lambda_star = 0.5 * (a + b);
  out.objective_value = objective(out.lambda_star);
  out.method = OptimizationResult::Method::GoldenSection;
  out.iterations = iterations;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  return out;
}

}  // namespace aoiq
