#pragma once

#include "aoiq/distributions.hpp"
#include "aoiq/gf.hpp"

namespace aoiq {

enum class Model {
  FcfsGeoGeo1,
  LcfsPreemptiveGeoGeo1,
  BufferlessDrop,
};

const char* model_name(Model m);

// Parameters of one status-update system. lambda is the Bernoulli arrival
// probability per slot, mu the geometric service success probability, p the
// channel success probability (bufferless model only).
struct QueueParams {
  Model model = Model::FcfsGeoGeo1;
  double lambda = 0.5;
  double mu = 0.9;
  double p = 1.0;

  // Range checks plus the FCFS stability requirement lambda < mu - 1e-12.
  void validate() const;

  double rho() const { return (1.0 - mu) / (1.0 - lambda); }
  double rho_bar() const { return lambda * (1.0 - mu) / (mu * (1.0 - lambda)); }

  // The LCFS closed-form pmfs/cdfs are singular at lambda == mu and switch to
  // the analytic limit when this holds.
  bool lcfs_equal_rates() const;

  // Long-run rate of AoI resets: lambda for FCFS, the informative-packet rate
  // for preemptive LCFS, lambda * p for the bufferless system.
  double effective_delivery_rate() const;

  // Dominant geometric decay of the AoI/PAoI tails; used to pick truncation points.
  double dominant_decay() const;
};

RationalGF paoi_gf(const QueueParams& params);
RationalGF aoi_gf(const QueueParams& params);

// Closed-form stationary masses and distribution values. x <= 0 yields 0 mass.
double paoi_pmf(const QueueParams& params, int x);
double aoi_pmf(const QueueParams& params, int x);
double paoi_cdf(const QueueParams& params, int x);
double aoi_cdf(const QueueParams& params, int x);

// FCFS system time: geometric with parameter mu * (1 - rho_bar).
double fcfs_system_time_pmf(const QueueParams& params, int x);
double fcfs_system_time_cdf(const QueueParams& params, int x);
RationalGF fcfs_system_time_gf(const QueueParams& params);

// Truncated pmfs built from the closed forms; truncation stops once the
// remaining tail (computed from the dominant decay) drops below tail_tol.
DiscretePmf aoi_pmf_truncated(const QueueParams& params, double tail_tol = 1e-12,
                              int x_cap = 2'000'000);
DiscretePmf paoi_pmf_truncated(const QueueParams& params, double tail_tol = 1e-12,
                               int x_cap = 2'000'000);
DiscretePmf fcfs_system_time_pmf_truncated(const QueueParams& params, double tail_tol = 1e-12,
                                           int x_cap = 2'000'000);

}  // namespace aoiq
