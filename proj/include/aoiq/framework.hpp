#pragma once

#include <vector>

#include "aoiq/distributions.hpp"
#include "aoiq/gf.hpp"

namespace aoiq {

// Conditional building blocks of the preemptive-LCFS peak-age decomposition.
// theta is the probability that an arriving packet is rendered obsolete
// (ties between an arrival and a service completion resolved by the identity
// theta = S*(1) - S*(1 - lambda) for geometric interarrivals). preempt_prob is
// the strictly-earlier-arrival probability Pr(Y < S); under the
// departure-first slot timing it is the parameter of the geometric count of
// preempted packets per informative delivery, and it is what makes the
// composition below agree with the exact closed forms. All three transforms
// are coefficient sequences normalized to unit mass (coefficient i = value i).
struct PreemptionTransforms {
  double theta = 0.0;
  double preempt_prob = 0.0;
  std::vector<double> s_lt_y;   // service time given the packet completes
  std::vector<double> y_lt_s;   // interarrival given the arrival preempts; empty when impossible
  std::vector<double> y_gt_s;   // first interarrival after a completed service
  double effective_rate = 0.0;  // long-run rate of informative deliveries

  void validate() const;
};

// Stationary AoI pmf from the system-time and peak-age distributions:
// mass(x) = rate * (T(x-1) - A(x-1)), the slot-indexed form of the
// sample-path identity (its cumulative version sums T - A up to x - 1).
// Inputs must come from a common stationary system.
DiscretePmf aoi_pmf_from_components(const DiscretePmf& system_time, const DiscretePmf& paoi,
                                    double rate, int x_max);

// Transform-domain version: rate * z * (T*(z) - A*(z)) / (1 - z), with the
// (1 - z) factor cancelled by exact synthetic division after checking the
// numerator root at z = 1.
RationalGF aoi_gf_from_components(const RationalGF& system_time_gf, const RationalGF& paoi_gf,
                                  double rate);

// FCFS peak age as max(interarrival, previous system time) + service:
// the max has cdf Y(x) T(x); the service sum is a direct convolution.
DiscretePmf fcfs_paoi_pmf_general(const DiscreteCdf& interarrival_cdf,
                                  const DiscreteCdf& system_time_cdf,
                                  const DiscretePmf& service_pmf, int x_max);

// Probability an arriving packet becomes obsolete, computed by both
// summation routes (over the service pmf and over the interarrival pmf) and
// cross-checked to 1e-9.
double lcfs_theta(const DiscretePmf& interarrival_pmf, const DiscretePmf& service_pmf);

PreemptionTransforms lcfs_conditional_transforms(const DiscretePmf& interarrival_pmf,
                                                 const DiscretePmf& service_pmf,
                                                 const SeriesAccuracy& accuracy = {});

// Peak-age transform of the preemptive queue: first interarrival after a
// completion, a geometric number of preempting interarrivals, then the
// completing service.
RationalGF lcfs_paoi_gf_general(const PreemptionTransforms& pt);

// AoI transform via the stationary identity with T*(z) = S*_{<Y}(z).
RationalGF lcfs_aoi_gf_general(const PreemptionTransforms& pt);

}  // namespace aoiq
