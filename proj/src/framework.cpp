#include "aoiq/framework.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aoiq {

namespace {

constexpr double kMassTol = 1e-9;

double pmf_mean_with_tail(const DiscretePmf& p) {
  // Tail mass, if any, is attributed to the first unstored point; callers
  // truncate far enough that this is negligible.
  return p.mean() + p.tail_mass * static_cast<double>(p.x_max() + 1);
}

Poly normalized_poly(std::vector<double> coeffs, const char* name) {
  double total = 0.0;
  for (double c : coeffs) total += c;
  if (!(total > 0.0)) raise(ErrorCode::DegenerateModel, std::string(name) + ": zero total mass");
  for (double& c : coeffs) c /= total;
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  return coeffs;
}

}  // namespace

void PreemptionTransforms::validate() const {
  if (!(theta >= 0.0) || theta > 1.0)
    raise(ErrorCode::InvalidInput, "PreemptionTransforms: theta outside [0, 1]");
  if (!(preempt_prob >= 0.0) || preempt_prob > 1.0)
    raise(ErrorCode::InvalidInput, "PreemptionTransforms: preempt_prob outside [0, 1]");
  if (!(effective_rate > 0.0))
    raise(ErrorCode::InvalidInput, "PreemptionTransforms: effective_rate must be > 0");
  const auto check_mass = [](const std::vector<double>& c, const char* name) {
    if (c.empty()) return;
    double total = 0.0;
    for (double v : c) total += v;
    if (std::abs(total - 1.0) > kMassTol)
      raise(ErrorCode::InvalidInput,
            std::string("PreemptionTransforms: ") + name + " mass differs from 1");
  };
  check_mass(s_lt_y, "s_lt_y");
  check_mass(y_lt_s, "y_lt_s");
  check_mass(y_gt_s, "y_gt_s");
}

DiscretePmf aoi_pmf_from_components(const DiscretePmf& system_time, const DiscretePmf& paoi,
                                    double rate, int x_max) {
  if (!(rate > 0.0)) raise(ErrorCode::InvalidInput, "aoi_pmf_from_components: rate must be > 0");
  if (x_max < 1) raise(ErrorCode::InvalidInput, "aoi_pmf_from_components: x_max must be >= 1");
  if (!system_time.complete(kMassTol) || !paoi.complete(kMassTol))
    raise(ErrorCode::Accuracy, "aoi_pmf_from_components: inputs must be complete (tail < 1e-9)");
  const DiscreteCdf t = system_time.cdf();
  const DiscreteCdf a = paoi.cdf();
  DiscretePmf out;
  out.x_min = 1;
  out.mass.resize(static_cast<size_t>(x_max));
  for (int x = 1; x <= x_max; ++x) {
    const double m = rate * (t.at(x - 1) - a.at(x - 1));
    if (m < -kMassTol)
      raise(ErrorCode::InconsistentInputs,
            "aoi_pmf_from_components: negative mass at x = " + std::to_string(x) +
                " (inputs not from a common system, or wrong rate)");
    out.mass[static_cast<size_t>(x - 1)] = std::max(m, 0.0);
  }
  const double total = out.total_stored();
  if (total > 1.0 + kMassTol)
    raise(ErrorCode::InconsistentInputs, "aoi_pmf_from_components: stored mass exceeds 1");
  out.tail_mass = std::max(0.0, 1.0 - total);
  return out;
}

RationalGF aoi_gf_from_components(const RationalGF& system_time_gf, const RationalGF& paoi_gf,
                                  double rate) {
  if (!(rate > 0.0)) raise(ErrorCode::InvalidInput, "aoi_gf_from_components: rate must be > 0");
  const RationalGF diff = system_time_gf - paoi_gf;
  return diff.scaled(rate).shifted(1).divided_by_one_minus_z(kMassTol);
}

DiscretePmf fcfs_paoi_pmf_general(const DiscreteCdf& interarrival_cdf,
                                  const DiscreteCdf& system_time_cdf,
                                  const DiscretePmf& service_pmf, int x_max) {
  if (x_max < 1) raise(ErrorCode::InvalidInput, "fcfs_paoi_pmf_general: x_max must be >= 1");
  interarrival_cdf.validate();
  system_time_cdf.validate();
  // max(Y, T_prev): cdf is the product of the two cdfs.
  DiscretePmf z;
  z.x_min = 1;
  z.mass.resize(static_cast<size_t>(x_max));
  double prev = 0.0;
  for (int x = 1; x <= x_max; ++x) {
    const double cur = interarrival_cdf.at(x) * system_time_cdf.at(x);
    z.mass[static_cast<size_t>(x - 1)] = std::max(0.0, cur - prev);
    prev = cur;
  }
  z.tail_mass = std::max(0.0, 1.0 - z.total_stored());
  DiscretePmf out = convolve(z, service_pmf);
  // Re-anchor at 1 so callers see the queue-metric support convention.
  if (out.x_min > 1) {
    out.mass.insert(out.mass.begin(), static_cast<size_t>(out.x_min - 1), 0.0);
    out.x_min = 1;
  }
  if (static_cast<int>(out.mass.size()) > x_max) {
    double cut = 0.0;
    for (size_t i = static_cast<size_t>(x_max); i < out.mass.size(); ++i) cut += out.mass[i];
    out.mass.resize(static_cast<size_t>(x_max));
    out.tail_mass += cut;
  }
  if (out.tail_mass > 1e-6)
    raise(ErrorCode::Accuracy, "fcfs_paoi_pmf_general: tail mass beyond x_max exceeds 1e-6");
  return out;
}

double lcfs_theta(const DiscretePmf& interarrival_pmf, const DiscretePmf& service_pmf) {
  const DiscreteCdf y = interarrival_pmf.cdf();
  const DiscreteCdf s = service_pmf.cdf();
  // Route 1: over the service law, Pr(Y <= n).
  double over_service = 0.0;
  for (int n = service_pmf.x_min; n <= service_pmf.x_max(); ++n)
    over_service += y.at(n) * service_pmf.at(n);
  // Route 2: over the interarrival law, Pr(S >= n).
  double over_arrival = 0.0;
  for (int n = interarrival_pmf.x_min; n <= interarrival_pmf.x_max(); ++n)
    over_arrival += (1.0 - s.at(n - 1)) * interarrival_pmf.at(n);
  if (std::abs(over_service - over_arrival) > 1e-9)
    raise(ErrorCode::Accuracy,
          "lcfs_theta: summation routes disagree (inputs truncated too short): " +
              std::to_string(over_service) + " vs " + std::to_string(over_arrival));
  return over_service;
}

PreemptionTransforms lcfs_conditional_transforms(const DiscretePmf& interarrival_pmf,
                                                 const DiscretePmf& service_pmf,
                                                 const SeriesAccuracy& accuracy) {
  accuracy.validate();
  PreemptionTransforms pt;
  pt.theta = lcfs_theta(interarrival_pmf, service_pmf);
  if (pt.theta >= 1.0 - 1e-12)
    raise(ErrorCode::DegenerateModel, "lcfs transforms: theta = 1, no informative packets");
  const DiscreteCdf y = interarrival_pmf.cdf();
  const DiscreteCdf s = service_pmf.cdf();

  const int y_hi = interarrival_pmf.x_max();
  const int s_hi = service_pmf.x_max();
  const int hi = std::max(y_hi, s_hi);

  std::vector<double> svc(static_cast<size_t>(s_hi) + 1, 0.0);
  std::vector<double> pre(static_cast<size_t>(y_hi) + 1, 0.0);
  std::vector<double> first(static_cast<size_t>(y_hi) + 1, 0.0);
  double preempt = 0.0;
  for (int n = 1; n <= hi; ++n) {
    // Departure-first timing: a service finishing in the same slot as the
    // next arrival completes; only a strictly earlier arrival preempts.
    if (n <= s_hi) svc[static_cast<size_t>(n)] = service_pmf.at(n) * (1.0 - y.at(n - 1));
    if (n <= y_hi) {
      const double p_y = interarrival_pmf.at(n);
      pre[static_cast<size_t>(n)] = p_y * (1.0 - s.at(n));
      first[static_cast<size_t>(n)] = p_y * s.at(n);
      preempt += p_y * (1.0 - s.at(n));
    }
  }
  pt.preempt_prob = std::min(1.0, preempt);
  pt.s_lt_y = normalized_poly(svc, "s_lt_y");
  pt.y_gt_s = normalized_poly(first, "y_gt_s");
  if (pt.preempt_prob > accuracy.abs_tol) {
    pt.y_lt_s = normalized_poly(pre, "y_lt_s");
  } else {
    pt.preempt_prob = 0.0;
    pt.y_lt_s.clear();  // preemption impossible; the component is absent
  }

  const double mean_service = pmf_mean_with_tail(service_pmf);
  const double mean_interarrival = pmf_mean_with_tail(interarrival_pmf);
  pt.effective_rate =
      (1.0 - pt.theta * (1.0 - 1.0 / mean_service)) * (1.0 / mean_interarrival);
  return pt;
}

RationalGF lcfs_paoi_gf_general(const PreemptionTransforms& pt) {
  pt.validate();
  if (pt.theta >= 1.0 - 1e-12)
    raise(ErrorCode::DegenerateModel, "lcfs_paoi_gf_general: theta = 1");
  const RationalGF first{Poly(pt.y_gt_s), {1.0}};
  const RationalGF svc{Poly(pt.s_lt_y), {1.0}};
  if (pt.preempt_prob == 0.0 || pt.y_lt_s.empty()) return first * svc;
  // Geometric number of preempting arrivals between informative deliveries.
  Poly chain_den = poly_sub({1.0}, poly_scale(Poly(pt.y_lt_s), pt.preempt_prob));
  const RationalGF chain{{1.0 - pt.preempt_prob}, chain_den};
  return first * chain * svc;
}

RationalGF lcfs_aoi_gf_general(const PreemptionTransforms& pt) {
  pt.validate();
  const RationalGF system_time{Poly(pt.s_lt_y), {1.0}};
  return aoi_gf_from_components(system_time, lcfs_paoi_gf_general(pt), pt.effective_rate);
}

}  // namespace aoiq
