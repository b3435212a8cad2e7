#include "aoiq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace aoiq {

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication_index) {
  SplitMix64 g(base_seed + 0x9E3779B97F4A7C15ULL * (replication_index + 1));
  return g.next();
}

void SimConfig::validate() const {
  params.validate();
  if (horizon_slots < 1) raise(ErrorCode::InvalidInput, "sim: horizon must be >= 1 slot");
  if (warmup_slots >= horizon_slots)
    raise(ErrorCode::InvalidInput, "sim: warmup must be smaller than the horizon");
  if (x_max_histogram < 1) raise(ErrorCode::InvalidInput, "sim: x_max_histogram must be >= 1");
}

bool EmpiricalStats::operator==(const EmpiricalStats& o) const {
  return effective_slots == o.effective_slots && deliveries == o.deliveries &&
         aoi_hist == o.aoi_hist && paoi_hist == o.paoi_hist &&
         system_time_hist == o.system_time_hist && aoi_overflow == o.aoi_overflow &&
         paoi_overflow == o.paoi_overflow && system_time_overflow == o.system_time_overflow &&
         rate_estimate == o.rate_estimate && aoi_mean == o.aoi_mean && paoi_mean == o.paoi_mean &&
         system_time_mean == o.system_time_mean && last_delivery_slot == o.last_delivery_slot;
}

namespace {

struct Recorder {
  EmpiricalStats* stats;
  std::int64_t warmup_end;
  double aoi_sum = 0.0, paoi_sum = 0.0, system_time_sum = 0.0;

  void count(std::vector<std::uint64_t>& hist, std::map<std::int64_t, std::uint64_t>& overflow,
             int x_min_hist, std::int64_t value) {
    const std::int64_t idx = value - x_min_hist;
    if (idx >= 0 && idx < static_cast<std::int64_t>(hist.size()))
      ++hist[static_cast<size_t>(idx)];
    else
      ++overflow[value];
  }

  void slot(std::int64_t t, std::int64_t age) {
    if (t <= warmup_end) return;
    ++stats->effective_slots;
    aoi_sum += static_cast<double>(age);
    count(stats->aoi_hist, stats->aoi_overflow, 1, age);
  }

  void delivery(std::int64_t t, std::int64_t t_gen, std::int64_t peak, std::int64_t system_time,
                bool record_trace) {
    if (t <= warmup_end) return;
    ++stats->deliveries;
    paoi_sum += static_cast<double>(peak);
    system_time_sum += static_cast<double>(system_time);
    count(stats->paoi_hist, stats->paoi_overflow, 1, peak);
    count(stats->system_time_hist, stats->system_time_overflow, 0, system_time);
    stats->last_delivery_slot = t;
    if (record_trace)
      stats->trace.push_back({stats->deliveries, t_gen, t, system_time, peak});
  }
};

}  // namespace

EmpiricalStats simulate(const SimConfig& config) {
  config.validate();
  EmpiricalStats stats;
  stats.config = config;
  stats.aoi_hist.assign(static_cast<size_t>(config.x_max_histogram), 0);
  stats.paoi_hist.assign(static_cast<size_t>(config.x_max_histogram), 0);
  stats.system_time_hist.assign(static_cast<size_t>(config.x_max_histogram) + 1, 0);

  Recorder rec{&stats, static_cast<std::int64_t>(config.warmup_slots)};
  SplitMix64 rng(config.seed);

  const double lambda = config.params.lambda;
  const double mu = config.params.mu;
  const double p = config.params.p;
  const Model model = config.params.model;
  const std::int64_t horizon = static_cast<std::int64_t>(config.horizon_slots);

  // Age register: age of the newest delivered update at the end of the
  // previous slot. A delivery during slot t is sampled the following slot,
  // so slot t itself records the pre-reset peak.
  std::int64_t age = 0;

  if (model == Model::BufferlessDrop) {
    // One-slot transmissions; a failed slot drops the packet, a successful
    // one refreshes the destination within the generation slot.
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const std::int64_t sampled = age + 1;
      rec.slot(t, sampled);
      if (rng.bernoulli(lambda) && rng.bernoulli(p)) {
        rec.delivery(t, t, sampled, 0, config.record_trace);
        age = 0;
      } else {
        age = sampled;
      }
    }
  } else if (model == Model::LcfsPreemptiveGeoGeo1) {
    bool busy = false;
    std::int64_t in_service_gen = 0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      std::int64_t sampled = age + 1;
      bool delivered = false;
      std::int64_t delivered_gen = 0;
      // Departure at the slot boundary happens before the slot's arrival.
      if (busy && rng.bernoulli(mu)) {
        delivered = true;
        delivered_gen = in_service_gen;
        busy = false;
      }
      rec.slot(t, sampled);
      if (delivered) {
        // Preempted packets were discarded, so every delivery is informative.
        rec.delivery(t, delivered_gen, sampled, t - delivered_gen, config.record_trace);
        age = t - delivered_gen;
      } else {
        age = sampled;
      }
      if (rng.bernoulli(lambda)) {
        // A fresh update preempts whatever is in service.
        busy = true;
        in_service_gen = t;
      }
    }
  } else {
    // FCFS with an infinite buffer.
    std::deque<std::int64_t> queue;  // generation stamps, head in service
    for (std::int64_t t = 1; t <= horizon; ++t) {
      std::int64_t sampled = age + 1;
      bool delivered = false;
      std::int64_t delivered_gen = 0;
      if (!queue.empty() && rng.bernoulli(mu)) {
        delivered = true;
        delivered_gen = queue.front();
        queue.pop_front();
      }
      rec.slot(t, sampled);
      if (delivered) {
        rec.delivery(t, delivered_gen, sampled, t - delivered_gen, config.record_trace);
        age = t - delivered_gen;
      } else {
        age = sampled;
      }
      if (rng.bernoulli(lambda)) queue.push_back(t);
    }
  }

  if (stats.effective_slots > 0) {
    stats.rate_estimate =
        static_cast<double>(stats.deliveries) / static_cast<double>(stats.effective_slots);
    stats.aoi_mean = rec.aoi_sum / static_cast<double>(stats.effective_slots);
  }
  if (stats.deliveries > 0) {
    stats.paoi_mean = rec.paoi_sum / static_cast<double>(stats.deliveries);
    stats.system_time_mean = rec.system_time_sum / static_cast<double>(stats.deliveries);
  }
  return stats;
}

EmpiricalStats merge(const EmpiricalStats& a, const EmpiricalStats& b) {
  if (a.aoi_hist.size() != b.aoi_hist.size() ||
      a.system_time_hist.size() != b.system_time_hist.size())
    raise(ErrorCode::InvalidInput, "merge: histogram shapes differ");
  EmpiricalStats out = a;
  out.effective_slots += b.effective_slots;
  out.deliveries += b.deliveries;
  for (size_t i = 0; i < out.aoi_hist.size(); ++i) out.aoi_hist[i] += b.aoi_hist[i];
  for (size_t i = 0; i < out.paoi_hist.size(); ++i) out.paoi_hist[i] += b.paoi_hist[i];
  for (size_t i = 0; i < out.system_time_hist.size(); ++i)
    out.system_time_hist[i] += b.system_time_hist[i];
  for (const auto& [v, c] : b.aoi_overflow) out.aoi_overflow[v] += c;
  for (const auto& [v, c] : b.paoi_overflow) out.paoi_overflow[v] += c;
  for (const auto& [v, c] : b.system_time_overflow) out.system_time_overflow[v] += c;
  out.trace.insert(out.trace.end(), b.trace.begin(), b.trace.end());
  out.last_delivery_slot = std::max(a.last_delivery_slot, b.last_delivery_slot);

  const double slots = static_cast<double>(out.effective_slots);
  const double dels = static_cast<double>(out.deliveries);
  out.rate_estimate = slots > 0 ? dels / slots : 0.0;
  const auto wavg = [](double ma, double wa, double mb, double wb) {
    return wa + wb > 0 ? (ma * wa + mb * wb) / (wa + wb) : 0.0;
  };
  out.aoi_mean = wavg(a.aoi_mean, static_cast<double>(a.effective_slots), b.aoi_mean,
                      static_cast<double>(b.effective_slots));
  out.paoi_mean =
      wavg(a.paoi_mean, static_cast<double>(a.deliveries), b.paoi_mean,
           static_cast<double>(b.deliveries));
  out.system_time_mean =
      wavg(a.system_time_mean, static_cast<double>(a.deliveries), b.system_time_mean,
           static_cast<double>(b.deliveries));
  return out;
}

namespace {

struct HistView {
  const std::vector<std::uint64_t>* hist;
  const std::map<std::int64_t, std::uint64_t>* overflow;
  int x_min;
  std::uint64_t total;
};

HistView view_of(const EmpiricalStats& stats, WhichDistribution which) {
  switch (which) {
    case WhichDistribution::Aoi:
      return {&stats.aoi_hist, &stats.aoi_overflow, 1, stats.effective_slots};
    case WhichDistribution::Paoi:
      return {&stats.paoi_hist, &stats.paoi_overflow, 1, stats.deliveries};
    case WhichDistribution::SystemTime:
      return {&stats.system_time_hist, &stats.system_time_overflow, 0, stats.deliveries};
  }
  raise(ErrorCode::InvalidInput, "empirical_pmf: unknown distribution");
}

}  // namespace

DiscretePmf empirical_pmf(const EmpiricalStats& stats, WhichDistribution which) {
  if (stats.deliveries < 1)
    raise(ErrorCode::InsufficientData, "empirical_pmf: run produced no deliveries");
  const HistView v = view_of(stats, which);
  DiscretePmf out;
  out.x_min = v.x_min;
  out.mass.resize(v.hist->size());
  const double total = static_cast<double>(v.total);
  for (size_t i = 0; i < v.hist->size(); ++i)
    out.mass[i] = static_cast<double>((*v.hist)[i]) / total;
  double over = 0.0;
  for (const auto& [value, c] : *v.overflow) over += static_cast<double>(c);
  out.tail_mass = over / total;
  return out;
}

StationaryIdentityResidual stationary_identity_residual(const EmpiricalStats& stats, int x_limit) {
  if (stats.deliveries < 100)
    raise(ErrorCode::InsufficientData, "stationary_identity_residual: needs at least 100 deliveries");
  const DiscretePmf age = empirical_pmf(stats, WhichDistribution::Aoi);
  const DiscretePmf peak = empirical_pmf(stats, WhichDistribution::Paoi);
  const DiscretePmf system_time = empirical_pmf(stats, WhichDistribution::SystemTime);
  const DiscreteCdf age_cdf = age.cdf();
  const DiscreteCdf peak_cdf = peak.cdf();
  const DiscreteCdf st_cdf = system_time.cdf();
  const double rate = stats.rate_estimate;

  StationaryIdentityResidual out;
  double prefix = 0.0;  // sum over u <= x-1 of (T(u) - A(u))
  for (int x = 1; x <= x_limit; ++x) {
    prefix += st_cdf.at(x - 1) - peak_cdf.at(x - 1);
    out.residual = std::max(out.residual, std::abs(age_cdf.at(x) - rate * prefix));
  }
  // Renewal-clock consistency: deliveries per slot vs the reciprocal of the
  // delivery-time clock.
  if (stats.last_delivery_slot > static_cast<std::int64_t>(stats.config.warmup_slots)) {
    const double span = static_cast<double>(stats.last_delivery_slot -
                                            static_cast<std::int64_t>(stats.config.warmup_slots));
    out.renewal_rate_gap = std::abs(rate - static_cast<double>(stats.deliveries) / span);
  }
  out.low_confidence = stats.deliveries < 10'000;
  return out;
}

EmpiricalCost empirical_coud(const EmpiricalStats& stats, const AgeFunction& f) {
  f.validate();
  if (stats.deliveries < 1)
    raise(ErrorCode::InsufficientData, "empirical_coud: run produced no deliveries");
  EmpiricalCost out;
  double age_sum = 0.0;
  for (size_t i = 0; i < stats.aoi_hist.size(); ++i)
    if (stats.aoi_hist[i] != 0)
      age_sum += f(static_cast<double>(i + 1)) * static_cast<double>(stats.aoi_hist[i]);
  for (const auto& [value, c] : stats.aoi_overflow)
    age_sum += f(static_cast<double>(value)) * static_cast<double>(c);
  out.coud = age_sum / static_cast<double>(stats.effective_slots);

  double peak_sum = 0.0;
  for (size_t i = 0; i < stats.paoi_hist.size(); ++i)
    if (stats.paoi_hist[i] != 0)
      peak_sum += f(static_cast<double>(i + 1)) * static_cast<double>(stats.paoi_hist[i]);
  for (const auto& [value, c] : stats.paoi_overflow)
    peak_sum += f(static_cast<double>(value)) * static_cast<double>(c);
  out.pcoud = peak_sum / static_cast<double>(stats.deliveries);
  return out;
}

}  // namespace aoiq
