#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "aoiq/coud.hpp"
#include "aoiq/distributions.hpp"
#include "aoiq/models.hpp"

namespace aoiq {

// Deterministic, splittable generator (splitmix64). One independent stream
// per replication; identical seeds give bit-identical runs on any platform.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }
};

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication_index);

struct SimConfig {
  QueueParams params;
  std::uint64_t horizon_slots = 1'000'000;
  std::uint64_t warmup_slots = 10'000;
  std::uint64_t seed = 0;
  int x_max_histogram = 500;
  bool record_trace = false;

  void validate() const;
};

struct DeliveryRecord {
  std::uint64_t n = 0;          // 1-based informative delivery index
  std::int64_t t_generated = 0;
  std::int64_t t_delivered = 0;
  std::int64_t system_time = 0;
  std::int64_t peak_age = 0;
};

// Histogram counters are indexed by value (index i = value i); values above
// x_max_histogram land in the exact overflow maps so post-hoc cost averages
// lose nothing.
struct EmpiricalStats {
  SimConfig config;
  std::uint64_t effective_slots = 0;
  std::uint64_t deliveries = 0;

  std::vector<std::uint64_t> aoi_hist;          // values 1..x_max, slot-weighted
  std::vector<std::uint64_t> paoi_hist;         // values 1..x_max, per delivery
  std::vector<std::uint64_t> system_time_hist;  // values 0..x_max, per delivery
  std::map<std::int64_t, std::uint64_t> aoi_overflow;
  std::map<std::int64_t, std::uint64_t> paoi_overflow;
  std::map<std::int64_t, std::uint64_t> system_time_overflow;

  double rate_estimate = 0.0;
  double aoi_mean = 0.0;
  double paoi_mean = 0.0;
  double system_time_mean = 0.0;
  std::int64_t last_delivery_slot = -1;

  std::vector<DeliveryRecord> trace;

  bool operator==(const EmpiricalStats&) const;
};

// Slot-level run of one discipline under departure-first / arrival-last slot
// timing. The age register resets to the delivered packet's system time; the
// delivery slot itself samples the pre-reset peak, so the smallest observable
// stationary age is min(T) + 1.
EmpiricalStats simulate(const SimConfig& config);

// Combines independent replications by histogram addition.
EmpiricalStats merge(const EmpiricalStats& a, const EmpiricalStats& b);

enum class WhichDistribution { Aoi, Paoi, SystemTime };

DiscretePmf empirical_pmf(const EmpiricalStats& stats, WhichDistribution which);

struct StationaryIdentityResidual {
  double residual = 0.0;    // max_x |age cdf - rate * prefix(T - A)|
  double renewal_rate_gap = 0.0;  // |slots-based rate - delivery-clock rate|
  bool low_confidence = false;
};

// Cross-check of the stationary sample-path identity on one run.
StationaryIdentityResidual stationary_identity_residual(const EmpiricalStats& stats, int x_limit = 50);

struct EmpiricalCost {
  double coud = 0.0;   // slot average of f(age)
  double pcoud = 0.0;  // delivery average of f(peak)
};

EmpiricalCost empirical_coud(const EmpiricalStats& stats, const AgeFunction& f);

}  // namespace aoiq
