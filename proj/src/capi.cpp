#include "aoiq.h"

#include <cstring>
#include <string>

#include "aoiq/coud.hpp"
#include "aoiq/models.hpp"
#include "aoiq/optimize.hpp"
#include "aoiq/sim.hpp"

struct aoiq_model {
  aoiq::QueueParams params;
};

struct aoiq_sim {
  aoiq::EmpiricalStats stats;
};

namespace {

thread_local std::string g_last_error;

aoiq_status set_error(const aoiq::Error& e) {
  g_last_error = e.what();
  return e.category() == aoiq::ErrorCategory::Accuracy ? AOIQ_ERR_ACCURACY : AOIQ_ERR_INVALID;
}

aoiq_status set_error(const std::exception& e) {
  g_last_error = e.what();
  return AOIQ_ERROR;
}

template <typename Fn>
aoiq_status guarded(Fn&& fn) {
  try {
    fn();
    return AOIQ_OK;
  } catch (const aoiq::Error& e) {
    return set_error(e);
  } catch (const std::exception& e) {
    return set_error(e);
  }
}

aoiq_status require(bool ok, const char* msg) {
  if (ok) return AOIQ_OK;
  g_last_error = msg;
  return AOIQ_ERR_INVALID;
}

aoiq::Model to_model(aoiq_model_kind kind) {
  switch (kind) {
    case AOIQ_MODEL_FCFS: return aoiq::Model::FcfsGeoGeo1;
    case AOIQ_MODEL_LCFS_PREEMPTIVE: return aoiq::Model::LcfsPreemptiveGeoGeo1;
    case AOIQ_MODEL_BUFFERLESS: return aoiq::Model::BufferlessDrop;
  }
  aoiq::raise(aoiq::ErrorCode::InvalidInput, "unknown model kind");
}

aoiq::AgeFunction to_cost(const aoiq_cost* cost) {
  if (cost == nullptr) aoiq::raise(aoiq::ErrorCode::InvalidInput, "cost is null");
  aoiq::AgeFunction f;
  switch (cost->kind) {
    case AOIQ_COST_LINEAR: f = aoiq::AgeFunction::linear(cost->alpha); break;
    case AOIQ_COST_POWER: f = aoiq::AgeFunction::power_of(cost->alpha, cost->power); break;
    case AOIQ_COST_AFFINE_QUAD: f = aoiq::AgeFunction::affine_quad(cost->alpha, cost->beta); break;
    case AOIQ_COST_EXP: f = aoiq::AgeFunction::exponential(cost->alpha); break;
    case AOIQ_COST_LOG: f = aoiq::AgeFunction::logarithmic(cost->alpha); break;
    case AOIQ_COST_SERIES: {
      if (cost->series == nullptr || cost->series_len < 1)
        aoiq::raise(aoiq::ErrorCode::InvalidInput, "series cost needs coefficients");
      f = aoiq::AgeFunction::power_series(
          std::vector<double>(cost->series, cost->series + cost->series_len));
      break;
    }
    default: aoiq::raise(aoiq::ErrorCode::InvalidInput, "unknown cost kind");
  }
  f.validate();
  return f;
}

aoiq::WhichDistribution to_dist(aoiq_dist which) {
  switch (which) {
    case AOIQ_DIST_AOI: return aoiq::WhichDistribution::Aoi;
    case AOIQ_DIST_PAOI: return aoiq::WhichDistribution::Paoi;
    case AOIQ_DIST_SYSTEM_TIME: return aoiq::WhichDistribution::SystemTime;
  }
  aoiq::raise(aoiq::ErrorCode::InvalidInput, "unknown distribution selector");
}

}  // namespace

extern "C" {

const char* aoiq_version(void) { return "1.0.0"; }

const char* aoiq_last_error(void) { return g_last_error.c_str(); }

aoiq_status aoiq_model_create(aoiq_model_kind kind, double lambda, double mu, double p,
                              aoiq_model** out) {
  if (aoiq_status s = require(out != nullptr, "output pointer is null"); s != AOIQ_OK) return s;
  *out = nullptr;
  return guarded([&] {
    aoiq::QueueParams params{to_model(kind), lambda, mu, p};
    params.validate();
    *out = new aoiq_model{params};
  });
}

void aoiq_model_free(aoiq_model* model) { delete model; }

#define AOIQ_POINT_FN(NAME, CORE_FN)                                                      \
  aoiq_status NAME(const aoiq_model* model, int x, double* out) {                          \
    if (aoiq_status s = require(model != nullptr && out != nullptr, "null argument");      \
        s != AOIQ_OK)                                                                      \
      return s;                                                                            \
    return guarded([&] { *out = aoiq::CORE_FN(model->params, x); });                       \
  }

AOIQ_POINT_FN(aoiq_aoi_pmf, aoi_pmf)
AOIQ_POINT_FN(aoiq_paoi_pmf, paoi_pmf)
AOIQ_POINT_FN(aoiq_aoi_cdf, aoi_cdf)
AOIQ_POINT_FN(aoiq_paoi_cdf, paoi_cdf)
AOIQ_POINT_FN(aoiq_system_time_pmf, fcfs_system_time_pmf)

#undef AOIQ_POINT_FN

aoiq_status aoiq_cost_mean_closed(const aoiq_model* model, aoiq_metric metric,
                                  const aoiq_cost* cost, double* out) {
  if (aoiq_status s = require(model != nullptr && out != nullptr, "null argument"); s != AOIQ_OK)
    return s;
  return guarded([&] {
    const aoiq::AgeFunction f = to_cost(cost);
    *out = metric == AOIQ_METRIC_COUD ? aoiq::coud_mean_closed(model->params, f)
                                      : aoiq::pcoud_mean_closed(model->params, f);
  });
}

aoiq_status aoiq_cost_mean_numeric(const aoiq_model* model, aoiq_metric metric,
                                   const aoiq_cost* cost, double tail_tol, double* out) {
  if (aoiq_status s = require(model != nullptr && out != nullptr, "null argument"); s != AOIQ_OK)
    return s;
  return guarded([&] {
    const aoiq::AgeFunction f = to_cost(cost);
    const double tol = tail_tol > 0.0 ? tail_tol : 1e-14;
    const aoiq::DiscretePmf pmf = metric == AOIQ_METRIC_COUD
                                      ? aoiq::aoi_pmf_truncated(model->params, tol)
                                      : aoiq::paoi_pmf_truncated(model->params, tol);
    *out = aoiq::coud_mean_numeric(pmf, f);
  });
}

aoiq_status aoiq_cost_mean_series(const aoiq_model* model, aoiq_metric metric,
                                  const aoiq_cost* cost, int probe_t, double epsilon,
                                  double* out) {
  if (aoiq_status s = require(model != nullptr && out != nullptr, "null argument"); s != AOIQ_OK)
    return s;
  return guarded([&] {
    const aoiq::AgeFunction f = to_cost(cost);
    const aoiq::SeriesApproximation approx = aoiq::approximate(f, probe_t, epsilon);
    *out = aoiq::coud_mean_series(
        model->params, approx,
        metric == AOIQ_METRIC_COUD ? aoiq::CostMetric::Coud : aoiq::CostMetric::Pcoud);
  });
}

aoiq_status aoiq_approximate(const aoiq_cost* cost, int probe_t, double epsilon, int max_k,
                             double* gaps, int* k_out) {
  if (aoiq_status s = require(gaps != nullptr && k_out != nullptr && max_k >= 1, "bad arguments");
      s != AOIQ_OK)
    return s;
  return guarded([&] {
    const aoiq::AgeFunction f = to_cost(cost);
    const aoiq::SeriesApproximation approx = aoiq::approximate(f, probe_t, epsilon);
    const int n = std::min<int>(max_k, static_cast<int>(approx.gap_trajectory.size()));
    for (int i = 0; i < n; ++i) gaps[i] = approx.gap_trajectory[static_cast<size_t>(i)];
    for (int i = n; i < max_k; ++i) gaps[i] = approx.gap_trajectory.back();
    *k_out = approx.k;
  });
}

aoiq_status aoiq_optimal_lambda_pcoud_closed(double mu, double* out) {
  if (aoiq_status s = require(out != nullptr, "output pointer is null"); s != AOIQ_OK) return s;
  return guarded([&] { *out = aoiq::optimal_lambda_pcoud_closed(mu); });
}

aoiq_status aoiq_optimal_lambda(aoiq_model_kind kind, const aoiq_cost* cost, aoiq_metric metric,
                                double mu, double p, double tol, aoiq_opt_result* out) {
  if (aoiq_status s = require(out != nullptr, "output pointer is null"); s != AOIQ_OK) return s;
  return guarded([&] {
    const aoiq::AgeFunction f = to_cost(cost);
    const aoiq::OptimizationResult r = aoiq::optimal_lambda_numeric(
        to_model(kind), f,
        metric == AOIQ_METRIC_COUD ? aoiq::CostMetric::Coud : aoiq::CostMetric::Pcoud, mu, p,
        tol);
    out->lambda_star = r.lambda_star;
    out->objective_value = r.objective_value;
    out->iterations = r.iterations;
    out->bracket_lo = r.bracket_lo;
    out->bracket_hi = r.bracket_hi;
    out->method = r.method == aoiq::OptimizationResult::Method::ClosedForm ? 0 : 1;
  });
}

aoiq_status aoiq_simulate(const aoiq_model* model, uint64_t horizon_slots, uint64_t warmup_slots,
                          uint64_t seed, int x_max_histogram, int record_trace, aoiq_sim** out) {
  if (aoiq_status s = require(model != nullptr && out != nullptr, "null argument"); s != AOIQ_OK)
    return s;
  *out = nullptr;
  return guarded([&] {
    aoiq::SimConfig config;
    config.params = model->params;
    config.horizon_slots = horizon_slots;
    config.warmup_slots = warmup_slots;
    config.seed = seed;
    config.x_max_histogram = x_max_histogram;
    config.record_trace = record_trace != 0;
    *out = new aoiq_sim{aoiq::simulate(config)};
  });
}

void aoiq_sim_free(aoiq_sim* sim) { delete sim; }

uint64_t aoiq_sim_deliveries(const aoiq_sim* sim) { return sim ? sim->stats.deliveries : 0; }

uint64_t aoiq_sim_slots(const aoiq_sim* sim) { return sim ? sim->stats.effective_slots : 0; }

double aoiq_sim_rate(const aoiq_sim* sim) { return sim ? sim->stats.rate_estimate : 0.0; }

double aoiq_sim_mean(const aoiq_sim* sim, aoiq_dist which) {
  if (sim == nullptr) return 0.0;
  switch (which) {
    case AOIQ_DIST_AOI: return sim->stats.aoi_mean;
    case AOIQ_DIST_PAOI: return sim->stats.paoi_mean;
    case AOIQ_DIST_SYSTEM_TIME: return sim->stats.system_time_mean;
  }
  return 0.0;
}

aoiq_status aoiq_sim_pmf(const aoiq_sim* sim, aoiq_dist which, double* buf, int buf_len,
                         double* tail) {
  if (aoiq_status s = require(sim != nullptr && buf != nullptr && buf_len >= 1, "bad arguments");
      s != AOIQ_OK)
    return s;
  return guarded([&] {
    const aoiq::DiscretePmf pmf = aoiq::empirical_pmf(sim->stats, to_dist(which));
    double in_range = 0.0;
    for (int v = 0; v < buf_len; ++v) {
      buf[v] = pmf.at(v);
      in_range += buf[v];
    }
    if (tail != nullptr) *tail = std::max(0.0, 1.0 - in_range);
  });
}

aoiq_status aoiq_sim_stationary_residual(const aoiq_sim* sim, int x_limit, double* residual,
                                       double* renewal_rate_gap, int* low_confidence) {
  if (aoiq_status s = require(sim != nullptr && residual != nullptr, "bad arguments");
      s != AOIQ_OK)
    return s;
  return guarded([&] {
    const aoiq::StationaryIdentityResidual r = aoiq::stationary_identity_residual(sim->stats, x_limit);
    *residual = r.residual;
    if (renewal_rate_gap != nullptr) *renewal_rate_gap = r.renewal_rate_gap;
    if (low_confidence != nullptr) *low_confidence = r.low_confidence ? 1 : 0;
  });
}

aoiq_status aoiq_sim_cost_mean(const aoiq_sim* sim, const aoiq_cost* cost, double* coud,
                               double* pcoud) {
  if (aoiq_status s = require(sim != nullptr && coud != nullptr && pcoud != nullptr,
                              "bad arguments");
      s != AOIQ_OK)
    return s;
  return guarded([&] {
    const aoiq::EmpiricalCost c = aoiq::empirical_coud(sim->stats, to_cost(cost));
    *coud = c.coud;
    *pcoud = c.pcoud;
  });
}

uint64_t aoiq_sim_trace_len(const aoiq_sim* sim) {
  return sim ? static_cast<uint64_t>(sim->stats.trace.size()) : 0;
}

aoiq_status aoiq_sim_trace_get(const aoiq_sim* sim, uint64_t index, aoiq_delivery* out) {
  if (aoiq_status s = require(sim != nullptr && out != nullptr, "bad arguments"); s != AOIQ_OK)
    return s;
  if (index >= sim->stats.trace.size()) {
    g_last_error = "trace index out of range";
    return AOIQ_ERR_INVALID;
  }
  const aoiq::DeliveryRecord& r = sim->stats.trace[static_cast<size_t>(index)];
  out->n = r.n;
  out->t_generated = r.t_generated;
  out->t_delivered = r.t_delivered;
  out->system_time = r.system_time;
  out->peak_age = r.peak_age;
  return AOIQ_OK;
}

}  // extern "C"
