#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "aoiq.h"
#include "aoiq/coud.hpp"
#include "aoiq/models.hpp"

namespace {

struct ModelHandle {
  aoiq_model* m = nullptr;
  ModelHandle(aoiq_model_kind kind, double l, double mu, double p) {
    REQUIRE(aoiq_model_create(kind, l, mu, p, &m) == AOIQ_OK);
  }
  ~ModelHandle() { aoiq_model_free(m); }
};

const aoiq_cost kLinear{AOIQ_COST_LINEAR, 1.0, 0.0, 1, nullptr, 0};

}  // namespace

TEST_CASE("model creation validates parameters and reports errors") {
  aoiq_model* m = nullptr;
  CHECK(aoiq_model_create(AOIQ_MODEL_FCFS, 0.95, 0.9, 1.0, &m) == AOIQ_ERR_INVALID);
  CHECK(m == nullptr);
  CHECK(std::strlen(aoiq_last_error()) > 0);
  CHECK(aoiq_model_create(AOIQ_MODEL_FCFS, 0.5, 0.9, 1.0, &m) == AOIQ_OK);
  REQUIRE(m != nullptr);
  aoiq_model_free(m);
  CHECK(aoiq_model_create(AOIQ_MODEL_FCFS, 0.5, 0.9, 1.0, nullptr) == AOIQ_ERR_INVALID);
  CHECK(std::strlen(aoiq_version()) > 0);
}

TEST_CASE("point evaluations agree with the core library") {
  ModelHandle h(AOIQ_MODEL_FCFS, 0.5, 0.9, 1.0);
  const aoiq::QueueParams q{aoiq::Model::FcfsGeoGeo1, 0.5, 0.9, 1.0};
  for (int x = 1; x <= 50; ++x) {
    double v = 0.0;
    CHECK(aoiq_aoi_pmf(h.m, x, &v) == AOIQ_OK);
    CHECK(v == doctest::Approx(aoiq::aoi_pmf(q, x)));
    CHECK(aoiq_paoi_cdf(h.m, x, &v) == AOIQ_OK);
    CHECK(v == doctest::Approx(aoiq::paoi_cdf(q, x)));
    CHECK(aoiq_system_time_pmf(h.m, x, &v) == AOIQ_OK);
    CHECK(v == doctest::Approx(aoiq::fcfs_system_time_pmf(q, x)));
  }
}

TEST_CASE("cost means through the C surface") {
  ModelHandle h(AOIQ_MODEL_FCFS, 0.5, 0.9, 1.0);
  double closed = 0.0, numeric = 0.0;
  CHECK(aoiq_cost_mean_closed(h.m, AOIQ_METRIC_COUD, &kLinear, &closed) == AOIQ_OK);
  CHECK(closed == doctest::Approx(3.188271604938).epsilon(1e-9));
  CHECK(aoiq_cost_mean_numeric(h.m, AOIQ_METRIC_COUD, &kLinear, 1e-14, &numeric) == AOIQ_OK);
  CHECK(numeric == doctest::Approx(closed).epsilon(1e-7));

  const aoiq_cost expc{AOIQ_COST_EXP, 0.1, 0.0, 1, nullptr, 0};
  double via_series = 0.0;
  CHECK(aoiq_cost_mean_series(h.m, AOIQ_METRIC_COUD, &expc, 15, 1e-6, &via_series) == AOIQ_OK);
  CHECK(aoiq_cost_mean_numeric(h.m, AOIQ_METRIC_COUD, &expc, 1e-14, &numeric) == AOIQ_OK);
  CHECK(via_series == doctest::Approx(numeric).epsilon(1e-4));

  // No closed form for the exponential cost.
  CHECK(aoiq_cost_mean_closed(h.m, AOIQ_METRIC_COUD, &expc, &closed) == AOIQ_ERR_INVALID);

  const double omegas[2] = {1.0, 0.5};
  const aoiq_cost series{AOIQ_COST_SERIES, 1.0, 0.0, 1, omegas, 2};
  CHECK(aoiq_cost_mean_numeric(h.m, AOIQ_METRIC_PCOUD, &series, 1e-14, &numeric) == AOIQ_OK);
  CHECK(numeric > 0.0);
}

TEST_CASE("gap trajectory export") {
  const aoiq_cost expc{AOIQ_COST_EXP, 0.1, 0.0, 1, nullptr, 0};
  std::vector<double> gaps(12, -1.0);
  int k = 0;
  CHECK(aoiq_approximate(&expc, 15, 1e-3, 12, gaps.data(), &k) == AOIQ_OK);
  CHECK(k >= 5);
  CHECK(std::abs(gaps[4] - 0.02) < 5e-4);
  for (int i = 1; i < k; ++i) CHECK(gaps[i] < gaps[i - 1]);
}

TEST_CASE("optimization through the C surface") {
  double star = 0.0;
  CHECK(aoiq_optimal_lambda_pcoud_closed(0.9, &star) == AOIQ_OK);
  CHECK(star == doctest::Approx(0.683772).epsilon(1e-6));
  aoiq_opt_result r{};
  CHECK(aoiq_optimal_lambda(AOIQ_MODEL_FCFS, &kLinear, AOIQ_METRIC_PCOUD, 0.9, 1.0, 1e-9, &r) ==
        AOIQ_OK);
  CHECK(r.lambda_star == doctest::Approx(star).epsilon(1e-5));
  CHECK(r.method == 1);
}

TEST_CASE("simulation handles and accessors") {
  ModelHandle h(AOIQ_MODEL_LCFS_PREEMPTIVE, 0.5, 0.9, 1.0);
  aoiq_sim* sim = nullptr;
  REQUIRE(aoiq_simulate(h.m, 300'000, 5'000, 99, 400, 1, &sim) == AOIQ_OK);
  REQUIRE(sim != nullptr);
  CHECK(aoiq_sim_slots(sim) == 295'000);
  CHECK(aoiq_sim_deliveries(sim) > 0);
  CHECK(aoiq_sim_rate(sim) == doctest::Approx(0.45 / 0.95).epsilon(0.05));
  CHECK(aoiq_sim_mean(sim, AOIQ_DIST_AOI) == doctest::Approx(1.0 / 0.5 + 1.0 / 0.9).epsilon(0.05));

  std::vector<double> pmf(101, 0.0);
  double tail = 0.0;
  CHECK(aoiq_sim_pmf(sim, AOIQ_DIST_AOI, pmf.data(), 101, &tail) == AOIQ_OK);
  CHECK(pmf[2] == doctest::Approx(0.45).epsilon(0.05));
  double mass = tail;
  for (double v : pmf) mass += v;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

  double residual = 0.0, gap = 0.0;
  int low = -1;
  CHECK(aoiq_sim_stationary_residual(sim, 50, &residual, &gap, &low) == AOIQ_OK);
  CHECK(residual < 0.02);
  CHECK(low == 0);

  double coud = 0.0, pcoud = 0.0;
  CHECK(aoiq_sim_cost_mean(sim, &kLinear, &coud, &pcoud) == AOIQ_OK);
  CHECK(coud == doctest::Approx(aoiq_sim_mean(sim, AOIQ_DIST_AOI)));

  const uint64_t len = aoiq_sim_trace_len(sim);
  REQUIRE(len == aoiq_sim_deliveries(sim));
  aoiq_delivery rec{};
  CHECK(aoiq_sim_trace_get(sim, 0, &rec) == AOIQ_OK);
  CHECK(rec.system_time == rec.t_delivered - rec.t_generated);
  CHECK(aoiq_sim_trace_get(sim, len, &rec) == AOIQ_ERR_INVALID);
  aoiq_sim_free(sim);
}

TEST_CASE("determinism through the C surface") {
  ModelHandle h(AOIQ_MODEL_BUFFERLESS, 0.5, 0.0, 0.8);
  aoiq_sim* a = nullptr;
  aoiq_sim* b = nullptr;
  REQUIRE(aoiq_simulate(h.m, 100'000, 1'000, 7, 300, 0, &a) == AOIQ_OK);
  REQUIRE(aoiq_simulate(h.m, 100'000, 1'000, 7, 300, 0, &b) == AOIQ_OK);
  CHECK(aoiq_sim_mean(a, AOIQ_DIST_AOI) == aoiq_sim_mean(b, AOIQ_DIST_AOI));
  CHECK(aoiq_sim_deliveries(a) == aoiq_sim_deliveries(b));
  aoiq_sim_free(a);
  aoiq_sim_free(b);
}

TEST_CASE("divergent combinations surface as accuracy errors") {
  ModelHandle h(AOIQ_MODEL_BUFFERLESS, 0.5, 0.0, 0.2);
  const aoiq_cost expc{AOIQ_COST_EXP, 0.2, 0.0, 1, nullptr, 0};
  double v = 0.0;
  CHECK(aoiq_cost_mean_numeric(h.m, AOIQ_METRIC_COUD, &expc, 1e-12, &v) == AOIQ_ERR_ACCURACY);
  CHECK(std::strlen(aoiq_last_error()) > 0);
}
