#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aoiq/models.hpp"

using namespace aoiq;

namespace {

QueueParams fcfs(double l, double m) { return {Model::FcfsGeoGeo1, l, m, 1.0}; }
QueueParams lcfs(double l, double m) { return {Model::LcfsPreemptiveGeoGeo1, l, m, 1.0}; }
QueueParams bufferless(double l, double p) { return {Model::BufferlessDrop, l, 0.0, p}; }

// Random valid parameter draws with margins that keep truncation lengths sane.
QueueParams random_params(Model model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (;;) {
    const double a = u(rng), b = u(rng);
    switch (model) {
      case Model::FcfsGeoGeo1:
        if (a < b - 0.05) return fcfs(a, b);
        break;
      case Model::LcfsPreemptiveGeoGeo1:
        return lcfs(a, b);
      case Model::BufferlessDrop:
        return bufferless(a, b);
    }
  }
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(fcfs(0.95, 0.9).validate(), Error);
  CHECK_THROWS_AS(fcfs(0.9, 0.9).validate(), Error);
  CHECK_NOTHROW(fcfs(0.5, 0.9).validate());
  CHECK_THROWS_AS(lcfs(0.0, 0.5).validate(), Error);
  CHECK_THROWS_AS(bufferless(0.5, 0.0).validate(), Error);
  CHECK_NOTHROW(bufferless(1.0, 1.0).validate());
  try {
    fcfs(0.95, 0.9).validate();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Stability);
  }
}

TEST_CASE("bufferless transforms and distributions") {
  const QueueParams q = bufferless(0.5, 0.8);
  const RationalGF a = paoi_gf(q);
  // 0.4 z / (1 - 0.6 z)
  REQUIRE(a.numerator().size() == 2);
  CHECK(a.numerator()[1] == doctest::Approx(0.4));
  CHECK(a.denominator()[1] == doctest::Approx(-0.6));
  CHECK(a.evaluate(1.0) == doctest::Approx(1.0));

  // AoI and PAoI coincide for this system.
  for (int x = 1; x <= 40; ++x) CHECK(aoi_pmf(q, x) == doctest::Approx(paoi_pmf(q, x)));

  const QueueParams half = bufferless(0.5, 0.5);
  CHECK(paoi_cdf(half, 2) == doctest::Approx(0.4375));
  CHECK(aoi_cdf(half, 2) == doctest::Approx(0.4375));

  const QueueParams det = bufferless(1.0, 1.0);
  CHECK(paoi_pmf(det, 1) == doctest::Approx(1.0));
  CHECK(paoi_pmf(det, 2) == doctest::Approx(0.0));
  CHECK(aoi_pmf(det, 5) == doctest::Approx(0.0));
}

TEST_CASE("fcfs closed-form masses at small ages") {
  const QueueParams q = fcfs(0.5, 0.9);
  CHECK(aoi_pmf(q, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(aoi_pmf(q, 2) == doctest::Approx(0.4));
  CHECK(paoi_pmf(q, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(paoi_pmf(q, 2) == doctest::Approx(0.36));
  CHECK(aoi_cdf(q, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(aoi_cdf(q, 2) == doctest::Approx(0.4));
  CHECK(aoi_gf(q).evaluate(1.0) == doctest::Approx(1.0));
  CHECK(paoi_gf(q).evaluate(1.0) == doctest::Approx(1.0));
  CHECK(aoi_pmf(q, 0) == 0.0);
  CHECK(aoi_pmf(q, -3) == 0.0);
}

TEST_CASE("lcfs closed-form masses and transform") {
  const QueueParams q = lcfs(0.5, 0.9);
  CHECK(aoi_pmf(q, 2) == doctest::Approx(0.45));
  CHECK(aoi_pmf(q, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(paoi_pmf(q, 2) == doctest::Approx(0.4275));

  // 0.45 z^2 / ((1 - 0.5 z)(1 - 0.1 z))
  const RationalGF d = aoi_gf(q);
  REQUIRE(d.numerator().size() == 3);
  CHECK(d.numerator()[2] == doctest::Approx(0.45));
  CHECK(d.denominator()[0] == doctest::Approx(1.0));
  CHECK(d.denominator()[1] == doctest::Approx(-0.6));
  CHECK(d.denominator()[2] == doctest::Approx(0.05));
  CHECK(paoi_gf(lcfs(0.9, 0.5)).evaluate(1.0) == doctest::Approx(1.0));
}

TEST_CASE("fcfs system time is geometric") {
  const QueueParams q = fcfs(0.5, 0.9);
  CHECK(q.rho_bar() == doctest::Approx(1.0 / 9.0));
  CHECK(fcfs_system_time_pmf(q, 1) == doctest::Approx(0.8));
  CHECK(fcfs_system_time_gf(q).evaluate(1.0) == doctest::Approx(1.0));
  const DiscretePmf t = fcfs_system_time_pmf_truncated(q, 1e-13);
  CHECK(t.mean() == doctest::Approx(1.25).epsilon(1e-9));
  CHECK_THROWS_AS(fcfs_system_time_pmf(lcfs(0.5, 0.9), 1), Error);
}

TEST_CASE("closed-form pmf equals transform coefficients, cdf equals cumulative sum") {
  std::mt19937_64 rng(2024);
  for (Model model :
       {Model::FcfsGeoGeo1, Model::LcfsPreemptiveGeoGeo1, Model::BufferlessDrop}) {
    for (int trial = 0; trial < 20; ++trial) {
      const QueueParams q = random_params(model, rng);
      CAPTURE(static_cast<int>(model));
      CAPTURE(q.lambda);
      CAPTURE(q.mu);
      CAPTURE(q.p);
      const auto aoi_coeffs = aoi_gf(q).coefficients(201);
      const auto paoi_coeffs = paoi_gf(q).coefficients(201);
      double aoi_cum = 0.0, paoi_cum = 0.0;
      for (int x = 1; x <= 200; ++x) {
        const double pa = aoi_pmf(q, x);
        const double pp = paoi_pmf(q, x);
        CHECK(std::abs(pa - aoi_coeffs[static_cast<size_t>(x)]) < 1e-10);
        CHECK(std::abs(pp - paoi_coeffs[static_cast<size_t>(x)]) < 1e-10);
        aoi_cum += pa;
        paoi_cum += pp;
        if (x <= 60) {
          CHECK(aoi_cdf(q, x) == doctest::Approx(aoi_cum).epsilon(1e-9));
          CHECK(paoi_cdf(q, x) == doctest::Approx(paoi_cum).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("distribution functions are monotone and reach 1") {
  for (const QueueParams& q : {fcfs(0.5, 0.9), lcfs(0.5, 0.9), bufferless(0.5, 0.8)}) {
    double prev = 0.0;
    for (int x = 1; x <= 500; ++x) {
      const double v = aoi_cdf(q, x);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    CHECK(aoi_cdf(q, 500) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(paoi_cdf(q, 500) == doctest::Approx(1.0).epsilon(1e-6));
  }
  // Slow-decay draws need a horizon scaled by the dominant decay rate.
  std::mt19937_64 rng(7);
  for (Model model :
       {Model::FcfsGeoGeo1, Model::LcfsPreemptiveGeoGeo1, Model::BufferlessDrop}) {
    const QueueParams q = random_params(model, rng);
    const int far = std::max(500, static_cast<int>(std::log(1e-8) / std::log(q.dominant_decay())));
    CHECK(aoi_cdf(q, far) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(paoi_cdf(q, far) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("mean ordering and truncated pmfs") {
  const QueueParams q = fcfs(0.5, 0.9);
  const DiscretePmf aoi = aoi_pmf_truncated(q, 1e-13);
  const DiscretePmf paoi = paoi_pmf_truncated(q, 1e-13);
  aoi.validate();
  paoi.validate();
  // mean AoI: 1/l + (1-l)/(m-l) - l/m^2 + l/m
  CHECK(aoi.mean() == doctest::Approx(3.188271604938).epsilon(1e-8));
  // mean PAoI: (l^2 - m) / (l (l - m))
  CHECK(paoi.mean() == doctest::Approx(3.25).epsilon(1e-8));
  CHECK(paoi.mean() >= aoi.mean());

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const QueueParams r = random_params(Model::FcfsGeoGeo1, rng);
    CHECK(paoi_pmf_truncated(r, 1e-12).mean() >= aoi_pmf_truncated(r, 1e-12).mean());
  }
}

TEST_CASE("lcfs equal arrival and service probabilities use the limit form") {
  const QueueParams q = lcfs(0.5, 0.5);
  CHECK(q.lcfs_equal_rates());
  // Transforms stay regular there; coefficients are the pmf oracle.
  const auto aoi_coeffs = aoi_gf(q).coefficients(201);
  const auto paoi_coeffs = paoi_gf(q).coefficients(201);
  for (int x = 1; x <= 200; ++x) {
    CHECK(std::abs(aoi_pmf(q, x) - aoi_coeffs[static_cast<size_t>(x)]) < 1e-10);
    CHECK(std::abs(paoi_pmf(q, x) - paoi_coeffs[static_cast<size_t>(x)]) < 1e-10);
  }
  double cum = 0.0;
  for (int x = 1; x <= 60; ++x) {
    cum += aoi_pmf(q, x);
    CHECK(aoi_cdf(q, x) == doctest::Approx(cum).epsilon(1e-9));
  }
  double pcum = 0.0;
  for (int x = 1; x <= 60; ++x) {
    pcum += paoi_pmf(q, x);
    CHECK(paoi_cdf(q, x) == doctest::Approx(pcum).epsilon(1e-9));
  }
  // Near-equal rates fall into the same path.
  const QueueParams close = lcfs(0.5, 0.5 + 1e-12);
  CHECK(aoi_pmf(close, 7) == doctest::Approx(aoi_pmf(q, 7)).epsilon(1e-9));
}
