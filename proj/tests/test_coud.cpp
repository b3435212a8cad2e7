#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aoiq/coud.hpp"

using namespace aoiq;

namespace {

QueueParams fcfs(double l, double m) { return {Model::FcfsGeoGeo1, l, m, 1.0}; }
QueueParams lcfs(double l, double m) { return {Model::LcfsPreemptiveGeoGeo1, l, m, 1.0}; }
QueueParams bufferless(double l, double p) { return {Model::BufferlessDrop, l, 0.0, p}; }

QueueParams random_params(Model model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 0.9);
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

double numeric_mean(const QueueParams& q, const AgeFunction& f, CostMetric metric) {
  const DiscretePmf pmf =
      metric == CostMetric::Coud ? aoi_pmf_truncated(q, 1e-16) : paoi_pmf_truncated(q, 1e-16);
  return metric == CostMetric::Coud ? coud_mean_numeric(pmf, f) : pcoud_mean_numeric(pmf, f);
}

}  // namespace

TEST_CASE("age function shapes") {
  CHECK(AgeFunction::linear(2.0)(3.0) == doctest::Approx(6.0));
  CHECK(AgeFunction::power_of(1.5, 3)(2.0) == doctest::Approx(12.0));
  CHECK(AgeFunction::affine_quad(1.0, 2.0)(3.0) == doctest::Approx(15.0));
  CHECK(AgeFunction::exponential(0.1)(0.0) == doctest::Approx(0.0));
  CHECK(AgeFunction::logarithmic(1.0)(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(AgeFunction::power_series({1.0, 0.5})(2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(AgeFunction::linear(-1.0).validate(), Error);
  CHECK_THROWS_AS(AgeFunction::power_of(1.0, 0).validate(), Error);
  CHECK_THROWS_AS(AgeFunction::power_series({-1.0}).validate(), Error);
}

TEST_CASE("linear cost means") {
  CHECK(coud_mean_closed(bufferless(0.5, 0.8), AgeFunction::linear(1.0)) ==
        doctest::Approx(2.5));
  CHECK(pcoud_mean_closed(bufferless(0.5, 0.8), AgeFunction::linear(1.0)) ==
        doctest::Approx(2.5));
  CHECK(coud_mean_closed(fcfs(0.5, 0.9), AgeFunction::linear(1.0)) ==
        doctest::Approx(3.188271604938).epsilon(1e-10));
  CHECK(pcoud_mean_closed(fcfs(0.5, 0.9), AgeFunction::linear(1.0)) == doctest::Approx(3.25));
  CHECK(coud_mean_closed(lcfs(0.5, 0.5), AgeFunction::linear(1.0)) == doctest::Approx(4.0));
}

TEST_CASE("numeric summation over a point mass and identity series") {
  const DiscretePmf at3 = DiscretePmf::point_mass(3);
  CHECK(coud_mean_numeric(at3, AgeFunction::linear(1.0)) == doctest::Approx(3.0));
  const QueueParams q = fcfs(0.5, 0.9);
  const DiscretePmf paoi = paoi_pmf_truncated(q, 1e-15);
  // identity cost written as a one-term power series
  CHECK(pcoud_mean_numeric(paoi, AgeFunction::power_series({1.0})) ==
        doctest::Approx(3.25).epsilon(1e-9));
}

TEST_CASE("power cost means agree with their quadratic specializations") {
  const QueueParams q = fcfs(0.5, 0.9);
  CHECK(coud_mean_closed(q, AgeFunction::power_of(1.0, 2)) ==
        doctest::Approx(coud_mean_closed(q, AgeFunction::affine_quad(1.0, 0.0))).epsilon(1e-10));
  CHECK(pcoud_mean_closed(q, AgeFunction::power_of(1.0, 2)) ==
        doctest::Approx(pcoud_mean_closed(q, AgeFunction::affine_quad(1.0, 0.0))).epsilon(1e-10));
  CHECK(pcoud_mean_closed(bufferless(0.5, 0.8), AgeFunction::power_of(1.0, 2)) ==
        doctest::Approx(10.0));
  for (const QueueParams& m : {fcfs(0.5, 0.9), lcfs(0.3, 0.6), bufferless(0.5, 0.8)}) {
    CHECK(coud_mean_closed(m, AgeFunction::power_of(1.0, 1)) ==
          doctest::Approx(coud_mean_closed(m, AgeFunction::linear(1.0))).epsilon(1e-10));
    CHECK(pcoud_mean_closed(m, AgeFunction::power_of(1.0, 1)) ==
          doctest::Approx(pcoud_mean_closed(m, AgeFunction::linear(1.0))).epsilon(1e-10));
  }
}

TEST_CASE("closed means equal the numeric summation over the analytic pmf") {
  std::mt19937_64 rng(314);
  const AgeFunction costs[] = {AgeFunction::linear(1.0), AgeFunction::linear(2.5),
                               AgeFunction::power_of(1.0, 2), AgeFunction::power_of(0.7, 3),
                               AgeFunction::power_of(1.0, 4), AgeFunction::affine_quad(1.0, 2.0)};
  for (Model model :
       {Model::FcfsGeoGeo1, Model::LcfsPreemptiveGeoGeo1, Model::BufferlessDrop}) {
    for (int trial = 0; trial < 20; ++trial) {
      const QueueParams q = random_params(model, rng);
      CAPTURE(q.lambda);
      CAPTURE(q.mu);
      CAPTURE(q.p);
      for (const AgeFunction& f : costs) {
        const double closed_c = coud_mean_closed(q, f);
        const double closed_p = pcoud_mean_closed(q, f);
        CHECK(closed_c == doctest::Approx(numeric_mean(q, f, CostMetric::Coud)).epsilon(1e-7));
        CHECK(closed_p == doctest::Approx(numeric_mean(q, f, CostMetric::Pcoud)).epsilon(1e-7));
        CHECK(closed_p >= closed_c - 1e-9);  // peak cost dominates for these systems
      }
    }
  }
}

TEST_CASE("alpha scaling is an outer factor") {
  std::mt19937_64 rng(55);
  for (Model model :
       {Model::FcfsGeoGeo1, Model::LcfsPreemptiveGeoGeo1, Model::BufferlessDrop}) {
    const QueueParams q = random_params(model, rng);
    for (int n : {1, 2, 3}) {
      const double base = coud_mean_closed(q, AgeFunction::power_of(1.0, n));
      for (double c : {0.1, 3.0, 10.0})
        CHECK(coud_mean_closed(q, AgeFunction::power_of(c, n)) ==
              doctest::Approx(c * base).epsilon(1e-12));
    }
  }
}

TEST_CASE("lcfs equal-rate power means take the limit path") {
  const QueueParams q = lcfs(0.5, 0.5);
  const AgeFunction square = AgeFunction::power_of(1.0, 2);
  CHECK(coud_mean_closed(q, square) ==
        doctest::Approx(numeric_mean(q, square, CostMetric::Coud)).epsilon(1e-9));
  CHECK(pcoud_mean_closed(q, square) ==
        doctest::Approx(numeric_mean(q, square, CostMetric::Pcoud)).epsilon(1e-9));
  // and continuity against a nearby regular point
  const QueueParams near = lcfs(0.5, 0.5001);
  CHECK(coud_mean_closed(near, square) ==
        doctest::Approx(coud_mean_closed(q, square)).epsilon(1e-2));
}

TEST_CASE("exponential cost against a slow tail is rejected as divergent") {
  // decay 0.9, alpha 0.2: 0.9 e^0.2 > 1
  const QueueParams q = bufferless(0.5, 0.2);
  const DiscretePmf pmf = aoi_pmf_truncated(q, 1e-12);
  CHECK_THROWS_AS(coud_mean_numeric(pmf, AgeFunction::exponential(0.2)), Error);
  try {
    coud_mean_numeric(pmf, AgeFunction::exponential(0.2));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Divergence);
  }
  // A convergent combination reports a finite tail bound.
  TailReport report;
  const QueueParams ok = fcfs(0.5, 0.9);
  const double v = coud_mean_numeric(aoi_pmf_truncated(ok, 1e-12),
                                     AgeFunction::exponential(0.1), &report);
  CHECK(v > 0.0);
  CHECK(report.bound < 1e-9);
}

TEST_CASE("closed means reject non-polynomial costs") {
  CHECK_THROWS_AS(coud_mean_closed(fcfs(0.5, 0.9), AgeFunction::exponential(0.1)), Error);
  try {
    coud_mean_closed(fcfs(0.5, 0.9), AgeFunction::logarithmic(1.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}

TEST_CASE("series approximation of the exponential cost") {
  const SeriesApproximation approx = approximate(AgeFunction::exponential(0.1), 15, 1e-3);
  REQUIRE(approx.gap_trajectory.size() >= 5);
  // Five summed terms leave a gap of 0.0200 at probe age 15.
  CHECK(approx.gap_trajectory[4] == doctest::Approx(0.0200).epsilon(0.025));
  CHECK(std::abs(approx.gap_trajectory[4] - 0.0200) < 5e-4);
  for (size_t i = 1; i < approx.gap_trajectory.size(); ++i)
    CHECK(approx.gap_trajectory[i] < approx.gap_trajectory[i - 1]);
  CHECK(approx.gap < 1e-3);
  CHECK(approx.k == static_cast<int>(approx.gap_trajectory.size()));

  // zero probe age: exact at the first term
  const SeriesApproximation zero = approximate(AgeFunction::exponential(0.5), 0, 1e-9);
  CHECK(zero.k == 1);
  CHECK(zero.gap == doctest::Approx(0.0));
}

TEST_CASE("series approximation of the logarithmic cost") {
  const SeriesApproximation approx = approximate(AgeFunction::logarithmic(1.0), 1, 1e-4);
  REQUIRE(approx.gap_trajectory.size() >= 3);
  // Three terms: 2 (1/3 + 1/81 + 1/1215) vs log 2.
  const double expected_gap =
      std::log(2.0) - 2.0 * (1.0 / 3.0 + 1.0 / 81.0 + 1.0 / 1215.0);
  CHECK(approx.gap_trajectory[2] == doctest::Approx(expected_gap).epsilon(1e-9));
  CHECK(approx.gap_trajectory[2] < 1.6e-4);
}

TEST_CASE("series-route mean approaches the exact exponential mean") {
  const QueueParams q = fcfs(0.5, 0.9);
  const AgeFunction f = AgeFunction::exponential(0.1);
  const double exact = coud_mean_numeric(aoi_pmf_truncated(q, 1e-16), f);

  const SeriesApproximation six = approximate(f, 15, 2e-3);  // reaches k = 6
  REQUIRE(six.k >= 6);
  const double by_series = coud_mean_series(q, six);
  CHECK(std::abs(by_series - exact) / exact < 0.01);

  // A single linear term reduces to alpha times the mean age.
  SeriesApproximation one = six;
  one.terms.resize(1);
  CHECK(coud_mean_series(q, one) ==
        doctest::Approx(0.1 * coud_mean_closed(q, AgeFunction::linear(1.0))).epsilon(1e-10));

  // The truncation error shrinks monotonically in the number of terms.
  double prev = 1e300;
  for (int k = 1; k <= 8; ++k) {
    SeriesApproximation partial = six;
    while (static_cast<int>(partial.terms.size()) < k) {
      const int next = static_cast<int>(partial.terms.size()) + 1;
      double coeff = 1.0;
      for (int j = 1; j <= next; ++j) coeff *= f.alpha / j;
      partial.terms.emplace_back(next, coeff);
    }
    partial.terms.resize(static_cast<size_t>(k));
    const double err = std::abs(coud_mean_series(q, partial) - exact);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("logarithmic costs go through the numeric path") {
  const QueueParams q = fcfs(0.5, 0.9);
  const AgeFunction f = AgeFunction::logarithmic(1.0);
  const SeriesApproximation approx = approximate(f, 15, 1e-6);
  const double via_series = coud_mean_series(q, approx);
  const double exact = coud_mean_numeric(aoi_pmf_truncated(q, 1e-14), f);
  CHECK(via_series == doctest::Approx(exact).epsilon(1e-9));
}
