#include "aoiq/coud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aoiq {

AgeFunction AgeFunction::linear(double a) { return {CostKind::Linear, a, 0.0, 1, {}}; }
AgeFunction AgeFunction::power_of(double a, int n) { return {CostKind::Power, a, 0.0, n, {}}; }
AgeFunction AgeFunction::affine_quad(double a, double b) {
  return {CostKind::AffineQuad, a, b, 2, {}};
}
AgeFunction AgeFunction::exponential(double a) { return {CostKind::Exponential, a, 0.0, 1, {}}; }
AgeFunction AgeFunction::logarithmic(double a) { return {CostKind::Logarithmic, a, 0.0, 1, {}}; }
AgeFunction AgeFunction::power_series(std::vector<double> omegas) {
  return {CostKind::Series, 1.0, 0.0, 1, std::move(omegas)};
}

double AgeFunction::operator()(double t) const {
  switch (kind) {
    case CostKind::Linear: return alpha * t;
    case CostKind::Power: return alpha * std::pow(t, power);
    case CostKind::AffineQuad: return alpha * t * t + beta * t;
    case CostKind::Exponential: return std::expm1(alpha * t);
    case CostKind::Logarithmic: return std::log1p(alpha * t);
    case CostKind::Series: {
      double acc = 0.0;
      for (size_t i = series.size(); i-- > 0;) acc = acc * t + series[i];
      return acc * t;
    }
  }
  return 0.0;
}

int AgeFunction::polynomial_degree() const {
  switch (kind) {
    case CostKind::Linear: return 1;
    case CostKind::Power: return power;
    case CostKind::AffineQuad: return 2;
    case CostKind::Series: return static_cast<int>(series.size());
    default: return -1;
  }
}

void AgeFunction::validate() const {
  if (kind == CostKind::Series) {
    if (series.empty()) raise(ErrorCode::InvalidInput, "age function: empty power series");
    double prev = 0.0;
    for (int t = 1; t <= 64; ++t) {
      const double v = (*this)(static_cast<double>(t));
      if (v + 1e-12 < prev)
        raise(ErrorCode::InvalidInput, "age function: series not non-decreasing");
      prev = v;
    }
    return;
  }
  if (!(alpha > 0.0)) raise(ErrorCode::InvalidInput, "age function: alpha must be > 0");
  if (beta < 0.0) raise(ErrorCode::InvalidInput, "age function: beta must be >= 0");
  if (kind == CostKind::Power && power < 1)
    raise(ErrorCode::InvalidInput, "age function: power must be a positive integer");
}

namespace {

// Geometric decay of the stored tail, estimated over the last stored decade.
double estimate_decay(const DiscretePmf& pmf) {
  const size_t n = pmf.mass.size();
  if (n < 8) return 0.0;
  size_t hi = n - 1;
  while (hi > 0 && pmf.mass[hi] <= 0.0) --hi;
  const size_t lo = hi - std::min<size_t>(hi, std::max<size_t>(4, hi / 10));
  if (hi <= lo || pmf.mass[lo] <= 0.0 || pmf.mass[hi] <= 0.0) return 0.0;
  return std::pow(pmf.mass[hi] / pmf.mass[lo], 1.0 / static_cast<double>(hi - lo));
}

double mean_numeric(const DiscretePmf& pmf, const AgeFunction& f, TailReport* report) {
  f.validate();
  pmf.validate(1e-6);
  const double decay = estimate_decay(pmf);
  // A positive last mass means the stored range ended by truncation, not
  // because the distribution did; the growth test applies to that open tail.
  const bool open_tail = !pmf.mass.empty() && pmf.mass.back() > 0.0;
  if (f.kind == CostKind::Exponential && open_tail && decay > 0.0 &&
      decay * std::exp(f.alpha) >= 1.0)
    raise(ErrorCode::Divergence,
          "cost mean: exponential cost with alpha = " + std::to_string(f.alpha) +
              " diverges against a tail decaying at rate " + std::to_string(decay));
  double acc = 0.0;
  for (size_t i = 0; i < pmf.mass.size(); ++i) {
    const double m = std::max(pmf.mass[i], 0.0);
    if (m != 0.0) acc += f(static_cast<double>(pmf.x_min + static_cast<int>(i))) * m;
  }
  if (report != nullptr) {
    report->decay = decay;
    report->bound = 0.0;
    if (pmf.tail_mass > 0.0) {
      // Model the unstored tail as geometric at the estimated rate.
      const double r = std::min(std::max(decay, 0.0), 1.0 - 1e-12);
      double w = pmf.tail_mass * (1.0 - r);
      for (int j = 1; j <= 100000 && w > 0.0; ++j) {
        const double term = f(static_cast<double>(pmf.x_max() + j)) * w;
        report->bound += term;
        if (term < 1e-18 && j > 8) break;
        w *= r;
      }
    }
  }
  return acc;
}

double closed_linear(const QueueParams& params, CostMetric metric, double alpha) {
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1:
      if (metric == CostMetric::Coud)
        return alpha * (1.0 / l + (1.0 - l) / (m - l) - l / (m * m) + l / m);
      return alpha * (l * l - m) / (l * (l - m));
    case Model::LcfsPreemptiveGeoGeo1: {
      if (metric == CostMetric::Coud) return alpha * (1.0 / l + 1.0 / m);
      const double d = l * (1.0 - m) + m;
      return alpha * (l * l * (1.0 - m) * (1.0 - m) + l * m * (3.0 - 2.0 * m) + m * m) /
             (l * m * d);
    }
    case Model::BufferlessDrop:
      return alpha / (l * params.p);
  }
  raise(ErrorCode::InvalidInput, "closed cost mean: unknown model");
}

double closed_quadratic(const QueueParams& params, CostMetric metric, double alpha) {
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      if (metric == CostMetric::Coud) {
        const double num = std::pow(l, 5) * (m - 1.0) * (m + 4.0) +
                           std::pow(l, 4) * m * ((m - 8.0) * m + 8.0) +
                           std::pow(l, 3) * (m - 2.0) * m * m + l * l * std::pow(m, 4) -
                           l * std::pow(m, 4) * (m + 2.0) + 2.0 * std::pow(m, 5);
        return alpha * num / (l * l * std::pow(m, 3) * (l - m) * (l - m));
      }
      const double num = std::pow(l, 4) * (m * (m + 2.0) - 2.0) +
                         std::pow(l, 3) * m * ((m - 6.0) * m + 4.0) + l * l * std::pow(m, 3) -
                         l * std::pow(m, 3) * (m + 2.0) + 2.0 * std::pow(m, 4);
      return alpha * num / (l * l * m * m * (m - l) * (m - l));
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      if (metric == CostMetric::Coud)
        return alpha * (l * l * (2.0 - m) + l * (2.0 - m) * m + 2.0 * m * m) / (l * l * m * m);
      const double d = l + m - l * m;
      return alpha * (2.0 / (l * l) + (4.0 / m - 3.0) / l - 1.0 / d + 2.0 / (d * d) +
                      (2.0 - 3.0 * m) / (m * m) + 1.0);
    }
    case Model::BufferlessDrop: {
      const double lp = l * params.p;
      return alpha * (2.0 - lp) / (lp * lp);
    }
  }
  raise(ErrorCode::InvalidInput, "closed cost mean: unknown model");
}

double closed_power(const QueueParams& params, CostMetric metric, double alpha, int n) {
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      const double rho = params.rho();
      if (metric == CostMetric::Coud) {
        const double inner =
            (l * l + (1.0 - 2.0 * l) * m * m + (l - 1.0) * l * m) * lerch_phi(1.0 - m, -n, 0.0) +
            (l - 1.0) * (m - l) * (m - l) * lerch_phi(rho, -n, 0.0) +
            l * m * (m - l) * lerch_phi(1.0 - m, -n - 1, 0.0);
        return alpha / (l - m) *
               (l * m * lerch_phi(1.0 - l, -n, 0.0) / (l - 1.0) +
                inner / ((1.0 - m) * (1.0 - m)));
      }
      const double inner =
          (2.0 * l * l - l * m * (m + 2.0) + m * m) * polylog(-n, 1.0 - m) +
          (l - 1.0) * (m - l) * (m - l) * polylog(-n, rho) +
          l * m * (m - l) * polylog(-n - 1, 1.0 - m);
      return alpha * m / (l * (l - m)) *
             (l * l * polylog(-n, 1.0 - l) / (l - 1.0) + inner / ((1.0 - m) * (1.0 - m)));
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      const double q = 1.0 - l;
      if (params.lcfs_equal_rates()) {
        // Analytic limits of the closed forms at lambda == mu.
        if (metric == CostMetric::Coud)
          return alpha * l * l * (polylog(-n - 1, q) - polylog(-n, q)) / (q * q);
        const double d = l * (2.0 - l);
        return alpha * d *
               (polylog(-n, q * q) / (q * q) - polylog(-n, q) / q +
                l * (polylog(-n - 1, q) - polylog(-n, q)) / (q * q));
      }
      if (metric == CostMetric::Coud)
        return alpha * l * m *
               ((m - 1.0) * lerch_phi(1.0 - l, -n, 0.0) - (l - 1.0) * lerch_phi(1.0 - m, -n, 0.0)) /
               ((1.0 - l) * (1.0 - m) * (l - m));
      const double b = (1.0 - l) * (1.0 - m);
      return alpha * (l * (m - 1.0) - m) / ((1.0 - l) * (1.0 - m) * (m - l)) *
             (l * (m - 1.0) * polylog(-n, 1.0 - l) + (m - l * m) * polylog(-n, 1.0 - m) +
              (l - m) * polylog(-n, b));
    }
    case Model::BufferlessDrop: {
      const double lp = l * params.p;
      if (1.0 - lp < 1e-12) return alpha;  // point mass at age 1
      if (metric == CostMetric::Coud)
        return alpha * lp * lerch_phi(1.0 - lp, -n, 0.0) / (1.0 - lp);
      return alpha * lp * polylog(-n, 1.0 - lp) / (1.0 - lp);
    }
  }
  raise(ErrorCode::InvalidInput, "closed cost mean: unknown model");
}

double closed_mean(const QueueParams& params, const AgeFunction& f, CostMetric metric) {
  params.validate();
  f.validate();
  switch (f.kind) {
    case CostKind::Linear:
      return closed_linear(params, metric, f.alpha);
    case CostKind::Power:
      return closed_power(params, metric, f.alpha, f.power);
    case CostKind::AffineQuad:
      // Linearity of expectation over the quadratic and linear pieces.
      return closed_quadratic(params, metric, f.alpha) +
             (f.beta > 0.0 ? closed_linear(params, metric, f.beta) : 0.0);
    default:
      raise(ErrorCode::Unsupported,
            "closed cost mean: no closed form for this cost; use the series or numeric route");
  }
}

}  // namespace

double coud_mean_numeric(const DiscretePmf& age_pmf, const AgeFunction& f, TailReport* report) {
  return mean_numeric(age_pmf, f, report);
}

double pcoud_mean_numeric(const DiscretePmf& paoi_pmf, const AgeFunction& f, TailReport* report) {
  return mean_numeric(paoi_pmf, f, report);
}

double coud_mean_closed(const QueueParams& params, const AgeFunction& f) {
  return closed_mean(params, f, CostMetric::Coud);
}

double pcoud_mean_closed(const QueueParams& params, const AgeFunction& f) {
  return closed_mean(params, f, CostMetric::Pcoud);
}

SeriesApproximation approximate(const AgeFunction& f, int probe_t, double epsilon,
                                const SeriesAccuracy& accuracy) {
  f.validate();
  accuracy.validate();
  if (f.kind != CostKind::Exponential && f.kind != CostKind::Logarithmic)
    raise(ErrorCode::Unsupported, "approximate: defined for exponential and logarithmic costs");
  if (probe_t < 0) raise(ErrorCode::InvalidInput, "approximate: probe_t must be >= 0");
  if (!(epsilon > 0.0)) raise(ErrorCode::InvalidInput, "approximate: epsilon must be > 0");

  SeriesApproximation out;
  out.probe_t = probe_t;
  out.epsilon = epsilon;
  out.target = f;
  const double t = static_cast<double>(probe_t);
  const double exact = f(t);

  if (f.kind == CostKind::Exponential) {
    out.basis = SeriesApproximation::Basis::PowerOfT;
    const double at = f.alpha * t;
    double term_at_probe = 1.0;  // (alpha t)^k / k!
    double coeff = 1.0;          // alpha^k / k!
    double approx = 0.0;
    for (int k = 1; k <= 200; ++k) {
      term_at_probe *= at / static_cast<double>(k);
      coeff *= f.alpha / static_cast<double>(k);
      approx += term_at_probe;
      out.terms.emplace_back(k, coeff);
      out.k = k;
      out.gap = std::abs(exact - approx);
      out.gap_trajectory.push_back(out.gap);
      if (out.gap < epsilon) return out;
    }
  } else {
    out.basis = SeriesApproximation::Basis::LogRational;
    const double u = f.alpha * t / (f.alpha * t + 2.0);
    double approx = 0.0;
    for (int k = 1; k <= 200000; ++k) {
      const int p = 2 * k - 1;
      const double c = 2.0 / static_cast<double>(p);
      approx += c * std::pow(u, p);
      out.terms.emplace_back(p, c);
      out.k = k;
      out.gap = std::abs(exact - approx);
      out.gap_trajectory.push_back(out.gap);
      if (out.gap < epsilon) return out;
    }
  }
  raise(ErrorCode::NonConvergence, "approximate: gap did not reach epsilon within the term cap");
}

double coud_mean_series(const QueueParams& params, const SeriesApproximation& approx,
                        CostMetric metric) {
  params.validate();
  if (approx.basis == SeriesApproximation::Basis::PowerOfT) {
    double acc = 0.0;
    for (const auto& [n, coeff] : approx.terms)
      acc += closed_power(params, metric, coeff, n);
    return acc;
  }
  // The logarithmic expansion is not polynomial in t; sum the exact cost
  // against the analytic pmf instead.
  const DiscretePmf pmf = metric == CostMetric::Coud ? aoi_pmf_truncated(params, 1e-14)
                                                     : paoi_pmf_truncated(params, 1e-14);
  return mean_numeric(pmf, approx.target, nullptr);
}

}  // namespace aoiq
