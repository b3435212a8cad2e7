#include "aoiq/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aoiq {

namespace {

constexpr double kLcfsEqualRateTol = 1e-9;

// (c0 + c1 * x) * base^(x + shift), with the power taken in log space for
// large x so the polynomial factor is not lost to premature underflow.
double linear_times_pow(double c0, double c1, int x, double base, int shift) {
  const double coeff = c0 + c1 * static_cast<double>(x);
  if (coeff == 0.0) return 0.0;
  const double e = static_cast<double>(x + shift);
  if (base <= 0.0) {
    // base == 0 only at boundary parameters; 0^0 == 1 by convention here.
    if (base == 0.0) return e == 0.0 ? coeff : 0.0;
    raise(ErrorCode::InvalidInput, "linear_times_pow: negative base");
  }
  if (x <= 50) return coeff * std::pow(base, e);
  const double logmag = std::log(std::abs(coeff)) + e * std::log(base);
  const double sign = coeff < 0.0 ? -1.0 : 1.0;
  return sign * std::exp(logmag);
}

double ipow(double base, int e) {
  if (e < 0) return 1.0 / ipow(base, -e);
  if (base == 0.0) return e == 0 ? 1.0 : 0.0;
  return std::pow(base, static_cast<double>(e));
}

// Rounding noise below the mass tolerance reads as zero (including negative
// zero); anything larger is a genuine defect and is left visible.
double clamp_mass(double v) {
  if (v == 0.0) return 0.0;
  return v < 0.0 && v > -1e-9 ? 0.0 : v;
}

double clamp_cdf(double v) {
  if (v == 0.0) return 0.0;
  if (v < 0.0 && v > -1e-9) return 0.0;
  if (v > 1.0 && v < 1.0 + 1e-9) return 1.0;
  return v;
}

}  // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::FcfsGeoGeo1: return "fcfs";
    case Model::LcfsPreemptiveGeoGeo1: return "lcfs-p";
    case Model::BufferlessDrop: return "bufferless";
  }
  return "?";
}

void QueueParams::validate() const {
  if (model == Model::BufferlessDrop) {
    // lambda == 1 is meaningful here (a fresh update every slot).
    if (!(lambda > 0.0) || lambda > 1.0)
      raise(ErrorCode::InvalidInput, "bufferless model requires lambda in (0, 1]");
    if (!(p > 0.0) || p > 1.0)
      raise(ErrorCode::InvalidInput, "bufferless model requires p in (0, 1]");
    return;
  }
  if (!(lambda > 0.0) || !(lambda < 1.0))
    raise(ErrorCode::InvalidInput, "queue models require lambda in (0, 1)");
  if (!(mu > 0.0) || !(mu < 1.0))
    raise(ErrorCode::InvalidInput, "queue models require mu in (0, 1)");
  if (model == Model::FcfsGeoGeo1 && lambda >= mu - 1e-12)
    raise(ErrorCode::Stability, "FCFS stability requires lambda < mu");
}

bool QueueParams::lcfs_equal_rates() const {
  return model == Model::LcfsPreemptiveGeoGeo1 && std::abs(lambda - mu) < kLcfsEqualRateTol;
}

double QueueParams::effective_delivery_rate() const {
  switch (model) {
    case Model::FcfsGeoGeo1: return lambda;
    case Model::LcfsPreemptiveGeoGeo1: {
      const double d = lambda + mu - lambda * mu;
      return lambda * mu / d;
    }
    case Model::BufferlessDrop: return lambda * p;
  }
  return 0.0;
}

double QueueParams::dominant_decay() const {
  switch (model) {
    case Model::FcfsGeoGeo1: return std::max({rho(), 1.0 - lambda, 1.0 - mu});
    case Model::LcfsPreemptiveGeoGeo1: return std::max(1.0 - lambda, 1.0 - mu);
    case Model::BufferlessDrop: return 1.0 - lambda * p;
  }
  return 0.0;
}

RationalGF paoi_gf(const QueueParams& params) {
  params.validate();
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      // l m (m - l) z^2 (1 - (1-m) z^2) over
      // (1 - (1-l) z)(1 - (1-m) z)^2 (1 - l - (1-m) z)
      Poly num = poly_scale(Poly{0.0, 0.0, 1.0, 0.0, -(1.0 - m)}, l * m * (m - l));
      Poly den = poly_mul(Poly{1.0, -(1.0 - l)}, Poly{1.0, -(1.0 - m)});
      den = poly_mul(den, Poly{1.0, -(1.0 - m)});
      den = poly_mul(den, Poly{1.0 - l, -(1.0 - m)});
      return RationalGF{num, den};
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      const double d = l * (1.0 - m) + m;
      Poly num{0.0, 0.0, l * m * d};
      Poly den = poly_mul(Poly{1.0, -(1.0 - l)}, Poly{1.0, -(1.0 - m)});
      den = poly_mul(den, Poly{1.0, -(1.0 - l) * (1.0 - m)});
      return RationalGF{num, den};
    }
    case Model::BufferlessDrop: {
      const double lp = l * params.p;
      return RationalGF{{0.0, lp}, {1.0, -(1.0 - lp)}};
    }
  }
  raise(ErrorCode::InvalidInput, "paoi_gf: unknown model");
}

RationalGF aoi_gf(const QueueParams& params) {
  params.validate();
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      // l (m - l) z^2 (1 - (1-m)(2-l) z + (1-m)(1-l-m) z^2) over the PAoI denominator
      Poly num = poly_scale(
          Poly{0.0, 0.0, 1.0, -(1.0 - m) * (2.0 - l), (1.0 - m) * (1.0 - l - m)}, l * (m - l));
      Poly den = poly_mul(Poly{1.0, -(1.0 - l)}, Poly{1.0, -(1.0 - m)});
      den = poly_mul(den, Poly{1.0, -(1.0 - m)});
      den = poly_mul(den, Poly{1.0 - l, -(1.0 - m)});
      return RationalGF{num, den};
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      Poly num{0.0, 0.0, l * m};
      Poly den = poly_mul(Poly{1.0, -(1.0 - l)}, Poly{1.0, -(1.0 - m)});
      return RationalGF{num, den};
    }
    case Model::BufferlessDrop:
      // AoI and PAoI coincide for the bufferless system.
      return paoi_gf(params);
  }
  raise(ErrorCode::InvalidInput, "aoi_gf: unknown model");
}

static double paoi_pmf_impl(const QueueParams& params, int x) {
  params.validate();
  if (x <= 0) return 0.0;
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      const double rho = params.rho();
      const double t1 = (m - l) * ipow(rho, x - 1) / (l * (1.0 - m));
      const double t2 = linear_times_pow(m, -m, x, 1.0 - m, -2);
      const double t3 = l * ipow(1.0 - l, x - 1) / (m - l);
      const double t4 =
          (l * l * (m - 2.0) + 2.0 * l * m - m * m) * ipow(1.0 - m, x - 2) / (l * (m - l));
      return m * (t1 + t2 + t3 + t4);
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      const double d = l * (1.0 - m) + m;
      if (params.lcfs_equal_rates()) {
        // limit form at lambda == mu
        const double q = 1.0 - l;
        return d * (ipow(q, 2 * (x - 1)) - ipow(q, x - 1) +
                    linear_times_pow(-l, l, x, q, -2));
      }
      const double b = (1.0 - l) * (1.0 - m);
      return d *
             ((l - m) * ipow(b, x - 1) - l * ipow(1.0 - l, x - 1) + m * ipow(1.0 - m, x - 1)) /
             (l - m);
    }
    case Model::BufferlessDrop: {
      const double lp = l * params.p;
      return x == 1 ? lp : lp * ipow(1.0 - lp, x - 1);
    }
  }
  raise(ErrorCode::InvalidInput, "paoi_pmf: unknown model");
}

static double aoi_pmf_impl(const QueueParams& params, int x) {
  params.validate();
  if (x <= 0) return 0.0;
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      const double rho = params.rho();
      const double t1 = (m - l) * ipow(rho, x - 1) / (1.0 - m);
      const double t2 = linear_times_pow(l * m, -l * m, x, 1.0 - m, -2);
      const double t3 = l * m * ipow(1.0 - l, x - 1) / (m - l);
      const double t4 = (l * l - l * m * (m + 1.0) + m * m) * ipow(1.0 - m, x - 2) / (l - m);
      return t1 + t2 + t3 + t4;
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      if (params.lcfs_equal_rates()) {
        // limit form: l^2 (x-1) (1-l)^(x-2)
        return linear_times_pow(-l * l, l * l, x, 1.0 - l, -2);
      }
      return l * m * (ipow(1.0 - l, x - 1) - ipow(1.0 - m, x - 1)) / (m - l);
    }
    case Model::BufferlessDrop:
      return paoi_pmf_impl(params, x);
  }
  raise(ErrorCode::InvalidInput, "aoi_pmf: unknown model");
}

static double paoi_cdf_impl(const QueueParams& params, int x) {
  params.validate();
  if (x <= 0) return 0.0;
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      const double rho = params.rho();
      const double t1 = m * (l - 1.0) * ipow(rho, x) / (l * (1.0 - m));
      const double inner1 = linear_times_pow(l * l - l * m * (m + 1.0) + m * m,
                                             l * m * (m - l), x, 1.0 - m, 0);
      const double inner2 = l * (m - 1.0) * (m * (ipow(1.0 - l, x) - 1.0) + l);
      return t1 + (inner1 + inner2) / (l * (1.0 - m) * (m - l));
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      const double b = (1.0 - l) * (1.0 - m);
      const double d = l * (1.0 - m) + m;
      if (params.lcfs_equal_rates()) {
        const double q = 1.0 - l;
        return 1.0 - ipow(q * q, x) - d * linear_times_pow(0.0, 1.0, x, q, -1);
      }
      return 1.0 - ipow(b, x) + d * (ipow(1.0 - l, x) - ipow(1.0 - m, x)) / (l - m);
    }
    case Model::BufferlessDrop: {
      const double lp = l * params.p;
      return 1.0 - ipow(1.0 - lp, x);
    }
  }
  raise(ErrorCode::InvalidInput, "paoi_cdf: unknown model");
}

static double aoi_cdf_impl(const QueueParams& params, int x) {
  params.validate();
  if (x <= 0) return 0.0;
  const double l = params.lambda, m = params.mu;
  switch (params.model) {
    case Model::FcfsGeoGeo1: {
      // Distributed (overflow-free) form of the closed expression.
      const double rho = params.rho();
      const double t_rho = (1.0 - l) * (l - m) * ipow(rho, x);
      const double t_const = (1.0 - m) * (m - l);
      const double t_pm = linear_times_pow(l * l - 2.0 * l * m + m, l * (m - l), x, 1.0 - m, 0);
      const double t_pl = m * (m - 1.0) * ipow(1.0 - l, x);
      return (t_rho + t_const + t_pm + t_pl) / ((1.0 - m) * (m - l));
    }
    case Model::LcfsPreemptiveGeoGeo1: {
      if (params.lcfs_equal_rates()) {
        const double q = 1.0 - l;
        return 1.0 - ipow(q, x) - linear_times_pow(0.0, l, x, q, -1);
      }
      return (l - l * ipow(1.0 - m, x) + m * (ipow(1.0 - l, x) - 1.0)) / (l - m);
    }
    case Model::BufferlessDrop:
      return paoi_cdf_impl(params, x);
  }
  raise(ErrorCode::InvalidInput, "aoi_cdf: unknown model");
}

double paoi_pmf(const QueueParams& params, int x) { return clamp_mass(paoi_pmf_impl(params, x)); }

double aoi_pmf(const QueueParams& params, int x) { return clamp_mass(aoi_pmf_impl(params, x)); }

double paoi_cdf(const QueueParams& params, int x) { return clamp_cdf(paoi_cdf_impl(params, x)); }

double aoi_cdf(const QueueParams& params, int x) { return clamp_cdf(aoi_cdf_impl(params, x)); }

double fcfs_system_time_pmf(const QueueParams& params, int x) {
  params.validate();
  if (params.model != Model::FcfsGeoGeo1)
    raise(ErrorCode::InvalidInput, "fcfs_system_time_pmf: FCFS only");
  if (x <= 0) return 0.0;
  const double s = params.mu * (1.0 - params.rho_bar());
  return s * ipow(1.0 - s, x - 1);
}

double fcfs_system_time_cdf(const QueueParams& params, int x) {
  params.validate();
  if (params.model != Model::FcfsGeoGeo1)
    raise(ErrorCode::InvalidInput, "fcfs_system_time_cdf: FCFS only");
  if (x <= 0) return 0.0;
  const double s = params.mu * (1.0 - params.rho_bar());
  return 1.0 - ipow(1.0 - s, x);
}

RationalGF fcfs_system_time_gf(const QueueParams& params) {
  params.validate();
  if (params.model != Model::FcfsGeoGeo1)
    raise(ErrorCode::InvalidInput, "fcfs_system_time_gf: FCFS only");
  return RationalGF::geometric(params.mu * (1.0 - params.rho_bar()));
}

namespace {

DiscretePmf truncated_from(const QueueParams& params, double (*pmf)(const QueueParams&, int),
                           double tail_tol, int x_cap, double decay) {
  if (!(tail_tol > 0.0)) raise(ErrorCode::InvalidInput, "truncated pmf: tail_tol must be > 0");
  DiscretePmf out;
  out.x_min = 1;
  // Slot count at which the geometric envelope alone is below tail_tol, plus
  // slack for polynomial factors in the repeated-pole terms.
  int n = x_cap;
  if (decay < 1.0 && decay > 0.0)
    n = std::min<int>(x_cap, static_cast<int>(std::log(tail_tol) / std::log(decay)) + 64);
  if (decay == 0.0) n = 4;
  double acc = 0.0;
  for (int x = 1; x <= n; ++x) {
    const double m = std::max(0.0, pmf(params, x));
    out.mass.push_back(m);
    acc += m;
  }
  out.tail_mass = std::max(0.0, 1.0 - acc);
  return out;
}

}  // namespace

DiscretePmf aoi_pmf_truncated(const QueueParams& params, double tail_tol, int x_cap) {
  return truncated_from(params, &aoi_pmf, tail_tol, x_cap, params.dominant_decay());
}

DiscretePmf paoi_pmf_truncated(const QueueParams& params, double tail_tol, int x_cap) {
  return truncated_from(params, &paoi_pmf, tail_tol, x_cap, params.dominant_decay());
}

DiscretePmf fcfs_system_time_pmf_truncated(const QueueParams& params, double tail_tol, int x_cap) {
  const double s = params.mu * (1.0 - params.rho_bar());
  return truncated_from(params, &fcfs_system_time_pmf, tail_tol, x_cap, 1.0 - s);
}

}  // namespace aoiq
