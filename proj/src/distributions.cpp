#include "aoiq/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aoiq {

namespace {
constexpr double kMassNoise = -1e-12;
}

double DiscretePmf::at(int x) const {
  const int i = x - x_min;
  if (i < 0 || i >= static_cast<int>(mass.size())) return 0.0;
  const double m = mass[static_cast<size_t>(i)];
  return m < 0.0 ? 0.0 : m;
}

double DiscretePmf::total_stored() const {
  double s = 0.0;
  for (double m : mass) s += std::max(m, 0.0);
  return s;
}

double DiscretePmf::mean() const {
  double s = 0.0;
  for (size_t i = 0; i < mass.size(); ++i)
    s += static_cast<double>(x_min + static_cast<int>(i)) * std::max(mass[i], 0.0);
  return s;
}

DiscreteCdf DiscretePmf::cdf() const {
  DiscreteCdf c;
  c.x_min = x_min;
  c.values.resize(mass.size());
  double acc = 0.0;
  for (size_t i = 0; i < mass.size(); ++i) {
    acc += std::max(mass[i], 0.0);
    c.values[i] = std::min(acc, 1.0);
  }
  return c;
}

void DiscretePmf::validate(double tol) const {
  for (size_t i = 0; i < mass.size(); ++i)
    if (mass[i] < kMassNoise)
      raise(ErrorCode::InvalidInput,
            "DiscretePmf: negative mass at x = " + std::to_string(x_min + static_cast<int>(i)));
  const double total = total_stored() + tail_mass;
  if (std::abs(total - 1.0) > tol)
    raise(ErrorCode::InvalidInput,
          "DiscretePmf: total mass " + std::to_string(total) + " differs from 1");
}

DiscretePmf DiscretePmf::point_mass(int x) {
  DiscretePmf p;
  p.x_min = x;
  p.mass = {1.0};
  p.tail_mass = 0.0;
  return p;
}

DiscretePmf DiscretePmf::geometric(double p, double tail_tol) {
  if (!(p > 0.0) || p > 1.0)
    raise(ErrorCode::InvalidInput, "geometric pmf: parameter must lie in (0, 1]");
  if (!(tail_tol > 0.0)) raise(ErrorCode::InvalidInput, "geometric pmf: tail_tol must be > 0");
  DiscretePmf out;
  out.x_min = 1;
  const double q = 1.0 - p;
  double tail = 1.0;  // P(X > stored range)
  double m = p;
  while (tail >= tail_tol && out.mass.size() < 4'000'000) {
    out.mass.push_back(m);
    tail *= q;
    m *= q;
  }
  out.tail_mass = tail;
  return out;
}

double DiscreteCdf::at(int x) const {
  if (values.empty() || x < x_min) return 0.0;
  const int i = x - x_min;
  if (i >= static_cast<int>(values.size())) return values.back();
  return values[static_cast<size_t>(i)];
}

void DiscreteCdf::validate() const {
  double prev = 0.0;
  for (double v : values) {
    if (v + 1e-12 < prev) raise(ErrorCode::InvalidInput, "DiscreteCdf: values must be non-decreasing");
    if (v > 1.0 + 1e-12) raise(ErrorCode::InvalidInput, "DiscreteCdf: values must not exceed 1");
    prev = v;
  }
}

double tv_distance(const DiscretePmf& a, const DiscretePmf& b) {
  const int lo = std::min(a.x_min, b.x_min);
  const int hi = std::max(a.x_max(), b.x_max());
  double l1 = 0.0;
  for (int x = lo; x <= hi; ++x) l1 += std::abs(a.at(x) - b.at(x));
  l1 += std::abs(a.tail_mass - b.tail_mass);
  return 0.5 * l1;
}

DiscretePmf convolve(const DiscretePmf& a, const DiscretePmf& b) {
  DiscretePmf out;
  out.x_min = a.x_min + b.x_min;
  out.mass.assign(a.mass.size() + b.mass.size() - 1, 0.0);
  for (size_t i = 0; i < a.mass.size(); ++i) {
    const double ai = std::max(a.mass[i], 0.0);
    if (ai == 0.0) continue;
    for (size_t j = 0; j < b.mass.size(); ++j) out.mass[i + j] += ai * std::max(b.mass[j], 0.0);
  }
  out.tail_mass = std::max(0.0, 1.0 - out.total_stored());
  return out;
}

}  // namespace aoiq
