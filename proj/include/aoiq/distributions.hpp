#pragma once

#include <vector>

#include "aoiq/error.hpp"

namespace aoiq {

struct DiscreteCdf;

// Probability mass function on consecutive integers starting at x_min, with
// explicit accounting of the mass beyond the stored range. Queue metrics live
// on {1, 2, ...}; system times may start at 0.
struct DiscretePmf {
  int x_min = 1;
  std::vector<double> mass;  // mass[i] = P(x_min + i)
  double tail_mass = 0.0;

  // Mass at x; values outside the stored range are 0 and stored values are
  // clamped at 0 on read (masses above -1e-12 are treated as rounding noise).
  double at(int x) const;

  double total_stored() const;
  bool complete(double tol) const { return tail_mass < tol; }
  int x_max() const { return x_min + static_cast<int>(mass.size()) - 1; }

  double mean() const;  // over the stored support
  DiscreteCdf cdf() const;

  // Checks mass >= -1e-12 everywhere and total + tail == 1 within tol.
  void validate(double tol = 1e-9) const;

  static DiscretePmf point_mass(int x);
  // Geometric on {1, 2, ...} with success probability p, truncated once the
  // remaining tail drops below tail_tol (stored exactly as tail_mass).
  static DiscretePmf geometric(double p, double tail_tol = 1e-12);
};

struct DiscreteCdf {
  int x_min = 1;
  std::vector<double> values;  // values[i] = F(x_min + i), non-decreasing

  // F(x): 0 below x_min, last stored value beyond the range.
  double at(int x) const;
  int x_max() const { return x_min + static_cast<int>(values.size()) - 1; }

  void validate() const;
};

// Half the L1 distance between two pmfs (tails included).
double tv_distance(const DiscretePmf& a, const DiscretePmf& b);

// Distribution of the sum of two independent variables, by direct convolution.
DiscretePmf convolve(const DiscretePmf& a, const DiscretePmf& b);

}  // namespace aoiq
