#pragma once

// Sandwich factors and closed-form ratio bounds.
//
// For W = {w >= 0 : B^T w <= d_bar e} with entries of B in [0, b], the
// simplex S = {w >= 0 : sum w <= d_bar / b} lies inside W, and W lies inside
// kappa S with kappa = (b / d_bar) max_{w in W} sum w.  Then
// z_AR <= z_Aff <= kappa z_AR.  All logarithms are natural.

#include <cstddef>
#include <optional>

#include "adjrobust/matrix.hpp"

namespace adjrobust {

struct SandwichReport {
  double kappa_emp = 1.0;
  double inner_radius = 0.0;  // d_bar / b
  bool contains_S = false;
  double simplex_sum_max = 0.0;
  // theorem1_bound(b, mu, m, n) when mu was given and the regime holds.
  std::optional<double> predicted_bound;
  // b was taken from the data rather than from the distribution's support.
  bool b_empirical = false;
  double b = 0.0;
};

// Throws UnboundedSetError when a row of B is zero.
SandwichReport kappa_sandwich(const Matrix& B, double d_bar, double b, std::optional<double> mu = std::nullopt);
// b = largest entry of B.
SandwichReport kappa_sandwich_empirical(const Matrix& B, double d_bar);

struct BoundReport {
  double epsilon = 0.0;  // (b / mu) sqrt(ln m / n)
  double tau = 0.0;      // b sqrt(ln m / n)
  double ratio_bound = 0.0;
  bool regime_valid = false;  // epsilon < 1
};

// Bounded i.i.d. entries in [0, b] with mean mu: z_Aff <= b / (mu (1 - eps)) z_AR
// with high probability.
BoundReport theorem1_bound(double b, double mu, std::size_t m, std::size_t n);

// Folded normal entries: sqrt(6 ln(mn)) / (sqrt(2/pi) - 2 sqrt(ln m / n)).
// Throws RegimeError when the denominator is not positive.
double theorem2_bound(std::size_t m, std::size_t n);

// (m - 1) / (6 sqrt m): lower bound on z_Aff for gen_worst_case(m, false),
// whose z_AR is at most 1.
double worstcase_lower_bound(std::size_t m);

}  // namespace adjrobust
