#include "adjrobust/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "adjrobust/errors.hpp"
#include "adjrobust/uncertainty.hpp"

namespace adjrobust {

SandwichReport kappa_sandwich(const Matrix& B, double d_bar, double b, std::optional<double> mu) {
  if (!(b > 0.0) || !(d_bar > 0.0)) throw InvariantViolation("b and d_bar positive");
  for (std::size_t i = 0; i < B.rows(); ++i) {
    const auto row = B.row(i);
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; }))
      throw UnboundedSetError("W is unbounded: row " + std::to_string(i) + " of B is zero");
  }
  SandwichReport rep;
  rep.b = b;
  rep.inner_radius = d_bar / b;
  // (d_bar / b) e_i is in W iff row i of B is at most b.
  const auto data = B.data();
  rep.contains_S = std::all_of(data.begin(), data.end(), [&](double v) { return v <= b; });
  rep.simplex_sum_max = max_linear(dualized_set(B, d_bar), Vector(B.rows(), 1.0));
  rep.kappa_emp = b / d_bar * rep.simplex_sum_max;
  if (mu) {
    const BoundReport t = theorem1_bound(b, *mu, B.rows(), B.cols());
    if (t.regime_valid) rep.predicted_bound = t.ratio_bound;
  }
  return rep;
}

SandwichReport kappa_sandwich_empirical(const Matrix& B, double d_bar) {
  const auto data = B.data();
  if (data.empty()) throw DimensionError("B is empty");
  SandwichReport rep = kappa_sandwich(B, d_bar, *std::max_element(data.begin(), data.end()));
  rep.b_empirical = true;
  return rep;
}

BoundReport theorem1_bound(double b, double mu, std::size_t m, std::size_t n) {
  if (!(b > 0.0) || !(mu > 0.0)) throw InvariantViolation("b and mu positive");
  if (m < 2 || n < 2) throw InvariantViolation("m, n >= 2");
  BoundReport r;
  const double root = std::sqrt(std::log(static_cast<double>(m)) / static_cast<double>(n));
  r.tau = b * root;
  r.epsilon = b / mu * root;
  r.regime_valid = r.epsilon < 1.0;
  r.ratio_bound = r.regime_valid ? b / (mu * (1.0 - r.epsilon)) : std::numeric_limits<double>::infinity();
  return r;
}

double theorem2_bound(std::size_t m, std::size_t n) {
  if (m < 2 || n < 2) throw InvariantViolation("m, n >= 2");
  const double dm = static_cast<double>(m), dn = static_cast<double>(n);
  const double denom = std::sqrt(2.0 / std::numbers::pi) - 2.0 * std::sqrt(std::log(dm) / dn);
  if (!(denom > 0.0))
    throw RegimeError("folded-normal bound needs sqrt(2/pi) > 2 sqrt(ln m / n); m=" + std::to_string(m) +
                      ", n=" + std::to_string(n));
  return std::sqrt(6.0 * std::log(dm * dn)) / denom;
}

double worstcase_lower_bound(std::size_t m) {
  if (m < 2) throw InvariantViolation("m >= 2");
  const double dm = static_cast<double>(m);
  return (dm - 1.0) / (6.0 * std::sqrt(dm));
}

}  // namespace adjrobust
