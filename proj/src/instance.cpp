#include "adjrobust/instance.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "adjrobust/errors.hpp"
#include "adjrobust/rng.hpp"

namespace adjrobust {

namespace {

bool all_finite_nonnegative(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x) || x < 0.0) return false;
  return true;
}

}  // namespace

void Instance::validate() const {
  if (m == 0) throw InvariantViolation("m positive");
  if (n == 0) throw InvariantViolation("n positive");
  if (c.size() != n) throw InvariantViolation("c has length n");
  if (A.rows() != m || A.cols() != n) throw InvariantViolation("A is m x n");
  if (B.rows() != m || B.cols() != n) throw InvariantViolation("B is m x n");
  if (!all_finite_nonnegative(c)) throw InvariantViolation("c nonnegative");
  if (!all_finite_nonnegative(A.data())) throw InvariantViolation("A nonnegative");
  if (!all_finite_nonnegative(B.data())) throw InvariantViolation("B nonnegative");
  if (!std::isfinite(d_bar) || d_bar <= 0.0) throw InvariantViolation("d_bar positive");
  if (uncertainty.dim() != m) throw InvariantViolation("uncertainty set lives in R^m");
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::Uniform01:
      return "uniform";
    case Distribution::Bernoulli:
      return "bernoulli";
    case Distribution::FoldedNormal:
      return "folded-normal";
    case Distribution::WorstCaseRandom:
      return "worst-case-random";
    case Distribution::WorstCaseDeterministic:
      return "worst-case";
  }
  return "?";
}

Distribution parse_distribution(std::string_view name) {
  for (Distribution d : {Distribution::Uniform01, Distribution::Bernoulli, Distribution::FoldedNormal,
                         Distribution::WorstCaseRandom, Distribution::WorstCaseDeterministic})
    if (to_string(d) == name) return d;
  throw ParseError("unknown distribution \"" + std::string(name) + "\"");
}

RandomSpec RandomSpec::uniform() { return {Distribution::Uniform01, 0.5, 1.0, 0.5}; }

RandomSpec RandomSpec::bernoulli(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvariantViolation("Bernoulli p in (0,1)");
  return {Distribution::Bernoulli, p, 1.0, p};
}

RandomSpec RandomSpec::folded_normal() {
  return {Distribution::FoldedNormal, 0.5, std::numeric_limits<double>::infinity(),
          std::sqrt(2.0 / std::numbers::pi)};
}

Instance gen_iid(std::size_t m, std::size_t n, const RandomSpec& spec, std::uint64_t seed) {
  if (m == 0 || n == 0) throw InvariantViolation("m and n positive");
  Instance inst;
  inst.m = m;
  inst.n = n;
  inst.d_bar = 1.0;
  inst.c.assign(n, 0.0);
  inst.A = Matrix(m, n);
  inst.B = Matrix(m, n);
  inst.uncertainty = budget_set(m);
  inst.seed = seed;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t t = i * n + j;
      double v = 0.0;
      switch (spec.kind) {
        case Distribution::Uniform01:
          v = rng::uniform(seed, t);
          break;
        case Distribution::Bernoulli:
          if (!(spec.p > 0.0 && spec.p < 1.0)) throw InvariantViolation("Bernoulli p in (0,1)");
          v = rng::bernoulli(seed, t, spec.p) ? 1.0 : 0.0;
          break;
        case Distribution::FoldedNormal:
          v = rng::folded_normal(seed, t);
          break;
        default:
          throw InvariantViolation("gen_iid takes an i.i.d. distribution");
      }
      inst.B(i, j) = v;
    }
  }
  return inst;
}

Instance gen_worst_case(std::size_t m, bool randomized, std::uint64_t seed) {
  if (m == 0) throw InvariantViolation("m >= 1");
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(m));
  Instance inst;
  inst.m = m;
  inst.n = m;
  inst.d_bar = 1.0;
  inst.c.assign(m, 0.0);
  inst.A = Matrix(m, m);
  inst.B = Matrix(m, m);
  if (randomized) inst.seed = seed;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      inst.B(i, j) = i == j ? 1.0 : (randomized ? rng::uniform(seed, i * m + j) : 1.0) * inv_sqrt;

  std::vector<Vector> verts;
  verts.emplace_back(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    Vector e(m, 0.0);
    e[i] = 1.0;
    verts.push_back(std::move(e));
  }
  if (m > 1) {
    for (std::size_t i = 0; i < m; ++i) {
      Vector nu(m, inv_sqrt);
      nu[i] = 0.0;
      verts.push_back(std::move(nu));
    }
  }
  inst.uncertainty = UncertaintySet::vrep(std::move(verts));
  return inst;
}

}  // namespace adjrobust
