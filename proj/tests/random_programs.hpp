#pragma once

// Random LP and mixed-binary programs with brute-force reference answers,
// shared by the unit tests and the acceptance checks.

#include <cstdint>
#include <optional>
#include <random>

#include "adjrobust/mip.hpp"
#include "oracles.hpp"

namespace testgen {

using namespace adjrobust;
using lp::Relation;

// Feasible LP with an interior point and a bounding box, in <= form for the
// brute-force oracle.
struct RandomLp {
  lp::LinearProgram lp;
  oracle::Mat G;
  oracle::Vec g;
};

inline RandomLp random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), pos(0.5, 4.0), slack(0.1, 2.0);
  const std::size_t n = dim(rng), m = dim(rng);
  RandomLp out;
  out.lp.sense = rng() % 2 ? lp::Sense::Minimize : lp::Sense::Maximize;
  out.lp.add_variables(n);
  for (std::size_t j = 0; j < n; ++j) out.lp.objective[j] = coef(rng);
  oracle::Vec x0(n);
  for (double& v : x0) v = pos(rng) / 2.0;
  for (std::size_t i = 0; i < m; ++i) {
    Vector a(n);
    for (double& v : a) v = coef(rng);
    const double ax = oracle::dot(a, x0);
    if (rng() % 2) {
      const double b = ax + slack(rng);
      out.lp.add_row(a, Relation::LessEqual, b);
      out.G.push_back(a);
      out.g.push_back(b);
    } else {
      const double b = ax - slack(rng);
      out.lp.add_row(a, Relation::GreaterEqual, b);
      oracle::Vec neg(n);
      for (std::size_t j = 0; j < n; ++j) neg[j] = -a[j];
      out.G.push_back(neg);
      out.g.push_back(-b);
    }
  }
  // Box 0 <= x <= 10, half as variable bounds and half as explicit rows.
  for (std::size_t j = 0; j < n; ++j) {
    if (j % 2) {
      out.lp.bounds[j].upper = 10.0;
    } else {
      Vector a(n, 0.0);
      a[j] = 1.0;
      out.lp.add_row(a, Relation::LessEqual, 10.0);
    }
    oracle::Vec up(n, 0.0), lo(n, 0.0);
    up[j] = 1.0;
    lo[j] = -1.0;
    out.G.push_back(up);
    out.g.push_back(10.0);
    out.G.push_back(lo);
    out.g.push_back(0.0);
  }
  return out;
}

// Best objective over all binary assignments, continuous part by LP.
inline std::optional<double> exhaustive(const mip::MixedBinaryProgram& p) {
  const std::size_t nb = p.binaries.size();
  std::optional<double> best;
  const double sign = p.lp.sense == lp::Sense::Maximize ? 1.0 : -1.0;
  for (std::uint64_t mask = 0; mask < (1ULL << nb); ++mask) {
    auto bounds = p.lp.bounds;
    for (std::size_t b = 0; b < nb; ++b) {
      const double v = (mask >> b) & 1;
      bounds[p.binaries[b]] = {v, v};
    }
    const lp::Solution s = lp::solve(p.lp, bounds);
    if (!s.optimal()) continue;
    if (!best || sign * s.objective > sign * *best) best = s.objective;
  }
  return best;
}

inline mip::MixedBinaryProgram random_program(std::mt19937_64& gen, std::size_t nb, std::size_t nc) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  mip::MixedBinaryProgram p;
  p.lp.sense = u(gen) < 0.5 ? lp::Sense::Maximize : lp::Sense::Minimize;
  p.lp.add_variables(nb + nc, 0.0, {0.0, 3.0});
  for (double& c : p.lp.objective) c = u(gen) * 4.0 - 1.0;
  const std::size_t rows = 2 + gen() % 4;
  for (std::size_t r = 0; r < rows; ++r) {
    Vector a(nb + nc);
    double sum = 0.0;
    for (double& x : a) {
      x = u(gen) < 0.3 ? 0.0 : u(gen) * 2.0 - 0.5;
      sum += std::max(x, 0.0);
    }
    if (u(gen) < 0.7)
      p.lp.add_row(a, Relation::LessEqual, sum * (0.2 + 0.5 * u(gen)));
    else
      p.lp.add_row(a, Relation::GreaterEqual, sum * 0.2 * u(gen));
  }
  for (std::size_t j = 0; j < nb; ++j) p.make_binary(j);
  return p;
}

}  // namespace testgen
