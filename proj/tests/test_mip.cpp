#include <cmath>
#include <optional>
#include <random>

#include "adjrobust/errors.hpp"
#include "adjrobust/mip.hpp"
#include "doctest.h"
#include "random_programs.hpp"

using namespace adjrobust;
using lp::Relation;
using testgen::exhaustive;
using testgen::random_program;

namespace {

mip::MixedBinaryProgram knapsack(const Vector& value, const Vector& weight, double cap) {
  mip::MixedBinaryProgram p;
  p.lp.sense = lp::Sense::Maximize;
  p.lp.add_variables(value.size());
  p.lp.objective = value;
  p.lp.add_row(weight, Relation::LessEqual, cap);
  for (std::size_t j = 0; j < value.size(); ++j) p.make_binary(j);
  return p;
}

}  // namespace

TEST_CASE("two binaries sharing a unit budget") {
  const auto p = knapsack({1, 1}, {1, 1}, 1);
  const auto s = mip::solve(p);
  CHECK(s.status == mip::Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("small knapsack: 8 at (1,0,1)") {
  const auto s = mip::solve(knapsack({5, 4, 3}, {2, 3, 1}, 3));
  REQUIRE(s.status == mip::Status::Optimal);
  CHECK(s.objective == doctest::Approx(8.0));
  CHECK(s.incumbent == Vector{1.0, 0.0, 1.0});
  CHECK(s.gap <= 1e-6);
}

TEST_CASE("an integral root relaxation needs no branching") {
  // Totally unimodular: assignment constraints.
  mip::MixedBinaryProgram p;
  p.lp.sense = lp::Sense::Maximize;
  p.lp.add_variables(4);
  p.lp.objective = {3, 1, 2, 5};
  p.lp.add_row({1, 1, 0, 0}, Relation::LessEqual, 1);
  p.lp.add_row({0, 0, 1, 1}, Relation::LessEqual, 1);
  p.lp.add_row({1, 0, 1, 0}, Relation::LessEqual, 1);
  p.lp.add_row({0, 1, 0, 1}, Relation::LessEqual, 1);
  for (std::size_t j = 0; j < 4; ++j) p.make_binary(j);
  const auto s = mip::solve(p);
  CHECK(s.objective == doctest::Approx(8.0));
  CHECK(s.nodes == 1);
}

TEST_CASE("infeasible and unbounded relaxations") {
  auto p = knapsack({1, 1}, {1, 1}, 1);
  p.lp.add_row({1, 1}, Relation::GreaterEqual, 1.5);
  CHECK(mip::solve(p).status == mip::Status::Infeasible);

  mip::MixedBinaryProgram q;
  q.lp.sense = lp::Sense::Maximize;
  q.lp.add_variables(2);
  q.lp.objective = {1, 1};
  q.lp.add_row({1, 0}, Relation::LessEqual, 1);
  q.make_binary(0);
  CHECK_THROWS_AS(mip::solve(q), SolverError);
}

TEST_CASE("invalid programs are rejected") {
  auto p = knapsack({1, 1}, {1, 1}, 1);
  p.lp.bounds[0].upper = 2.0;
  CHECK_THROWS_AS(mip::solve(p), InvariantViolation);
  auto q = knapsack({1, 1}, {1, 1}, 1);
  q.binaries.push_back(7);
  CHECK_THROWS_AS(mip::solve(q), InvariantViolation);
}

TEST_CASE("node limit reports the incumbent and bound honestly") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  Vector v(16), w(16);
  for (std::size_t j = 0; j < 16; ++j) {
    v[j] = u(gen);
    w[j] = u(gen);
  }
  auto p = knapsack(v, w, 9.3);
  mip::Options opt;
  opt.node_limit = 5;
  const auto s = mip::solve(p, opt);
  CHECK(s.status == mip::Status::NodeLimit);
  CHECK(s.nodes == 5);
  const auto full = mip::solve(p);
  REQUIRE(full.status == mip::Status::Optimal);
  CHECK(s.bound >= full.objective - 1e-9);
  if (s.has_incumbent) CHECK(s.objective <= full.objective + 1e-9);
}

TEST_CASE("branch-and-bound matches exhaustive enumeration") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t nb = 3 + trial % 10;
    const std::size_t nc = trial % 3;
    const auto p = random_program(gen, nb, nc);
    const auto expected = exhaustive(p);
    mip::Options opt;
    opt.record_bounds = true;
    const auto s = mip::solve(p, opt);
    if (!expected) {
      CHECK(s.status == mip::Status::Infeasible);
      continue;
    }
    REQUIRE(s.status == mip::Status::Optimal);
    CHECK(s.objective == doctest::Approx(*expected).epsilon(1e-6));
    for (std::size_t j : p.binaries) CHECK((s.incumbent[j] == 0.0 || s.incumbent[j] == 1.0));

    // Bound never worsens across node expansions.
    const double sign = p.lp.sense == lp::Sense::Maximize ? 1.0 : -1.0;
    for (std::size_t k = 1; k < s.bound_history.size(); ++k)
      CHECK(sign * s.bound_history[k] <= sign * s.bound_history[k - 1] + 1e-12);
  }
}
