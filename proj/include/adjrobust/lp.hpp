#pragma once

// Dense linear programming.
//
// solve() runs a two-phase bounded-variable primal simplex over a dense
// tableau.  Pricing is Dantzig (most negative reduced cost) until
// 5 * (variables + rows) iterations have passed, then Bland's rule to rule
// out cycling.  Ratio-test ties go to the smallest variable index, so the
// pivot sequence, and therefore the returned vertex, is deterministic.
//
// Every answer is checked against the original data before it is returned:
// an Optimal solution carries its primal residual, dual residual and duality
// gap; Infeasible carries a Farkas multiplier vector over the rows; Unbounded
// carries an improving ray.  A result that fails its own check is reported as
// NumericalFailure rather than returned as if it were correct.

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "adjrobust/matrix.hpp"

namespace adjrobust::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual, Equal };

struct Row {
  Vector coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = kInf;
};

inline Bounds free_bounds() { return {-kInf, kInf}; }

using Term = std::pair<std::size_t, double>;

struct LinearProgram {
  Sense sense = Sense::Minimize;
  Vector objective;
  std::vector<Row> rows;
  std::vector<Bounds> bounds;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  // Declare all variables before adding rows; rows are stored dense.
  std::size_t add_variable(double cost = 0.0, Bounds b = {});
  // Adds `count` variables and returns the index of the first.
  std::size_t add_variables(std::size_t count, double cost = 0.0, Bounds b = {});
  void add_row(Vector coeffs, Relation rel, double rhs);
  // Duplicate indices are summed.
  void add_sparse_row(const std::vector<Term>& terms, Relation rel, double rhs);

  // Throws InvariantViolation.
  void validate() const;
};

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure, IterationLimit };

std::string_view to_string(Status s);

struct Solution {
  Status status = Status::NumericalFailure;
  Vector primal;
  // One multiplier per row, in the convention objective = rhs^T duals + bound
  // terms.  For a minimization, >= rows carry duals >= 0 and <= rows <= 0;
  // signs flip for a maximization.
  Vector duals;
  double objective = 0.0;
  double dual_objective = 0.0;
  std::size_t iterations = 0;

  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;

  // Infeasible: y with y_i >= 0 on >= rows, y_i <= 0 on <= rows such that
  // max over the variable box of (A^T y)^T x < b^T y.
  Vector farkas;
  // Unbounded: direction d, feasible for the recession cone, improving the
  // objective.
  Vector ray;

  bool optimal() const { return status == Status::Optimal; }
};

struct Options {
  double tol = 1e-8;
  double pivot_tol = 1e-10;
  // 0 picks a limit from the problem size.
  std::size_t max_iterations = 0;
  // Relative tolerance for the post-solve certificate checks.
  double certify_tol = 1e-6;
};

Solution solve(const LinearProgram& lp, const Options& options = {});
// Same program with lp.bounds replaced; lets branch-and-bound nodes share
// one copy of the rows.
Solution solve(const LinearProgram& lp, std::span<const Bounds> bounds, const Options& options = {});

}  // namespace adjrobust::lp
