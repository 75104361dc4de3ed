#pragma once

// Branch-and-bound for linear programs with binary variables.
//
// Node selection: depth-first until the first incumbent is found (the child
// on the side the relaxation leans towards goes first), best-bound after
// that, ties to the older node.  Branching variable: the most fractional
// binary, ties to the lowest index.  Every node relaxation is a fresh
// lp::solve with the branching decisions applied as bounds.

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "adjrobust/lp.hpp"

namespace adjrobust::mip {

struct MixedBinaryProgram {
  lp::LinearProgram lp;
  std::vector<std::size_t> binaries;

  // Marks j binary and sets its bounds to [0, 1].
  void make_binary(std::size_t j);
  // Throws InvariantViolation.
  void validate() const;
};

enum class Status { Optimal, Infeasible, NodeLimit, TimeLimit };

std::string_view to_string(Status s);

struct Options {
  double mip_tol = 1e-6;
  std::size_t node_limit = 1'000'000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  // Distance from {0, 1} under which a relaxation value counts as integral.
  double integrality_tol = 1e-6;
  bool record_bounds = false;
  // Optional, one entry per binary (in MixedBinaryProgram::binaries order).
  // Branching picks the fractional binary with the highest priority, and the
  // most fractional among equals.
  std::vector<int> priority;
  lp::Options lp;
};

struct Solution {
  Status status = Status::Infeasible;
  bool has_incumbent = false;
  // Binary coordinates are exactly 0 or 1; the continuous part is re-solved
  // with the binaries fixed.
  Vector incumbent;
  double objective = 0.0;
  // Best bound on the optimum over the unexplored tree, in the program's own
  // sense.
  double bound = 0.0;
  double gap = 0.0;  // |objective - bound| / (1 + |objective|)
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  // Global bound after each node, when Options::record_bounds is set.
  std::vector<double> bound_history;
};

// Throws SolverError when a relaxation is unbounded or the LP solver fails.
Solution solve(const MixedBinaryProgram& prob, const Options& options = {});

}  // namespace adjrobust::mip
