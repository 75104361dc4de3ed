#include "adjrobust/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adjrobust/errors.hpp"
#include "adjrobust/lp.hpp"

namespace adjrobust {

namespace {

bool finite_nonnegative(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x) || x < 0.0) return false;
  return true;
}

}  // namespace

UncertaintySet UncertaintySet::hrep(Matrix R, Vector r) {
  if (R.rows() != r.size()) throw InvariantViolation("R has one row per entry of r");
  if (R.cols() == 0) throw InvariantViolation("uncertainty dimension positive");
  if (!finite_nonnegative(R.data())) throw InvariantViolation("R nonnegative");
  if (!finite_nonnegative(r)) throw InvariantViolation("r nonnegative");
  // With R >= 0, t e_i stays feasible for all t exactly when column i of R is
  // zero, so this is the whole boundedness test.
  for (std::size_t i = 0; i < R.cols(); ++i) {
    bool capped = false;
    for (std::size_t k = 0; k < R.rows() && !capped; ++k) capped = R(k, i) > 0.0;
    if (!capped) throw UnboundedSetError("uncertainty set unbounded in coordinate " + std::to_string(i));
  }
  const std::size_t m = R.cols();
  return UncertaintySet(HRep{std::move(R), std::move(r)}, m);
}

UncertaintySet UncertaintySet::vrep(std::vector<Vector> vertices) {
  if (vertices.empty()) throw InvariantViolation("vertex list nonempty");
  const std::size_t m = vertices.front().size();
  if (m == 0) throw InvariantViolation("uncertainty dimension positive");
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    if (vertices[a].size() != m) throw InvariantViolation("vertices share one dimension");
    if (!finite_nonnegative(vertices[a])) throw InvariantViolation("vertices nonnegative");
    for (std::size_t b = 0; b < a; ++b) {
      bool same = true;
      for (std::size_t i = 0; i < m && same; ++i)
        same = std::abs(vertices[a][i] - vertices[b][i]) <= kVertexTol;
      if (same) throw InvariantViolation("vertices distinct");
    }
  }
  return UncertaintySet(VRep{std::move(vertices)}, m);
}

std::size_t UncertaintySet::num_rows() const { return is_hrep() ? h().R.rows() : 0; }

UncertaintySet budget_set(std::size_t m) {
  if (m == 0) throw InvariantViolation("m >= 1");
  Matrix R(m + 1, m);
  Vector r(m + 1, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    R(i, i) = 1.0;
    R(m, i) = 1.0;
  }
  r[m] = std::sqrt(static_cast<double>(m));
  return UncertaintySet::hrep(std::move(R), std::move(r));
}

Polyhedron dualized_set(const Matrix& B, double d_bar) {
  return Polyhedron{B.transposed(), Vector(B.cols(), d_bar)};
}

Polyhedron to_polyhedron(const UncertaintySet& set, std::size_t cap) {
  if (set.is_hrep()) return Polyhedron{set.h().R, set.h().r};
  return hull_facets(set.v().vertices, cap);
}

double max_linear(const Polyhedron& p, const Vector& c) {
  if (c.size() != p.dim()) throw DimensionError("objective length differs from set dimension");
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  prog.add_variables(p.dim());
  prog.objective = c;
  for (std::size_t k = 0; k < p.G.rows(); ++k) {
    auto row = p.G.row(k);
    prog.add_row(Vector(row.begin(), row.end()), lp::Relation::LessEqual, p.g[k]);
  }
  const lp::Solution s = lp::solve(prog);
  switch (s.status) {
    case lp::Status::Optimal:
      return s.objective;
    case lp::Status::Unbounded:
      throw UnboundedSetError("set is unbounded in the requested direction");
    case lp::Status::Infeasible:
      throw InvariantViolation("set nonempty");
    default:
      throw SolverError("max_linear: LP " + std::string(lp::to_string(s.status)));
  }
}

double max_linear(const UncertaintySet& set, const Vector& c) {
  if (set.is_hrep()) return max_linear(Polyhedron{set.h().R, set.h().r}, c);
  if (c.size() != set.dim()) throw DimensionError("objective length differs from set dimension");
  double best = -lp::kInf;
  for (const Vector& v : set.v().vertices) best = std::max(best, dot(c, v));
  return best;
}

double max_coordinate(const Polyhedron& p, std::size_t i) {
  Vector c(p.dim(), 0.0);
  c.at(i) = 1.0;
  return max_linear(p, c);
}

double max_coordinate(const UncertaintySet& set, std::size_t i) {
  Vector c(set.dim(), 0.0);
  c.at(i) = 1.0;
  return max_linear(set, c);
}

}  // namespace adjrobust
