#pragma once

// Affine recourse y(h) = P h + q.
//
// z_Aff = min c^T x + max_{h in U} d^T (P h + q) subject to, for all h in U,
// A x + B (P h + q) >= h and P h + q >= 0, with x >= 0 and P, q free.
//
// Each "for all h" row is affine in h.  Over an H-represented set
// {h >= 0 : R h <= r} it is replaced by its LP dual, which gives the compact
// LP of build_affine_lp.  Over a vertex list it is written out once per
// vertex.

#include <cstddef>
#include <string>
#include <string_view>

#include "adjrobust/instance.hpp"
#include "adjrobust/lp.hpp"

namespace adjrobust {

struct AffinePolicy {
  Vector x;  // n
  Matrix P;  // n x m
  Vector q;  // n
  double z_aff = 0.0;
};

struct DualAffineValue {
  double z_d_aff = 0.0;
  Vector x;
};

// Column offsets in the compact LP.  With L rows in R:
//   x (n), z (1), P (n x m, row-major), q (n),
//   v (L), V (m blocks of L: column i of V), U (n blocks of L: column j of U).
struct AffineLayout {
  std::size_t m = 0, n = 0, L = 0;
  std::size_t x = 0, z = 0, P = 0, q = 0, v = 0, V = 0, U = 0;
};

struct AffineLp {
  lp::LinearProgram program;
  AffineLayout layout;
};

// Rows, in order: z - d^T q >= r^T v;  R^T v >= P^T d;  A x + B q >= V^T r;
// R^T V >= I - B P;  q >= U^T r;  U^T R + P >= 0.  Throws
// InvariantViolation for a vertex-listed set.
AffineLp build_affine_lp(const Instance& inst);

struct AffineOptions {
  lp::Options lp;
  // Allowed violation of the robust constraints when the solution is
  // checked against U.
  double certify_tol = 1e-7;
  // Largest m for which a vertex list is turned into facets
  // (solve_affine_dualized only).
  std::size_t vertex_cap = kDefaultVertexCap;
};

// Solves the compact LP (H-representation) or the vertex-expanded LP
// (vertex list) and checks the policy against U.  Throws SolverError when
// the LP fails or the check does not pass.
AffinePolicy solve_affine(const Instance& inst, const AffineOptions& options = {});

// Affine multipliers lambda(w) = Lambda w + lambda0 in the dual form
//   min c^T x + max_{w in W} [-(A x)^T w + r^T lambda(w)]
//   s.t. R^T lambda(w) >= w, lambda(w) >= 0 for all w in W,
// with W = {w >= 0 : B^T w <= d}.  A vertex list is converted with
// hull_facets.  Throws UnboundedSetError when W is unbounded.
DualAffineValue solve_affine_dualized(const Instance& inst, const AffineOptions& options = {});

struct SymmetricAffine {
  double theta = 0.0;  // diagonal of P
  double mu = 0.0;     // off-diagonal of P
  double lambda = 0.0; // q = lambda e
  double z = 0.0;
};

// Affine problem on gen_worst_case(m, false) with P and q restricted to the
// permutation-invariant form above, enforced at the 2m + 1 vertices.
SymmetricAffine solve_affine_symmetric_worstcase(std::size_t m, const lp::Options& options = {});

struct PolicyEvaluation {
  Vector y;
  double cost = 0.0;
  // y >= -1e-7 and A x + B y >= h - 1e-7.
  bool feasible = false;
};

PolicyEvaluation evaluate_policy(const AffinePolicy& policy, const Instance& inst, const Vector& h);

// Largest violation of the robust constraints over U, including the
// objective row c^T x + d^T y(h) <= z_aff.  Exact for both representations
// (one LP over U per row, or a scan of the vertex list).
double max_policy_violation(const AffinePolicy& policy, const Instance& inst);

std::string policy_to_json(const AffinePolicy& policy);
AffinePolicy policy_from_json(std::string_view text);

}  // namespace adjrobust
