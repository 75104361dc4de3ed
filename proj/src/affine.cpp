#include "adjrobust/affine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "adjrobust/errors.hpp"
#include "json.hpp"

namespace adjrobust {

namespace {

using lp::Relation;
using lp::Term;

struct AffineExpr {
  std::vector<Term> terms;
  double constant = 0.0;
};

// c(vars) + sum_i f_i(vars) u_i >= 0 for every u in {u >= 0 : G u <= g},
// written as: exists v >= 0 with G^T v + f >= 0 and c - g^T v >= 0.  The
// multipliers occupy columns v_base .. v_base + G.rows() - 1.
void add_robust_row(lp::LinearProgram& prog, const Polyhedron& set, const AffineExpr& c,
                    const std::vector<AffineExpr>& f, std::size_t v_base) {
  const std::size_t K = set.G.rows();
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<Term> t = f[i].terms;
    for (std::size_t k = 0; k < K; ++k)
      if (set.G(k, i) != 0.0) t.push_back({v_base + k, set.G(k, i)});
    prog.add_sparse_row(t, Relation::GreaterEqual, -f[i].constant);
  }
  std::vector<Term> t = c.terms;
  for (std::size_t k = 0; k < K; ++k)
    if (set.g[k] != 0.0) t.push_back({v_base + k, -set.g[k]});
  prog.add_sparse_row(t, Relation::GreaterEqual, -c.constant);
}

void check_solution(const lp::Solution& sol, const char* what) {
  if (!sol.optimal())
    throw SolverError(std::string(what) + " LP ended with status " + std::string(lp::to_string(sol.status)));
}

// Variables x, z, P, q shared by the primal and vertex-expanded LPs.
AffineLayout add_policy_variables(lp::LinearProgram& prog, const Instance& inst) {
  AffineLayout L;
  L.m = inst.m;
  L.n = inst.n;
  L.x = prog.add_variables(inst.n);
  for (std::size_t j = 0; j < inst.n; ++j) prog.objective[L.x + j] = inst.c[j];
  L.z = prog.add_variable(1.0, lp::free_bounds());
  L.P = prog.add_variables(inst.n * inst.m, 0.0, lp::free_bounds());
  L.q = prog.add_variables(inst.n, 0.0, lp::free_bounds());
  return L;
}

AffinePolicy extract_policy(const lp::Solution& sol, const AffineLayout& L) {
  AffinePolicy p;
  p.x.assign(sol.primal.begin() + L.x, sol.primal.begin() + L.x + L.n);
  for (double& v : p.x) v = std::max(v, 0.0);
  p.P = Matrix(L.n, L.m);
  for (std::size_t j = 0; j < L.n; ++j)
    for (std::size_t i = 0; i < L.m; ++i) p.P(j, i) = sol.primal[L.P + j * L.m + i];
  p.q.assign(sol.primal.begin() + L.q, sol.primal.begin() + L.q + L.n);
  p.z_aff = sol.objective;
  return p;
}

// Solves min c^T v s.t. G v >= b (all rows >=, variables free or >= 0)
// through its dual max b^T y s.t. G^T y (= or <=) c, y >= 0, which has one
// row per variable instead of one per constraint.  The primal point is read
// off the dual's row multipliers.
lp::Solution solve_via_dual(const lp::LinearProgram& primal, const lp::Options& options) {
  const std::size_t nv = primal.num_vars(), nr = primal.num_rows();
  lp::LinearProgram dual;
  dual.sense = lp::Sense::Maximize;
  dual.add_variables(nr);
  for (std::size_t k = 0; k < nr; ++k) dual.objective[k] = primal.rows[k].rhs;
  for (std::size_t j = 0; j < nv; ++j) {
    Vector col(nr);
    for (std::size_t k = 0; k < nr; ++k) col[k] = primal.rows[k].coeffs[j];
    const bool free = primal.bounds[j].lower == -lp::kInf;
    dual.add_row(std::move(col), free ? Relation::Equal : Relation::LessEqual, primal.objective[j]);
  }
  lp::Solution d = lp::solve(dual, options);
  lp::Solution out;
  out.status = d.status;
  out.iterations = d.iterations;
  if (!d.optimal()) return out;
  out.primal = d.duals;
  for (std::size_t j = 0; j < nv; ++j)
    if (primal.bounds[j].lower == 0.0) out.primal[j] = std::max(out.primal[j], 0.0);
  out.objective = d.objective;
  return out;
}

AffinePolicy solve_vertex_expanded(const Instance& inst, const AffineOptions& options) {
  lp::LinearProgram prog;
  const AffineLayout L = add_policy_variables(prog, inst);
  const std::size_t m = inst.m, n = inst.n;
  for (const Vector& h : inst.uncertainty.v().vertices) {
    // z - d^T (P h + q) >= 0
    std::vector<Term> obj{{L.z, 1.0}};
    for (std::size_t j = 0; j < n; ++j) {
      obj.push_back({L.q + j, -inst.d_bar});
      for (std::size_t i = 0; i < m; ++i)
        if (h[i] != 0.0) obj.push_back({L.P + j * m + i, -inst.d_bar * h[i]});
    }
    prog.add_sparse_row(obj, Relation::GreaterEqual, 0.0);
    // A x + B (P h + q) >= h
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<Term> t;
      for (std::size_t j = 0; j < n; ++j) {
        if (inst.A(r, j) != 0.0) t.push_back({L.x + j, inst.A(r, j)});
        const double b = inst.B(r, j);
        if (b == 0.0) continue;
        t.push_back({L.q + j, b});
        for (std::size_t i = 0; i < m; ++i)
          if (h[i] != 0.0) t.push_back({L.P + j * m + i, b * h[i]});
      }
      prog.add_sparse_row(t, Relation::GreaterEqual, h[r]);
    }
    // P h + q >= 0
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Term> t{{L.q + j, 1.0}};
      for (std::size_t i = 0; i < m; ++i)
        if (h[i] != 0.0) t.push_back({L.P + j * m + i, h[i]});
      prog.add_sparse_row(t, Relation::GreaterEqual, 0.0);
    }
  }
  // Many more rows than columns here, so the dual is the smaller tableau.
  const lp::Solution sol = solve_via_dual(prog, options.lp);
  check_solution(sol, "vertex-expanded affine");
  return extract_policy(sol, L);
}

// max over U of the affine function constant + coeffs^T h.
double max_over_set(const UncertaintySet& U, const Vector& coeffs, double constant) {
  return constant + max_linear(U, coeffs);
}

}  // namespace

AffineLp build_affine_lp(const Instance& inst) {
  inst.validate();
  if (!inst.uncertainty.is_hrep()) throw InvariantViolation("compact affine LP needs an H-represented uncertainty set");
  const HRep& H = inst.uncertainty.h();
  const Polyhedron U{H.R, H.r};
  const std::size_t m = inst.m, n = inst.n, Lr = H.R.rows();

  AffineLp out;
  lp::LinearProgram& prog = out.program;
  AffineLayout& L = out.layout;
  L = add_policy_variables(prog, inst);
  L.L = Lr;
  L.v = prog.add_variables(Lr);
  L.V = prog.add_variables(Lr * m);
  L.U = prog.add_variables(Lr * n);
  auto P = [&](std::size_t j, std::size_t i) { return L.P + j * m + i; };

  // z - d^T (P h + q) >= 0.
  {
    AffineExpr c{{{L.z, 1.0}}, 0.0};
    for (std::size_t j = 0; j < n; ++j) c.terms.push_back({L.q + j, -inst.d_bar});
    std::vector<AffineExpr> f(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) f[i].terms.push_back({P(j, i), -inst.d_bar});
    add_robust_row(prog, U, c, f, L.v);
  }
  // (A x + B q)_r + ((B P)_r - e_r)^T h >= 0.
  for (std::size_t r = 0; r < m; ++r) {
    AffineExpr c;
    for (std::size_t j = 0; j < n; ++j) {
      if (inst.A(r, j) != 0.0) c.terms.push_back({L.x + j, inst.A(r, j)});
      if (inst.B(r, j) != 0.0) c.terms.push_back({L.q + j, inst.B(r, j)});
    }
    std::vector<AffineExpr> f(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        if (inst.B(r, j) != 0.0) f[i].terms.push_back({P(j, i), inst.B(r, j)});
      if (i == r) f[i].constant = -1.0;
    }
    add_robust_row(prog, U, c, f, L.V + r * Lr);
  }
  // q_j + P_j h >= 0.
  for (std::size_t j = 0; j < n; ++j) {
    AffineExpr c{{{L.q + j, 1.0}}, 0.0};
    std::vector<AffineExpr> f(m);
    for (std::size_t i = 0; i < m; ++i) f[i].terms.push_back({P(j, i), 1.0});
    add_robust_row(prog, U, c, f, L.U + j * Lr);
  }
  return out;
}

AffinePolicy solve_affine(const Instance& inst, const AffineOptions& options) {
  inst.validate();
  AffinePolicy policy;
  if (inst.uncertainty.is_hrep()) {
    const AffineLp built = build_affine_lp(inst);
    const lp::Solution sol = lp::solve(built.program, options.lp);
    check_solution(sol, "compact affine");
    policy = extract_policy(sol, built.layout);
  } else {
    policy = solve_vertex_expanded(inst, options);
  }
  const double violation = max_policy_violation(policy, inst);
  if (violation > options.certify_tol)
    throw SolverError("affine policy violates a robust constraint by " + std::to_string(violation));
  return policy;
}

DualAffineValue solve_affine_dualized(const Instance& inst, const AffineOptions& options) {
  inst.validate();
  for (std::size_t i = 0; i < inst.m; ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < inst.n && !nonzero; ++j) nonzero = inst.B(i, j) != 0.0;
    if (!nonzero) throw UnboundedSetError("W is unbounded: row " + std::to_string(i) + " of B is zero");
  }
  const Polyhedron U = to_polyhedron(inst.uncertainty, options.vertex_cap);
  const Polyhedron W = dualized_set(inst.B, inst.d_bar);
  const std::size_t m = inst.m, n = inst.n, Lr = U.G.rows(), K = W.G.rows();

  lp::LinearProgram prog;
  const std::size_t x = prog.add_variables(n);
  for (std::size_t j = 0; j < n; ++j) prog.objective[x + j] = inst.c[j];
  const std::size_t z = prog.add_variable(1.0, lp::free_bounds());
  const std::size_t Lam = prog.add_variables(Lr * m, 0.0, lp::free_bounds());  // row-major (l, i)
  const std::size_t lam0 = prog.add_variables(Lr, 0.0, lp::free_bounds());
  const std::size_t v_obj = prog.add_variables(K);
  const std::size_t v_cov = prog.add_variables(m * K);
  const std::size_t v_pos = prog.add_variables(Lr * K);
  auto Lambda = [&](std::size_t l, std::size_t i) { return Lam + l * m + i; };

  // z + (A x)^T w - r^T (Lambda w + lambda0) >= 0.
  {
    AffineExpr c{{{z, 1.0}}, 0.0};
    for (std::size_t l = 0; l < Lr; ++l)
      if (U.g[l] != 0.0) c.terms.push_back({lam0 + l, -U.g[l]});
    std::vector<AffineExpr> f(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        if (inst.A(i, j) != 0.0) f[i].terms.push_back({x + j, inst.A(i, j)});
      for (std::size_t l = 0; l < Lr; ++l)
        if (U.g[l] != 0.0) f[i].terms.push_back({Lambda(l, i), -U.g[l]});
    }
    add_robust_row(prog, W, c, f, v_obj);
  }
  // (R^T lambda(w))_k - w_k >= 0.
  for (std::size_t k = 0; k < m; ++k) {
    AffineExpr c;
    for (std::size_t l = 0; l < Lr; ++l)
      if (U.G(l, k) != 0.0) c.terms.push_back({lam0 + l, U.G(l, k)});
    std::vector<AffineExpr> f(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t l = 0; l < Lr; ++l)
        if (U.G(l, k) != 0.0) f[i].terms.push_back({Lambda(l, i), U.G(l, k)});
      if (i == k) f[i].constant = -1.0;
    }
    add_robust_row(prog, W, c, f, v_cov + k * K);
  }
  // lambda_l(w) >= 0.
  for (std::size_t l = 0; l < Lr; ++l) {
    AffineExpr c{{{lam0 + l, 1.0}}, 0.0};
    std::vector<AffineExpr> f(m);
    for (std::size_t i = 0; i < m; ++i) f[i].terms.push_back({Lambda(l, i), 1.0});
    add_robust_row(prog, W, c, f, v_pos + l * K);
  }

  const lp::Solution sol = lp::solve(prog, options.lp);
  check_solution(sol, "dualized affine");
  DualAffineValue out;
  out.z_d_aff = sol.objective;
  out.x.assign(sol.primal.begin() + x, sol.primal.begin() + x + n);
  return out;
}

SymmetricAffine solve_affine_symmetric_worstcase(std::size_t m, const lp::Options& options) {
  if (m < 2) throw InvariantViolation("symmetric worst-case policy needs m >= 2");
  const Instance inst = gen_worst_case(m, false);
  lp::LinearProgram prog;
  const std::size_t theta = prog.add_variable(0.0, lp::free_bounds());
  const std::size_t mu = prog.add_variable(0.0, lp::free_bounds());
  const std::size_t lambda = prog.add_variable(0.0, lp::free_bounds());
  const std::size_t z = prog.add_variable(1.0, lp::free_bounds());

  // y_j(h) = theta h_j + mu (sum h - h_j) + lambda.
  auto y_terms = [&](const Vector& h, std::size_t j, double scale, std::vector<Term>& t) {
    double total = 0.0;
    for (double v : h) total += v;
    t.push_back({theta, scale * h[j]});
    t.push_back({mu, scale * (total - h[j])});
    t.push_back({lambda, scale});
  };
  for (const Vector& h : inst.uncertainty.v().vertices) {
    std::vector<Term> obj{{z, 1.0}};
    for (std::size_t j = 0; j < m; ++j) y_terms(h, j, -inst.d_bar, obj);
    prog.add_sparse_row(obj, Relation::GreaterEqual, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<Term> t;
      for (std::size_t j = 0; j < m; ++j) y_terms(h, j, inst.B(r, j), t);
      prog.add_sparse_row(t, Relation::GreaterEqual, h[r]);
    }
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Term> t;
      y_terms(h, j, 1.0, t);
      prog.add_sparse_row(t, Relation::GreaterEqual, 0.0);
    }
  }
  const lp::Solution sol = lp::solve(prog, options);
  check_solution(sol, "symmetric affine");
  return {sol.primal[theta], sol.primal[mu], sol.primal[lambda], sol.objective};
}

PolicyEvaluation evaluate_policy(const AffinePolicy& policy, const Instance& inst, const Vector& h) {
  if (h.size() != inst.m) throw DimensionError("h has length m");
  if (policy.P.rows() != inst.n || policy.P.cols() != inst.m || policy.q.size() != inst.n ||
      policy.x.size() != inst.n)
    throw DimensionError("policy does not match the instance dimensions");
  PolicyEvaluation out;
  out.y = multiply(policy.P, h);
  for (std::size_t j = 0; j < inst.n; ++j) out.y[j] += policy.q[j];
  out.cost = dot(inst.c, policy.x) + inst.d_bar * std::accumulate(out.y.begin(), out.y.end(), 0.0);
  out.feasible = std::all_of(out.y.begin(), out.y.end(), [](double v) { return v >= -1e-7; });
  const Vector ax = multiply(inst.A, policy.x);
  const Vector by = multiply(inst.B, out.y);
  for (std::size_t i = 0; i < inst.m; ++i) out.feasible = out.feasible && ax[i] + by[i] >= h[i] - 1e-7;
  return out;
}

double max_policy_violation(const AffinePolicy& policy, const Instance& inst) {
  const std::size_t m = inst.m, n = inst.n;
  if (policy.P.rows() != n || policy.P.cols() != m || policy.q.size() != n || policy.x.size() != n)
    throw DimensionError("policy does not match the instance dimensions");
  const UncertaintySet& U = inst.uncertainty;
  double worst = 0.0;
  for (double v : policy.x) worst = std::max(worst, -v);

  // c^T x + d^T (P h + q) <= z_aff.
  Vector coeffs = multiply_transposed(policy.P, Vector(n, inst.d_bar));
  const double base = dot(inst.c, policy.x) + inst.d_bar * std::accumulate(policy.q.begin(), policy.q.end(), 0.0);
  worst = std::max(worst, max_over_set(U, coeffs, base) - policy.z_aff);

  // h_r - (A x + B (P h + q))_r <= 0.
  const Vector ax = multiply(inst.A, policy.x);
  const Vector bq = multiply(inst.B, policy.q);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < m; ++i) {
      double bp = 0.0;
      for (std::size_t j = 0; j < n; ++j) bp += inst.B(r, j) * policy.P(j, i);
      coeffs[i] = (i == r ? 1.0 : 0.0) - bp;
    }
    coeffs.resize(m);
    worst = std::max(worst, max_over_set(U, coeffs, -ax[r] - bq[r]));
  }
  // -(P h + q)_j <= 0.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) coeffs[i] = -policy.P(j, i);
    worst = std::max(worst, max_over_set(U, coeffs, -policy.q[j]));
  }
  return worst;
}

std::string policy_to_json(const AffinePolicy& policy) {
  nlohmann::json doc;
  doc["x"] = policy.x;
  doc["P"] = policy.P.to_rows();
  doc["q"] = policy.q;
  doc["z_aff"] = policy.z_aff;
  return doc.dump(2);
}

AffinePolicy policy_from_json(std::string_view text) {
  AffinePolicy p;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    p.x = doc.at("x").get<Vector>();
    const auto rows = doc.at("P").get<std::vector<Vector>>();
    p.q = doc.at("q").get<Vector>();
    p.z_aff = doc.at("z_aff").get<double>();
    if (rows.size() != p.q.size() || p.x.size() != p.q.size())
      throw ParseError("policy document: x, P and q disagree on n");
    for (const Vector& r : rows)
      if (r.size() != rows.front().size()) throw ParseError("policy document: ragged P");
    p.P = rows.empty() ? Matrix() : Matrix::from_rows(rows);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("policy document: ") + e.what());
  }
  return p;
}

}  // namespace adjrobust
