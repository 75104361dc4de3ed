#include "adjrobust/adjustable.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "json.hpp"

#include "adjrobust/errors.hpp"
#include "adjrobust/lp.hpp"

namespace adjrobust {

namespace {

using lp::Relation;
using lp::Term;

// Smallest integer delta with 2^delta >= v, but not below -s.
int exponent_bound(double v, int s) {
  if (v <= 0.0) return -s;
  return std::max(static_cast<int>(std::ceil(std::log2(v))), -s);
}

void require_hrep(const Instance& inst) {
  if (!inst.uncertainty.is_hrep()) throw InvariantViolation("separation MIP needs an H-represented uncertainty set");
}

}  // namespace

Digitization Digitization::make(const Instance& inst, double epsilon, SeparationFormulation f,
                                std::size_t max_binaries) {
  inst.validate();
  require_hrep(inst);
  if (!(epsilon > 0.0)) throw InvariantViolation("epsilon positive");
  const Polyhedron W = dualized_set(inst.B, inst.d_bar);
  const Polyhedron U{inst.uncertainty.h().R, inst.uncertainty.h().r};

  Digitization d;
  d.formulation = f;
  d.epsilon = epsilon;
  d.h_max.resize(inst.m);
  d.w_max.resize(inst.m);
  for (std::size_t i = 0; i < inst.m; ++i) {
    d.h_max[i] = max_coordinate(U, i);
    d.w_max[i] = max_coordinate(W, i);  // throws UnboundedSetError
  }
  d.sum_h_max = max_linear(U, Vector(inst.m, 1.0));
  d.sum_w_max = max_linear(W, Vector(inst.m, 1.0));

  const double scale = f == SeparationFormulation::DemandBits ? d.sum_w_max : d.sum_w_max + d.sum_h_max;
  d.s = scale > 0.0 ? static_cast<int>(std::ceil(std::log2(scale / epsilon))) : 0;
  d.error_bound = std::ldexp(scale, -d.s);

  const double hm = *std::max_element(d.h_max.begin(), d.h_max.end());
  const double wm = *std::max_element(d.w_max.begin(), d.w_max.end());
  d.delta_u = exponent_bound(hm, d.s);
  d.delta_w = exponent_bound(wm, d.s);

  std::size_t binaries = inst.m * static_cast<std::size_t>(d.h_bits());
  if (f == SeparationFormulation::BitProduct) binaries += inst.m * static_cast<std::size_t>(d.w_bits());
  if (binaries > max_binaries)
    throw CapExceededError("digitization needs " + std::to_string(binaries) + " binaries, cap is " +
                           std::to_string(max_binaries));
  return d;
}

SeparationMip build_separation_mip(const Instance& inst, const Vector& x_hat, const Digitization& dig) {
  inst.validate();
  require_hrep(inst);
  if (x_hat.size() != inst.n) throw DimensionError("x_hat has length n");
  const std::size_t m = inst.m;
  const std::size_t hb = static_cast<std::size_t>(dig.h_bits());
  const std::size_t wb = static_cast<std::size_t>(dig.w_bits());
  const bool bit_product = dig.formulation == SeparationFormulation::BitProduct;
  // Place value of bit index b in a field whose top exponent is delta.
  auto place = [&](int delta, std::size_t b) { return std::ldexp(1.0, delta - static_cast<int>(b)); };

  SeparationMip out;
  SeparationLayout& L = out.layout;
  lp::LinearProgram& prog = out.program.lp;
  prog.sense = lp::Sense::Maximize;

  L.h = prog.add_variables(m);
  L.w = prog.add_variables(m);
  for (std::size_t i = 0; i < m; ++i) {
    prog.bounds[L.h + i] = {0.0, dig.h_max[i]};
    prog.bounds[L.w + i] = {0.0, dig.w_max[i]};
  }
  L.alpha = prog.add_variables(m * hb);
  if (bit_product) {
    L.beta = prog.add_variables(m * wb);
    L.prod = prog.add_variables(m * wb * hb, 0.0, {0.0, 1.0});
  } else {
    L.prod = prog.add_variables(m * hb);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < hb; ++k) prog.bounds[L.prod + i * hb + k] = {0.0, dig.w_max[i]};
  }
  for (std::size_t j = L.alpha; j < L.alpha + m * hb; ++j) out.program.make_binary(j);
  if (bit_product)
    for (std::size_t j = L.beta; j < L.beta + m * wb; ++j) out.program.make_binary(j);

  // Objective: bilinear part through the products, minus (A x_hat)^T w.
  const Vector ax = multiply(inst.A, x_hat);
  for (std::size_t i = 0; i < m; ++i) prog.objective[L.w + i] = -ax[i];
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < hb; ++k) {
      if (bit_product) {
        for (std::size_t j = 0; j < wb; ++j)
          prog.objective[L.prod + (i * wb + j) * hb + k] = place(dig.delta_w, j) * place(dig.delta_u, k);
      } else {
        prog.objective[L.prod + i * hb + k] = place(dig.delta_u, k);
      }
    }
  }

  // Continuous variables tied to their bits.
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Term> t{{L.h + i, 1.0}};
    for (std::size_t k = 0; k < hb; ++k) t.push_back({L.alpha + i * hb + k, -place(dig.delta_u, k)});
    prog.add_sparse_row(t, Relation::Equal, 0.0);
    if (bit_product) {
      std::vector<Term> tw{{L.w + i, 1.0}};
      for (std::size_t j = 0; j < wb; ++j) tw.push_back({L.beta + i * wb + j, -place(dig.delta_w, j)});
      prog.add_sparse_row(tw, Relation::Equal, 0.0);
    }
  }

  // h in U, w in W.
  const HRep& U = inst.uncertainty.h();
  for (std::size_t k = 0; k < U.R.rows(); ++k) {
    std::vector<Term> t;
    for (std::size_t i = 0; i < m; ++i)
      if (U.R(k, i) != 0.0) t.push_back({L.h + i, U.R(k, i)});
    prog.add_sparse_row(t, Relation::LessEqual, U.r[k]);
  }
  for (std::size_t j = 0; j < inst.n; ++j) {
    std::vector<Term> t;
    for (std::size_t i = 0; i < m; ++i)
      if (inst.B(i, j) != 0.0) t.push_back({L.w + i, inst.B(i, j)});
    prog.add_sparse_row(t, Relation::LessEqual, inst.d_bar);
  }

  // Linearized products.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < hb; ++k) {
      const std::size_t a = L.alpha + i * hb + k;
      if (bit_product) {
        for (std::size_t j = 0; j < wb; ++j) {
          const std::size_t b = L.beta + i * wb + j;
          const std::size_t g = L.prod + (i * wb + j) * hb + k;
          prog.add_sparse_row({{g, 1.0}, {a, -1.0}}, Relation::LessEqual, 0.0);
          prog.add_sparse_row({{g, 1.0}, {b, -1.0}}, Relation::LessEqual, 0.0);
          prog.add_sparse_row({{g, 1.0}, {a, -1.0}, {b, -1.0}}, Relation::GreaterEqual, -1.0);
        }
      } else {
        const std::size_t g = L.prod + i * hb + k;
        prog.add_sparse_row({{g, 1.0}, {L.w + i, -1.0}}, Relation::LessEqual, 0.0);
        prog.add_sparse_row({{g, 1.0}, {a, -dig.w_max[i]}}, Relation::LessEqual, 0.0);
      }
    }
  }
  return out;
}

}  // namespace adjrobust

namespace adjrobust {

namespace {

double sep_mip_tol(const Digitization& dig, const SeparationOptions& opt) {
  return opt.mip_tol > 0.0 ? opt.mip_tol : dig.epsilon / 10.0;
}

// W must be bounded: w_i is free exactly when row i of B is zero.
void require_bounded_w(const Instance& inst) {
  for (std::size_t i = 0; i < inst.m; ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < inst.n && !nonzero; ++j) nonzero = inst.B(i, j) > 0.0;
    if (!nonzero) throw UnboundedSetError("W unbounded: row " + std::to_string(i) + " of B is zero");
  }
}

// max_{w in W} g^T w, with the maximizer.
std::pair<double, Vector> max_over_w(const Instance& inst, const Vector& g) {
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  prog.add_variables(inst.m);
  prog.objective = g;
  for (std::size_t j = 0; j < inst.n; ++j) {
    std::vector<Term> t;
    for (std::size_t i = 0; i < inst.m; ++i)
      if (inst.B(i, j) != 0.0) t.push_back({i, inst.B(i, j)});
    prog.add_sparse_row(t, Relation::LessEqual, inst.d_bar);
  }
  const lp::Solution s = lp::solve(prog);
  if (s.status == lp::Status::Unbounded) throw UnboundedSetError("W unbounded");
  if (!s.optimal()) throw SolverError("separation LP: " + std::string(lp::to_string(s.status)));
  return {s.objective, s.primal};
}

double cut_value(const Vector& h, const Vector& w, const Vector& ax) {
  double v = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) v += (h[i] - ax[i]) * w[i];
  return v;
}

SeparationResult separate_by_vertices(const Instance& inst, const Vector& x_hat) {
  const Vector ax = multiply(inst.A, x_hat);
  SeparationResult res;
  bool first = true;
  for (const Vector& h : inst.uncertainty.v().vertices) {
    Vector g(inst.m);
    for (std::size_t i = 0; i < inst.m; ++i) g[i] = h[i] - ax[i];
    auto [value, w] = max_over_w(inst, g);
    for (double& x : w) x = std::max(x, 0.0);
    const double v = cut_value(h, w, ax);
    if (first || v > res.best.value) {
      res.best = {h, std::move(w), v};
      first = false;
    }
  }
  res.bound = res.best.value;
  return res;
}

SeparationResult separate_by_mip(const Instance& inst, const Vector& x_hat, const Digitization& dig,
                                 const SeparationOptions& opt) {
  const SeparationMip sm = build_separation_mip(inst, x_hat, dig);
  mip::Options mo;
  mo.mip_tol = sep_mip_tol(dig, opt);
  mo.node_limit = opt.node_limit;
  mo.time_limit_s = opt.time_limit_s;
  if (opt.significance_branching) {
    // alpha bits come first in the binary list, then beta bits; both are
    // stored most significant first within a coordinate.
    const std::size_t hb = static_cast<std::size_t>(dig.h_bits());
    const std::size_t wb = static_cast<std::size_t>(dig.w_bits());
    for (std::size_t b = 0; b < sm.program.binaries.size(); ++b) {
      const std::size_t j = sm.program.binaries[b];
      if (j < sm.layout.alpha + inst.m * hb)
        mo.priority.push_back(dig.delta_u - static_cast<int>((j - sm.layout.alpha) % hb));
      else
        mo.priority.push_back(dig.delta_w - static_cast<int>((j - sm.layout.beta) % wb));
    }
  }
  const mip::Solution s = mip::solve(sm.program, mo);
  if (s.status == mip::Status::NodeLimit || s.status == mip::Status::TimeLimit)
    throw LimitReached("inconclusive separation: " + std::string(mip::to_string(s.status)));
  if (s.status != mip::Status::Optimal) throw SolverError("separation MIP infeasible");

  // h is exact from its bits; w comes from the re-solved continuous part.
  const std::size_t hb = static_cast<std::size_t>(dig.h_bits());
  SeparationResult res;
  res.best.h.assign(inst.m, 0.0);
  res.best.w.assign(inst.m, 0.0);
  for (std::size_t i = 0; i < inst.m; ++i) {
    for (std::size_t k = 0; k < hb; ++k)
      if (s.incumbent[sm.layout.alpha + i * hb + k] == 1.0)
        res.best.h[i] += std::ldexp(1.0, dig.delta_u - static_cast<int>(k));
    res.best.w[i] = std::max(s.incumbent[sm.layout.w + i], 0.0);
  }
  res.best.value = cut_value(res.best.h, res.best.w, multiply(inst.A, x_hat));
  res.bound = s.bound;
  res.status = s.status;
  res.nodes = s.nodes;
  return res;
}

}  // namespace

SeparationResult maximize_bilinear(const Instance& inst, const Vector& x_hat, const Digitization& dig,
                                   const SeparationOptions& options) {
  inst.validate();
  if (x_hat.size() != inst.n) throw DimensionError("x_hat has length n");
  require_bounded_w(inst);
  if (inst.uncertainty.is_vrep()) return separate_by_vertices(inst, x_hat);
  return separate_by_mip(inst, x_hat, dig, options);
}

std::optional<Cut> separate(const Instance& inst, const Vector& x_hat, double z_hat, const Digitization& dig,
                            const SeparationOptions& options) {
  SeparationResult r = maximize_bilinear(inst, x_hat, dig, options);
  const double sep_tol = inst.uncertainty.is_vrep() ? 1e-7 : 10.0 * sep_mip_tol(dig, options);
  if (r.best.value > z_hat + sep_tol) return std::move(r.best);
  return std::nullopt;
}

AdjustableResult solve_adjustable(const Instance& inst, const AdjustableOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  inst.validate();
  require_bounded_w(inst);
  const Digitization dig = inst.uncertainty.is_hrep()
                               ? Digitization::make(inst, options.epsilon, options.formulation)
                               : Digitization{};
  auto sep_options = [&] {
    SeparationOptions so = options.separation;
    const double left = options.time_limit_s - std::chrono::duration<double>(clock::now() - start).count();
    if (left <= 0.0) throw LimitReached("adjustable solve: time limit");
    so.time_limit_s = std::min(so.time_limit_s, left);
    return so;
  };

  AdjustableResult out;
  Vector x(inst.n, 0.0);
  std::optional<Cut> cut = separate(inst, x, -lp::kInf, dig, sep_options());

  lp::LinearProgram master;
  master.add_variables(inst.n);
  const std::size_t z = master.add_variable(1.0, lp::free_bounds());
  for (std::size_t j = 0; j < inst.n; ++j) master.objective[j] = inst.c[j];
  master.add_sparse_row({{z, 1.0}}, Relation::GreaterEqual, 0.0);

  double master_value = -lp::kInf;
  while (cut) {
    for (const Cut& old : out.cuts) {
      bool same = true;
      for (std::size_t i = 0; i < inst.m && same; ++i)
        same = std::abs(old.h[i] - cut->h[i]) <= 1e-9 && std::abs(old.w[i] - cut->w[i]) <= 1e-9;
      if (same) {
        double c_x = dot(inst.c, x);
        throw CuttingPlaneStall("cutting plane repeated a cut", master_value, c_x + cut->value);
      }
    }
    if (out.iterations >= options.max_iterations) {
      throw CuttingPlaneStall("cutting plane iteration limit", master_value, dot(inst.c, x) + cut->value);
    }

    // z + (A^T w)^T x >= h^T w
    const Vector atw = multiply_transposed(inst.A, cut->w);
    std::vector<Term> row{{z, 1.0}};
    for (std::size_t j = 0; j < inst.n; ++j)
      if (atw[j] != 0.0) row.push_back({j, atw[j]});
    master.add_sparse_row(row, Relation::GreaterEqual, dot(cut->h, cut->w));
    out.cuts.push_back(std::move(*cut));

    const lp::Solution ms = lp::solve(master);
    if (!ms.optimal()) throw SolverError("master LP: " + std::string(lp::to_string(ms.status)));
    ++out.iterations;
    master_value = ms.objective;
    out.master_history.push_back(master_value);
    x.assign(ms.primal.begin(), ms.primal.begin() + static_cast<std::ptrdiff_t>(inst.n));
    for (double& v : x) v = std::max(v, 0.0);
    cut = separate(inst, x, ms.primal[z], dig, sep_options());
  }
  out.z_ar = master_value;
  out.x = std::move(x);
  return out;
}

double adjustable_special_case(const Instance& inst, const AdjustableOptions& options) {
  inst.validate();
  if (!inst.A.all_zero()) throw InvariantViolation("A = 0");
  for (double c : inst.c)
    if (c != 0.0) throw InvariantViolation("c = 0");
  require_bounded_w(inst);
  const Digitization dig = inst.uncertainty.is_hrep()
                               ? Digitization::make(inst, options.epsilon, options.formulation)
                               : Digitization{};
  SeparationOptions so = options.separation;
  so.time_limit_s = std::min(so.time_limit_s, options.time_limit_s);
  return maximize_bilinear(inst, Vector(inst.n, 0.0), dig, so).best.value;
}

double solve_adjustable_vertex_oracle(const Instance& inst, std::size_t cap) {
  inst.validate();
  const std::vector<Vector> verts = enumerate_vertices(inst.uncertainty, cap).v().vertices;
  auto fail = [](const lp::Solution& s) {
    if (s.status == lp::Status::Infeasible) throw SolverError("recourse infeasible at a vertex of U");
    throw SolverError("vertex oracle LP: " + std::string(lp::to_string(s.status)));
  };

  if (inst.A.all_zero()) {
    // x = 0 is optimal (c >= 0 and x does not help cover demand), and the
    // recourse problems separate by vertex.
    double worst = 0.0;
    for (const Vector& h : verts) {
      lp::LinearProgram prog;
      prog.add_variables(inst.n, inst.d_bar);
      for (std::size_t i = 0; i < inst.m; ++i) {
        auto r = inst.B.row(i);
        prog.add_row(Vector(r.begin(), r.end()), Relation::GreaterEqual, h[i]);
      }
      const lp::Solution s = lp::solve(prog);
      if (!s.optimal()) fail(s);
      worst = std::max(worst, s.objective);
    }
    return worst;
  }

  lp::LinearProgram prog;
  prog.add_variables(inst.n);
  for (std::size_t j = 0; j < inst.n; ++j) prog.objective[j] = inst.c[j];
  const std::size_t z = prog.add_variable(1.0, lp::free_bounds());
  prog.add_variables(verts.size() * inst.n);
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const std::size_t y = inst.n + 1 + v * inst.n;
    std::vector<Term> cost{{z, 1.0}};
    for (std::size_t j = 0; j < inst.n; ++j) cost.push_back({y + j, -inst.d_bar});
    prog.add_sparse_row(cost, Relation::GreaterEqual, 0.0);
    for (std::size_t i = 0; i < inst.m; ++i) {
      std::vector<Term> t;
      for (std::size_t j = 0; j < inst.n; ++j) {
        if (inst.A(i, j) != 0.0) t.push_back({j, inst.A(i, j)});
        if (inst.B(i, j) != 0.0) t.push_back({y + j, inst.B(i, j)});
      }
      prog.add_sparse_row(t, Relation::GreaterEqual, verts[v][i]);
    }
  }
  const lp::Solution s = lp::solve(prog);
  if (!s.optimal()) fail(s);
  return s.objective;
}

std::string cuts_to_json(const std::vector<Cut>& cuts) {
  nlohmann::json doc;
  doc["cuts"] = nlohmann::json::array();
  for (const Cut& c : cuts) doc["cuts"].push_back({{"h", c.h}, {"w", c.w}, {"value", c.value}});
  return doc.dump(2) + "\n";
}

std::vector<Cut> cuts_from_json(std::string_view text) {
  std::vector<Cut> out;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    for (const auto& c : doc.at("cuts"))
      out.push_back({c.at("h").get<Vector>(), c.at("w").get<Vector>(), c.at("value").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cut pool document: ") + e.what());
  }
  return out;
}

}  // namespace adjrobust
