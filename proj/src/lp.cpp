#include "adjrobust/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "adjrobust/errors.hpp"
#include "adjrobust/kernels.hpp"

namespace adjrobust::lp {

std::size_t LinearProgram::add_variable(double cost, Bounds b) {
  objective.push_back(cost);
  bounds.push_back(b);
  return objective.size() - 1;
}

std::size_t LinearProgram::add_variables(std::size_t count, double cost, Bounds b) {
  const std::size_t first = objective.size();
  objective.insert(objective.end(), count, cost);
  bounds.insert(bounds.end(), count, b);
  return first;
}

void LinearProgram::add_row(Vector coeffs, Relation rel, double rhs) {
  if (coeffs.size() != num_vars()) throw DimensionError("row length does not match variable count");
  rows.push_back({std::move(coeffs), rel, rhs});
}

void LinearProgram::add_sparse_row(const std::vector<Term>& terms, Relation rel, double rhs) {
  Vector coeffs(num_vars(), 0.0);
  for (const auto& [j, v] : terms) {
    if (j >= coeffs.size()) throw DimensionError("row term index out of range");
    coeffs[j] += v;
  }
  rows.push_back({std::move(coeffs), rel, rhs});
}

void LinearProgram::validate() const {
  if (num_vars() == 0) throw InvariantViolation("LP has at least one variable");
  if (bounds.size() != num_vars()) throw InvariantViolation("LP bounds cover every variable");
  for (double c : objective)
    if (!std::isfinite(c)) throw InvariantViolation("LP objective finite");
  for (const Bounds& b : bounds) {
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper || b.lower == kInf ||
        b.upper == -kInf)
      throw InvariantViolation("LP variable bounds lower <= upper");
  }
  for (const Row& r : rows) {
    if (r.coeffs.size() != num_vars()) throw InvariantViolation("LP row length equals variable count");
    if (!std::isfinite(r.rhs)) throw InvariantViolation("LP coefficients finite");
    for (double a : r.coeffs)
      if (!std::isfinite(a)) throw InvariantViolation("LP coefficients finite");
  }
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
    case Status::NumericalFailure:
      return "numerical-failure";
    case Status::IterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

namespace {

// x_j = offset + sum of coef * internal column.
struct VarMap {
  double offset = 0.0;
  int col[2] = {-1, -1};
  double coef[2] = {0.0, 0.0};
};

enum class RunResult { Optimal, Unbounded, IterationLimit };

// Tableau storage kept per thread, so repeated solves (branch and bound)
// reuse mapped memory instead of faulting in fresh pages every time.
struct TableauCache {
  std::vector<double> tab, initial, saved;
};
thread_local TableauCache tableau_cache;

class Simplex {
 public:
  Simplex(const LinearProgram& lp, std::span<const Bounds> bounds, const Options& opt)
      : lp_(lp), bounds_(bounds), opt_(opt) {
    tab_.swap(tableau_cache.tab);
    initial_.swap(tableau_cache.initial);
    saved_.swap(tableau_cache.saved);
  }
  ~Simplex() {
    tab_.swap(tableau_cache.tab);
    initial_.swap(tableau_cache.initial);
    saved_.swap(tableau_cache.saved);
  }
  Simplex(const Simplex&) = delete;
  Simplex& operator=(const Simplex&) = delete;

  Solution solve();

 private:
  double* row(std::size_t i) { return tab_.data() + i * width_; }
  const double* row(std::size_t i) const { return tab_.data() + i * width_; }
  double& rhs(std::size_t i) { return tab_[i * width_ + ncols_]; }

  void build();
  void pivot(std::size_t r, std::size_t e);
  void flip_column(std::size_t j);
  void flip_basic_row(std::size_t r);
  long price(std::size_t obj_row, bool bland) const;
  RunResult run(std::size_t obj_row);
  void drive_out_artificials();
  bool reinvert();
  RunResult run_refined(std::size_t obj_row);
  void internal_values(Vector& v) const;
  Vector original_point(const Vector& internal) const;

  Solution finish_optimal();
  Solution finish_infeasible();
  Solution finish_unbounded(std::size_t e);

  const LinearProgram& lp_;
  std::span<const Bounds> bounds_;
  Options opt_;
  double sense_sign_ = 1.0;

  std::size_t m_ = 0;        // constraint rows
  std::size_t nstruct_ = 0;  // structural internal columns
  std::size_t ncols_ = 0;
  std::size_t width_ = 0;
  std::vector<double> tab_;  // (m_ + 2) x width_, rows m_ and m_+1 are phase-2/phase-1 costs
  std::vector<double> initial_;  // tab_ as built, for reinversion
  std::vector<double> saved_;    // tab_ before a reinversion attempt

  std::vector<VarMap> maps_;
  std::vector<double> upper_;
  std::vector<std::uint8_t> flipped_;
  std::vector<std::uint8_t> artificial_;
  std::vector<std::size_t> basis_;
  std::vector<long> basic_row_;
  std::vector<double> row_sign_;
  std::vector<Relation> rel_;  // after normalisation
  std::vector<std::size_t> id_col_;
  bool has_artificial_ = false;
  bool phase_one_ = false;

  std::size_t iterations_ = 0;
  std::size_t bland_after_ = 0;
  std::size_t max_iterations_ = 0;
  std::size_t refactor_every_ = 0;
  std::size_t since_refactor_ = 0;
  long unbounded_col_ = -1;
  std::vector<std::size_t> nz_;
};

void Simplex::build() {
  sense_sign_ = lp_.sense == Sense::Minimize ? 1.0 : -1.0;
  m_ = lp_.num_rows();
  const std::size_t nv = lp_.num_vars();

  maps_.assign(nv, {});
  std::vector<double> struct_upper;
  for (std::size_t j = 0; j < nv; ++j) {
    const Bounds& b = bounds_[j];
    VarMap& mp = maps_[j];
    if (b.lower == b.upper) {
      mp.offset = b.lower;
    } else if (std::isfinite(b.lower)) {
      mp.offset = b.lower;
      mp.col[0] = static_cast<int>(struct_upper.size());
      mp.coef[0] = 1.0;
      struct_upper.push_back(b.upper - b.lower);
    } else if (std::isfinite(b.upper)) {
      mp.offset = b.upper;
      mp.col[0] = static_cast<int>(struct_upper.size());
      mp.coef[0] = -1.0;
      struct_upper.push_back(kInf);
    } else {
      mp.col[0] = static_cast<int>(struct_upper.size());
      mp.coef[0] = 1.0;
      struct_upper.push_back(kInf);
      mp.col[1] = static_cast<int>(struct_upper.size());
      mp.coef[1] = -1.0;
      struct_upper.push_back(kInf);
    }
  }
  nstruct_ = struct_upper.size();

  // Normalised rows: internal coefficients and nonnegative right-hand sides.
  row_sign_.assign(m_, 1.0);
  rel_.resize(m_);
  std::vector<double> b(m_);
  std::size_t nslack = 0, nart = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    const Row& r = lp_.rows[i];
    double bi = r.rhs;
    for (std::size_t j = 0; j < nv; ++j) bi -= r.coeffs[j] * maps_[j].offset;
    Relation rel = r.relation;
    if (bi < 0.0) {
      row_sign_[i] = -1.0;
      bi = -bi;
      if (rel == Relation::LessEqual)
        rel = Relation::GreaterEqual;
      else if (rel == Relation::GreaterEqual)
        rel = Relation::LessEqual;
    }
    rel_[i] = rel;
    b[i] = bi;
    if (rel != Relation::Equal) ++nslack;
    if (rel != Relation::LessEqual) ++nart;
  }

  ncols_ = nstruct_ + nslack + nart;
  width_ = ncols_ + 1;
  tab_.assign((m_ + 2) * width_, 0.0);
  upper_.assign(ncols_, kInf);
  std::copy(struct_upper.begin(), struct_upper.end(), upper_.begin());
  flipped_.assign(ncols_, 0);
  artificial_.assign(ncols_, 0);
  basis_.assign(m_, 0);
  basic_row_.assign(ncols_, -1);
  id_col_.assign(m_, 0);

  std::size_t next_slack = nstruct_;
  std::size_t next_art = nstruct_ + nslack;
  for (std::size_t i = 0; i < m_; ++i) {
    double* ri = row(i);
    const Row& r = lp_.rows[i];
    for (std::size_t j = 0; j < nv; ++j) {
      const double a = r.coeffs[j] * row_sign_[i];
      if (a == 0.0) continue;
      for (int k = 0; k < 2; ++k)
        if (maps_[j].col[k] >= 0) ri[maps_[j].col[k]] += a * maps_[j].coef[k];
    }
    ri[ncols_] = b[i];
    if (rel_[i] == Relation::LessEqual) {
      ri[next_slack] = 1.0;
      id_col_[i] = next_slack++;
    } else {
      if (rel_[i] == Relation::GreaterEqual) ri[next_slack++] = -1.0;
      ri[next_art] = 1.0;
      artificial_[next_art] = 1;
      id_col_[i] = next_art++;
    }
    basis_[i] = id_col_[i];
    basic_row_[id_col_[i]] = static_cast<long>(i);
  }
  has_artificial_ = nart > 0;

  double* cost = row(m_);
  for (std::size_t j = 0; j < nv; ++j) {
    const double c = sense_sign_ * lp_.objective[j];
    for (int k = 0; k < 2; ++k)
      if (maps_[j].col[k] >= 0) cost[maps_[j].col[k]] += c * maps_[j].coef[k];
  }

  if (has_artificial_) {
    double* p1 = row(m_ + 1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!artificial_[id_col_[i]]) continue;
      const double* ri = row(i);
      for (std::size_t j = 0; j < width_; ++j) p1[j] -= ri[j];
    }
    for (std::size_t j = nstruct_ + nslack; j < ncols_; ++j) p1[j] = 0.0;
  }

  const std::size_t size = m_ + nv;
  bland_after_ = 5 * size;
  max_iterations_ = opt_.max_iterations ? opt_.max_iterations : 50 * (m_ + ncols_) + 10000;
  refactor_every_ = std::max<std::size_t>(100, 2 * m_);
  nz_.reserve(width_);
  initial_ = tab_;
}

// Rebuilds the tableau for the current basis and flips from the original
// rows, discarding accumulated round-off.  Gauss-Jordan with partial
// pivoting over the rows not yet claimed.  Returns false, leaving the
// tableau as it was, when the basis is numerically singular.
bool Simplex::reinvert() {
  since_refactor_ = 0;
  saved_ = tab_;
  const std::vector<std::size_t> target = basis_;
  const std::vector<long> saved_row = basic_row_;

  tab_ = initial_;
  for (std::size_t j = 0; j < ncols_; ++j) {
    if (!flipped_[j]) continue;
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      double* ri = row(i);
      if (ri[j] == 0.0) continue;
      ri[ncols_] -= ri[j] * upper_[j];
      ri[j] = -ri[j];
    }
  }
  std::fill(basic_row_.begin(), basic_row_.end(), -1);
  for (std::size_t i = 0; i < m_; ++i) {
    basis_[i] = id_col_[i];
    basic_row_[id_col_[i]] = static_cast<long>(i);
  }
  std::vector<std::uint8_t> in_target(ncols_, 0), claimed(m_, 0);
  for (std::size_t c : target) in_target[c] = 1;
  for (std::size_t i = 0; i < m_; ++i)
    if (in_target[id_col_[i]]) claimed[i] = 1;

  const bool phase = phase_one_;
  phase_one_ = true;  // keep both cost rows consistent
  bool ok = true;
  for (std::size_t e : target) {
    if (basic_row_[e] >= 0) continue;
    long best = -1;
    double best_mag = 1e-9;
    for (std::size_t i = 0; i < m_; ++i) {
      if (claimed[i]) continue;
      const double mag = std::abs(row(i)[e]);
      if (mag > best_mag) {
        best_mag = mag;
        best = static_cast<long>(i);
      }
    }
    if (best < 0) {
      ok = false;
      break;
    }
    claimed[static_cast<std::size_t>(best)] = 1;
    pivot(static_cast<std::size_t>(best), e);
  }
  phase_one_ = phase;
  if (!ok) {
    tab_ = saved_;
    basis_ = target;
    basic_row_ = saved_row;
  }
  return ok;
}

// Runs to termination, then reinverts and resumes until a fresh tableau
// agrees that the run is finished.
RunResult Simplex::run_refined(std::size_t obj_row) {
  for (int round = 0;; ++round) {
    const std::size_t before = iterations_;
    const RunResult r = run(obj_row);
    if (r == RunResult::IterationLimit || round == 5) return r;
    if (round > 0 && iterations_ == before) return r;
    if (!reinvert()) return r;
    if (price(obj_row, false) < 0 && r == RunResult::Optimal) return r;
  }
}

void Simplex::pivot(std::size_t r, std::size_t e) {
  const auto& k = kernels::active();
  double* pr = row(r);
  k.scale(1.0 / pr[e], pr, width_);
  pr[e] = 1.0;

  nz_.clear();
  for (std::size_t j = 0; j < width_; ++j)
    if (pr[j] != 0.0) nz_.push_back(j);
  const bool sparse = nz_.size() * 4 < width_;

  const std::size_t last = phase_one_ ? m_ + 2 : m_ + 1;
  for (std::size_t i = 0; i < last; ++i) {
    if (i == r) continue;
    double* ri = row(i);
    const double f = ri[e];
    if (f == 0.0) continue;
    if (sparse)
      k.axpy_indexed(-f, pr, ri, nz_.data(), nz_.size());
    else
      k.axpy(-f, pr, ri, width_);
    ri[e] = 0.0;
  }
  basic_row_[basis_[r]] = -1;
  basis_[r] = e;
  basic_row_[e] = static_cast<long>(r);
}

void Simplex::flip_column(std::size_t j) {
  const double u = upper_[j];
  for (std::size_t i = 0; i < m_ + 2; ++i) {
    double* ri = row(i);
    const double v = ri[j];
    if (v == 0.0) continue;
    ri[ncols_] -= v * u;
    ri[j] = -v;
  }
  flipped_[j] ^= 1;
}

void Simplex::flip_basic_row(std::size_t r) {
  const std::size_t bcol = basis_[r];
  double* pr = row(r);
  kernels::active().scale(-1.0, pr, width_);
  pr[ncols_] += upper_[bcol];
  pr[bcol] = 1.0;
  flipped_[bcol] ^= 1;
}

long Simplex::price(std::size_t obj_row, bool bland) const {
  const double* o = row(obj_row);
  long best = -1;
  double best_rc = -opt_.tol;
  for (std::size_t j = 0; j < ncols_; ++j) {
    if (basic_row_[j] >= 0 || upper_[j] == 0.0) continue;
    if (!phase_one_ && artificial_[j]) continue;
    const double rc = o[j];
    if (rc < best_rc) {
      if (bland) return static_cast<long>(j);
      best_rc = rc;
      best = static_cast<long>(j);
    }
  }
  return best;
}

RunResult Simplex::run(std::size_t obj_row) {
  while (true) {
    if (iterations_ >= max_iterations_) return RunResult::IterationLimit;
    const bool bland = iterations_ >= bland_after_;
    const long entering = price(obj_row, bland);
    if (entering < 0) return RunResult::Optimal;
    const std::size_t e = static_cast<std::size_t>(entering);

    long leave = -1;
    bool leave_upper = false;
    double best_t = upper_[e];
    if (bland) {
      // Exact minimum ratio, ties to the smallest basic index.
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = row(i)[e];
        const std::size_t bcol = basis_[i];
        double t;
        bool at_upper = false;
        if (a > opt_.pivot_tol) {
          t = std::max(rhs(i), 0.0) / a;
        } else if (a < -opt_.pivot_tol && upper_[bcol] < kInf) {
          t = std::max(upper_[bcol] - rhs(i), 0.0) / -a;
          at_upper = true;
        } else {
          continue;
        }
        const bool tie = leave >= 0 && t <= best_t + 1e-12 * (1.0 + best_t) && t >= best_t - 1e-12 * (1.0 + best_t);
        if ((leave < 0 && t < best_t) || (leave >= 0 && t < best_t - 1e-12 * (1.0 + best_t)) ||
            (tie && bcol < basis_[static_cast<std::size_t>(leave)])) {
          best_t = t;
          leave = static_cast<long>(i);
          leave_upper = at_upper;
        }
      }
    } else {
      // Harris: bound the step with feasibility relaxed by harris_tol, then
      // take the largest pivot among the rows that block within it.
      constexpr double harris_tol = 1e-9;
      double relaxed = kInf;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = row(i)[e];
        const std::size_t bcol = basis_[i];
        if (a > opt_.pivot_tol)
          relaxed = std::min(relaxed, (std::max(rhs(i), 0.0) + harris_tol) / a);
        else if (a < -opt_.pivot_tol && upper_[bcol] < kInf)
          relaxed = std::min(relaxed, (std::max(upper_[bcol] - rhs(i), 0.0) + harris_tol) / -a);
      }
      if (relaxed < upper_[e]) {
        double best_mag = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = row(i)[e];
          const std::size_t bcol = basis_[i];
          double t;
          bool at_upper = false;
          if (a > opt_.pivot_tol) {
            t = std::max(rhs(i), 0.0) / a;
          } else if (a < -opt_.pivot_tol && upper_[bcol] < kInf) {
            t = std::max(upper_[bcol] - rhs(i), 0.0) / -a;
            at_upper = true;
          } else {
            continue;
          }
          if (t > relaxed) continue;
          const double mag = std::abs(a);
          if (mag > best_mag || (mag == best_mag && bcol < basis_[static_cast<std::size_t>(leave)])) {
            best_mag = mag;
            best_t = t;
            leave = static_cast<long>(i);
            leave_upper = at_upper;
          }
        }
      }
    }

    if (leave < 0) {
      if (best_t == kInf) {
        unbounded_col_ = entering;
        return RunResult::Unbounded;
      }
      flip_column(e);
    } else {
      const std::size_t r = static_cast<std::size_t>(leave);
      if (leave_upper) flip_basic_row(r);
      pivot(r, e);
    }
    ++iterations_;
    if (++since_refactor_ >= refactor_every_) reinvert();
  }
}

void Simplex::drive_out_artificials() {
  for (std::size_t r = 0; r < m_; ++r) {
    if (!artificial_[basis_[r]]) continue;
    const double* pr = row(r);
    long best = -1;
    double best_mag = 1e-7;
    for (std::size_t j = 0; j < ncols_; ++j) {
      if (artificial_[j] || basic_row_[j] >= 0) continue;
      if (std::abs(pr[j]) > best_mag) {
        best_mag = std::abs(pr[j]);
        best = static_cast<long>(j);
      }
    }
    if (best >= 0) {
      rhs(r) = 0.0;
      pivot(r, static_cast<std::size_t>(best));
    }
  }
  for (std::size_t j = 0; j < ncols_; ++j)
    if (artificial_[j]) upper_[j] = 0.0;
}

void Simplex::internal_values(Vector& v) const {
  v.assign(ncols_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) v[basis_[i]] = row(i)[ncols_];
  for (std::size_t j = 0; j < ncols_; ++j)
    if (flipped_[j]) v[j] = upper_[j] - v[j];
}

Vector Simplex::original_point(const Vector& internal) const {
  Vector x(maps_.size());
  for (std::size_t j = 0; j < maps_.size(); ++j) {
    double v = maps_[j].offset;
    for (int k = 0; k < 2; ++k)
      if (maps_[j].col[k] >= 0) v += maps_[j].coef[k] * internal[maps_[j].col[k]];
    x[j] = v;
  }
  return x;
}

Solution Simplex::finish_optimal() {
  Solution sol;
  sol.iterations = iterations_;
  Vector internal;
  internal_values(internal);
  // Clamp round-off at the box.
  for (std::size_t j = 0; j < nstruct_; ++j) {
    internal[j] = std::max(internal[j], 0.0);
    if (upper_[j] < kInf) internal[j] = std::min(internal[j], upper_[j]);
  }
  sol.primal = original_point(internal);
  const Vector& x = sol.primal;
  const std::size_t nv = lp_.num_vars();

  // Duals of the minimisation form, read from the identity columns.
  Vector ymin(m_);
  const double* cost = row(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t c = id_col_[i];
    const double sigma = flipped_[c] ? -1.0 : 1.0;
    ymin[i] = -sigma * cost[c] * row_sign_[i];
  }

  double obj_min = 0.0;
  for (std::size_t j = 0; j < nv; ++j) obj_min += sense_sign_ * lp_.objective[j] * x[j];

  double primal_res = 0.0, dual_res = 0.0;
  double dual_obj_min = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const Row& r = lp_.rows[i];
    double ax = 0.0, scale = 1.0 + std::abs(r.rhs);
    for (std::size_t j = 0; j < nv; ++j) {
      ax += r.coeffs[j] * x[j];
      scale += std::abs(r.coeffs[j] * x[j]);
    }
    const double slack = ax - r.rhs;
    double viol = 0.0, sign_viol = 0.0;
    switch (r.relation) {
      case Relation::LessEqual:
        viol = std::max(slack, 0.0);
        sign_viol = std::max(ymin[i], 0.0);
        break;
      case Relation::GreaterEqual:
        viol = std::max(-slack, 0.0);
        sign_viol = std::max(-ymin[i], 0.0);
        break;
      case Relation::Equal:
        viol = std::abs(slack);
        break;
    }
    primal_res = std::max(primal_res, viol / scale);
    const double comp = r.relation == Relation::Equal ? 0.0 : std::abs(ymin[i] * slack) / scale;
    dual_res = std::max({dual_res, sign_viol, comp});
    dual_obj_min += ymin[i] * r.rhs;
  }

  for (std::size_t j = 0; j < nv; ++j) {
    const Bounds& bd = bounds_[j];
    double rc = sense_sign_ * lp_.objective[j];
    double scale = 1.0 + std::abs(lp_.objective[j]);
    for (std::size_t i = 0; i < m_; ++i) {
      rc -= ymin[i] * lp_.rows[i].coeffs[j];
      scale += std::abs(ymin[i] * lp_.rows[i].coeffs[j]);
    }
    const double btol = 1e-9 * (1.0 + std::abs(x[j]));
    const bool at_lower = std::isfinite(bd.lower) && x[j] <= bd.lower + btol;
    const bool at_upper = std::isfinite(bd.upper) && x[j] >= bd.upper - btol;
    primal_res = std::max(primal_res, std::max(bd.lower - x[j], x[j] - bd.upper) / (1.0 + std::abs(x[j])));
    double viol;
    if (at_lower && at_upper)
      viol = 0.0;
    else if (at_lower)
      viol = std::max(-rc, 0.0);
    else if (at_upper)
      viol = std::max(rc, 0.0);
    else
      viol = std::abs(rc);
    dual_res = std::max(dual_res, viol / scale);
    if (rc > 0.0 && std::isfinite(bd.lower))
      dual_obj_min += rc * bd.lower;
    else if (rc < 0.0 && std::isfinite(bd.upper))
      dual_obj_min += rc * bd.upper;
    else
      dual_obj_min += rc * x[j];
  }

  sol.duals.resize(m_);
  for (std::size_t i = 0; i < m_; ++i) sol.duals[i] = sense_sign_ * ymin[i];
  sol.objective = sense_sign_ * obj_min;
  sol.dual_objective = sense_sign_ * dual_obj_min;
  sol.primal_residual = primal_res;
  sol.dual_residual = dual_res;
  sol.duality_gap = std::abs(obj_min - dual_obj_min);

  const double gap_scale = 1.0 + std::abs(obj_min);
  const bool ok = primal_res <= opt_.certify_tol && dual_res <= opt_.certify_tol &&
                  sol.duality_gap <= opt_.certify_tol * gap_scale;
  sol.status = ok ? Status::Optimal : Status::NumericalFailure;
  return sol;
}

Solution Simplex::finish_infeasible() {
  Solution sol;
  sol.iterations = iterations_;
  const double* p1 = row(m_ + 1);
  const std::size_t nv = lp_.num_vars();
  Vector y(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t c = id_col_[i];
    const double sigma = flipped_[c] ? -1.0 : 1.0;
    const double pi = artificial_[c] ? 1.0 - sigma * p1[c] : -sigma * p1[c];
    y[i] = pi * row_sign_[i];
  }
  // Validate: max over the box of (A^T y)^T x must fall short of b^T y.
  double by = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const Relation rel = lp_.rows[i].relation;
    if (rel == Relation::LessEqual) y[i] = std::min(y[i], 0.0);
    if (rel == Relation::GreaterEqual) y[i] = std::max(y[i], 0.0);
    by += y[i] * lp_.rows[i].rhs;
    scale += std::abs(y[i] * lp_.rows[i].rhs);
  }
  double box_max = 0.0;
  bool finite = true;
  for (std::size_t j = 0; j < nv; ++j) {
    double g = 0.0, gs = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      g += y[i] * lp_.rows[i].coeffs[j];
      gs += std::abs(y[i] * lp_.rows[i].coeffs[j]);
    }
    if (std::abs(g) <= 1e-11 * (1.0 + gs)) continue;
    const Bounds& bd = bounds_[j];
    const double bnd = g > 0.0 ? bd.upper : bd.lower;
    if (!std::isfinite(bnd)) {
      finite = false;
      break;
    }
    box_max += g * bnd;
    scale += std::abs(g * bnd);
  }
  sol.farkas = std::move(y);
  sol.status = finite && box_max < by - 1e-12 * scale ? Status::Infeasible : Status::NumericalFailure;
  return sol;
}

Solution Simplex::finish_unbounded(std::size_t e) {
  Solution sol;
  sol.iterations = iterations_;
  Vector dint(ncols_, 0.0);
  dint[e] = flipped_[e] ? -1.0 : 1.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t bcol = basis_[i];
    const double a = row(i)[e];
    dint[bcol] = -(flipped_[bcol] ? -1.0 : 1.0) * a;
  }
  const std::size_t nv = lp_.num_vars();
  Vector d(nv, 0.0);
  for (std::size_t j = 0; j < nv; ++j)
    for (int k = 0; k < 2; ++k)
      if (maps_[j].col[k] >= 0) d[j] += maps_[j].coef[k] * dint[maps_[j].col[k]];

  const double dn = 1.0 + max_abs(d);
  bool ok = true;
  double cd = 0.0;
  for (std::size_t j = 0; j < nv; ++j) {
    cd += sense_sign_ * lp_.objective[j] * d[j];
    if (d[j] > 1e-9 * dn && std::isfinite(bounds_[j].upper)) ok = false;
    if (d[j] < -1e-9 * dn && std::isfinite(bounds_[j].lower)) ok = false;
  }
  for (const Row& r : lp_.rows) {
    double ad = 0.0, s = 1.0;
    for (std::size_t j = 0; j < nv; ++j) {
      ad += r.coeffs[j] * d[j];
      s += std::abs(r.coeffs[j] * d[j]);
    }
    const double t = opt_.certify_tol * s;
    if (r.relation == Relation::LessEqual && ad > t) ok = false;
    if (r.relation == Relation::GreaterEqual && ad < -t) ok = false;
    if (r.relation == Relation::Equal && std::abs(ad) > t) ok = false;
  }
  if (cd >= 0.0) ok = false;
  sol.ray = std::move(d);
  sol.status = ok ? Status::Unbounded : Status::NumericalFailure;
  return sol;
}

Solution Simplex::solve() {
  build();

  if (has_artificial_) {
    phase_one_ = true;
    const RunResult r1 = run_refined(m_ + 1);
    if (r1 == RunResult::IterationLimit) {
      Solution s;
      s.status = Status::IterationLimit;
      s.iterations = iterations_;
      return s;
    }
    double infeas = 0.0, bscale = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (artificial_[basis_[i]]) infeas += std::max(rhs(i), 0.0);
      bscale = std::max(bscale, std::abs(lp_.rows[i].rhs));
    }
    if (infeas > opt_.tol * bscale) return finish_infeasible();
    phase_one_ = false;
    drive_out_artificials();
  }

  switch (run_refined(m_)) {
    case RunResult::Optimal:
      return finish_optimal();
    case RunResult::Unbounded:
      return finish_unbounded(static_cast<std::size_t>(unbounded_col_));
    case RunResult::IterationLimit:
      break;
  }
  Solution s;
  s.status = Status::IterationLimit;
  s.iterations = iterations_;
  return s;
}

}  // namespace

Solution solve(const LinearProgram& lp, const Options& options) {
  lp.validate();
  Simplex simplex(lp, lp.bounds, options);
  return simplex.solve();
}

Solution solve(const LinearProgram& lp, std::span<const Bounds> bounds, const Options& options) {
  if (bounds.size() != lp.num_vars()) throw DimensionError("bounds length does not match variable count");
  lp.validate();
  for (const Bounds& b : bounds)
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper || b.lower == kInf || b.upper == -kInf)
      throw InvariantViolation("LP variable bounds lower <= upper");
  Simplex simplex(lp, bounds, options);
  return simplex.solve();
}

}  // namespace adjrobust::lp
