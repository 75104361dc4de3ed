#include "adjrobust/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>

#include "adjrobust/errors.hpp"

namespace adjrobust::mip {

void MixedBinaryProgram::make_binary(std::size_t j) {
  if (j >= lp.num_vars()) throw DimensionError("binary index out of range");
  lp.bounds[j] = {0.0, 1.0};
  if (std::find(binaries.begin(), binaries.end(), j) == binaries.end()) binaries.push_back(j);
}

void MixedBinaryProgram::validate() const {
  lp.validate();
  std::vector<std::uint8_t> seen(lp.num_vars(), 0);
  for (std::size_t j : binaries) {
    if (j >= lp.num_vars()) throw InvariantViolation("binary indices valid");
    if (seen[j]++) throw InvariantViolation("binary indices distinct");
    if (lp.bounds[j].lower != 0.0 || lp.bounds[j].upper != 1.0)
      throw InvariantViolation("binary variables bounded to [0,1]");
  }
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::NodeLimit:
      return "node-limit";
    case Status::TimeLimit:
      return "time-limit";
  }
  return "unknown";
}

namespace {

struct Node {
  std::vector<std::int8_t> fix;  // per binary: -1 free, else the fixed value
  double bound;                  // internal (maximisation) bound inherited from the parent
  std::size_t id;
};

struct WorseFirst {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MixedBinaryProgram& prob, const Options& opt)
      : prob_(prob), opt_(opt), sign_(prob.lp.sense == lp::Sense::Maximize ? 1.0 : -1.0) {}

  Solution run();

 private:
  lp::Solution relax(const std::vector<std::int8_t>& fix);
  bool improves(double v) const {
    return !sol_.has_incumbent || v > best_ + opt_.mip_tol * (1.0 + std::abs(best_));
  }
  void try_incumbent(const lp::Solution& relaxed);
  double open_bound() const;
  void finish(Status status);

  const MixedBinaryProgram& prob_;
  Options opt_;
  double sign_;
  double best_ = -lp::kInf;  // internal value of the incumbent
  std::vector<Node> dive_;
  std::priority_queue<Node, std::vector<Node>, WorseFirst> heap_;
  std::size_t next_id_ = 0;
  std::vector<lp::Bounds> bounds_;
  Solution sol_;
};

lp::Solution BranchAndBound::relax(const std::vector<std::int8_t>& fix) {
  bounds_ = prob_.lp.bounds;
  for (std::size_t b = 0; b < fix.size(); ++b)
    if (fix[b] >= 0) bounds_[prob_.binaries[b]] = {double(fix[b]), double(fix[b])};
  lp::Solution s = lp::solve(prob_.lp, bounds_, opt_.lp);
  sol_.lp_iterations += s.iterations;
  if (s.status == lp::Status::Unbounded) throw SolverError("MIP relaxation unbounded");
  if (s.status == lp::Status::NumericalFailure || s.status == lp::Status::IterationLimit)
    throw SolverError("MIP node relaxation: LP " + std::string(lp::to_string(s.status)));
  return s;
}

void BranchAndBound::try_incumbent(const lp::Solution& relaxed) {
  std::vector<std::int8_t> fix(prob_.binaries.size());
  for (std::size_t b = 0; b < fix.size(); ++b) fix[b] = relaxed.primal[prob_.binaries[b]] >= 0.5 ? 1 : 0;
  const lp::Solution exact = relax(fix);
  if (!exact.optimal()) return;
  const double v = sign_ * exact.objective;
  if (sol_.has_incumbent && v <= best_) return;
  best_ = v;
  sol_.has_incumbent = true;
  sol_.incumbent = exact.primal;
  for (std::size_t b = 0; b < fix.size(); ++b) sol_.incumbent[prob_.binaries[b]] = fix[b];
}

double BranchAndBound::open_bound() const {
  double b = heap_.empty() ? -lp::kInf : heap_.top().bound;
  for (const Node& n : dive_) b = std::max(b, n.bound);
  return std::max(b, best_);
}

void BranchAndBound::finish(Status status) {
  sol_.status = status;
  const double bound = open_bound();
  sol_.bound = sign_ * bound;
  sol_.objective = sol_.has_incumbent ? sign_ * best_ : 0.0;
  sol_.gap = sol_.has_incumbent ? std::abs(best_ - bound) / (1.0 + std::abs(best_)) : lp::kInf;
}

Solution BranchAndBound::run() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  dive_.push_back({std::vector<std::int8_t>(prob_.binaries.size(), -1), lp::kInf, next_id_++});

  while (!dive_.empty() || !heap_.empty()) {
    if (sol_.nodes >= opt_.node_limit) {
      finish(Status::NodeLimit);
      return sol_;
    }
    if (std::chrono::duration<double>(clock::now() - start).count() > opt_.time_limit_s) {
      finish(Status::TimeLimit);
      return sol_;
    }
    Node node;
    if (!dive_.empty()) {
      node = std::move(dive_.back());
      dive_.pop_back();
    } else {
      node = heap_.top();
      heap_.pop();
    }
    if (!improves(node.bound)) continue;

    ++sol_.nodes;
    const lp::Solution s = relax(node.fix);
    if (s.status == lp::Status::Optimal) {
      const double v = std::min(sign_ * s.objective, node.bound);
      if (improves(v)) {
        long branch = -1;
        double best_frac = 0.0;
        int best_prio = 0;
        for (std::size_t b = 0; b < prob_.binaries.size(); ++b) {
          if (node.fix[b] >= 0) continue;
          const double x = s.primal[prob_.binaries[b]];
          const double frac = std::min(x, 1.0 - x);
          if (frac <= opt_.integrality_tol) continue;
          const int prio = opt_.priority.empty() ? 0 : opt_.priority[b];
          if (branch < 0 || prio > best_prio || (prio == best_prio && frac > best_frac)) {
            best_frac = frac;
            best_prio = prio;
            branch = static_cast<long>(b);
          }
        }
        if (branch < 0) {
          const bool had = sol_.has_incumbent;
          try_incumbent(s);
          if (!had && sol_.has_incumbent) {
            for (Node& n : dive_) heap_.push(std::move(n));
            dive_.clear();
          }
        } else {
          const std::size_t b = static_cast<std::size_t>(branch);
          Node down{node.fix, v, next_id_++};
          Node up{std::move(node.fix), v, next_id_++};
          down.fix[b] = 0;
          up.fix[b] = 1;
          if (!sol_.has_incumbent) {
            const bool up_first = s.primal[prob_.binaries[b]] >= 0.5;
            dive_.push_back(up_first ? std::move(down) : std::move(up));
            dive_.push_back(up_first ? std::move(up) : std::move(down));
          } else {
            heap_.push(std::move(down));
            heap_.push(std::move(up));
          }
        }
      }
    }
    if (opt_.record_bounds) sol_.bound_history.push_back(sign_ * open_bound());
    if (sol_.has_incumbent && !improves(open_bound())) break;
  }
  finish(sol_.has_incumbent ? Status::Optimal : Status::Infeasible);
  return sol_;
}

}  // namespace

Solution solve(const MixedBinaryProgram& prob, const Options& options) {
  prob.validate();
  BranchAndBound bb(prob, options);
  return bb.run();
}

}  // namespace adjrobust::mip
