// Acceptance checks, one line per criterion.  Exit status is the number of
// failed criteria (0 when all pass).  Criterion numbers given as arguments
// restrict the run to those.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "adjrobust/adjustable.hpp"
#include "adjrobust/affine.hpp"
#include "adjrobust/analysis.hpp"
#include "adjrobust/bench.hpp"
#include "adjrobust/errors.hpp"
#include "oracles.hpp"
#include "random_programs.hpp"

using namespace adjrobust;

namespace {

using clock_type = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, spec, args...);
  return buf;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::vector<oracle::Vec> polytope_vertices(const Matrix& G, const Vector& g) {
  oracle::Mat rows = G.to_rows();
  oracle::Vec rhs = g;
  for (std::size_t i = 0; i < G.cols(); ++i) {
    oracle::Vec r(G.cols(), 0.0);
    r[i] = -1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
  return oracle::vertices(rows, rhs);
}

Outcome ratio_sweep(Distribution dist) {
  BenchConfig cfg;
  cfg.distribution = dist;
  cfg.m_list = {10};
  cfg.instances_per_size = 20;
  const auto t0 = clock_type::now();
  const BenchResult r = run_benchmark(cfg);
  const double elapsed = seconds_since(t0);
  double r_min = INFINITY;
  std::size_t ok = 0;
  for (const BenchRow& row : r.rows)
    if (row.status == RowStatus::Ok) {
      ++ok;
      r_min = std::min(r_min, *row.ratio);
    }
  const BenchSummary& s = r.summary.front();
  const bool pass = ok == 20 && elapsed < 900.0 && s.r_avg <= 1.05 && s.r_max <= 1.10 && r_min >= 1.0 - 1e-6;
  return {pass, fmt("%zu/20 solved, r_avg %.4f, r_max %.4f, r_min %.6f, %.1f s", ok, s.r_avg, s.r_max, r_min, elapsed)};
}

Outcome worst_case_family() {
  bool pass = true;
  std::string detail;
  double prev_ratio = 0.0, det_ratio_25 = 0.0;
  for (std::size_t m : {4u, 9u, 16u, 25u}) {
    const Instance inst = gen_worst_case(m, false);
    const double z_ar = solve_adjustable_vertex_oracle(inst);
    const double z_aff = solve_affine(inst).z_aff;
    const double ratio = z_aff / z_ar;
    pass = pass && std::abs(z_ar - 1.0) <= 1e-5 && z_aff >= worstcase_lower_bound(m) - 1e-6 && ratio > prev_ratio;
    detail += fmt("m=%zu ratio %.4f; ", m, ratio);
    prev_ratio = ratio;
    det_ratio_25 = ratio;
  }
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_worst_case(25, true, seed);
    ratios.push_back(solve_affine(inst).z_aff / solve_adjustable_vertex_oracle(inst));
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = (ratios[9] + ratios[10]) / 2.0;
  pass = pass && median >= 0.8 * det_ratio_25;
  detail += fmt("randomized m=25 median %.4f vs %.4f", median, 0.8 * det_ratio_25);
  return {pass, detail};
}

Outcome oracle_equivalence() {
  const auto t0 = clock_type::now();
  AdjustableOptions opt;
  opt.epsilon = 1e-3;
  double worst = 0.0;
  std::size_t bad = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t m = 3 + k % 3;
    const Instance inst = gen_iid(m, m, RandomSpec::uniform(), 1000 + k);
    const double gap = std::abs(solve_adjustable(inst, opt).z_ar - solve_adjustable_vertex_oracle(inst));
    worst = std::max(worst, gap);
    if (gap > opt.epsilon + 1e-5) ++bad;
  }
  const double elapsed = seconds_since(t0);
  return {bad == 0 && elapsed < 300.0, fmt("50 instances, max |difference| %.2e, %zu over, %.1f s", worst, bad, elapsed)};
}

Outcome affine_duality() {
  double worst = 0.0;
  for (int k = 0; k < 30; ++k) {
    const std::size_t m = 2 + k % 5;
    Instance inst;
    switch (k % 4) {
      case 0:
        inst = gen_iid(m, m, RandomSpec::uniform(), k);
        break;
      case 1:
        inst = gen_iid(m, m, RandomSpec::folded_normal(), k);
        break;
      case 2:
        inst = gen_worst_case(m, true, k);
        break;
      default:
        inst = gen_worst_case(m, false);
    }
    worst = std::max(worst, std::abs(solve_affine(inst).z_aff - solve_affine_dualized(inst).z_d_aff));
  }
  return {worst <= 1e-6, fmt("30 instances, max |z_aff - z_d_aff| %.2e", worst)};
}

Outcome simplex_w() {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Instance inst = gen_iid(2 + k % 6, 1, k % 2 ? RandomSpec::folded_normal() : RandomSpec::uniform(), 70 + k);
    worst = std::max(worst, std::abs(solve_affine(inst).z_aff - solve_adjustable_vertex_oracle(inst)));
  }
  return {worst <= 1e-6, fmt("10 single-column instances, max |z_aff - z_ar| %.2e", worst)};
}

Outcome sandwich() {
  const double eps = 2.0 * std::sqrt(std::log(50.0) / 50.0);
  const double threshold = 2.0 / (1.0 - eps);
  std::size_t within = 0;
  double kmax = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_iid(50, 50, RandomSpec::uniform(), seed);
    const double k = kappa_sandwich(inst.B, inst.d_bar, 1.0).kappa_emp;
    kmax = std::max(kmax, k);
    if (k <= threshold) ++within;
  }
  std::size_t sound = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_iid(5, 5, RandomSpec::uniform(), seed);
    const SandwichReport rep = kappa_sandwich(inst.B, inst.d_bar, 1.0);
    const double z_ar = solve_adjustable_vertex_oracle(inst);
    const double z_aff = solve_affine(inst).z_aff;
    if (rep.contains_S && z_ar <= z_aff + 1e-6 && z_aff <= rep.kappa_emp * z_ar + 1e-5) ++sound;
  }
  return {within >= 19 && sound == 20,
          fmt("m=n=50: %zu/20 with kappa <= %.4f (max %.4f); m=n=5: %zu/20 with z_ar <= z_aff <= kappa z_ar", within,
              threshold, kmax, sound)};
}

Outcome separation_mip() {
  double worst_excess = 0.0;
  std::size_t ok = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t m = 2 + k % 3;
    const Instance inst = gen_iid(m, m, k % 2 ? RandomSpec::folded_normal() : RandomSpec::uniform(), 300 + k);
    const auto hs = polytope_vertices(inst.uncertainty.h().R, inst.uncertainty.h().r);
    const auto ws = polytope_vertices(inst.B.transposed(), Vector(inst.n, inst.d_bar));
    double exact = -INFINITY;
    for (const auto& h : hs)
      for (const auto& w : ws) exact = std::max(exact, oracle::dot(h, w));
    bool both = true;
    for (const auto& [eps, f] : {std::pair{1e-3, SeparationFormulation::DemandBits},
                                 std::pair{5e-2, SeparationFormulation::BitProduct}}) {
      const Digitization dig = Digitization::make(inst, eps, f);
      const double v = maximize_bilinear(inst, Vector(inst.n, 0.0), dig).best.value;
      // Digitized maximum lies in [exact - error_bound, exact].
      const double excess = std::max(v - exact, exact - v - dig.error_bound);
      worst_excess = std::max(worst_excess, excess);
      both = both && excess <= 1e-7;
    }
    if (both) ++ok;
  }
  return {ok == 20, fmt("%zu/20 instances, demand-bit MIP (eps 1e-3) and bit-product MIP (eps 5e-2), worst excess "
                        "over eps_total %.2e",
                        ok, worst_excess)};
}

Outcome kernels() {
  std::mt19937_64 rng(9);
  std::size_t lp_ok = 0;
  for (int k = 0; k < 100; ++k) {
    const auto r = testgen::random_lp(rng);
    const auto s = lp::solve(r.lp);
    if (!s.optimal()) continue;
    oracle::Vec c = r.lp.objective;
    const double sg = r.lp.sense == lp::Sense::Maximize ? 1.0 : -1.0;
    for (double& v : c) v *= sg;
    const double best = sg * oracle::max_over(oracle::vertices(r.G, r.g), c);
    const bool gap_ok = s.duality_gap <= 1e-8 * (1.0 + std::abs(s.objective)) && s.primal_residual <= 1e-8 &&
                        s.dual_residual <= 1e-8;
    if (gap_ok && std::abs(s.objective - best) <= 1e-6 * (1.0 + std::abs(best))) ++lp_ok;
  }
  std::mt19937_64 gen(21);
  std::size_t mip_ok = 0;
  for (int k = 0; k < 50; ++k) {
    const auto p = testgen::random_program(gen, 3 + k % 10, k % 3);
    const auto expected = testgen::exhaustive(p);
    const auto s = mip::solve(p);
    if (!expected) {
      if (s.status == mip::Status::Infeasible) ++mip_ok;
    } else if (s.status == mip::Status::Optimal && std::abs(s.objective - *expected) <= 1e-6 * (1.0 + std::abs(*expected))) {
      ++mip_ok;
    }
  }
  return {lp_ok == 100 && mip_ok == 50, fmt("LP %zu/100, MIP %zu/50", lp_ok, mip_ok)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"ratio sweep uniform, m=10", [] { return ratio_sweep(Distribution::Uniform01); }},
      {"ratio sweep folded normal, m=10", [] { return ratio_sweep(Distribution::FoldedNormal); }},
      {"worst-case family", worst_case_family},
      {"cutting plane vs vertex oracle", oracle_equivalence},
      {"primal vs dualized affine", affine_duality},
      {"affine optimal for a simplex W", simplex_w},
      {"sandwich statistics", sandwich},
      {"separation MIP vs brute force", separation_mip},
      {"solver kernels", kernels},
  };
  int failed = 0;
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "no criterion %s\n", argv[a]);
      return 100;
    }
    selected[k - 1] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
