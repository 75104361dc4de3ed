// adjrobust command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 solver failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adjrobust/adjustable.hpp"
#include "adjrobust/affine.hpp"
#include "adjrobust/analysis.hpp"
#include "adjrobust/bench.hpp"
#include "adjrobust/errors.hpp"

using namespace adjrobust;

namespace {

constexpr int kUsage = 1;
constexpr int kSolver = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RandomSpec iid_spec(Distribution d, double p) {
  switch (d) {
    case Distribution::Uniform01:
      return RandomSpec::uniform();
    case Distribution::Bernoulli:
      return RandomSpec::bernoulli(p);
    case Distribution::FoldedNormal:
      return RandomSpec::folded_normal();
    default:
      throw UsageError("distribution " + std::string(to_string(d)) + " has no i.i.d. entry law");
  }
}

struct Common {
  std::string dist = "uniform";
  double p = 0.5;
};

void add_dist(CLI::App* app, Common& c) {
  app->add_option("--dist", c.dist, "uniform | bernoulli | folded-normal | worst-case | worst-case-random")
      ->capture_default_str();
  app->add_option("--p", c.p, "Bernoulli success probability")->capture_default_str();
}

Instance load(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("no instance document at " + path);
  return read_instance(path);
}

void print_sandwich(const SandwichReport& r) {
  std::printf("kappa_emp %.10g\ninner_radius %.10g\ncontains_S %s\nsimplex_sum_max %.10g\nb %.10g%s\n", r.kappa_emp,
              r.inner_radius, r.contains_S ? "true" : "false", r.simplex_sum_max, r.b,
              r.b_empirical ? " (empirical)" : "");
  if (r.predicted_bound) std::printf("predicted_bound %.10g\n", *r.predicted_bound);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjustable robust covering LPs: affine policies, exact optimum, ratio sweeps"};
  app.require_subcommand(1);

  Common gen_c;
  std::size_t gen_m = 0, gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a random instance document");
  add_dist(gen, gen_c);
  gen->add_option("--m", gen_m, "rows")->required();
  gen->add_option("--n", gen_n, "columns (default m)");
  gen->add_option("--seed", gen_seed, "instance seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output file (default stdout)");

  std::string aff_in, aff_policy;
  auto* aff = app.add_subcommand("solve-affine", "Optimal affine policy for an instance document");
  aff->add_option("instance", aff_in, "instance document")->required();
  aff->add_option("--policy-out", aff_policy, "write the policy document here");

  std::string ar_in, ar_method = "auto";
  double ar_eps = 1e-3, ar_time = 600.0;
  auto* ar = app.add_subcommand("solve-adjustable", "Exact adjustable optimum for an instance document");
  ar->add_option("instance", ar_in, "instance document")->required();
  ar->add_option("--eps", ar_eps, "separation accuracy")->capture_default_str();
  ar->add_option("--time-limit", ar_time, "seconds")->capture_default_str();
  ar->add_option("--method", ar_method, "auto | cutting-plane | vertex")
      ->check(CLI::IsMember({"auto", "cutting-plane", "vertex"}))
      ->capture_default_str();

  std::string sw_in;
  std::optional<double> sw_b;
  auto* sw = app.add_subcommand("sandwich", "Simplex sandwich factor of an instance's dualized set");
  sw->add_option("instance", sw_in, "instance document")->required();
  sw->add_option("--b", sw_b, "entry bound (default: largest entry of B)");

  Common bd_c;
  std::size_t bd_m = 0, bd_n = 0;
  auto* bd = app.add_subcommand("bounds", "Closed-form ratio bounds");
  add_dist(bd, bd_c);
  bd->add_option("--m", bd_m, "rows")->required();
  bd->add_option("--n", bd_n, "columns (default m)");

  Common bn_c;
  BenchConfig cfg;
  std::string bn_out;
  std::optional<std::uint64_t> bn_seed;
  auto* bn = app.add_subcommand("bench", "Ratio sweep z_aff / z_ar, written as CSV");
  add_dist(bn, bn_c);
  bn->add_option("--m", cfg.m_list, "sizes (repeatable)")->required();
  bn->add_option("--n", cfg.n_list, "columns per size (default n = m)");
  bn->add_option("--count", cfg.instances_per_size, "instances per size")->capture_default_str();
  bn->add_option("--eps", cfg.eps, "separation accuracy")->capture_default_str();
  bn->add_option("--time-limit", cfg.time_limit_s, "seconds per adjustable solve")->capture_default_str();
  bn->add_option("--seed", bn_seed, "seed of the first instance (ADJROBUST_SEED overrides)");
  bn->add_option("--jobs", cfg.jobs, "parallel rows")->capture_default_str();
  bn->add_option("--out", bn_out, "CSV file (default stdout)");

  std::vector<std::size_t> wc_m{4, 9, 16, 25};
  auto* wc = app.add_subcommand("worst-case", "z_ar, z_aff and the lower bound on the worst-case family");
  wc->add_option("--m", wc_m, "sizes (repeatable)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) {
      const Distribution d = parse_distribution(gen_c.dist);
      const std::size_t n = gen_n ? gen_n : gen_m;
      Instance inst;
      if (d == Distribution::WorstCaseDeterministic || d == Distribution::WorstCaseRandom) {
        if (gen_n && gen_n != gen_m) throw UsageError("the worst-case family has n = m");
        inst = gen_worst_case(gen_m, d == Distribution::WorstCaseRandom, gen_seed);
      } else {
        inst = gen_iid(gen_m, n, iid_spec(d, gen_c.p), gen_seed);
      }
      if (gen_out.empty())
        std::cout << instance_to_json(inst) << '\n';
      else
        write_instance(inst, gen_out);
    } else if (*aff) {
      const Instance inst = load(aff_in);
      const auto t0 = std::chrono::steady_clock::now();
      const AffinePolicy p = solve_affine(inst);
      std::printf("z_aff %.17g\ntime_s %.6f\n", p.z_aff, seconds_since(t0));
      if (!aff_policy.empty()) {
        std::ofstream out(aff_policy);
        out << policy_to_json(p) << '\n';
        if (!out) throw Error("cannot write " + aff_policy);
      }
    } else if (*ar) {
      const Instance inst = load(ar_in);
      AdjustableOptions opt;
      opt.epsilon = ar_eps;
      opt.time_limit_s = ar_time;
      const auto t0 = std::chrono::steady_clock::now();
      double z = 0.0;
      const bool special =
          inst.A.all_zero() && std::all_of(inst.c.begin(), inst.c.end(), [](double c) { return c == 0.0; });
      if (ar_method == "vertex")
        z = solve_adjustable_vertex_oracle(inst);
      else if (ar_method == "auto" && special)
        z = adjustable_special_case(inst, opt);
      else
        z = solve_adjustable(inst, opt).z_ar;
      std::printf("z_ar %.17g\ntime_s %.6f\n", z, seconds_since(t0));
    } else if (*sw) {
      const Instance inst = load(sw_in);
      print_sandwich(sw_b ? kappa_sandwich(inst.B, inst.d_bar, *sw_b) : kappa_sandwich_empirical(inst.B, inst.d_bar));
    } else if (*bd) {
      const Distribution d = parse_distribution(bd_c.dist);
      const std::size_t n = bd_n ? bd_n : bd_m;
      if (d == Distribution::Uniform01 || d == Distribution::Bernoulli) {
        const RandomSpec s = iid_spec(d, bd_c.p);
        const BoundReport r = theorem1_bound(s.b, s.mu, bd_m, n);
        std::printf("epsilon %.6g\ntau %.6g\n", r.epsilon, r.tau);
        if (r.regime_valid)
          std::printf("ratio_bound %.6g\n", r.ratio_bound);
        else
          std::printf("ratio_bound none (epsilon >= 1)\n");
      } else if (d == Distribution::FoldedNormal) {
        std::printf("ratio_bound %.6g\n", theorem2_bound(bd_m, n));
      } else {
        std::printf("affine_lower_bound %.6g\nadjustable_upper_bound 1\n", worstcase_lower_bound(bd_m));
      }
    } else if (*bn) {
      cfg.distribution = parse_distribution(bn_c.dist);
      cfg.bernoulli_p = bn_c.p;
      if (bn_seed) cfg.seed_base = *bn_seed;
      apply_environment(cfg);
      if (!bn_out.empty()) cfg.output_path = bn_out;
      const BenchResult res = run_benchmark(cfg);
      if (bn_out.empty())
        write_csv(std::cout, res);
      else
        std::cout << format_summary(res.summary);
      for (const BenchRow& r : res.rows)
        if (r.status == RowStatus::Failed)
          std::cerr << "m=" << r.m << " seed=" << r.seed << ": " << r.message << '\n';
    } else if (*wc) {
      std::printf("m,z_ar,z_aff,ratio,lower_bound\n");
      for (std::size_t m : wc_m) {
        const Instance inst = gen_worst_case(m, false);
        const double z_ar = solve_adjustable_vertex_oracle(inst);
        const double z_aff = solve_affine(inst).z_aff;
        std::printf("%zu,%.10f,%.10f,%.10f,%.10f\n", m, z_ar, z_aff, z_aff / z_ar,
                    m >= 2 ? worstcase_lower_bound(m) : 0.0);
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
  return 0;
}
