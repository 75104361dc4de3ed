#include "adjrobust/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "adjrobust/adjustable.hpp"
#include "adjrobust/affine.hpp"
#include "adjrobust/errors.hpp"

namespace adjrobust {

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); }

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Shortest text that reads back to the same double.
std::string exact(double v) { return fmt("%.17g", v); }

std::vector<BenchSummary> summarize(const BenchConfig& config, const std::vector<BenchRow>& rows) {
  std::vector<BenchSummary> out;
  for (std::size_t m : config.m_list) {
    BenchSummary s;
    s.m = m;
    for (const BenchRow& r : rows) {
      if (r.m != m) continue;
      ++s.rows;
      if (r.status == RowStatus::Timeout) ++s.timeouts;
      if (r.status != RowStatus::Ok) continue;
      ++s.completed;
      s.r_avg += *r.ratio;
      s.r_max = std::max(s.r_max, *r.ratio);
      s.t_ar_avg_s += r.t_ar_s;
      s.t_aff_avg_s += r.t_aff_s;
    }
    if (s.completed > 0) {
      s.r_avg /= static_cast<double>(s.completed);
      s.t_ar_avg_s /= static_cast<double>(s.completed);
      s.t_aff_avg_s /= static_cast<double>(s.completed);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

void BenchConfig::validate() const {
  if (instances_per_size < 1) throw InvariantViolation("instances_per_size >= 1");
  if (!(eps > 0.0)) throw InvariantViolation("eps > 0");
  if (!(time_limit_s > 0.0)) throw InvariantViolation("time_limit_s > 0");
  if (m_list.empty()) throw InvariantViolation("m_list nonempty");
  if (!n_list.empty() && n_list.size() != m_list.size()) throw InvariantViolation("one n per m");
  for (std::size_t m : m_list)
    if (m == 0) throw InvariantViolation("m >= 1");
  for (std::size_t n : n_list)
    if (n == 0) throw InvariantViolation("n >= 1");
  if (distribution == Distribution::Bernoulli && !(bernoulli_p > 0.0 && bernoulli_p < 1.0))
    throw InvariantViolation("Bernoulli p in (0,1)");
  if (jobs < 1) throw InvariantViolation("jobs >= 1");
}

std::size_t BenchConfig::n_for(std::size_t index) const { return n_list.empty() ? m_list[index] : n_list[index]; }

void apply_environment(BenchConfig& config) {
  const char* v = std::getenv("ADJROBUST_SEED");
  if (!v) return;
  char* end = nullptr;
  errno = 0;
  const unsigned long long seed = std::strtoull(v, &end, 10);
  if (*v == '\0' || *end != '\0' || *v == '-' || errno != 0)
    throw ParseError(std::string("ADJROBUST_SEED is not an unsigned integer: \"") + v + "\"");
  config.seed_base = seed;
}

Instance bench_instance(const BenchConfig& config, std::size_t m, std::size_t n, std::uint64_t seed) {
  switch (config.distribution) {
    case Distribution::Uniform01:
      return gen_iid(m, n, RandomSpec::uniform(), seed);
    case Distribution::Bernoulli:
      return gen_iid(m, n, RandomSpec::bernoulli(config.bernoulli_p), seed);
    case Distribution::FoldedNormal:
      return gen_iid(m, n, RandomSpec::folded_normal(), seed);
    case Distribution::WorstCaseRandom:
      return gen_worst_case(m, true, seed);
    case Distribution::WorstCaseDeterministic:
      return gen_worst_case(m, false);
  }
  throw InvariantViolation("known distribution");
}

BenchRow run_row(const BenchConfig& config, std::size_t m, std::size_t n, std::uint64_t seed) {
  Instance inst;
  try {
    inst = bench_instance(config, m, n, seed);
  } catch (const Error& e) {
    BenchRow row;
    row.m = m;
    row.n = n;
    row.seed = seed;
    row.status = RowStatus::Failed;
    row.message = e.what();
    return row;
  }
  return run_row(config, inst, seed);
}

BenchRow run_row(const BenchConfig& config, const Instance& inst, std::uint64_t seed) {
  BenchRow row;
  row.m = inst.m;
  row.n = inst.n;
  row.seed = seed;
  try {
    auto t0 = clock::now();
    row.z_aff = solve_affine(inst).z_aff;
    row.t_aff_s = seconds_since(t0);

    AdjustableOptions opt;
    opt.epsilon = config.eps;
    opt.time_limit_s = config.time_limit_s;
    t0 = clock::now();
    const bool special = inst.A.all_zero() && std::all_of(inst.c.begin(), inst.c.end(), [](double c) { return c == 0.0; });
    row.z_ar = special ? adjustable_special_case(inst, opt) : solve_adjustable(inst, opt).z_ar;
    row.t_ar_s = seconds_since(t0);
    row.ratio = *row.z_ar == 0.0 && *row.z_aff == 0.0 ? 1.0 : *row.z_aff / *row.z_ar;
  } catch (const LimitReached& e) {
    row.status = RowStatus::Timeout;
    row.t_ar_s = config.time_limit_s;
    row.message = e.what();
  } catch (const Error& e) {
    row.status = RowStatus::Failed;
    row.message = e.what();
  }
  return row;
}

BenchResult run_benchmark(const BenchConfig& config) {
  config.validate();
  struct Task {
    std::size_t m, n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < config.m_list.size(); ++i)
    for (std::size_t k = 0; k < config.instances_per_size; ++k)
      tasks.push_back({config.m_list[i], config.n_for(i), config.seed_base + k});

  BenchResult result;
  result.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();)
      result.rows[t] = run_row(config, tasks[t].m, tasks[t].n, tasks[t].seed);
  };
  const std::size_t jobs = std::min(config.jobs, tasks.size());
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  result.summary = summarize(config, result.rows);
  if (config.output_path) {
    std::ofstream out(*config.output_path, std::ios::binary);
    if (!out) throw Error("cannot open " + config.output_path->string() + " for writing");
    write_csv(out, result);
    if (!out) throw Error("write to " + config.output_path->string() + " failed");
  }
  return result;
}

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok:
      return "ok";
    case RowStatus::Timeout:
      return "timeout";
    case RowStatus::Failed:
      return "failed";
  }
  return "?";
}

void write_csv(std::ostream& out, const BenchResult& result) {
  out << "m,n,seed,z_aff,z_ar,ratio,t_aff_s,t_ar_s,status\n";
  auto opt = [](const std::optional<double>& v) { return v ? exact(*v) : std::string(); };
  for (const BenchRow& r : result.rows)
    out << r.m << ',' << r.n << ',' << r.seed << ',' << opt(r.z_aff) << ',' << opt(r.z_ar) << ',' << opt(r.ratio)
        << ',' << fmt("%.6f", r.t_aff_s) << ',' << fmt("%.6f", r.t_ar_s) << ',' << to_string(r.status) << '\n';
  out << '\n';
  std::istringstream summary(format_summary(result.summary));
  for (std::string line; std::getline(summary, line);) out << "# " << line << '\n';
}

std::string format_summary(const std::vector<BenchSummary>& summary) {
  std::ostringstream out;
  out << "m,rows,completed,r_avg,r_max,t_ar_s,t_aff_s\n";
  for (const BenchSummary& s : summary) {
    out << s.m << ',' << s.rows << ',' << s.completed << ',';
    if (s.timeouts > 0 || s.completed == 0) {
      out << "**,**,**," << fmt("%.3f", s.t_aff_avg_s) << '\n';
    } else {
      out << fmt("%.4f", s.r_avg) << ',' << fmt("%.4f", s.r_max) << ',' << fmt("%.3f", s.t_ar_avg_s) << ','
          << fmt("%.3f", s.t_aff_avg_s) << '\n';
    }
  }
  return out.str();
}

}  // namespace adjrobust
