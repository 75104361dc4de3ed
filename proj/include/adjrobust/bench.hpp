#pragma once

// Ratio sweeps: for each size m and instance index k, generate with seed
// seed_base + k, solve the affine and adjustable problems, and record
// z_aff / z_ar with timings.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adjrobust/instance.hpp"

namespace adjrobust {

struct BenchConfig {
  Distribution distribution = Distribution::Uniform01;
  double bernoulli_p = 0.5;
  std::vector<std::size_t> m_list{10};
  // Empty means n = m; otherwise one entry per m.
  std::vector<std::size_t> n_list;
  std::size_t instances_per_size = 20;
  double eps = 1e-3;
  double time_limit_s = 600.0;
  std::uint64_t seed_base = 0;
  std::optional<std::filesystem::path> output_path;
  std::size_t jobs = 1;

  // Throws InvariantViolation.
  void validate() const;
  std::size_t n_for(std::size_t index) const;
};

// Overrides seed_base from ADJROBUST_SEED when it is set.  Throws
// ParseError on a malformed value.
void apply_environment(BenchConfig& config);

// Instance for row (m, n, seed) of a sweep.
Instance bench_instance(const BenchConfig& config, std::size_t m, std::size_t n, std::uint64_t seed);

enum class RowStatus { Ok, Timeout, Failed };

struct BenchRow {
  std::size_t m = 0, n = 0;
  std::uint64_t seed = 0;
  std::optional<double> z_aff;
  std::optional<double> z_ar;
  std::optional<double> ratio;  // 0/0 counts as 1
  double t_aff_s = 0.0;
  double t_ar_s = 0.0;
  RowStatus status = RowStatus::Ok;
  std::string message;  // solver error text for Failed rows
};

struct BenchSummary {
  std::size_t m = 0;
  std::size_t rows = 0;
  std::size_t completed = 0;
  std::size_t timeouts = 0;
  double r_avg = 0.0;
  double r_max = 0.0;
  double t_ar_avg_s = 0.0;
  double t_aff_avg_s = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;
};

BenchRow run_row(const BenchConfig& config, std::size_t m, std::size_t n, std::uint64_t seed);
// Same, for an instance built elsewhere; seed is only recorded.
BenchRow run_row(const BenchConfig& config, const Instance& inst, std::uint64_t seed);
// Per-row solver failures are recorded in the row.  Writes the CSV when
// output_path is set.
BenchResult run_benchmark(const BenchConfig& config);

std::string to_string(RowStatus s);
// Header m,n,seed,z_aff,z_ar,ratio,t_aff_s,t_ar_s,status, one line per row,
// then a blank line and the summary block as '#' lines.  Summary cells are
// "**" for any m with a timed-out row.
void write_csv(std::ostream& out, const BenchResult& result);
std::string format_summary(const std::vector<BenchSummary>& summary);

}  // namespace adjrobust
