#pragma once

// Problem data for
//
//   min  c^T x + max_{h in U} min_{y(h)} d^T y(h)
//   s.t. A x + B y(h) >= h,  y(h) >= 0  for all h in U,  x >= 0,
//
// with d = d_bar e, plus the random generators used in experiments.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "adjrobust/matrix.hpp"
#include "adjrobust/uncertainty.hpp"

namespace adjrobust {

struct Instance {
  std::size_t m = 0;
  std::size_t n = 0;
  double d_bar = 1.0;
  Vector c;
  Matrix A;
  Matrix B;
  UncertaintySet uncertainty;
  std::optional<std::uint64_t> seed;

  Vector d() const { return Vector(n, d_bar); }
  // Throws InvariantViolation naming the first failed invariant.
  void validate() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class Distribution { Uniform01, Bernoulli, FoldedNormal, WorstCaseRandom, WorstCaseDeterministic };

std::string_view to_string(Distribution d);
// Accepts "uniform", "bernoulli", "folded-normal", "worst-case-random",
// "worst-case".  Throws ParseError.
Distribution parse_distribution(std::string_view name);

struct RandomSpec {
  Distribution kind = Distribution::Uniform01;
  double p = 0.5;
  // Support bound; infinity for the folded normal.
  double b = 1.0;
  double mu = 0.5;

  static RandomSpec uniform();
  // Throws InvariantViolation unless 0 < p < 1.
  static RandomSpec bernoulli(double p);
  static RandomSpec folded_normal();
};

// A = 0, c = 0, d_bar = 1, U = budget_set(m), B i.i.d. drawn from `spec`, entry
// (i, j) drawn from substream i * n + j of seed.
Instance gen_iid(std::size_t m, std::size_t n, const RandomSpec& spec, std::uint64_t seed);

// n = m, B_ii = 1, B_ij = 1/sqrt(m) off the diagonal, or u_ij/sqrt(m) with
// u_ij uniform on substream i * m + j when randomized.  U is the hull of
// {0, e_i, (e - e_i)/sqrt(m)}; for m = 1 the duplicate origin is dropped.
Instance gen_worst_case(std::size_t m, bool randomized, std::uint64_t seed = 0);

// JSON documents.  read_instance throws ParseError for malformed or
// incomplete documents and InvariantViolation for well-formed but invalid
// data.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(std::string_view text);
void write_instance(const Instance& inst, const std::filesystem::path& path);
Instance read_instance(const std::filesystem::path& path);

}  // namespace adjrobust
