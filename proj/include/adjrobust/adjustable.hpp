#pragma once

// Exact adjustable optimum z_AR.
//
// z_AR = min_{x >= 0} c^T x + max_{h in U, w in W} (h - A x)^T w, with
// W = {w >= 0 : B^T w <= d}.  The inner bilinear maximum is the separation
// problem.  For an H-represented U it is solved as a binary MIP after
// digitizing the variables; for a vertex list it is one LP over W per
// vertex.  The outer minimum is a cutting-plane loop over the cuts
// z >= (h_k - A x)^T w_k.
//
// Digitization.  h_i is written as sum_{k=-Delta_U}^{s} alpha_ik 2^-k, so
// place values run from 2^Delta_U down to 2^-s.  Rounding an optimal pair
// down to the grid keeps it feasible (R >= 0, B >= 0) and loses at most
//   DemandBits:  2^-s * max_{w in W} sum_i w_i
//   BitProduct:  2^-s * (max_{w in W} sum_i w_i + max_{h in U} sum_i h_i)
// in the objective, and s is the smallest integer that brings this below
// epsilon.  Every MIP solution is itself a feasible pair whose objective is
// exactly (h - A x)^T w, so the digitized maximum lies in [max - epsilon, max].
//
// Formulations.  BitProduct digitizes both h and w and linearizes the bit
// products gamma_ijk = alpha_ik beta_ij.  DemandBits digitizes h only and
// linearizes alpha_ik w_i with g_ik <= w_i, g_ik <= wmax_i alpha_ik, which is
// exact for binary alpha.

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "adjrobust/instance.hpp"
#include "adjrobust/mip.hpp"

namespace adjrobust {

enum class SeparationFormulation { BitProduct, DemandBits };

struct Digitization {
  SeparationFormulation formulation = SeparationFormulation::DemandBits;
  double epsilon = 1e-3;
  int s = 0;
  int delta_u = 0;  // 2^delta_u >= max_{h in U} h_i for all i
  int delta_w = 0;  // 2^delta_w >= max_{w in W} w_i for all i
  Vector h_max;     // per-coordinate maxima over U
  Vector w_max;     // per-coordinate maxima over W
  double sum_h_max = 0.0;
  double sum_w_max = 0.0;
  // Guaranteed objective error of the digitized maximum, <= epsilon.
  double error_bound = 0.0;

  // Throws UnboundedSetError when W is unbounded and CapExceededError when
  // the formulation would need more than max_binaries binaries.
  static Digitization make(const Instance& inst, double epsilon,
                           SeparationFormulation f = SeparationFormulation::DemandBits,
                           std::size_t max_binaries = 20000);

  int h_bits() const { return delta_u + s + 1; }
  int w_bits() const { return delta_w + s + 1; }
};

// Variable layout of a separation MIP.
struct SeparationLayout {
  std::size_t h = 0;      // m continuous
  std::size_t w = 0;      // m continuous
  std::size_t alpha = 0;  // m * h_bits binaries, row-major (i, k)
  std::size_t beta = 0;   // m * w_bits binaries (BitProduct only)
  std::size_t prod = 0;   // products: m * w_bits * h_bits (BitProduct) or m * h_bits (DemandBits)
};

struct SeparationMip {
  mip::MixedBinaryProgram program;
  SeparationLayout layout;
};

SeparationMip build_separation_mip(const Instance& inst, const Vector& x_hat, const Digitization& dig);

struct Cut {
  Vector h;
  Vector w;
  // (h - A x_hat)^T w at the x_hat the cut was separated for.
  double value = 0.0;
};

struct SeparationOptions {
  // 0 picks epsilon / 10.
  double mip_tol = 0.0;
  std::size_t node_limit = 1'000'000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  // Branch on the highest place value first.  Off means plain
  // most-fractional branching.
  bool significance_branching = true;
};

struct SeparationResult {
  Cut best;             // maximizing pair found
  double bound = 0.0;   // upper bound on the digitized maximum
  mip::Status status = mip::Status::Optimal;
  std::size_t nodes = 0;
};

// Maximizes (h - A x_hat)^T w over U x W.  H-represented U goes through the
// MIP; a vertex list is solved exactly vertex by vertex and dig is unused.
// Throws LimitReached on node or time limits.
SeparationResult maximize_bilinear(const Instance& inst, const Vector& x_hat, const Digitization& dig,
                                   const SeparationOptions& options = {});

// Returns the maximizing pair when its value exceeds z_hat + sep_tol, where
// sep_tol = 10 * mip_tol.
std::optional<Cut> separate(const Instance& inst, const Vector& x_hat, double z_hat, const Digitization& dig,
                            const SeparationOptions& options = {});

struct AdjustableOptions {
  double epsilon = 1e-3;
  std::size_t max_iterations = 200;
  SeparationFormulation formulation = SeparationFormulation::DemandBits;
  SeparationOptions separation;
  double time_limit_s = std::numeric_limits<double>::infinity();
};

struct AdjustableResult {
  double z_ar = 0.0;
  Vector x;
  std::vector<Cut> cuts;
  std::size_t iterations = 0;
  // Master objective after each iteration; non-decreasing.
  std::vector<double> master_history;
};

// Cutting-plane loop.  The master is min c^T x + z over x >= 0 and the
// cuts, plus the cut of w = 0 (z >= 0), which keeps it bounded.  The first
// cut comes from separating at x = 0.  z_ar is the final master value; the
// optimum lies within epsilon + sep_tol above it.  Throws CuttingPlaneStall
// with the bracket [master value, master value + last violation] when a cut
// repeats or the iterations run out, and LimitReached on the time limit.
AdjustableResult solve_adjustable(const Instance& inst, const AdjustableOptions& options = {});

// A = 0 and c = 0: one separation at x = 0 is the whole answer.
double adjustable_special_case(const Instance& inst, const AdjustableOptions& options = {});

// One LP over the vertices of U: min c^T x + z, z >= d^T y_v,
// A x + B y_v >= h_v, y_v >= 0.  Throws CapExceededError when U is
// H-represented with m > cap.
double solve_adjustable_vertex_oracle(const Instance& inst, std::size_t cap = kDefaultVertexCap);

std::string cuts_to_json(const std::vector<Cut>& cuts);
std::vector<Cut> cuts_from_json(std::string_view text);

}  // namespace adjrobust
