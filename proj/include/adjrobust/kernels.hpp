#pragma once

// Data-parallel inner loops of the dense simplex.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant.  The variant is
// picked once at runtime from the CPU feature flags; setting the environment
// variable ADJROBUST_SIMD=scalar forces the reference path.
//
// axpy and scale perform one IEEE multiply and one add per element in every
// variant, so they are bit-identical across variants.  dot reassociates the
// sum and only agrees up to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace adjrobust::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] *= a
  void (*scale)(double a, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[idx[k]] += a * x[idx[k]]
  void (*axpy_indexed)(double a, const double* x, double* y, const std::size_t* idx,
                       std::size_t nnz);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Table chosen at first use.
const KernelTable& active();

std::string_view isa_name(Isa isa);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}
inline void scale(double a, std::span<double> y) { active().scale(a, y.data(), y.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

}  // namespace adjrobust::kernels
