#include <arm_neon.h>

#include "adjrobust/kernels.hpp"

namespace adjrobust::kernels {
namespace {

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // vmulq + vaddq rather than vfmaq: rounding must match the scalar loop.
    float64x2_t yv = vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i)));
    vst1q_f64(y + i, yv);
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void scale_neon(double a, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vmulq_f64(va, vld1q_f64(y + i)));
  }
  for (; i < n; ++i) {
    y[i] *= a;
  }
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    s += x[i] * y[i];
  }
  return s;
}

void axpy_indexed_neon(double a, const double* x, double* y, const std::size_t* idx,
                       std::size_t nnz) {
  for (std::size_t k = 0; k < nnz; ++k) {
    y[idx[k]] += a * x[idx[k]];
  }
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{Isa::Neon, axpy_neon, scale_neon, dot_neon, axpy_indexed_neon};
  return &table;
}

}  // namespace adjrobust::kernels
