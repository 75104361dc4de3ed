#include "adjrobust/kernels.hpp"

namespace adjrobust::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += a * x[i];
  }
}

void scale_scalar(double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] *= a;
  }
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += x[i] * y[i];
  }
  return s;
}

void axpy_indexed_scalar(double a, const double* x, double* y, const std::size_t* idx,
                         std::size_t nnz) {
  for (std::size_t k = 0; k < nnz; ++k) {
    y[idx[k]] += a * x[idx[k]];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, axpy_scalar, scale_scalar, dot_scalar,
                                 axpy_indexed_scalar};
  return table;
}

}  // namespace adjrobust::kernels
