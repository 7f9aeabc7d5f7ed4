#include "kernels_internal.hpp"

namespace cfa::kernels::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += a[i] * b[i];
  }
  return sum;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void scaled_add_scalar(double* acc, const double* x, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] += w * x[i];
  }
}

void divide_scalar(double* x, double d, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] /= d;
  }
}

}  // namespace

const KernelTable kScalarTable{
    "scalar", dot_scalar, squared_distance_scalar, scaled_add_scalar, divide_scalar};

}  // namespace cfa::kernels::detail
