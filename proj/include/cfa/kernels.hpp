#pragma once

#include <cstddef>
#include <span>
#include <string_view>

/// Arithmetic inner loops shared by fusion, diversity and the built-in
/// scorers. Each kernel has a scalar reference implementation and, on x86-64,
/// an AVX2 variant. The active table is chosen once at startup: AVX2 when the
/// CPU supports it, unless CFA_KERNELS=scalar is set in the environment.
namespace cfa::kernels {

struct KernelTable {
  std::string_view name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // acc[i] += w * x[i], evaluated as one multiply then one add per element
  void (*scaled_add)(double* acc, const double* x, double w, std::size_t n);
  // x[i] /= d
  void (*divide)(double* x, double d, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 table was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

const KernelTable& active_table() noexcept;

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
void scaled_add(std::span<double> acc, std::span<const double> x, double w);
void divide(std::span<double> x, double d);

}  // namespace cfa::kernels
