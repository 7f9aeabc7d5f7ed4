#include "cfa/kernels.hpp"

#include <cstdlib>
#include <string_view>

#include "cfa/error.hpp"
#include "kernels_internal.hpp"

namespace cfa::kernels {

namespace {

[[maybe_unused]] bool cpu_has_avx2() noexcept {
#if defined(CFA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select_table() noexcept {
  const char* forced = std::getenv("CFA_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") {
    return scalar_table();
  }
  if (const KernelTable* simd = avx2_table()) {
    return *simd;
  }
  return scalar_table();
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw NumericError("kernels: operand length mismatch (" + std::to_string(a) + " vs " +
                       std::to_string(b) + ")");
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_table() noexcept {
#ifdef CFA_HAVE_AVX2
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_table() noexcept {
  static const KernelTable& table = select_table();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return active_table().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return active_table().squared_distance(a.data(), b.data(), a.size());
}

void scaled_add(std::span<double> acc, std::span<const double> x, double w) {
  require_same_size(acc.size(), x.size());
  active_table().scaled_add(acc.data(), x.data(), w, acc.size());
}

void divide(std::span<double> x, double d) { active_table().divide(x.data(), d, x.size()); }

}  // namespace cfa::kernels
