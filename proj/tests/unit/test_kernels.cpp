#include <cstring>
#include <random>
#include <vector>

#include "cfa/error.hpp"
#include "cfa/kernels.hpp"
#include "doctest.h"

using namespace cfa;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels compute the textbook results") {
  const auto& k = kernels::scalar_table();
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, -5, 6};
  CHECK(k.dot(a.data(), b.data(), 3) == 12.0);
  CHECK(k.squared_distance(a.data(), b.data(), 3) == 9.0 + 49.0 + 9.0);
  std::vector<double> acc{1, 1, 1};
  k.scaled_add(acc.data(), a.data(), 2.0, 3);
  CHECK(acc == std::vector<double>{3, 5, 7});
  k.divide(acc.data(), 2.0, 3);
  CHECK(acc == std::vector<double>{1.5, 2.5, 3.5});
  CHECK(k.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("span wrappers reject length mismatches") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{1, 2};
  CHECK_THROWS_AS(kernels::dot(a, b), NumericError);
  CHECK_THROWS_AS(kernels::squared_distance(a, b), NumericError);
  std::vector<double> acc(2);
  CHECK_THROWS_AS(kernels::scaled_add(acc, a, 1.0), NumericError);
}

TEST_CASE("active table is scalar or avx2") {
  const auto name = kernels::active_table().name;
  CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const auto* avx = kernels::avx2_table();
  if (avx == nullptr) {
    MESSAGE("avx2 kernels unavailable on this build or CPU; skipping");
    return;
  }
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n <= 67; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto a = random_vector(rng, n);
      const auto b = random_vector(rng, n);
      const double w = std::uniform_real_distribution<double>(-3, 3)(rng);

      // Elementwise kernels do the same operation per lane, so bits match.
      auto acc_ref = random_vector(rng, n);
      auto acc_avx = acc_ref;
      ref.scaled_add(acc_ref.data(), a.data(), w, n);
      avx->scaled_add(acc_avx.data(), a.data(), w, n);
      CHECK(bitwise_equal(acc_ref, acc_avx));
      ref.divide(acc_ref.data(), 3.7, n);
      avx->divide(acc_avx.data(), 3.7, n);
      CHECK(bitwise_equal(acc_ref, acc_avx));

      // Reductions only differ in summation order.
      double scale = 1.0;
      for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]) + (a[i] - b[i]) * (a[i] - b[i]);
      CHECK(std::abs(ref.dot(a.data(), b.data(), n) - avx->dot(a.data(), b.data(), n)) <=
            1e-13 * scale);
      CHECK(std::abs(ref.squared_distance(a.data(), b.data(), n) -
                     avx->squared_distance(a.data(), b.data(), n)) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("avx2 kernels handle unaligned starts") {
  const auto* avx = kernels::avx2_table();
  if (avx == nullptr) return;
  std::mt19937_64 rng(11);
  const auto a = random_vector(rng, 40);
  const auto b = random_vector(rng, 40);
  for (std::size_t off = 0; off < 4; ++off) {
    const std::size_t n = 40 - off;
    const double r = kernels::scalar_table().squared_distance(a.data() + off, b.data() + off, n);
    const double v = avx->squared_distance(a.data() + off, b.data() + off, n);
    CHECK(v == doctest::Approx(r).epsilon(1e-13));
  }
}
