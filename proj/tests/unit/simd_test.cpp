#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "splitform/simd/kernels.hpp"

using namespace splitform;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels match the obvious loops") {
  std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  simd::scalar::axpy(2.0, x.data(), y.data(), 3);
  CHECK(y == std::vector<double>{6, 9, 12});
  simd::scalar::scale(0.5, y.data(), 3);
  CHECK(y == std::vector<double>{3, 4.5, 6});
  CHECK(simd::scalar::dot(x.data(), y.data(), 3) == doctest::Approx(30.0));
  CHECK(simd::scalar::dot(x.data(), y.data(), 0) == 0.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!simd::cpu_supports(simd::Isa::kAvx2)) {
    MESSAGE("cpu lacks avx2; equivalence not exercised");
    return;
  }
  const auto& ref = simd::table_for(simd::Isa::kScalar);
  const auto& vec = simd::table_for(simd::Isa::kAvx2);
  std::mt19937_64 rng(7);
  // Lengths around the vector width and offsets that break alignment.
  for (std::size_t n = 0; n <= 67; ++n) {
    for (std::size_t off = 0; off < 3; ++off) {
      const auto xs = random_vector(rng, n + off);
      const auto ys = random_vector(rng, n + off);
      const double a = std::uniform_real_distribution<double>(-3, 3)(rng);

      auto y1 = ys, y2 = ys;
      ref.axpy(a, xs.data() + off, y1.data() + off, n);
      vec.axpy(a, xs.data() + off, y2.data() + off, n);
      CHECK(same_bits(y1, y2));

      y1 = ys;
      y2 = ys;
      ref.scale(a, y1.data() + off, n);
      vec.scale(a, y2.data() + off, n);
      CHECK(same_bits(y1, y2));

      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        mag += std::abs(xs[off + i] * ys[off + i]);
      const double d1 = ref.dot(xs.data() + off, ys.data() + off, n);
      const double d2 = vec.dot(xs.data() + off, ys.data() + off, n);
      CHECK(std::abs(d1 - d2) <= 1e-14 * (1.0 + mag));
    }
  }
}

TEST_CASE("dispatch reports a supported isa") {
  CHECK(simd::cpu_supports(simd::Isa::kScalar));
  CHECK(simd::cpu_supports(simd::active_isa()));
  CHECK(!simd::isa_name(simd::active_isa()).empty());
}
