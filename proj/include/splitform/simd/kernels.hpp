#pragma once

// Dense double-precision kernels used by the simplex tableau and the model
// evaluators. Each kernel has a scalar reference and an AVX2 variant; the
// variant is chosen once at startup from CPUID and can be forced with the
// SPLITFORM_SIMD environment variable ("scalar" or "avx2").
//
// axpy and scale produce bit-identical results on every path (no fused
// multiply-add anywhere). dot reassociates the sum and only agrees with the
// scalar reference to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace splitform::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] *= a
  void (*scale)(double a, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SPLITFORM_HAVE_AVX2_KERNELS 1
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
}  // namespace avx2
#else
#define SPLITFORM_HAVE_AVX2_KERNELS 0
#endif

bool cpu_supports(Isa isa);
const KernelTable& table_for(Isa isa);

// The table selected for this process.
const KernelTable& kernels();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  kernels().axpy(a, x.data(), y.data(), y.size());
}
inline void scale(double a, std::span<double> y) {
  kernels().scale(a, y.data(), y.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return kernels().dot(x.data(), y.data(), x.size());
}

}  // namespace splitform::simd
