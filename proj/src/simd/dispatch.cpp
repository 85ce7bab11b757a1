#include <cstdlib>
#include <string>

#include "splitform/simd/kernels.hpp"

namespace splitform::simd {
namespace {

constexpr KernelTable kScalarTable{&scalar::axpy, &scalar::scale,
                                   &scalar::dot};
#if SPLITFORM_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table{&avx2::axpy, &avx2::scale, &avx2::dot};
#endif

Isa detect() {
  if (const char* forced = std::getenv("SPLITFORM_SIMD")) {
    const std::string want(forced);
    if (want == "scalar") return Isa::kScalar;
    if (want == "avx2" && cpu_supports(Isa::kAvx2)) return Isa::kAvx2;
  }
  if (cpu_supports(Isa::kAvx2)) return Isa::kAvx2;
  return Isa::kScalar;
}

}  // namespace

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if SPLITFORM_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
#if SPLITFORM_HAVE_AVX2_KERNELS
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& kernels() {
  static const KernelTable& table = table_for(active_isa());
  return table;
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

}  // namespace splitform::simd
