#include <atomic>
#include <cstdlib>
#include <string>

#include "fracmax/error.hpp"
#include "fracmax/simd.hpp"

namespace fracmax::simd {
namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(FRACMAX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(FRACMAX_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_of(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_table;
    case Isa::avx2:
#if defined(FRACMAX_HAVE_AVX2)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(FRACMAX_HAVE_NEON)
      return &detail::neon_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("FRACMAX_ISA")) {
    if (auto isa = parse_isa(env))
      if (auto* t = kernels_for(*isa)) return t;
  }
  return kernels_for(detect_isa());
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

Isa detect_isa() {
  if (kernels_for(Isa::avx2)) return Isa::avx2;
  if (kernels_for(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable* kernels_for(Isa isa) {
  const KernelTable* t = table_of(isa);
  return (t && cpu_has(isa)) ? t : nullptr;
}

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

void set_isa(std::optional<Isa> isa) {
  const KernelTable* t = kernels_for(isa.value_or(detect_isa()));
  if (!t) throw Error("instruction set '" + std::string(isa_name(*isa)) + "' is not available");
  active().store(t);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  return std::nullopt;
}

}  // namespace fracmax::simd
