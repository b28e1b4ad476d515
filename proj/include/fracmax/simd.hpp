#pragma once

// Data-parallel inner loops shared by every module. Each kernel has a
// scalar reference in kernels_scalar.cpp; vector variants must reproduce it
// bit for bit. Reductions therefore use a fixed 4-lane accumulation order:
// element j goes to lane j % 4 for j < n - n % 4, lanes combine as
// (l0 + l1) + (l2 + l3), and the tail is added left to right.

#include <cstddef>
#include <optional>
#include <string_view>

namespace fracmax::simd {

enum class Isa { scalar, avx2, neon };

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct RowMax {
  double value;
  std::size_t index;  // first index attaining value; npos for empty input
};

struct KernelTable {
  Isa isa;

  // out[j] = distance from q to point j; coordinates are stored
  // structure-of-arrays, coordinate k of point j at soa[k * stride + j].
  void (*euclidean_row)(const double* soa, std::size_t stride, std::size_t dim,
                        std::size_t n, const double* q, double* out);
  void (*chebyshev_row)(const double* soa, std::size_t stride, std::size_t dim,
                        std::size_t n, const double* q, double* out);

  // max_j |ui - u[j]| / den[j], with 0/0 read as 0.
  RowMax (*ratio_row_max)(double ui, const double* u, const double* den, std::size_t n);

  // max_j |ui - u[j]| / (dpow[j] * (gi + g[j])), with 0/0 read as 0.
  RowMax (*gradient_row_max)(double ui, double gi, const double* u, const double* g,
                             const double* dpow, std::size_t n);

  // sum_j w[j] * |u[j] - c| and sum_j w[j] * (u[j] - c)^2.
  double (*weighted_abs_dev)(const double* w, const double* u, std::size_t n, double c);
  double (*weighted_sq_dev)(const double* w, const double* u, std::size_t n, double c);

  // For each sample s (in order) and slope k: v = a[s] - slopes[k] * b[s];
  // if v > env[k] then env[k] = v, arg[k] = base + s.
  void (*envelope_update)(const double* a, const double* b, std::size_t ns,
                          const double* slopes, std::size_t nd, double* env,
                          std::size_t* arg, std::size_t base);
};

// Best ISA the running CPU supports among those compiled in.
Isa detect_isa();

// Table for a specific ISA, or nullptr when it is not compiled in or the
// CPU lacks it.
const KernelTable* kernels_for(Isa isa);

// Active table: the override if one is set (FRACMAX_ISA env var or
// set_isa), otherwise detect_isa().
const KernelTable& kernels();

// Throws fracmax::Error when the requested ISA is unavailable.
void set_isa(std::optional<Isa> isa);

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

namespace detail {
extern const KernelTable scalar_table;
#if defined(FRACMAX_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(FRACMAX_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace fracmax::simd
