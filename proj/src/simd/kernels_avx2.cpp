#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "fracmax/simd.hpp"

namespace fracmax::simd {
namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline double combine_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void euclidean_row(const double* soa, std::size_t stride, std::size_t dim, std::size_t n,
                   const double* q, double* out) {
  const std::size_t n4 = n - n % 4;
  for (std::size_t j = 0; j < n4; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(q[k]), _mm256_loadu_pd(soa + k * stride + j));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + j, _mm256_sqrt_pd(acc));
  }
  for (std::size_t j = n4; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = q[k] - soa[k * stride + j];
      acc = acc + diff * diff;
    }
    out[j] = std::sqrt(acc);
  }
}

void chebyshev_row(const double* soa, std::size_t stride, std::size_t dim, std::size_t n,
                   const double* q, double* out) {
  const std::size_t n4 = n - n % 4;
  for (std::size_t j = 0; j < n4; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d diff =
          abs_pd(_mm256_sub_pd(_mm256_set1_pd(q[k]), _mm256_loadu_pd(soa + k * stride + j)));
      acc = _mm256_max_pd(diff, acc);
    }
    _mm256_storeu_pd(out + j, acc);
  }
  for (std::size_t j = n4; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = std::fabs(q[k] - soa[k * stride + j]);
      acc = diff > acc ? diff : acc;
    }
    out[j] = acc;
  }
}

// Lane-wise running maximum with first-index tie breaking.
struct LaneMax {
  __m256d value = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256i index = _mm256_set1_epi64x(-1);

  void update(__m256d r, std::size_t j) {
    const __m256d gt = _mm256_cmp_pd(r, value, _CMP_GT_OQ);
    const __m256i idx = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(j)),
                                         _mm256_set_epi64x(3, 2, 1, 0));
    value = _mm256_blendv_pd(value, r, gt);
    index = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(index), _mm256_castsi256_pd(idx), gt));
  }

  RowMax reduce() const {
    alignas(32) double v[4];
    alignas(32) std::int64_t ix[4];
    _mm256_store_pd(v, value);
    _mm256_store_si256(reinterpret_cast<__m256i*>(ix), index);
    RowMax best{-std::numeric_limits<double>::infinity(), npos};
    for (int l = 0; l < 4; ++l) {
      if (ix[l] < 0) continue;
      const auto i = static_cast<std::size_t>(ix[l]);
      if (v[l] > best.value || (v[l] == best.value && i < best.index)) best = {v[l], i};
    }
    return best;
  }
};

RowMax ratio_row_max(double ui, const double* u, const double* den, std::size_t n) {
  const std::size_t n4 = n - n % 4;
  const __m256d vui = _mm256_set1_pd(ui);
  const __m256d zero = _mm256_setzero_pd();
  LaneMax lanes;
  for (std::size_t j = 0; j < n4; j += 4) {
    const __m256d num = abs_pd(_mm256_sub_pd(vui, _mm256_loadu_pd(u + j)));
    const __m256d r = _mm256_div_pd(num, _mm256_loadu_pd(den + j));
    lanes.update(_mm256_blendv_pd(r, zero, _mm256_cmp_pd(num, zero, _CMP_EQ_OQ)), j);
  }
  RowMax best = lanes.reduce();
  for (std::size_t j = n4; j < n; ++j) {
    const double num = std::fabs(ui - u[j]);
    const double r = num == 0.0 ? 0.0 : num / den[j];
    if (r > best.value) best = {r, j};
  }
  return best;
}

RowMax gradient_row_max(double ui, double gi, const double* u, const double* g,
                        const double* dpow, std::size_t n) {
  const std::size_t n4 = n - n % 4;
  const __m256d vui = _mm256_set1_pd(ui);
  const __m256d vgi = _mm256_set1_pd(gi);
  const __m256d zero = _mm256_setzero_pd();
  LaneMax lanes;
  for (std::size_t j = 0; j < n4; j += 4) {
    const __m256d num = abs_pd(_mm256_sub_pd(vui, _mm256_loadu_pd(u + j)));
    const __m256d den =
        _mm256_mul_pd(_mm256_loadu_pd(dpow + j), _mm256_add_pd(vgi, _mm256_loadu_pd(g + j)));
    const __m256d r = _mm256_div_pd(num, den);
    lanes.update(_mm256_blendv_pd(r, zero, _mm256_cmp_pd(num, zero, _CMP_EQ_OQ)), j);
  }
  RowMax best = lanes.reduce();
  for (std::size_t j = n4; j < n; ++j) {
    const double num = std::fabs(ui - u[j]);
    const double r = num == 0.0 ? 0.0 : num / (dpow[j] * (gi + g[j]));
    if (r > best.value) best = {r, j};
  }
  return best;
}

double weighted_abs_dev(const double* w, const double* u, std::size_t n, double c) {
  const std::size_t n4 = n - n % 4;
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t j = 0; j < n4; j += 4) {
    const __m256d dev = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(u + j), vc));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + j), dev));
  }
  double total = combine_lanes(acc);
  for (std::size_t j = n4; j < n; ++j) total = total + w[j] * std::fabs(u[j] - c);
  return total;
}

double weighted_sq_dev(const double* w, const double* u, std::size_t n, double c) {
  const std::size_t n4 = n - n % 4;
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t j = 0; j < n4; j += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u + j), vc);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + j), _mm256_mul_pd(d, d)));
  }
  double total = combine_lanes(acc);
  for (std::size_t j = n4; j < n; ++j) {
    const double d = u[j] - c;
    total = total + w[j] * (d * d);
  }
  return total;
}

void envelope_update(const double* a, const double* b, std::size_t ns, const double* slopes,
                     std::size_t nd, double* env, std::size_t* arg, std::size_t base) {
  const std::size_t nd4 = nd - nd % 4;
  for (std::size_t s = 0; s < ns; ++s) {
    const __m256d va = _mm256_set1_pd(a[s]);
    const __m256d vb = _mm256_set1_pd(b[s]);
    const __m256i vs = _mm256_set1_epi64x(static_cast<long long>(base + s));
    for (std::size_t k = 0; k < nd4; k += 4) {
      const __m256d v = _mm256_sub_pd(va, _mm256_mul_pd(_mm256_loadu_pd(slopes + k), vb));
      const __m256d cur = _mm256_loadu_pd(env + k);
      const __m256d gt = _mm256_cmp_pd(v, cur, _CMP_GT_OQ);
      _mm256_storeu_pd(env + k, _mm256_blendv_pd(cur, v, gt));
      auto* argp = reinterpret_cast<__m256i*>(arg + k);
      const __m256d old = _mm256_castsi256_pd(_mm256_loadu_si256(argp));
      _mm256_storeu_si256(argp, _mm256_castpd_si256(_mm256_blendv_pd(old, _mm256_castsi256_pd(vs), gt)));
    }
    for (std::size_t k = nd4; k < nd; ++k) {
      const double v = a[s] - slopes[k] * b[s];
      if (v > env[k]) {
        env[k] = v;
        arg[k] = base + s;
      }
    }
  }
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Isa::avx2,       euclidean_row,    chebyshev_row,
                             ratio_row_max,   gradient_row_max, weighted_abs_dev,
                             weighted_sq_dev, envelope_update};
}  // namespace detail

}  // namespace fracmax::simd
