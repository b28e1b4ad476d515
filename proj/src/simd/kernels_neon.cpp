#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "fracmax/simd.hpp"

// Four logical lanes are carried as two float64x2_t halves so the
// reduction order matches the scalar reference.

namespace fracmax::simd {
namespace {

void euclidean_row(const double* soa, std::size_t stride, std::size_t dim, std::size_t n,
                   const double* q, double* out) {
  const std::size_t n2 = n - n % 2;
  for (std::size_t j = 0; j < n2; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const float64x2_t diff = vsubq_f64(vdupq_n_f64(q[k]), vld1q_f64(soa + k * stride + j));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    vst1q_f64(out + j, vsqrtq_f64(acc));
  }
  for (std::size_t j = n2; j < n; ++j) {
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
  const std::size_t n2 = n - n % 2;
  for (std::size_t j = 0; j < n2; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const float64x2_t diff =
          vabsq_f64(vsubq_f64(vdupq_n_f64(q[k]), vld1q_f64(soa + k * stride + j)));
      acc = vbslq_f64(vcgtq_f64(diff, acc), diff, acc);
    }
    vst1q_f64(out + j, acc);
  }
  for (std::size_t j = n2; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = std::fabs(q[k] - soa[k * stride + j]);
      acc = diff > acc ? diff : acc;
    }
    out[j] = acc;
  }
}

// The row maxima are order independent (max value, then smallest index),
// so a two-lane sweep reproduces the sequential scan.
template <class Ratio>
RowMax row_max(std::size_t n, Ratio ratio) {
  RowMax best{-std::numeric_limits<double>::infinity(), npos};
  const std::size_t n2 = n - n % 2;
  float64x2_t value = vdupq_n_f64(-std::numeric_limits<double>::infinity());
  uint64x2_t index = vdupq_n_u64(npos);
  for (std::size_t j = 0; j < n2; j += 2) {
    const float64x2_t r = ratio(j);
    const uint64x2_t gt = vcgtq_f64(r, value);
    const uint64_t lanes[2] = {j, j + 1};
    value = vbslq_f64(gt, r, value);
    index = vbslq_u64(gt, vld1q_u64(lanes), index);
  }
  for (int l = 0; l < 2; ++l) {
    const double v = l == 0 ? vgetq_lane_f64(value, 0) : vgetq_lane_f64(value, 1);
    const std::size_t i = l == 0 ? vgetq_lane_u64(index, 0) : vgetq_lane_u64(index, 1);
    if (i == npos) continue;
    if (v > best.value || (v == best.value && i < best.index)) best = {v, i};
  }
  return best;
}

RowMax ratio_row_max(double ui, const double* u, const double* den, std::size_t n) {
  const float64x2_t vui = vdupq_n_f64(ui);
  const float64x2_t zero = vdupq_n_f64(0.0);
  RowMax best = row_max(n, [&](std::size_t j) {
    const float64x2_t num = vabsq_f64(vsubq_f64(vui, vld1q_f64(u + j)));
    const float64x2_t r = vdivq_f64(num, vld1q_f64(den + j));
    return vbslq_f64(vceqq_f64(num, zero), zero, r);
  });
  for (std::size_t j = n - n % 2; j < n; ++j) {
    const double num = std::fabs(ui - u[j]);
    const double r = num == 0.0 ? 0.0 : num / den[j];
    if (r > best.value) best = {r, j};
  }
  return best;
}

RowMax gradient_row_max(double ui, double gi, const double* u, const double* g,
                        const double* dpow, std::size_t n) {
  const float64x2_t vui = vdupq_n_f64(ui);
  const float64x2_t vgi = vdupq_n_f64(gi);
  const float64x2_t zero = vdupq_n_f64(0.0);
  RowMax best = row_max(n, [&](std::size_t j) {
    const float64x2_t num = vabsq_f64(vsubq_f64(vui, vld1q_f64(u + j)));
    const float64x2_t den = vmulq_f64(vld1q_f64(dpow + j), vaddq_f64(vgi, vld1q_f64(g + j)));
    return vbslq_f64(vceqq_f64(num, zero), zero, vdivq_f64(num, den));
  });
  for (std::size_t j = n - n % 2; j < n; ++j) {
    const double num = std::fabs(ui - u[j]);
    const double r = num == 0.0 ? 0.0 : num / (dpow[j] * (gi + g[j]));
    if (r > best.value) best = {r, j};
  }
  return best;
}

double weighted_abs_dev(const double* w, const double* u, std::size_t n, double c) {
  const std::size_t n4 = n - n % 4;
  const float64x2_t vc = vdupq_n_f64(c);
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t j = 0; j < n4; j += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(w + j), vabsq_f64(vsubq_f64(vld1q_f64(u + j), vc))));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(w + j + 2),
                                 vabsq_f64(vsubq_f64(vld1q_f64(u + j + 2), vc))));
  }
  double total = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
                 (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (std::size_t j = n4; j < n; ++j) total = total + w[j] * std::fabs(u[j] - c);
  return total;
}

double weighted_sq_dev(const double* w, const double* u, std::size_t n, double c) {
  const std::size_t n4 = n - n % 4;
  const float64x2_t vc = vdupq_n_f64(c);
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t j = 0; j < n4; j += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(u + j), vc);
    const float64x2_t d1 = vsubq_f64(vld1q_f64(u + j + 2), vc);
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(w + j), vmulq_f64(d0, d0)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(w + j + 2), vmulq_f64(d1, d1)));
  }
  double total = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
                 (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (std::size_t j = n4; j < n; ++j) {
    const double d = u[j] - c;
    total = total + w[j] * (d * d);
  }
  return total;
}

void envelope_update(const double* a, const double* b, std::size_t ns, const double* slopes,
                     std::size_t nd, double* env, std::size_t* arg, std::size_t base) {
  const std::size_t nd2 = nd - nd % 2;
  for (std::size_t s = 0; s < ns; ++s) {
    const float64x2_t va = vdupq_n_f64(a[s]);
    const float64x2_t vb = vdupq_n_f64(b[s]);
    const uint64x2_t vs = vdupq_n_u64(base + s);
    for (std::size_t k = 0; k < nd2; k += 2) {
      const float64x2_t v = vsubq_f64(va, vmulq_f64(vld1q_f64(slopes + k), vb));
      const float64x2_t cur = vld1q_f64(env + k);
      const uint64x2_t gt = vcgtq_f64(v, cur);
      vst1q_f64(env + k, vbslq_f64(gt, v, cur));
      auto* argp = reinterpret_cast<uint64_t*>(arg + k);
      vst1q_u64(argp, vbslq_u64(gt, vs, vld1q_u64(argp)));
    }
    for (std::size_t k = nd2; k < nd; ++k) {
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
const KernelTable neon_table{Isa::neon,       euclidean_row,    chebyshev_row,
                             ratio_row_max,   gradient_row_max, weighted_abs_dev,
                             weighted_sq_dev, envelope_update};
}  // namespace detail

}  // namespace fracmax::simd
