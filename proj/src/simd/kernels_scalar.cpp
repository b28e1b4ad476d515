#include <cmath>
#include <limits>

#include "fracmax/simd.hpp"

namespace fracmax::simd {
namespace {

void euclidean_row(const double* soa, std::size_t stride, std::size_t dim, std::size_t n,
                   const double* q, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
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
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = std::fabs(q[k] - soa[k * stride + j]);
      acc = diff > acc ? diff : acc;
    }
    out[j] = acc;
  }
}

RowMax ratio_row_max(double ui, const double* u, const double* den, std::size_t n) {
  RowMax best{-std::numeric_limits<double>::infinity(), npos};
  for (std::size_t j = 0; j < n; ++j) {
    const double num = std::fabs(ui - u[j]);
    const double r = num == 0.0 ? 0.0 : num / den[j];
    if (r > best.value) best = {r, j};
  }
  return best;
}

RowMax gradient_row_max(double ui, double gi, const double* u, const double* g,
                        const double* dpow, std::size_t n) {
  RowMax best{-std::numeric_limits<double>::infinity(), npos};
  for (std::size_t j = 0; j < n; ++j) {
    const double num = std::fabs(ui - u[j]);
    const double r = num == 0.0 ? 0.0 : num / (dpow[j] * (gi + g[j]));
    if (r > best.value) best = {r, j};
  }
  return best;
}

double weighted_abs_dev(const double* w, const double* u, std::size_t n, double c) {
  const std::size_t n4 = n - n % 4;
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < n4; j += 4)
    for (std::size_t l = 0; l < 4; ++l) lane[l] = lane[l] + w[j + l] * std::fabs(u[j + l] - c);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t j = n4; j < n; ++j) total = total + w[j] * std::fabs(u[j] - c);
  return total;
}

double weighted_sq_dev(const double* w, const double* u, std::size_t n, double c) {
  const std::size_t n4 = n - n % 4;
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < n4; j += 4)
    for (std::size_t l = 0; l < 4; ++l) {
      const double d = u[j + l] - c;
      lane[l] = lane[l] + w[j + l] * (d * d);
    }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t j = n4; j < n; ++j) {
    const double d = u[j] - c;
    total = total + w[j] * (d * d);
  }
  return total;
}

void envelope_update(const double* a, const double* b, std::size_t ns, const double* slopes,
                     std::size_t nd, double* env, std::size_t* arg, std::size_t base) {
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t k = 0; k < nd; ++k) {
      const double v = a[s] - slopes[k] * b[s];
      if (v > env[k]) {
        env[k] = v;
        arg[k] = base + s;
      }
    }
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Isa::scalar,      euclidean_row,    chebyshev_row,
                               ratio_row_max,    gradient_row_max, weighted_abs_dev,
                               weighted_sq_dev,  envelope_update};
}  // namespace detail

}  // namespace fracmax::simd
