#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "fracmax/maxop.hpp"
#include "fracmax/space.hpp"

namespace fracmax::testing {

// Random coordinate space with weights in [0.5, 2]. Lattice spaces snap
// coordinates to multiples of 1/4 so many distances tie; duplicates are
// dropped, so n may come out below the request.
inline MetricMeasureSpace random_space(std::mt19937_64& rng, std::size_t n, bool lattice) {
  std::uniform_int_distribution<int> dim_d(1, 3);
  std::bernoulli_distribution cheb(0.5);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  const std::size_t dim = static_cast<std::size_t>(dim_d(rng));
  const MetricKind kind = cheb(rng) ? MetricKind::chebyshev : MetricKind::euclidean;
  std::set<std::vector<double>> seen;
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    for (double& c : p) c = lattice ? std::round(coord(rng) * 4.0) / 4.0 : coord(rng);
    if (!seen.insert(p).second) continue;
    pts.push_back(std::move(p));
    w.push_back(weight(rng));
  }
  std::uniform_real_distribution<double> cap(0.5, 4.0);
  return build_coordinate_space(std::move(pts), kind, std::move(w), cap(rng));
}

inline ScalarField random_field(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarField u(n);
  for (double& v : u) v = d(rng);
  return u;
}

inline bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i])))) return false;
  return true;
}

inline bool same_maxfield(const MaxField& a, const MaxField& b) {
  return same_bits(a.values, b.values) && same_bits(a.argmax_radius, b.argmax_radius) &&
         a.argmax_center == b.argmax_center && a.truncated == b.truncated;
}

}  // namespace fracmax::testing
