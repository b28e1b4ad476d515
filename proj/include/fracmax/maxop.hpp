#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fracmax/space.hpp"

namespace fracmax {

/// Fractional maximal function sampled at every point, with the ball that
/// attains each supremum. truncated[x] is set when that ball has the cap
/// radius, i.e. the supremum may be an artifact of the finite sample.
struct MaxField {
  ScalarField values;
  std::vector<double> argmax_radius;
  std::vector<PointId> argmax_center;
  std::vector<std::uint8_t> truncated;
  double alpha = 0.0;
  bool noncentered = false;
};

/// Cumulative mass and cumulative weighted field along a center's order.
struct FieldProfile {
  PointId center = 0;
  std::vector<double> radii;
  std::vector<double> cum_mass;
  std::vector<double> cum_field;
};

FieldProfile field_profile(const MetricMeasureSpace& space, std::span<const double> u, PointId x);

/// Average of u over the open ball B(center, r); throws on an empty ball.
double ball_average(const FieldProfile& profile, double r);
double ball_average(const MetricMeasureSpace& space, std::span<const double> u, PointId x, double r);

/// r^alpha times the average of |u| over B(x, r).
double scaled_average(const MetricMeasureSpace& space, std::span<const double> u, PointId x,
                      double r, double alpha);

MaxField frac_maximal(const MetricMeasureSpace& space, std::span<const double> u, double alpha);

enum class NoncenteredKernel {
  suffix_max,  // per-center suffix maxima, O(n m) memory
  low_memory,  // recompute every center per query point, O(n^3) time
};

MaxField frac_maximal_noncentered(const MetricMeasureSpace& space, std::span<const double> u,
                                  double alpha,
                                  NoncenteredKernel kernel = NoncenteredKernel::suffix_max);

/// Reference evaluation: for every (x, center, radius) triple the ball is
/// summed from scratch. Rejects spaces above `limit` points.
MaxField frac_maximal_bruteforce(const MetricMeasureSpace& space, std::span<const double> u,
                                 double alpha, bool noncentered, std::size_t limit = 500);

struct ProbeValue {
  double value = 0.0;
  double radius = 0.0;
  PointId center = 0;  // attaining center (noncentered); unused otherwise
  bool truncated = false;
};

/// Maximal function at a location of the underlying continuum that need not
/// be a sample point (coordinate spaces). Balls are B(location, r) restricted
/// to the samples, or, noncentered, sample-centered balls containing it.
ProbeValue frac_maximal_at(const MetricMeasureSpace& space, std::span<const double> u, double alpha,
                           std::span<const double> location, bool noncentered = false);

}  // namespace fracmax
