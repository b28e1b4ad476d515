#pragma once

#include <span>
#include <string_view>

#include "fracmax/space.hpp"

namespace fracmax {

enum class SeminormFamily { lebesgue, holder, campanato, morrey, bmo, sobolev };

std::string_view family_name(SeminormFamily f);

struct Witness {
  enum class Kind { none, ball, pair };
  Kind kind = Kind::none;
  PointId a = 0;  // ball center, or first point of a pair
  PointId b = 0;  // second point of a pair
  double radius = 0.0;
};

/// Supremum over the scanned balls or pairs together with the candidate
/// that attains it. Ball radii are the right endpoints of each center's
/// critical-radius intervals, so B(center, radius) reproduces the value.
struct SeminormResult {
  double value = 0.0;
  SeminormFamily family = SeminormFamily::lebesgue;
  double p = 1.0;
  double beta = 0.0;
  double s = 0.0;
  Witness witness;
  std::size_t scanned = 0;
  bool truncated = false;       // witness radius is the cap
  bool minimal_radius = false;  // witness radius is the smallest its center admits
};

struct GradientCertificate {
  double s = 0.0;
  double violation_ratio = 0.0;  // max |u(x)-u(y)| / (d(x,y)^s (g(x)+g(y))), 0/0 read as 0
  PointId x = 0, y = 0;
  double fitted_constant = 0.0;  // smallest C with violation_ratio <= C
  double C = 0.0;
  bool passes = false;
};

struct SobolevNorm {
  double value = 0.0;        // (|u|_p^p + |g|_p^p)^(1/p) at the supplied g
  double homogeneous = 0.0;  // |g|_p
};

double lebesgue_norm(const MetricMeasureSpace& space, std::span<const double> u, double p);

SeminormResult holder_seminorm(const MetricMeasureSpace& space, std::span<const double> u,
                               double beta);
SeminormResult campanato_seminorm(const MetricMeasureSpace& space, std::span<const double> u,
                                  double p, double beta);
SeminormResult morrey_norm(const MetricMeasureSpace& space, std::span<const double> u, double p,
                           double beta);
SeminormResult bmo_seminorm(const MetricMeasureSpace& space, std::span<const double> u);

/// g*(x) = max_{y != x} |u(x) - u(y)| / (2 d(x,y)^s). Satisfies the pointwise
/// gradient inequality with constant 1 at every pair.
ScalarField canonical_gradient(const MetricMeasureSpace& space, std::span<const double> u, double s);

/// Checks |u(x) - u(y)| <= C d(x,y)^s (g(x) + g(y)) at every pair of points.
GradientCertificate hajlasz_check(const MetricMeasureSpace& space, std::span<const double> u,
                                  std::span<const double> g, double s, double C);

/// sup over balls of avg|u - u_B| / (r^s avg g).
SeminormResult poincare_ratio(const MetricMeasureSpace& space, std::span<const double> u,
                              std::span<const double> g, double s);

SobolevNorm sobolev_norm(const MetricMeasureSpace& space, std::span<const double> u,
                         std::span<const double> g, double s, double p);

/// Value of a single ball candidate, computed the same way as the scans
/// (campanato, morrey, bmo).
double evaluate_ball(const MetricMeasureSpace& space, std::span<const double> u,
                     SeminormFamily family, double p, double beta, PointId center, double radius);

/// |u(a) - u(b)| / d(a,b)^beta.
double evaluate_pair(const MetricMeasureSpace& space, std::span<const double> u, double beta,
                     PointId a, PointId b);

/// Re-evaluates a result's witness.
double reevaluate_witness(const MetricMeasureSpace& space, std::span<const double> u,
                          const SeminormResult& r);

}  // namespace fracmax
