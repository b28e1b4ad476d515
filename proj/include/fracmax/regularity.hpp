#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fracmax/space.hpp"

namespace fracmax {

enum class DecayVariant { doubling, lower_bound, annular, relative_annular };

std::string_view variant_name(DecayVariant v);
std::optional<DecayVariant> parse_variant(std::string_view name);

/// Configuration where the fitted inequality is tightest. For doubling and
/// lower bound only (x, radius) is meaningful; annular fits add the
/// thickness h, and relative fits the test ball B(ball_center, ball_radius).
struct DecayWitness {
  PointId x = 0;
  double radius = 0.0;
  double h = 0.0;
  PointId ball_center = 0;
  double ball_radius = 0.0;
  double ratio = 0.0;  // measured quantity at the witness
};

struct DecayFit {
  DecayVariant variant = DecayVariant::doubling;
  double constant = 0.0;
  double exponent = 0.0;
  DecayWitness witness;
  std::size_t samples = 0;
  // Largest |log(measured / bound)| over the samples: 0 when every sample
  // sits on the fitted curve.
  double residual = 0.0;
};

struct RegularityOptions {
  bool include_boundary = false;
  double margin = 0.0;       // ball radius + margin must not exceed the boundary distance
  double ceiling = 10.0;     // largest admissible fitted constant for annular fits
  int ladder_depth = 40;     // h = R 2^-j, j = 1..ladder_depth
  bool smoothing = true;     // cell-smeared radial measure; false uses the atoms
  std::size_t max_centers = 512;       // centers are strided above this count
  std::size_t relative_centers = 48;   // centers probed with off-center balls
  std::size_t relative_radii = 48;     // radii per probed center
};

/// Grid of candidate annular exponents, 0.05, 0.10, ..., 1.00.
std::vector<double> exponent_grid();

/// Mass of B(x, r) under the measure the fits use.
double fit_ball_mass(const MetricMeasureSpace& space, PointId x, double r,
                     const RegularityOptions& opt = {});

DecayFit doubling_constant(const MetricMeasureSpace& space, const RegularityOptions& opt = {});
DecayFit lower_bound_fit(const MetricMeasureSpace& space, const RegularityOptions& opt = {});
DecayFit annular_decay_fit(const MetricMeasureSpace& space, const RegularityOptions& opt = {});
DecayFit relative_annular_decay_fit(const MetricMeasureSpace& space,
                                    const RegularityOptions& opt = {});
DecayFit fit_variant(const MetricMeasureSpace& space, DecayVariant v,
                     const RegularityOptions& opt = {});

struct FitCheck {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max of measured / bound - 1 over violating samples
};

/// Independent pass over the same samples confirming that every one obeys
/// the fitted inequality (relative tolerance 1e-12).
FitCheck verify_fit(const MetricMeasureSpace& space, const DecayFit& fit,
                    const RegularityOptions& opt = {});

}  // namespace fracmax
