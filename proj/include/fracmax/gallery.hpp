#pragma once

#include <optional>
#include <string_view>

#include "fracmax/space.hpp"

namespace fracmax {

// Uniform grid lo + i*step per axis, weight step^dim, euclidean metric.
// Points on the outer faces are recorded as boundary samples.
MetricMeasureSpace euclidean_grid(std::size_t dim, double step, double lo, double hi, double cap);

// Real line sampled on [-L, L] plus the quarter of the unit circle with
// argument in (0, pi/2], both with arclength weights. The weighted variant
// multiplies the line weight by 1 + pi/2 for x > 1. Cap radius is L.
MetricMeasureSpace buckley_space(double line_extent, double step, bool weighted);

// 0 on the line and for argument <= pi/5, 1 for argument >= pi/4, linear in
// the argument between.
ScalarField buckley_function(const MetricMeasureSpace& space);

// [-L, L] x {0} together with {0} x [-V, 1] under the max-coordinate metric.
MetricMeasureSpace cross_space(double horizontal_extent, double vertical_depth, double step);

// x2 on the vertical arm for 0 < x2 <= 1, 0 elsewhere.
ScalarField cross_function(const MetricMeasureSpace& space);

enum class TestFunctionKind { constant, linear, abs_power, clipped_log, bump, sign };

struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::constant;
  double value = 1.0;   // constant
  double gamma = 1.0;   // abs_power: |x|^gamma
  double clip = 10.0;   // clipped_log: log|x| clamped to [-clip, clip]
};

// Fields of |x| (euclidean norm of the coordinates) or of x1 for linear and
// sign. Only `constant` is defined on matrix spaces.
ScalarField test_function(const MetricMeasureSpace& space, const TestFunction& f);

std::optional<TestFunctionKind> parse_test_function(std::string_view name);

enum class GalleryKind { grid1d, grid2d, buckley, buckley_weighted, cross };

struct GallerySpec {
  GalleryKind kind = GalleryKind::grid1d;
  double step = 0.005;
  double extent = 3.0;  // grid half-width, buckley line half-length, cross arm half-length
  double depth = 3.0;   // cross vertical depth
  double cap = 0.0;     // grids only; 0 selects extent / 2
};

std::optional<GalleryKind> parse_gallery_kind(std::string_view name);
MetricMeasureSpace make_gallery(const GallerySpec& spec);
// The distinguished field of each gallery space (bump on the grids).
ScalarField gallery_field(const GallerySpec& spec, const MetricMeasureSpace& space);

}  // namespace fracmax
