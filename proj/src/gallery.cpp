#include "fracmax/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracmax/error.hpp"

namespace fracmax {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> axis_samples(double step, double lo, double hi) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error("grid step must be positive");
  if (!(hi - lo > step)) throw Error("grid extent must exceed the step");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> axis(static_cast<std::size_t>(count) + 1);
  // Symmetric extents are sampled as multiples of step so that 0 is a sample
  // and x, -x are exact negatives.
  const bool symmetric = lo == -hi && count % 2 == 0;
  for (long i = 0; i <= count; ++i)
    axis[static_cast<std::size_t>(i)] =
        symmetric ? static_cast<double>(i - count / 2) * step : lo + static_cast<double>(i) * step;
  return axis;
}

double norm_of(const MetricMeasureSpace& space, PointId i) {
  double acc = 0.0;
  for (std::size_t k = 0; k < space.dimension(); ++k) {
    const double c = space.coordinate(i, k);
    acc += c * c;
  }
  return std::sqrt(acc);
}

bool is_planar(const MetricMeasureSpace& space, MetricKind kind) {
  return space.metric().kind == kind && space.dimension() == 2;
}

}  // namespace

MetricMeasureSpace euclidean_grid(std::size_t dim, double step, double lo, double hi, double cap) {
  if (dim != 1 && dim != 2) throw Error("grid dimension must be 1 or 2");
  const std::vector<double> axis = axis_samples(step, lo, hi);
  const std::size_t m = axis.size();
  SpaceInput in;
  in.metric = {MetricKind::euclidean, dim};
  in.cap_radius = cap;
  in.truncation_note = "grid truncates R^" + std::to_string(dim) + " to [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]^" + std::to_string(dim);
  const double w = dim == 1 ? step : step * step;
  if (dim == 1) {
    for (std::size_t i = 0; i < m; ++i) {
      in.coords.push_back({axis[i]});
      in.weights.push_back(w);
    }
    in.boundary = {0, static_cast<PointId>(m - 1)};
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const auto id = static_cast<PointId>(in.weights.size());
        in.coords.push_back({axis[i], axis[j]});
        in.weights.push_back(w);
        if (i == 0 || j == 0 || i + 1 == m || j + 1 == m) in.boundary.push_back(id);
      }
  }
  return MetricMeasureSpace::build(std::move(in));
}

MetricMeasureSpace buckley_space(double line_extent, double step, bool weighted) {
  if (!(line_extent > 2.0)) throw Error("line extent must exceed 2");
  if (!(step > 0.0 && step < 0.1)) throw Error("step must lie in (0, 0.1)");
  const auto half = static_cast<long>(std::lround(line_extent / step));
  SpaceInput in;
  in.metric = {MetricKind::euclidean, 2};
  in.cap_radius = line_extent;
  in.truncation_note = "line cut to [-L, L]";
  const double heavy = step * (1.0 + kPi / 2.0);
  for (long i = -half; i <= half; ++i) {
    const double x = static_cast<double>(i) * step;
    in.coords.push_back({x, 0.0});
    in.weights.push_back(weighted && x > 1.0 ? heavy : step);
  }
  in.boundary = {0, static_cast<PointId>(in.weights.size() - 1)};
  for (long j = 1; static_cast<double>(j) * step <= kPi / 2.0; ++j) {
    const double t = static_cast<double>(j) * step;
    in.coords.push_back({std::cos(t), std::sin(t)});
    in.weights.push_back(step);
  }
  return MetricMeasureSpace::build(std::move(in));
}

ScalarField buckley_function(const MetricMeasureSpace& space) {
  if (!is_planar(space, MetricKind::euclidean))
    throw Error("buckley_function needs a planar euclidean line-plus-arc space");
  ScalarField u(space.size());
  for (PointId i = 0; i < space.size(); ++i) {
    const double x = space.coordinate(i, 0), y = space.coordinate(i, 1);
    if (y == 0.0) {
      u[i] = 0.0;
      continue;
    }
    if (y < 0.0 || std::fabs(std::hypot(x, y) - 1.0) > 1e-9)
      throw Error("point " + std::to_string(i) + " is neither on the line nor on the arc");
    const double t = std::atan2(y, x);
    u[i] = std::clamp((t - kPi / 5.0) / (kPi / 4.0 - kPi / 5.0), 0.0, 1.0);
  }
  return u;
}

MetricMeasureSpace cross_space(double horizontal_extent, double vertical_depth, double step) {
  if (!(horizontal_extent >= 3.0)) throw Error("horizontal extent must be at least 3");
  if (!(vertical_depth >= 2.0)) throw Error("vertical depth must be at least 2");
  if (!(step > 0.0 && step < 0.1)) throw Error("step must lie in (0, 0.1)");
  const auto half = std::lround(horizontal_extent / step);
  const auto down = std::lround(vertical_depth / step);
  const auto up = std::lround(1.0 / step);
  SpaceInput in;
  in.metric = {MetricKind::chebyshev, 2};
  in.cap_radius = horizontal_extent;
  in.truncation_note = "horizontal arm cut to [-L, L], vertical arm to [-V, 1]";
  for (long i = -half; i <= half; ++i) {
    in.coords.push_back({static_cast<double>(i) * step, 0.0});
    in.weights.push_back(step);
  }
  in.boundary = {0, static_cast<PointId>(in.weights.size() - 1)};
  for (long k = -down; k <= up; ++k) {
    if (k == 0) continue;
    if (k == -down) in.boundary.push_back(static_cast<PointId>(in.weights.size()));
    in.coords.push_back({0.0, static_cast<double>(k) * step});
    in.weights.push_back(step);
  }
  return MetricMeasureSpace::build(std::move(in));
}

ScalarField cross_function(const MetricMeasureSpace& space) {
  if (!is_planar(space, MetricKind::chebyshev))
    throw Error("cross_function needs a planar chebyshev cross space");
  ScalarField u(space.size());
  for (PointId i = 0; i < space.size(); ++i) {
    const double x1 = space.coordinate(i, 0), x2 = space.coordinate(i, 1);
    if (x1 != 0.0 && x2 != 0.0)
      throw Error("point " + std::to_string(i) + " lies on neither arm");
    u[i] = x1 == 0.0 && x2 > 0.0 && x2 <= 1.0 ? x2 : 0.0;
  }
  return u;
}

// The sample sitting on the singularity carries the average of log|t| over
// |t| < rho/2, rho the distance to its nearest neighbour: log(rho/2) - 1.
// A fixed -clip there would be an outlier whose size drifts with the mesh.
static double singular_log(const MetricMeasureSpace& space, PointId i) {
  const auto row = space.distance_row(i);
  double rho = std::numeric_limits<double>::infinity();
  for (PointId j = 0; j < space.size(); ++j)
    if (j != i) rho = std::min(rho, row[j]);
  return std::isfinite(rho) ? std::log(rho / 2.0) - 1.0 : -std::numeric_limits<double>::infinity();
}

ScalarField test_function(const MetricMeasureSpace& space, const TestFunction& f) {
  ScalarField u(space.size(), f.value);
  if (f.kind == TestFunctionKind::constant) return u;
  if (!space.has_coordinates()) throw Error("test function needs coordinates; space is a matrix");
  if (f.kind == TestFunctionKind::abs_power && !(f.gamma > 0.0))
    throw Error("abs_power exponent must be > 0");
  if (f.kind == TestFunctionKind::clipped_log && !(f.clip > 0.0 && std::isfinite(f.clip)))
    throw Error("clip level must be positive and finite");
  for (PointId i = 0; i < space.size(); ++i) {
    const double x1 = space.coordinate(i, 0);
    const double r = norm_of(space, i);
    switch (f.kind) {
      case TestFunctionKind::linear: u[i] = x1; break;
      case TestFunctionKind::abs_power: u[i] = std::pow(r, f.gamma); break;
      case TestFunctionKind::clipped_log:
        u[i] = std::clamp(r == 0.0 ? singular_log(space, i) : std::log(r), -f.clip, f.clip);
        break;
      case TestFunctionKind::bump: {
        const double t = std::max(0.0, 1.0 - r * r);
        u[i] = t * t;
        break;
      }
      case TestFunctionKind::sign: u[i] = x1 > 0.0 ? 1.0 : x1 < 0.0 ? -1.0 : 0.0; break;
      case TestFunctionKind::constant: break;
    }
  }
  return u;
}

std::optional<TestFunctionKind> parse_test_function(std::string_view name) {
  if (name == "constant") return TestFunctionKind::constant;
  if (name == "linear") return TestFunctionKind::linear;
  if (name == "abs_power" || name == "abs-power") return TestFunctionKind::abs_power;
  if (name == "clipped_log" || name == "clipped-log") return TestFunctionKind::clipped_log;
  if (name == "bump") return TestFunctionKind::bump;
  if (name == "sign") return TestFunctionKind::sign;
  return std::nullopt;
}

std::optional<GalleryKind> parse_gallery_kind(std::string_view name) {
  if (name == "grid1d") return GalleryKind::grid1d;
  if (name == "grid2d") return GalleryKind::grid2d;
  if (name == "buckley") return GalleryKind::buckley;
  if (name == "buckley-weighted" || name == "buckley_weighted") return GalleryKind::buckley_weighted;
  if (name == "cross") return GalleryKind::cross;
  return std::nullopt;
}

MetricMeasureSpace make_gallery(const GallerySpec& spec) {
  switch (spec.kind) {
    case GalleryKind::grid1d:
    case GalleryKind::grid2d: {
      const double cap = spec.cap > 0.0 ? spec.cap : spec.extent / 2.0;
      return euclidean_grid(spec.kind == GalleryKind::grid1d ? 1 : 2, spec.step, -spec.extent,
                            spec.extent, cap);
    }
    case GalleryKind::buckley: return buckley_space(spec.extent, spec.step, false);
    case GalleryKind::buckley_weighted: return buckley_space(spec.extent, spec.step, true);
    case GalleryKind::cross: return cross_space(spec.extent, spec.depth, spec.step);
  }
  throw Error("unknown gallery kind");
}

ScalarField gallery_field(const GallerySpec& spec, const MetricMeasureSpace& space) {
  switch (spec.kind) {
    case GalleryKind::buckley:
    case GalleryKind::buckley_weighted: return buckley_function(space);
    case GalleryKind::cross: return cross_function(space);
    default: return test_function(space, {TestFunctionKind::bump});
  }
}

}  // namespace fracmax
