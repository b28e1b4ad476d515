#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fracmax {

using PointId = std::uint32_t;

/// One real value per sample point, indexed by PointId.
using ScalarField = std::vector<double>;

enum class MetricKind { euclidean, chebyshev, matrix };

struct MetricSpec {
  MetricKind kind = MetricKind::euclidean;
  std::size_t dimension = 0;  // coordinate kinds only
};

/// Raw material for a space. Coordinate kinds fill `coords` (one vector of
/// length `metric.dimension` per point); the matrix kind fills `matrix`.
struct SpaceInput {
  MetricSpec metric;
  std::vector<std::vector<double>> coords;
  std::vector<std::vector<double>> matrix;
  std::vector<double> weights;
  double cap_radius = 0.0;
  std::string truncation_note;
  // Samples on the frontier where a continuum set was cut off. Regularity
  // fits skip balls that reach them.
  std::vector<PointId> boundary;
};

/// Neighbourhood of one center: every sample at distance < cap, sorted by
/// ascending (distance, id). This order is also the summation order of
/// every ball sum in the library.
struct CenterOrder {
  std::vector<PointId> ids;
  std::vector<double> dist;
  std::vector<double> radii;          // distinct distances, strictly increasing
  std::vector<std::size_t> ring_end;  // ids[0, ring_end[k]) have dist <= radii[k]
  std::vector<double> cum_mass;       // weight sum over ids[0, ring_end[k])
};

/// Critical radii of a center with the cumulative mass of the closed balls
/// at those radii. For d_k < r <= d_{k+1} the open ball B(center, r) has
/// mass cum_mass[k].
struct MassProfile {
  PointId center = 0;
  std::vector<double> radii;
  std::vector<double> cum_mass;
};

struct MetricAxiomReport {
  std::size_t triples_checked = 0;
  std::size_t symmetry_violations = 0;
  std::size_t triangle_violations = 0;
  std::size_t coincident_pairs = 0;  // distinct points at distance 0
  double worst_triangle_defect = 0.0;  // max of d(x,z) - d(x,y) - d(y,z)
  PointId worst_x = 0, worst_y = 0, worst_z = 0;
};

/// Finite metric measure space: sample points, a metric and atomic weights.
/// Immutable once built; all const members are safe to call concurrently.
class MetricMeasureSpace {
 public:
  static MetricMeasureSpace build(SpaceInput input);

  std::size_t size() const { return weights_.size(); }
  const MetricSpec& metric() const { return metric_; }
  bool has_coordinates() const { return metric_.kind != MetricKind::matrix; }
  std::size_t dimension() const { return metric_.dimension; }

  /// Coordinates of point i (coordinate kinds only).
  std::vector<double> point(PointId i) const;
  double coordinate(PointId i, std::size_t k) const { return soa_[k * size() + i]; }

  std::span<const double> weights() const { return weights_; }
  double weight(PointId i) const { return weights_[i]; }
  double total_mass() const { return total_mass_; }
  double cap_radius() const { return cap_; }
  const std::string& truncation_note() const { return note_; }
  std::span<const PointId> boundary() const { return boundary_; }

  double distance(PointId i, PointId j) const { return dist_[std::size_t{i} * size() + j]; }
  std::span<const double> distance_row(PointId i) const {
    return {dist_.data() + std::size_t{i} * size(), size()};
  }

  /// Distances from an arbitrary location to every sample (coordinate kinds).
  std::vector<double> distances_from(std::span<const double> location) const;

  const CenterOrder& order(PointId i) const { return orders_[i]; }
  MassProfile mass_profile(PointId i) const;

  /// Mass of the open ball B(x, r) = {y : d(x, y) < r}, restricted to the
  /// cap (radii above the cap return the in-cap mass).
  double ball_mass(PointId x, double r) const;

  /// Distance from x to the nearest boundary sample; +inf without boundary.
  double boundary_distance(PointId x) const;

 private:
  MetricMeasureSpace() = default;

  MetricSpec metric_;
  std::vector<double> soa_;  // coordinate k of point j at soa_[k * n + j]
  std::vector<double> weights_;
  std::vector<double> dist_;  // n x n, row major
  std::vector<CenterOrder> orders_;
  std::vector<PointId> boundary_;
  std::string note_;
  double cap_ = 0.0;
  double total_mass_ = 0.0;
};

MetricMeasureSpace build_coordinate_space(std::vector<std::vector<double>> coords, MetricKind kind,
                                          std::vector<double> weights, double cap_radius);
MetricMeasureSpace build_matrix_space(std::vector<std::vector<double>> matrix,
                                      std::vector<double> weights, double cap_radius);

/// Builds the (distance, id)-sorted neighbourhood of an arbitrary distance
/// row, e.g. for a probe location that is not a sample point.
CenterOrder make_center_order(std::span<const double> row, std::span<const double> weights,
                              double cap_radius);

/// Mass of B(x, r) by direct summation over all in-cap points, ascending id.
double ball_mass_direct(const MetricMeasureSpace& space, PointId x, double r);

/// Checks symmetry and the triangle inequality; exhaustive for n <= 300,
/// otherwise `sample_triples` random triples drawn with `seed`.
MetricAxiomReport verify_metric_axioms(const MetricMeasureSpace& space, std::size_t sample_triples,
                                       std::uint64_t seed = 0x5eed);

}  // namespace fracmax
