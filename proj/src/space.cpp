#include "fracmax/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "fracmax/error.hpp"
#include "fracmax/parallel.hpp"
#include "fracmax/simd.hpp"

namespace fracmax {
namespace {

void validate_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw Error("space must contain at least one point");
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw Error("nonpositive weight at index " + std::to_string(i));
}

void validate_matrix(const std::vector<std::vector<double>>& m, std::size_t n) {
  if (m.size() != n) throw Error("distance matrix has " + std::to_string(m.size()) +
                                 " rows for " + std::to_string(n) + " weights");
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw Error("distance matrix is not square (row " + std::to_string(i) + ")");
    if (m[i][i] != 0.0) throw Error("distance matrix has nonzero diagonal at " + std::to_string(i));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!(m[i][j] >= 0.0) || !std::isfinite(m[i][j]))
        throw Error("distance matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                    ") is negative or not finite");
      if (m[i][j] != m[j][i])
        throw Error("asymmetric distance matrix at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
    }
}

}  // namespace

CenterOrder make_center_order(std::span<const double> row, std::span<const double> weights,
                              double cap_radius) {
  CenterOrder o;
  const std::size_t n = row.size();
  o.ids.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    if (row[j] < cap_radius) o.ids.push_back(static_cast<PointId>(j));
  std::sort(o.ids.begin(), o.ids.end(), [&](PointId a, PointId b) {
    return row[a] < row[b] || (row[a] == row[b] && a < b);
  });
  o.dist.resize(o.ids.size());
  double mass = 0.0;
  for (std::size_t k = 0; k < o.ids.size(); ++k) {
    o.dist[k] = row[o.ids[k]];
    mass = mass + weights[o.ids[k]];
    if (k + 1 == o.ids.size() || row[o.ids[k + 1]] != o.dist[k]) {
      o.radii.push_back(o.dist[k]);
      o.ring_end.push_back(k + 1);
      o.cum_mass.push_back(mass);
    }
  }
  return o;
}

MetricMeasureSpace MetricMeasureSpace::build(SpaceInput in) {
  validate_weights(in.weights);
  const std::size_t n = in.weights.size();
  if (!(in.cap_radius > 0.0) || !std::isfinite(in.cap_radius))
    throw Error("cap radius must be positive and finite");

  MetricMeasureSpace s;
  s.metric_ = in.metric;
  s.cap_ = in.cap_radius;
  s.note_ = std::move(in.truncation_note);
  s.weights_ = std::move(in.weights);
  for (double w : s.weights_) s.total_mass_ += w;
  s.dist_.resize(n * n);

  if (in.metric.kind == MetricKind::matrix) {
    validate_matrix(in.matrix, n);
    s.metric_.dimension = 0;
    for (std::size_t i = 0; i < n; ++i)
      std::copy(in.matrix[i].begin(), in.matrix[i].end(), s.dist_.begin() + i * n);
  } else {
    const std::size_t dim = in.metric.dimension;
    if (dim == 0) throw Error("coordinate dimension must be at least 1");
    if (in.coords.size() != n)
      throw Error("got " + std::to_string(in.coords.size()) + " coordinate rows for " +
                  std::to_string(n) + " weights");
    s.soa_.resize(dim * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (in.coords[i].size() != dim)
        throw Error("point " + std::to_string(i) + " has " + std::to_string(in.coords[i].size()) +
                    " coordinates, expected " + std::to_string(dim));
      for (std::size_t k = 0; k < dim; ++k) {
        if (!std::isfinite(in.coords[i][k]))
          throw Error("point " + std::to_string(i) + " has a non-finite coordinate");
        s.soa_[k * n + i] = in.coords[i][k];
      }
    }
    const auto& kern = simd::kernels();
    auto row_fn = in.metric.kind == MetricKind::euclidean ? kern.euclidean_row : kern.chebyshev_row;
    parallel_for(n, [&](std::size_t i) {
      row_fn(s.soa_.data(), n, dim, n, in.coords[i].data(), s.dist_.data() + i * n);
    });
  }

  for (PointId b : in.boundary)
    if (b >= n) throw Error("boundary id " + std::to_string(b) + " out of range");
  s.boundary_ = std::move(in.boundary);

  s.orders_.resize(n);
  parallel_for(n, [&](std::size_t i) {
    s.orders_[i] = make_center_order(s.distance_row(static_cast<PointId>(i)), s.weights_, s.cap_);
  });
  return s;
}

std::vector<double> MetricMeasureSpace::point(PointId i) const {
  if (!has_coordinates()) throw Error("space has no coordinates");
  std::vector<double> p(dimension());
  for (std::size_t k = 0; k < dimension(); ++k) p[k] = coordinate(i, k);
  return p;
}

std::vector<double> MetricMeasureSpace::distances_from(std::span<const double> location) const {
  if (!has_coordinates()) throw Error("probe locations need a coordinate space");
  if (location.size() != dimension())
    throw Error("probe has " + std::to_string(location.size()) + " coordinates, expected " +
                std::to_string(dimension()));
  std::vector<double> row(size());
  const auto& kern = simd::kernels();
  auto row_fn = metric_.kind == MetricKind::euclidean ? kern.euclidean_row : kern.chebyshev_row;
  row_fn(soa_.data(), size(), dimension(), size(), location.data(), row.data());
  return row;
}

MassProfile MetricMeasureSpace::mass_profile(PointId i) const {
  if (i >= size()) throw Error("point id " + std::to_string(i) + " out of range");
  const CenterOrder& o = orders_[i];
  return MassProfile{i, o.radii, o.cum_mass};
}

double MetricMeasureSpace::ball_mass(PointId x, double r) const {
  if (!(r > 0.0)) throw Error("ball radius must be positive");
  if (x >= size()) throw Error("point id " + std::to_string(x) + " out of range");
  const CenterOrder& o = orders_[x];
  const auto rings = static_cast<std::size_t>(
      std::lower_bound(o.radii.begin(), o.radii.end(), r) - o.radii.begin());
  return rings == 0 ? 0.0 : o.cum_mass[rings - 1];
}

double MetricMeasureSpace::boundary_distance(PointId x) const {
  double best = std::numeric_limits<double>::infinity();
  for (PointId b : boundary_) best = std::min(best, distance(x, b));
  return best;
}

MetricMeasureSpace build_coordinate_space(std::vector<std::vector<double>> coords, MetricKind kind,
                                          std::vector<double> weights, double cap_radius) {
  if (kind == MetricKind::matrix) throw Error("coordinate space needs a coordinate metric");
  SpaceInput in;
  in.metric = {kind, coords.empty() ? 0 : coords.front().size()};
  in.coords = std::move(coords);
  in.weights = std::move(weights);
  in.cap_radius = cap_radius;
  return MetricMeasureSpace::build(std::move(in));
}

MetricMeasureSpace build_matrix_space(std::vector<std::vector<double>> matrix,
                                      std::vector<double> weights, double cap_radius) {
  SpaceInput in;
  in.metric = {MetricKind::matrix, 0};
  in.matrix = std::move(matrix);
  in.weights = std::move(weights);
  in.cap_radius = cap_radius;
  return MetricMeasureSpace::build(std::move(in));
}

double ball_mass_direct(const MetricMeasureSpace& space, PointId x, double r) {
  double mass = 0.0;
  for (PointId y = 0; y < space.size(); ++y) {
    const double d = space.distance(x, y);
    if (d < r && d < space.cap_radius()) mass += space.weight(y);
  }
  return mass;
}

MetricAxiomReport verify_metric_axioms(const MetricMeasureSpace& space, std::size_t sample_triples,
                                       std::uint64_t seed) {
  if (sample_triples == 0) throw Error("sample_triples must be at least 1");
  MetricAxiomReport rep;
  const std::size_t n = space.size();
  for (PointId i = 0; i < n; ++i)
    for (PointId j = i + 1; j < n; ++j) {
      if (space.distance(i, j) != space.distance(j, i)) ++rep.symmetry_violations;
      if (space.distance(i, j) == 0.0) ++rep.coincident_pairs;
    }

  auto check = [&](PointId x, PointId y, PointId z) {
    const double dxz = space.distance(x, z);
    const double defect = dxz - space.distance(x, y) - space.distance(y, z);
    ++rep.triples_checked;
    if (defect > rep.worst_triangle_defect) {
      rep.worst_triangle_defect = defect;
      rep.worst_x = x;
      rep.worst_y = y;
      rep.worst_z = z;
    }
    // Rounded coordinate metrics can overshoot by a few ulps on collinear triples.
    if (defect > 1e-12 * std::max(1.0, dxz)) ++rep.triangle_violations;
  };

  if (n <= 300) {
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y)
        for (PointId z = 0; z < n; ++z) check(x, y, z);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<PointId> pick(0, static_cast<PointId>(n - 1));
    for (std::size_t t = 0; t < sample_triples; ++t) {
      const PointId x = pick(rng), y = pick(rng), z = pick(rng);
      check(x, y, z);
    }
  }
  return rep;
}

}  // namespace fracmax
