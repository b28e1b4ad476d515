#include "fracmax/maxop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fracmax/error.hpp"
#include "fracmax/parallel.hpp"

namespace fracmax {
namespace {

void check_inputs(const MetricMeasureSpace& space, std::span<const double> u, double alpha) {
  if (u.empty()) throw Error("empty field");
  if (u.size() != space.size())
    throw Error("field has " + std::to_string(u.size()) + " values for " +
                std::to_string(space.size()) + " points");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error("alpha must be a finite value >= 0");
}

struct Candidate {
  double value = -1.0;
  double radius = 0.0;
  std::size_t ring = 0;
};

// Value of r^alpha * avg|u| on every radius interval (d_k, e_k] of one
// center, evaluated at the right endpoint e_k.
struct RingValues {
  std::vector<double> value;
  std::vector<double> radius;
};

RingValues ring_values(const CenterOrder& o, std::span<const double> weights,
                       std::span<const double> u, double alpha, double cap) {
  RingValues rv;
  const std::size_t m = o.radii.size();
  rv.value.resize(m);
  rv.radius.resize(m);
  double mass = 0.0, field = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < m; ++k) {
    for (; j < o.ring_end[k]; ++j) {
      const PointId y = o.ids[j];
      mass = mass + weights[y];
      field = field + weights[y] * std::fabs(u[y]);
    }
    const double r = k + 1 < m ? o.radii[k + 1] : cap;
    rv.radius[k] = r;
    rv.value[k] = std::pow(r, alpha) * (field / mass);
  }
  return rv;
}

// best over rings [from, m): largest value, smallest ring on ties.
Candidate best_ring(const RingValues& rv, std::size_t from) {
  Candidate best;
  for (std::size_t k = from; k < rv.value.size(); ++k)
    if (best.value < 0.0 || rv.value[k] > best.value) best = {rv.value[k], rv.radius[k], k};
  return best;
}

MaxField empty_field(std::size_t n, double alpha, bool noncentered) {
  MaxField f;
  f.values.assign(n, 0.0);
  f.argmax_radius.assign(n, 0.0);
  f.argmax_center.assign(n, 0);
  f.truncated.assign(n, 0);
  f.alpha = alpha;
  f.noncentered = noncentered;
  return f;
}

// Suffix maxima over ring values: entry k is the first ring k' >= k
// attaining max_{k' >= k} value.
std::vector<std::uint32_t> suffix_argmax(const RingValues& rv) {
  const std::size_t m = rv.value.size();
  std::vector<std::uint32_t> arg(m);
  for (std::size_t k = m; k-- > 0;) {
    if (k + 1 == m || rv.value[k] >= rv.value[arg[k + 1]])
      arg[k] = static_cast<std::uint32_t>(k);
    else
      arg[k] = arg[k + 1];
  }
  return arg;
}

// First ring whose admissible radii (d_k, e_k] exceed t, i.e. whose balls
// contain a point at distance t from the center.
std::size_t first_ring_containing(const CenterOrder& o, double t) {
  const auto above = static_cast<std::size_t>(
      std::upper_bound(o.radii.begin(), o.radii.end(), t) - o.radii.begin());
  return above == 0 ? 0 : above - 1;
}

}  // namespace

FieldProfile field_profile(const MetricMeasureSpace& space, std::span<const double> u, PointId x) {
  if (u.size() != space.size()) throw Error("field size does not match space");
  if (x >= space.size()) throw Error("point id " + std::to_string(x) + " out of range");
  const CenterOrder& o = space.order(x);
  FieldProfile p{x, o.radii, o.cum_mass, std::vector<double>(o.radii.size())};
  double field = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < o.radii.size(); ++k) {
    for (; j < o.ring_end[k]; ++j) field = field + space.weight(o.ids[j]) * u[o.ids[j]];
    p.cum_field[k] = field;
  }
  return p;
}

double ball_average(const FieldProfile& p, double r) {
  if (!(r > 0.0)) throw Error("ball radius must be positive");
  const auto rings =
      static_cast<std::size_t>(std::lower_bound(p.radii.begin(), p.radii.end(), r) - p.radii.begin());
  if (rings == 0) throw Error("cannot average over an empty ball");
  return p.cum_field[rings - 1] / p.cum_mass[rings - 1];
}

double ball_average(const MetricMeasureSpace& space, std::span<const double> u, PointId x, double r) {
  return ball_average(field_profile(space, u, x), r);
}

double scaled_average(const MetricMeasureSpace& space, std::span<const double> u, PointId x,
                      double r, double alpha) {
  if (!(alpha >= 0.0)) throw Error("alpha must be >= 0");
  std::vector<double> a(u.size());
  std::transform(u.begin(), u.end(), a.begin(), [](double v) { return std::fabs(v); });
  return std::pow(r, alpha) * ball_average(space, a, x, r);
}

MaxField frac_maximal(const MetricMeasureSpace& space, std::span<const double> u, double alpha) {
  check_inputs(space, u, alpha);
  const std::size_t n = space.size();
  MaxField f = empty_field(n, alpha, false);
  parallel_for(n, [&](std::size_t x) {
    const CenterOrder& o = space.order(static_cast<PointId>(x));
    const RingValues rv = ring_values(o, space.weights(), u, alpha, space.cap_radius());
    const Candidate c = best_ring(rv, 0);
    f.values[x] = c.value;
    f.argmax_radius[x] = c.radius;
    f.argmax_center[x] = static_cast<PointId>(x);
    f.truncated[x] = c.ring + 1 == rv.value.size();
  });
  return f;
}

MaxField frac_maximal_noncentered(const MetricMeasureSpace& space, std::span<const double> u,
                                  double alpha, NoncenteredKernel kernel) {
  check_inputs(space, u, alpha);
  const std::size_t n = space.size();
  const double cap = space.cap_radius();
  MaxField f = empty_field(n, alpha, true);

  auto assign = [&](std::size_t x, const Candidate& c, PointId z, std::size_t m) {
    f.values[x] = c.value;
    f.argmax_radius[x] = c.radius;
    f.argmax_center[x] = z;
    f.truncated[x] = c.ring + 1 == m;
  };

  if (kernel == NoncenteredKernel::low_memory) {
    parallel_for(n, [&](std::size_t x) {
      Candidate best;
      PointId best_z = 0;
      std::size_t best_m = 0;
      for (PointId z = 0; z < n; ++z) {
        const double t = space.distance(z, static_cast<PointId>(x));
        if (!(t < cap)) continue;
        const CenterOrder& o = space.order(z);
        const RingValues rv = ring_values(o, space.weights(), u, alpha, cap);
        const Candidate c = best_ring(rv, first_ring_containing(o, t));
        if (c.value > best.value) {
          best = c;
          best_z = z;
          best_m = rv.value.size();
        }
      }
      assign(x, best, best_z, best_m);
    });
    return f;
  }

  std::vector<RingValues> rings(n);
  std::vector<std::vector<std::uint32_t>> suffix(n);
  parallel_for(n, [&](std::size_t z) {
    rings[z] = ring_values(space.order(static_cast<PointId>(z)), space.weights(), u, alpha, cap);
    suffix[z] = suffix_argmax(rings[z]);
  });
  parallel_for(n, [&](std::size_t x) {
    Candidate best;
    PointId best_z = 0;
    for (PointId z = 0; z < n; ++z) {
      const double t = space.distance(z, static_cast<PointId>(x));
      if (!(t < cap)) continue;
      const std::size_t k = suffix[z][first_ring_containing(space.order(z), t)];
      if (rings[z].value[k] > best.value) {
        best = {rings[z].value[k], rings[z].radius[k], k};
        best_z = z;
      }
    }
    assign(x, best, best_z, rings[best_z].value.size());
  });
  return f;
}

MaxField frac_maximal_bruteforce(const MetricMeasureSpace& space, std::span<const double> u,
                                 double alpha, bool noncentered, std::size_t limit) {
  check_inputs(space, u, alpha);
  const std::size_t n = space.size();
  if (n > limit)
    throw Error("brute-force oracle limited to " + std::to_string(limit) + " points (space has " +
                std::to_string(n) + "); use frac_maximal or raise the limit");
  const double cap = space.cap_radius();

  // Every ball's summation order is ascending (distance, id) from its center.
  struct Ball {
    double radius;
    double value;
  };
  std::vector<std::vector<Ball>> balls(n);
  parallel_for(n, [&](std::size_t zi) {
    const auto z = static_cast<PointId>(zi);
    std::vector<PointId> by_distance(n);
    std::iota(by_distance.begin(), by_distance.end(), PointId{0});
    std::sort(by_distance.begin(), by_distance.end(), [&](PointId a, PointId b) {
      const double da = space.distance(z, a), db = space.distance(z, b);
      return da < db || (da == db && a < b);
    });
    std::vector<double> candidates;
    for (PointId y = 0; y < n; ++y) {
      const double d = space.distance(z, y);
      if (d > 0.0 && d <= cap) candidates.push_back(d);
    }
    candidates.push_back(cap);
    for (double r : candidates) {
      double mass = 0.0, field = 0.0;
      for (PointId y : by_distance) {
        if (!(space.distance(z, y) < r)) break;
        mass = mass + space.weight(y);
        field = field + space.weight(y) * std::fabs(u[y]);
      }
      balls[zi].push_back({r, std::pow(r, alpha) * (field / mass)});
    }
  });

  MaxField f = empty_field(n, alpha, noncentered);
  parallel_for(n, [&](std::size_t xi) {
    const auto x = static_cast<PointId>(xi);
    double best_value = -1.0, best_radius = 0.0;
    PointId best_z = x;
    for (PointId z = 0; z < n; ++z) {
      if (!noncentered && z != x) continue;
      const double t = space.distance(z, x);
      double value = -1.0, radius = 0.0;
      for (const Ball& b : balls[z]) {
        if (!(t < b.radius)) continue;
        if (b.value > value || (b.value == value && b.radius < radius)) {
          value = b.value;
          radius = b.radius;
        }
      }
      if (value > best_value) {
        best_value = value;
        best_radius = radius;
        best_z = z;
      }
    }
    f.values[xi] = best_value;
    f.argmax_radius[xi] = best_radius;
    f.argmax_center[xi] = best_z;
    f.truncated[xi] = best_radius == cap;
  });
  return f;
}

ProbeValue frac_maximal_at(const MetricMeasureSpace& space, std::span<const double> u, double alpha,
                           std::span<const double> location, bool noncentered) {
  check_inputs(space, u, alpha);
  const double cap = space.cap_radius();
  const std::vector<double> row = space.distances_from(location);
  ProbeValue out;
  if (!noncentered) {
    const CenterOrder o = make_center_order(row, space.weights(), cap);
    if (o.radii.empty()) throw Error("no sample lies within the cap radius of the probe");
    // Ring k's balls have radius in (d_k, e_k] and are never empty.
    const RingValues rv = ring_values(o, space.weights(), u, alpha, cap);
    const Candidate c = best_ring(rv, 0);
    return {c.value, c.radius, 0, c.ring + 1 == rv.value.size()};
  }
  Candidate best;
  PointId best_z = 0;
  std::size_t best_m = 0;
  for (PointId z = 0; z < space.size(); ++z) {
    const double t = row[z];
    if (!(t < cap)) continue;
    const CenterOrder& o = space.order(z);
    const RingValues rv = ring_values(o, space.weights(), u, alpha, cap);
    const std::size_t from = first_ring_containing(o, t);
    // The last ring's interval ends at the cap, which always exceeds t.
    const Candidate c = best_ring(rv, from);
    if (c.value > best.value) {
      best = c;
      best_z = z;
      best_m = rv.value.size();
    }
  }
  if (best.value < 0.0) throw Error("no sample-centered ball contains the probe");
  out = {best.value, best.radius, best_z, best.ring + 1 == best_m};
  return out;
}

}  // namespace fracmax
