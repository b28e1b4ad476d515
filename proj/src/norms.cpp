#include "fracmax/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fracmax/error.hpp"
#include "fracmax/parallel.hpp"
#include "fracmax/simd.hpp"

namespace fracmax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_field(const MetricMeasureSpace& space, std::span<const double> u, const char* what) {
  if (u.size() != space.size())
    throw Error(std::string(what) + " has " + std::to_string(u.size()) + " values for " +
                std::to_string(space.size()) + " points");
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("exponent p must be >= 1 (got " + std::to_string(p) + ")");
}

// Per-center view used by all ball scans: weights and field values gathered
// contiguously in (distance, id) order, so ball k is the prefix [0, end_k).
class CenterScan {
 public:
  CenterScan(const MetricMeasureSpace& space, std::span<const double> u, PointId x)
      : order_(space.order(x)), cap_(space.cap_radius()) {
    const std::size_t len = order_.ids.size();
    w_.resize(len);
    u_.resize(len);
    cum_field_.resize(order_.radii.size());
    double field = 0.0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < order_.radii.size(); ++k) {
      for (; j < order_.ring_end[k]; ++j) {
        w_[j] = space.weight(order_.ids[j]);
        u_[j] = u[order_.ids[j]];
        field = field + w_[j] * u_[j];
      }
      cum_field_[k] = field;
    }
    while (flat_ < len && u_[flat_] == u_[0]) ++flat_;
  }

  std::size_t rings() const { return order_.radii.size(); }
  double radius(std::size_t k) const { return k + 1 < rings() ? order_.radii[k + 1] : cap_; }
  double mass(std::size_t k) const { return order_.cum_mass[k]; }
  // Constant balls return the value itself; the prefix-sum quotient may not.
  double mean(std::size_t k) const { return constant(k) ? u_[0] : cum_field_[k] / order_.cum_mass[k]; }
  bool constant(std::size_t k) const { return end(k) <= flat_; }
  std::size_t end(std::size_t k) const { return order_.ring_end[k]; }
  const double* w() const { return w_.data(); }
  const double* u() const { return u_.data(); }

  // (avg |u - u_B|^p)^(1/p) over ball k.
  double oscillation(std::size_t k, double p) const {
    if (constant(k)) return 0.0;
    const double m = mean(k);
    const auto& kern = simd::kernels();
    if (p == 1.0) return kern.weighted_abs_dev(w(), u(), end(k), m) / mass(k);
    if (p == 2.0) return std::sqrt(kern.weighted_sq_dev(w(), u(), end(k), m) / mass(k));
    double acc = 0.0;
    for (std::size_t j = 0; j < end(k); ++j) acc = acc + w_[j] * std::pow(std::fabs(u_[j] - m), p);
    return std::pow(acc / mass(k), 1.0 / p);
  }

  std::size_t ring_of(double r) const {
    if (!(r > 0.0)) throw Error("ball radius must be positive");
    const auto c = static_cast<std::size_t>(
        std::lower_bound(order_.radii.begin(), order_.radii.end(), r) - order_.radii.begin());
    if (c == 0) throw Error("empty ball");
    return c - 1;
  }

 private:
  const CenterOrder& order_;
  double cap_;
  std::size_t flat_ = 0;  // u_[0, flat_) all equal u_[0]
  std::vector<double> w_, u_, cum_field_;
};

struct BallBest {
  double value = -1.0;
  std::size_t ring = 0;
  std::size_t rings = 0;
  double radius = 0.0;
  std::size_t scanned = 0;
};

// Scans every (center, ring) with `ball_value(scan, k)` and reduces in
// center order, first candidate winning ties.
template <class BallValue>
SeminormResult scan_balls(const MetricMeasureSpace& space, std::span<const double> u,
                          SeminormFamily family, BallValue ball_value) {
  const std::size_t n = space.size();
  std::vector<BallBest> per_center(n);
  parallel_for(n, [&](std::size_t x) {
    CenterScan scan(space, u, static_cast<PointId>(x));
    BallBest best;
    best.rings = scan.rings();
    for (std::size_t k = 0; k < scan.rings(); ++k) {
      const double v = ball_value(scan, k);
      ++best.scanned;
      if (v > best.value) {
        best.value = v;
        best.ring = k;
        best.radius = scan.radius(k);
      }
    }
    per_center[x] = best;
  });
  SeminormResult r;
  r.family = family;
  r.value = -1.0;
  for (PointId x = 0; x < n; ++x) {
    const BallBest& b = per_center[x];
    r.scanned += b.scanned;
    if (b.value > r.value) {
      r.value = b.value;
      r.witness = {Witness::Kind::ball, x, 0, b.radius};
      r.truncated = b.ring + 1 == b.rings;
      r.minimal_radius = b.ring == 0;
    }
  }
  return r;
}

SeminormResult campanato_impl(const MetricMeasureSpace& space, std::span<const double> u, double p,
                              double beta, SeminormFamily family) {
  check_field(space, u, "field");
  check_p(p);
  if (!std::isfinite(beta)) throw Error("beta must be finite");
  SeminormResult r = scan_balls(space, u, family, [&](const CenterScan& s, std::size_t k) {
    return std::pow(s.radius(k), -beta) * s.oscillation(k, p);
  });
  r.p = p;
  r.beta = beta;
  return r;
}

}  // namespace

std::string_view family_name(SeminormFamily f) {
  switch (f) {
    case SeminormFamily::lebesgue: return "lebesgue";
    case SeminormFamily::holder: return "holder";
    case SeminormFamily::campanato: return "campanato";
    case SeminormFamily::morrey: return "morrey";
    case SeminormFamily::bmo: return "bmo";
    case SeminormFamily::sobolev: return "sobolev";
  }
  return "unknown";
}

double lebesgue_norm(const MetricMeasureSpace& space, std::span<const double> u, double p) {
  check_field(space, u, "field");
  check_p(p);
  double acc = 0.0;
  for (PointId i = 0; i < space.size(); ++i) acc = acc + space.weight(i) * std::pow(std::fabs(u[i]), p);
  return std::pow(acc, 1.0 / p);
}

SeminormResult holder_seminorm(const MetricMeasureSpace& space, std::span<const double> u,
                               double beta) {
  check_field(space, u, "field");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error("Holder exponent beta must be > 0");
  const std::size_t n = space.size();
  std::vector<simd::RowMax> rows(n, simd::RowMax{-1.0, simd::npos});
  parallel_for(n, [&](std::size_t i) {
    if (i + 1 >= n) return;
    const auto row = space.distance_row(static_cast<PointId>(i));
    std::vector<double> den(row.begin() + static_cast<std::ptrdiff_t>(i) + 1, row.end());
    if (beta != 1.0)
      for (double& d : den) d = std::pow(d, beta);
    rows[i] = simd::kernels().ratio_row_max(u[i], u.data() + i + 1, den.data(), den.size());
  });
  SeminormResult r;
  r.family = SeminormFamily::holder;
  r.beta = beta;
  r.value = 0.0;
  r.scanned = n * (n - 1) / 2;
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].index == simd::npos) continue;
    if (!found || rows[i].value > r.value) {
      found = true;
      r.value = rows[i].value;
      r.witness = {Witness::Kind::pair, static_cast<PointId>(i),
                   static_cast<PointId>(i + 1 + rows[i].index), 0.0};
    }
  }
  return r;
}

SeminormResult campanato_seminorm(const MetricMeasureSpace& space, std::span<const double> u,
                                  double p, double beta) {
  return campanato_impl(space, u, p, beta, SeminormFamily::campanato);
}

SeminormResult bmo_seminorm(const MetricMeasureSpace& space, std::span<const double> u) {
  return campanato_impl(space, u, 1.0, 0.0, SeminormFamily::bmo);
}

SeminormResult morrey_norm(const MetricMeasureSpace& space, std::span<const double> u, double p,
                           double beta) {
  check_field(space, u, "field");
  check_p(p);
  if (!std::isfinite(beta)) throw Error("beta must be finite");
  std::vector<double> powered(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    powered[i] = p == 1.0 ? std::fabs(u[i]) : p == 2.0 ? u[i] * u[i] : std::pow(std::fabs(u[i]), p);
  SeminormResult r =
      scan_balls(space, powered, SeminormFamily::morrey, [&](const CenterScan& s, std::size_t k) {
        const double avg = s.mean(k);
        return std::pow(s.radius(k), -beta) * (p == 1.0 ? avg : std::pow(avg, 1.0 / p));
      });
  r.p = p;
  r.beta = beta;
  return r;
}

ScalarField canonical_gradient(const MetricMeasureSpace& space, std::span<const double> u, double s) {
  check_field(space, u, "field");
  if (!(s > 0.0) || !std::isfinite(s)) throw Error("gradient exponent s must be > 0");
  const std::size_t n = space.size();
  ScalarField g(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const auto row = space.distance_row(static_cast<PointId>(i));
    std::vector<double> den(n);
    for (std::size_t j = 0; j < n; ++j) den[j] = 2.0 * (s == 1.0 ? row[j] : std::pow(row[j], s));
    const simd::RowMax m = simd::kernels().ratio_row_max(u[i], u.data(), den.data(), n);
    // Padded by a few ulps so the certificate check holds after its own rounding.
    g[i] = std::max(0.0, m.value) * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
  });
  return g;
}

GradientCertificate hajlasz_check(const MetricMeasureSpace& space, std::span<const double> u,
                                  std::span<const double> g, double s, double C) {
  check_field(space, u, "field");
  check_field(space, g, "gradient");
  if (!(s > 0.0) || !std::isfinite(s)) throw Error("gradient exponent s must be > 0");
  if (!(C > 0.0)) throw Error("constant C must be > 0");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(g[i] >= 0.0)) throw Error("negative gradient value at index " + std::to_string(i));
  const std::size_t n = space.size();
  std::vector<simd::RowMax> rows(n, simd::RowMax{-1.0, simd::npos});
  parallel_for(n, [&](std::size_t i) {
    if (i + 1 >= n) return;
    const auto row = space.distance_row(static_cast<PointId>(i));
    std::vector<double> dpow(row.begin() + static_cast<std::ptrdiff_t>(i) + 1, row.end());
    if (s != 1.0)
      for (double& d : dpow) d = std::pow(d, s);
    rows[i] = simd::kernels().gradient_row_max(u[i], g[i], u.data() + i + 1, g.data() + i + 1,
                                               dpow.data(), dpow.size());
  });
  GradientCertificate c;
  c.s = s;
  c.C = C;
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].index == simd::npos) continue;
    if (!found || rows[i].value > c.violation_ratio) {
      found = true;
      c.violation_ratio = rows[i].value;
      c.x = static_cast<PointId>(i);
      c.y = static_cast<PointId>(i + 1 + rows[i].index);
    }
  }
  c.fitted_constant = c.violation_ratio;
  c.passes = c.violation_ratio <= C;
  return c;
}

SeminormResult poincare_ratio(const MetricMeasureSpace& space, std::span<const double> u,
                              std::span<const double> g, double s) {
  check_field(space, u, "field");
  check_field(space, g, "gradient");
  if (!(s > 0.0)) throw Error("gradient exponent s must be > 0");
  const std::size_t n = space.size();
  // avg g accumulates along the same order as the ball sums.
  std::vector<BallBest> per_center(n);
  parallel_for(n, [&](std::size_t x) {
    const auto c = static_cast<PointId>(x);
    CenterScan sc(space, u, c);
    const CenterOrder& o = space.order(c);
    BallBest best;
    best.rings = sc.rings();
    double gsum = 0.0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < sc.rings(); ++k) {
      for (; j < o.ring_end[k]; ++j) gsum = gsum + space.weight(o.ids[j]) * g[o.ids[j]];
      const double num = sc.oscillation(k, 1.0);
      const double den = std::pow(sc.radius(k), s) * (gsum / sc.mass(k));
      const double v = num == 0.0 ? 0.0 : (den == 0.0 ? kInf : num / den);
      ++best.scanned;
      if (v > best.value) {
        best.value = v;
        best.ring = k;
        best.radius = sc.radius(k);
      }
    }
    per_center[x] = best;
  });
  SeminormResult out;
  out.family = SeminormFamily::sobolev;
  out.s = s;
  out.value = -1.0;
  for (PointId x = 0; x < n; ++x) {
    const BallBest& b = per_center[x];
    out.scanned += b.scanned;
    if (b.value > out.value) {
      out.value = b.value;
      out.witness = {Witness::Kind::ball, x, 0, b.radius};
      out.truncated = b.ring + 1 == b.rings;
      out.minimal_radius = b.ring == 0;
    }
  }
  return out;
}

SobolevNorm sobolev_norm(const MetricMeasureSpace& space, std::span<const double> u,
                         std::span<const double> g, double s, double p) {
  check_field(space, u, "field");
  check_field(space, g, "gradient");
  check_p(p);
  if (!(s > 0.0)) throw Error("gradient exponent s must be > 0");
  double su = 0.0, sg = 0.0;
  for (PointId i = 0; i < space.size(); ++i) {
    su = su + space.weight(i) * std::pow(std::fabs(u[i]), p);
    sg = sg + space.weight(i) * std::pow(std::fabs(g[i]), p);
  }
  return {std::pow(su + sg, 1.0 / p), std::pow(sg, 1.0 / p)};
}

double evaluate_ball(const MetricMeasureSpace& space, std::span<const double> u,
                     SeminormFamily family, double p, double beta, PointId center, double radius) {
  check_field(space, u, "field");
  if (center >= space.size()) throw Error("point id out of range");
  switch (family) {
    case SeminormFamily::campanato:
    case SeminormFamily::bmo: {
      CenterScan sc(space, u, center);
      const std::size_t k = sc.ring_of(radius);
      return std::pow(radius, -beta) * sc.oscillation(k, p);
    }
    case SeminormFamily::morrey: {
      std::vector<double> powered(u.size());
      for (std::size_t i = 0; i < u.size(); ++i)
        powered[i] = p == 1.0 ? std::fabs(u[i]) : p == 2.0 ? u[i] * u[i] : std::pow(std::fabs(u[i]), p);
      CenterScan sc(space, powered, center);
      const double avg = sc.mean(sc.ring_of(radius));
      return std::pow(radius, -beta) * (p == 1.0 ? avg : std::pow(avg, 1.0 / p));
    }
    default:
      throw Error("evaluate_ball supports campanato, bmo and morrey");
  }
}

double evaluate_pair(const MetricMeasureSpace& space, std::span<const double> u, double beta,
                     PointId a, PointId b) {
  check_field(space, u, "field");
  const double num = std::fabs(u[a] - u[b]);
  if (num == 0.0) return 0.0;
  const double d = space.distance(a, b);
  return num / (beta == 1.0 ? d : std::pow(d, beta));
}

double reevaluate_witness(const MetricMeasureSpace& space, std::span<const double> u,
                          const SeminormResult& r) {
  if (r.witness.kind == Witness::Kind::pair) return evaluate_pair(space, u, r.beta, r.witness.a, r.witness.b);
  if (r.witness.kind == Witness::Kind::ball)
    return evaluate_ball(space, u, r.family, r.p, r.beta, r.witness.a, r.witness.radius);
  throw Error("result has no witness");
}

}  // namespace fracmax
