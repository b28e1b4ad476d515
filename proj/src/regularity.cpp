#include "fracmax/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fracmax/error.hpp"
#include "fracmax/parallel.hpp"
#include "fracmax/simd.hpp"

namespace fracmax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCheckTol = 1e-12;
constexpr int kAtomBits = 48;
constexpr int kGroups = 3;

// Points within 1.25 nearest-neighbour distance of each sample. Coincident
// points are not neighbours.
std::vector<std::vector<PointId>> neighbour_lists(const MetricMeasureSpace& space) {
  const std::size_t n = space.size();
  std::vector<std::vector<PointId>> adj(n);
  parallel_for(n, [&](std::size_t y) {
    const auto row = space.distance_row(static_cast<PointId>(y));
    double nn = kInf;
    for (std::size_t j = 0; j < n; ++j)
      if (j != y && row[j] > 0.0) nn = std::min(nn, row[j]);
    if (nn == kInf) return;
    for (std::size_t j = 0; j < n; ++j)
      if (j != y && row[j] > 0.0 && row[j] <= 1.25 * nn) adj[y].push_back(static_cast<PointId>(j));
  });
  return adj;
}

// Radial picture of the space seen from one center: each sample y is a cell
// [d - t/2, d + t/2] carrying w(y) uniformly, where t is the spread of the
// center's distances over y's neighbours (t = 0 keeps the atom at d).
// Cells are grouped by the binary exponent of t so that a query only scans
// cells of comparable width near the interval ends.
class RadialCells {
 public:
  RadialCells(const MetricMeasureSpace& space, const std::vector<std::vector<PointId>>& adj,
              PointId x, bool smoothing) {
    const std::size_t n = space.size();
    const auto row = space.distance_row(x);
    std::vector<PointId> ids(n);
    std::iota(ids.begin(), ids.end(), PointId{0});
    std::sort(ids.begin(), ids.end(), [&](PointId a, PointId b) {
      return row[a] < row[b] || (row[a] == row[b] && a < b);
    });
    ids_ = ids;
    sorted_d_.resize(n);
    std::vector<double> t(n, 0.0);
    int top = std::numeric_limits<int>::min();
    for (std::size_t i = 0; i < n; ++i) {
      const PointId y = ids[i];
      sorted_d_[i] = row[y];
      if (smoothing)
        for (PointId z : adj[y]) t[i] = std::max(t[i], std::fabs(row[z] - row[y]));
      // Cells far thinner than the finest annulus the fits probe are atoms.
      if (t[i] <= std::ldexp(row[y], -kAtomBits)) t[i] = 0.0;
      if (t[i] > 0.0) top = std::max(top, std::ilogb(t[i]) + 1);
    }
    loc_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const PointId y = ids[i];
      // Thin cells share the group of the thickest-but-kGroups widths.
      const int e = t[i] > 0.0 ? std::max(std::ilogb(t[i]) + 1, top - kGroups + 1) : 0;
      Group& g = group_for(t[i] > 0.0, e);
      loc_[y] = {static_cast<std::uint32_t>(&g - groups_.data()), g.d.size()};
      g.d.push_back(row[y]);
      g.t.push_back(t[i]);
      g.w.push_back(space.weight(y));
      g.prefix.push_back(g.prefix.back() + space.weight(y));
    }
  }

  // Measure of the radial interval [a, r).
  double mass(double a, double r) const {
    if (!(r > a)) return 0.0;
    double m = 0.0;
    for (const Group& g : groups_) m += g.mass(a, r);
    return m;
  }

  double ball(double r) const { return mass(-kInf, r); }

  // out[j - 1] = mass of [r - r 2^-j, r) for j = 1..out.size().
  void ladder(double r, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (const Group& g : groups_) {
      const Group::Upper up = g.upper_end(r);
      Group::Lower lo{0, 0};
      double step = 0.5;
      for (std::size_t j = 0; j < out.size(); ++j, step *= 0.5) {
        const double a = r - r * step;
        lo = g.lower_end(a, up, lo);
        out[j] += g.mass(a, r, up, lo);
      }
    }
  }

  // Fraction of y's cell inside [a, r).
  double fraction(PointId y, double a, double r) const {
    const auto [gi, i] = loc_[y];
    return groups_[gi].part(i, a, r) / groups_[gi].w[i];
  }

  // Sample whose distance is nearest to `target`, ties to the smaller distance.
  PointId nearest_to(double target) const {
    const auto i = static_cast<std::size_t>(
        std::lower_bound(sorted_d_.begin(), sorted_d_.end(), target) - sorted_d_.begin());
    if (i == 0) return ids_[0];
    if (i == sorted_d_.size()) return ids_.back();
    return target - sorted_d_[i - 1] <= sorted_d_[i] - target ? ids_[i - 1] : ids_[i];
  }

 private:
  struct Group {
    bool smeared = false;
    int exponent = 0;  // every t in the group is in (2^(exponent-1), 2^exponent]
    double half_width = 0.0;
    std::vector<double> d, t, w, prefix{0.0};

    std::size_t lower(double v) const {
      return static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), v) - d.begin());
    }
    std::size_t upper(double v) const {
      return static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), v) - d.begin());
    }
    double part(std::size_t i, double a, double r) const {
      if (t[i] == 0.0) return d[i] >= a && d[i] < r ? w[i] : 0.0;
      const double lo = d[i] - t[i] / 2.0, hi = d[i] + t[i] / 2.0;
      const double ov = std::min(hi, r) - std::max(lo, a);
      if (ov <= 0.0) return 0.0;
      if (ov >= t[i]) return w[i];
      return w[i] * (ov / t[i]);
    }
    // Search results that depend only on the right end of an interval.
    struct Upper {
      std::size_t r0, r1;
    };
    double half() const { return half_width; }
    Upper upper_end(double r) const {
      if (!smeared) return {lower(r), lower(r)};
      return {lower(r - half()), upper(r + half())};
    }
    // Search results that depend only on the left end; `from` is a lower
    // bound on the answer (left ends visited in increasing order).
    struct Lower {
      std::size_t l0, l1;
    };
    std::size_t gallop(std::size_t lo, std::size_t hi, double v) const {
      std::size_t prev = lo, step = 1;
      while (lo < hi && d[lo] < v) {
        prev = lo + 1;
        lo = std::min(hi, lo + step);
        step *= 2;
      }
      return static_cast<std::size_t>(std::lower_bound(d.begin() + prev, d.begin() + lo, v) - d.begin());
    }
    Lower lower_end(double a, Upper up, Lower from) const {
      if (!smeared) {
        const std::size_t l = gallop(from.l0, up.r1, a);
        return {l, l};
      }
      return {gallop(from.l0, up.r1, a - half()), gallop(from.l1, up.r1, a + half())};
    }
    double mass(double a, double r) const {
      const Upper up = upper_end(r);
      return mass(a, r, up, lower_end(a, up, {0, 0}));
    }
    double mass(double a, double r, Upper up, Lower lo) const {
      if (!smeared) return prefix[up.r0] - prefix[lo.l0];
      double m = 0.0;
      if (lo.l1 < up.r0) {
        for (std::size_t i = lo.l0; i < lo.l1; ++i) m += part(i, a, r);
        m += prefix[up.r0] - prefix[lo.l1];
        for (std::size_t i = up.r0; i < up.r1; ++i) m += part(i, a, r);
      } else {
        for (std::size_t i = lo.l0; i < up.r1; ++i) m += part(i, a, r);
      }
      return m;
    }
  };

  Group& group_for(bool smeared, int exponent) {
    for (Group& g : groups_)
      if (g.smeared == smeared && (!smeared || g.exponent == exponent)) return g;
    groups_.push_back(Group{smeared, exponent, std::ldexp(1.0, exponent - 1), {}, {}, {}, {0.0}});
    return groups_.back();
  }

  std::vector<Group> groups_;
  std::vector<PointId> ids_;
  std::vector<double> sorted_d_;
  std::vector<std::pair<std::uint32_t, std::size_t>> loc_;
};

struct Context {
  const MetricMeasureSpace& space;
  const RegularityOptions& opt;
  std::vector<std::vector<PointId>> adj;
  std::vector<PointId> centers;

  Context(const MetricMeasureSpace& s, const RegularityOptions& o) : space(s), opt(o) {
    if (opt.smoothing) adj = neighbour_lists(space);
    else adj.resize(space.size());
    const std::size_t n = space.size();
    const std::size_t cap = std::max<std::size_t>(1, opt.max_centers);
    const std::size_t stride = (n + cap - 1) / cap;
    for (std::size_t i = 0; i < n; i += stride) centers.push_back(static_cast<PointId>(i));
  }

  bool interior(PointId x, double radius) const {
    return opt.include_boundary || radius + opt.margin <= space.boundary_distance(x);
  }
  RadialCells cells(PointId x) const { return RadialCells(space, adj, x, opt.smoothing); }
};

// One configuration of a fitted inequality: measured <= C * scale^exponent
// (doubling and annular kinds) or measured >= C * scale^exponent (lower bound).
struct Sample {
  double measured;
  double scale;
  double radius;
  double h;
  PointId ball_center;
  double ball_radius;
};

std::vector<Sample> doubling_samples(const Context& c, PointId x) {
  std::vector<Sample> out;
  const auto& radii = c.space.order(x).radii;
  const RadialCells cells = c.cells(x);
  for (std::size_t k = 1; k < radii.size(); ++k) {
    const double r = radii[k];
    if (2.0 * r > c.space.cap_radius() || !c.interior(x, 2.0 * r)) continue;
    out.push_back({cells.ball(2.0 * r) / cells.ball(r), 1.0, r, 0.0, x, 2.0 * r});
  }
  return out;
}

std::vector<Sample> lower_samples(const Context& c, PointId x) {
  std::vector<Sample> out;
  const auto& radii = c.space.order(x).radii;
  const RadialCells cells = c.cells(x);
  for (std::size_t k = 1; k < radii.size(); ++k) {
    const double r = radii[k];
    if (r > c.space.cap_radius() || !c.interior(x, r)) continue;
    out.push_back({cells.ball(r), r, r, 0.0, x, r});
  }
  return out;
}

std::vector<double> annulus_radii(const Context& c, PointId x) {
  std::vector<double> out;
  const auto& radii = c.space.order(x).radii;
  const double lift = 1.0 + std::ldexp(1.0, -c.opt.ladder_depth);
  for (std::size_t k = 1; k < radii.size(); ++k)
    for (double R : {radii[k], radii[k] * lift})
      if (R <= c.space.cap_radius() && c.interior(x, R)) out.push_back(R);
  return out;
}

std::vector<Sample> annular_samples(const Context& c, PointId x, bool relative, bool probe) {
  std::vector<Sample> out;
  const RadialCells cells = c.cells(x);
  const std::vector<double> Rs = annulus_radii(c, x);
  const int depth = c.opt.ladder_depth;
  out.reserve(Rs.size() * static_cast<std::size_t>(depth));
  std::vector<double> ann(static_cast<std::size_t>(depth));
  for (double R : Rs) {
    const double ball = cells.ball(R);
    if (!(ball > 0.0)) continue;
    cells.ladder(R, ann);
    double scale = 0.5;
    for (int j = 1; j <= depth; ++j, scale *= 0.5)
      out.push_back({ann[j - 1] / ball, scale, R, R * scale, x, R});
  }
  if (!relative || !probe) return out;

  const std::size_t rstride = (Rs.size() + c.opt.relative_radii - 1) / std::max<std::size_t>(1, c.opt.relative_radii);
  for (std::size_t ri = 0; ri < Rs.size(); ri += std::max<std::size_t>(1, rstride)) {
    const double R = Rs[ri];
    for (int j = 1; j <= depth; ++j) {
      const double h = std::ldexp(R, -j);
      const PointId z = cells.nearest_to(R - h / 2.0);
      const CenterOrder& oz = c.space.order(z);
      for (int i = 0; i < 4; ++i) {
        const double rb = std::ldexp(3.0 * R, -i);
        if (rb > c.space.cap_radius() || !c.interior(z, rb)) continue;
        double num = 0.0, den = 0.0;
        for (std::size_t m = 0; m < oz.ids.size() && oz.dist[m] < rb; ++m) {
          const PointId y = oz.ids[m];
          const double w = c.space.weight(y);
          num += w * cells.fraction(y, R - h, R);
          den += w;
        }
        out.push_back({num / den, h / rb, R, h, z, rb});
      }
    }
  }
  return out;
}

std::vector<Sample> samples_for(const Context& c, DecayVariant v, std::size_t center_index) {
  const PointId x = c.centers[center_index];
  switch (v) {
    case DecayVariant::doubling: return doubling_samples(c, x);
    case DecayVariant::lower_bound: return lower_samples(c, x);
    case DecayVariant::annular: return annular_samples(c, x, false, false);
    case DecayVariant::relative_annular: {
      const std::size_t nc = c.centers.size();
      const std::size_t cap = std::max<std::size_t>(1, c.opt.relative_centers);
      const std::size_t stride = (nc + cap - 1) / cap;
      return annular_samples(c, x, true, center_index % stride == 0);
    }
  }
  return {};
}

DecayWitness witness_of(PointId x, const Sample& s) {
  return {x, s.radius, s.h, s.ball_center, s.ball_radius, s.measured};
}

[[noreturn]] void no_samples(DecayVariant v) {
  throw Error(std::string(variant_name(v)) +
              " fit has no admissible samples (every ball exceeds the cap or reaches the boundary)");
}

DecayFit fit_doubling(const Context& c) {
  struct Best {
    double max = -kInf, min = kInf;
    Sample arg{};
    std::size_t count = 0;
  };
  std::vector<Best> per(c.centers.size());
  parallel_for(per.size(), [&](std::size_t ci) {
    Best b;
    for (const Sample& s : samples_for(c, DecayVariant::doubling, ci)) {
      ++b.count;
      if (s.measured > b.max) {
        b.max = s.measured;
        b.arg = s;
      }
      b.min = std::min(b.min, s.measured);
    }
    per[ci] = b;
  });
  DecayFit fit;
  fit.variant = DecayVariant::doubling;
  double lo = kInf;
  bool any = false;
  for (std::size_t ci = 0; ci < per.size(); ++ci) {
    fit.samples += per[ci].count;
    if (per[ci].count == 0) continue;
    lo = std::min(lo, per[ci].min);
    if (!any || per[ci].max > fit.constant) {
      any = true;
      fit.constant = per[ci].max;
      fit.witness = witness_of(c.centers[ci], per[ci].arg);
    }
  }
  if (!any) no_samples(DecayVariant::doubling);
  fit.exponent = std::log2(fit.constant);
  fit.residual = std::log(fit.constant / lo);
  return fit;
}

DecayFit fit_lower(const Context& c) {
  std::vector<std::vector<Sample>> per(c.centers.size());
  parallel_for(per.size(), [&](std::size_t ci) { per[ci] = samples_for(c, DecayVariant::lower_bound, ci); });
  double sx = 0, sy = 0, sxx = 0, sxy = 0, rmin = kInf, rmax = -kInf;
  std::size_t count = 0;
  for (const auto& v : per)
    for (const Sample& s : v) {
      const double lx = std::log(s.scale), ly = std::log(s.measured);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      rmin = std::min(rmin, s.scale);
      rmax = std::max(rmax, s.scale);
      ++count;
    }
  if (count == 0) no_samples(DecayVariant::lower_bound);
  if (!(rmax > rmin)) throw Error("lower bound fit needs at least two distinct radii");
  const double nn = static_cast<double>(count);
  const double q = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  DecayFit fit;
  fit.variant = DecayVariant::lower_bound;
  fit.exponent = q;
  fit.samples = count;
  fit.constant = kInf;
  double hi = 0.0;
  for (std::size_t ci = 0; ci < per.size(); ++ci)
    for (const Sample& s : per[ci]) {
      const double v = s.measured / std::pow(s.scale, q);
      if (v < fit.constant) {
        fit.constant = v;
        fit.witness = witness_of(c.centers[ci], s);
      }
      hi = std::max(hi, v);
    }
  fit.residual = std::log(hi / fit.constant);
  return fit;
}

DecayFit fit_annular(const Context& c, DecayVariant variant) {
  std::vector<double> slopes{0.0};
  for (double d : exponent_grid()) slopes.push_back(d);
  const std::size_t nd = slopes.size();
  struct Env {
    std::vector<double> top, bottom;  // max of a - d b, max of -(a - d b)
    std::vector<Sample> arg;
    std::size_t count = 0;
  };
  std::vector<Env> per(c.centers.size());
  const auto& kern = simd::kernels();
  parallel_for(per.size(), [&](std::size_t ci) {
    const std::vector<Sample> all = samples_for(c, variant, ci);
    std::vector<double> a, b, na, nb;
    std::vector<std::size_t> src;
    for (auto* v : {&a, &b, &na, &nb}) v->reserve(all.size());
    src.reserve(all.size());
    for (std::size_t s = 0; s < all.size(); ++s) {
      if (!(all[s].measured > 0.0)) continue;
      a.push_back(std::log(all[s].measured));
      b.push_back(std::log(all[s].scale));
      na.push_back(-a.back());
      nb.push_back(-b.back());
      src.push_back(s);
    }
    Env e;
    e.count = all.size();
    e.top.assign(nd, -kInf);
    e.bottom.assign(nd, -kInf);
    std::vector<std::size_t> arg(nd, simd::npos), scratch(nd, simd::npos);
    kern.envelope_update(a.data(), b.data(), a.size(), slopes.data(), nd, e.top.data(), arg.data(), 0);
    kern.envelope_update(na.data(), nb.data(), na.size(), slopes.data(), nd, e.bottom.data(),
                         scratch.data(), 0);
    e.arg.resize(nd);
    for (std::size_t k = 0; k < nd; ++k)
      if (arg[k] != simd::npos) e.arg[k] = all[src[arg[k]]];
    per[ci] = std::move(e);
  });

  std::vector<double> top(nd, -kInf), bottom(nd, -kInf);
  std::vector<Sample> arg(nd);
  std::vector<PointId> arg_center(nd, 0);
  DecayFit fit;
  fit.variant = variant;
  for (std::size_t ci = 0; ci < per.size(); ++ci) {
    fit.samples += per[ci].count;
    for (std::size_t k = 0; k < nd; ++k) {
      if (per[ci].top[k] > top[k]) {
        top[k] = per[ci].top[k];
        arg[k] = per[ci].arg[k];
        arg_center[k] = c.centers[ci];
      }
      bottom[k] = std::max(bottom[k], per[ci].bottom[k]);
    }
  }
  if (fit.samples == 0) no_samples(variant);
  if (top[0] == -kInf) {
    // Every annulus is empty: the inequality holds for any exponent.
    fit.exponent = slopes.back();
    fit.constant = 0.0;
    return fit;
  }
  const double limit = std::log(c.opt.ceiling);
  std::size_t chosen = 0;
  for (std::size_t k = 1; k < nd; ++k)
    if (top[k] <= limit) chosen = k;
  const Sample& w = arg[chosen];
  fit.exponent = slopes[chosen];
  fit.constant = w.measured / std::pow(w.scale, fit.exponent);
  fit.witness = witness_of(arg_center[chosen], w);
  fit.residual = top[chosen] + bottom[chosen];
  return fit;
}

}  // namespace

std::string_view variant_name(DecayVariant v) {
  switch (v) {
    case DecayVariant::doubling: return "doubling";
    case DecayVariant::lower_bound: return "lower";
    case DecayVariant::annular: return "annular";
    case DecayVariant::relative_annular: return "relative";
  }
  return "unknown";
}

std::optional<DecayVariant> parse_variant(std::string_view name) {
  if (name == "doubling") return DecayVariant::doubling;
  if (name == "lower" || name == "lower_bound") return DecayVariant::lower_bound;
  if (name == "annular") return DecayVariant::annular;
  if (name == "relative" || name == "relative_annular") return DecayVariant::relative_annular;
  return std::nullopt;
}

std::vector<double> exponent_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

double fit_ball_mass(const MetricMeasureSpace& space, PointId x, double r,
                     const RegularityOptions& opt) {
  if (x >= space.size()) throw Error("point id out of range");
  if (!(r > 0.0)) throw Error("ball radius must be positive");
  std::vector<std::vector<PointId>> adj =
      opt.smoothing ? neighbour_lists(space) : std::vector<std::vector<PointId>>(space.size());
  return RadialCells(space, adj, x, opt.smoothing).ball(r);
}

DecayFit doubling_constant(const MetricMeasureSpace& space, const RegularityOptions& opt) {
  return fit_doubling(Context(space, opt));
}

DecayFit lower_bound_fit(const MetricMeasureSpace& space, const RegularityOptions& opt) {
  return fit_lower(Context(space, opt));
}

DecayFit annular_decay_fit(const MetricMeasureSpace& space, const RegularityOptions& opt) {
  return fit_annular(Context(space, opt), DecayVariant::annular);
}

DecayFit relative_annular_decay_fit(const MetricMeasureSpace& space, const RegularityOptions& opt) {
  return fit_annular(Context(space, opt), DecayVariant::relative_annular);
}

DecayFit fit_variant(const MetricMeasureSpace& space, DecayVariant v, const RegularityOptions& opt) {
  switch (v) {
    case DecayVariant::doubling: return doubling_constant(space, opt);
    case DecayVariant::lower_bound: return lower_bound_fit(space, opt);
    case DecayVariant::annular: return annular_decay_fit(space, opt);
    case DecayVariant::relative_annular: return relative_annular_decay_fit(space, opt);
  }
  throw Error("unknown decay variant");
}

FitCheck verify_fit(const MetricMeasureSpace& space, const DecayFit& fit,
                    const RegularityOptions& opt) {
  const Context c(space, opt);
  std::vector<FitCheck> per(c.centers.size());
  parallel_for(per.size(), [&](std::size_t ci) {
    FitCheck chk;
    for (const Sample& s : samples_for(c, fit.variant, ci)) {
      ++chk.samples;
      double excess = 0.0;
      if (fit.variant == DecayVariant::doubling) {
        excess = s.measured / fit.constant - 1.0;
      } else if (fit.variant == DecayVariant::lower_bound) {
        excess = fit.constant * std::pow(s.scale, fit.exponent) / s.measured - 1.0;
      } else {
        const double bound = fit.constant * std::pow(s.scale, fit.exponent);
        excess = s.measured == 0.0 ? -1.0 : s.measured / bound - 1.0;
      }
      if (excess > kCheckTol) {
        ++chk.violations;
        chk.worst_excess = std::max(chk.worst_excess, excess);
      }
    }
    per[ci] = chk;
  });
  FitCheck total;
  for (const FitCheck& p : per) {
    total.samples += p.samples;
    total.violations += p.violations;
    total.worst_excess = std::max(total.worst_excess, p.worst_excess);
  }
  return total;
}

}  // namespace fracmax
