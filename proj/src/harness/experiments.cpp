#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "fracmax/error.hpp"
#include "fracmax/harness.hpp"
#include "fracmax/io.hpp"
#include "fracmax/maxop.hpp"
#include "fracmax/norms.hpp"

namespace fracmax {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExampleTol = 0.01;

std::vector<double> ladder_of(const ExperimentConfig& cfg, bool example) {
  if (!cfg.ladder.empty()) {
    for (double h : cfg.ladder)
      if (!(h > 0.0)) throw Error("ladder steps must be positive");
    return cfg.ladder;
  }
  if (example) return {0.005};
  return {0.02, 0.01, 0.005};
}

GalleryKind kind_of(const ExperimentConfig& cfg) { return cfg.space.value_or(GalleryKind::grid1d); }

MetricMeasureSpace space_at(const ExperimentConfig& cfg, double h) {
  GallerySpec spec;
  spec.kind = kind_of(cfg);
  spec.step = h;
  const bool grid = spec.kind == GalleryKind::grid1d || spec.kind == GalleryKind::grid2d;
  spec.extent = cfg.extent > 0.0 ? cfg.extent : grid ? 2.0 : 3.0;
  spec.depth = cfg.depth;
  // A cap below the extent leaves points whose cap ball misses the support
  // of u, where the maximal function is cut off rather than small.
  spec.cap = cfg.cap > 0.0 ? cfg.cap : grid ? spec.extent : 0.0;
  return make_gallery(spec);
}

ScalarField field_for(const ExperimentConfig& cfg, const MetricMeasureSpace& space,
                      const TestFunction& fallback) {
  if (cfg.function) return test_function(space, *cfg.function);
  switch (kind_of(cfg)) {
    case GalleryKind::buckley:
    case GalleryKind::buckley_weighted: return buckley_function(space);
    case GalleryKind::cross: return cross_function(space);
    default: return test_function(space, fallback);
  }
}

MaxField maximal(const MetricMeasureSpace& space, std::span<const double> u, double alpha,
                 bool noncentered) {
  return noncentered ? frac_maximal_noncentered(space, u, alpha) : frac_maximal(space, u, alpha);
}

double coarsest(const std::vector<double>& ladder) {
  return *std::max_element(ladder.begin(), ladder.end());
}

std::string num(double v) { return format_double(v); }

// Labels and messages carry short decimals; values keep full precision.
std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pair_witness(PointId a, PointId b) {
  return "pair:" + std::to_string(a) + ";" + std::to_string(b);
}

bool truncated_at(const MaxField& m, PointId a, PointId b) {
  return m.truncated[a] != 0 || m.truncated[b] != 0;
}

// Geometry measured once, on the coarsest space of the ladder.
struct Geometry {
  const ExperimentConfig& cfg;
  std::vector<double> ladder;
  std::vector<std::string>& notes;

  double delta(bool relative) const {
    if (cfg.delta) {
      notes.push_back("delta=" + num(*cfg.delta) + " (supplied)");
      return *cfg.delta;
    }
    const MetricMeasureSpace s = space_at(cfg, coarsest(ladder));
    const DecayFit f = relative ? relative_annular_decay_fit(s, cfg.regularity)
                                : annular_decay_fit(s, cfg.regularity);
    notes.push_back(std::string(relative ? "relative " : "") + "annular decay fit at h=" +
                    num(coarsest(ladder)) + ": delta=" + num(f.exponent) + " C=" + num(f.constant));
    return f.exponent;
  }

  double dimension() const {
    const MetricMeasureSpace s = space_at(cfg, coarsest(ladder));
    const DecayFit f = lower_bound_fit(s, cfg.regularity);
    notes.push_back("lower bound fit at h=" + num(coarsest(ladder)) + ": Q=" + num(f.exponent) +
                    " c=" + num(f.constant));
    return f.exponent;
  }
};

void require(bool ok, const std::string& condition) {
  if (!ok) throw HypothesisError("hypothesis not met: requires " + condition);
}

// Collects one series of ladder values per label and turns them into a
// verdict: an infinite Hajlasz constant is an exact failure, unbounded
// growth is attributed to truncation.
struct Ladder {
  Report& report;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> hs;
  std::vector<bool> exact;

  void add(const ReportRow& row, double tracked, bool exact_inequality) {
    report.rows.push_back(row);
    auto it = std::find(labels.begin(), labels.end(), row.label);
    std::size_t k = static_cast<std::size_t>(it - labels.begin());
    if (it == labels.end()) {
      labels.push_back(row.label);
      values.emplace_back();
      hs.emplace_back();
      exact.push_back(exact_inequality);
    }
    values[k].push_back(tracked);
    hs[k].push_back(row.h);
  }

  void finish() {
    Verdict v = Verdict::consistent;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      report.plots.push_back({labels[k], hs[k], values[k]});
      const bool infinite = std::any_of(values[k].begin(), values[k].end(),
                                        [](double x) { return !std::isfinite(x); });
      if (infinite && exact[k]) {
        v = Verdict::violated;
        report.notes.push_back(labels[k] + ": inequality fails at every finite constant");
      } else if (!bounded_across_ladder(values[k])) {
        if (v == Verdict::consistent) v = Verdict::truncation_limited;
        report.notes.push_back(labels[k] + ": values vary by more than 2x across the ladder");
      }
    }
    if (v != Verdict::violated && report.verdict == Verdict::truncation_limited)
      v = Verdict::truncation_limited;
    report.verdict = v;
  }
};

ReportRow ratio_row(double h, std::string label, double in, double out, std::string witness,
                    bool truncated) {
  if (in == 0.0) throw Error(label + ": input norm vanishes at h=" + num(h) + ", ratio undefined");
  return {h, std::move(label), in, out, out / in, out / in, std::move(witness), truncated};
}

ReportRow gradient_row(double h, std::string label, double in, const GradientCertificate& c,
                       bool truncated) {
  return {h,
          std::move(label),
          in,
          c.violation_ratio,
          c.violation_ratio,
          c.fitted_constant,
          pair_witness(c.x, c.y),
          truncated};
}

ScalarField power_mean_maximal(const MetricMeasureSpace& space, const ScalarField& g, double alpha,
                               double q, bool noncentered) {
  ScalarField gq(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gq[i] = std::pow(g[i], q);
  ScalarField out = maximal(space, gq, alpha * q, noncentered).values;
  for (double& v : out) v = std::pow(v, 1.0 / q);
  return out;
}

}  // namespace

bool bounded_across_ladder(const std::vector<double>& values) {
  if (values.empty()) return true;
  double lo = kInf, hi = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) return false;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == 0.0) return true;
  return hi <= 2.0 * lo;
}

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::thm31: return "thm31";
    case Experiment::thm41: return "thm41";
    case Experiment::thm42: return "thm42";
    case Experiment::thm43: return "thm43";
    case Experiment::thm44a: return "thm44a";
    case Experiment::thm44b: return "thm44b";
    case Experiment::thm44c: return "thm44c";
    case Experiment::cor45: return "cor45";
    case Experiment::lemma32: return "lemma32";
    case Experiment::ex51: return "ex51";
    case Experiment::ex51w: return "ex51w";
    case Experiment::ex52: return "ex52";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Experiment::ex52); ++i) {
    const auto e = static_cast<Experiment>(i);
    if (experiment_name(e) == name) return e;
  }
  return std::nullopt;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::truncation_limited: return "truncation-limited";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::consistent: return 0;
    case Verdict::violated: return 2;
    case Verdict::truncation_limited: return 3;
  }
  return 1;
}

Report check_thm31(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = Experiment::thm31;
  const double alpha = cfg.alpha.value_or(0.25);
  const double beta = cfg.beta.value_or(0.5);
  const double p = cfg.p.value_or(1.0);
  if (!(p >= 1.0)) throw HypothesisError("hypothesis not met: requires p>=1");
  Geometry geo{cfg, ladder_of(cfg, false), r.notes};
  const double delta = geo.delta(false);
  require((alpha > 0 && alpha <= delta && beta != 0 && alpha + beta >= 0 && alpha + beta <= delta) ||
              (alpha > 0 && alpha < delta && beta == 0),
          "either 0<alpha<=delta, beta!=0 and 0<=alpha+beta<=delta, or 0<alpha<delta and beta=0 "
          "(alpha=" + num(alpha) + ", beta=" + num(beta) + ", delta=" + num(delta) + ")");
  const TestFunction fallback = beta == 0.0 ? TestFunction{TestFunctionKind::clipped_log}
                                            : TestFunction{TestFunctionKind::abs_power, 1.0, 0.5};
  const double gamma = alpha + beta;
  Ladder lad{r, {}, {}, {}, {}};
  for (double h : geo.ladder) {
    const MetricMeasureSpace space = space_at(cfg, h);
    const ScalarField u = field_for(cfg, space, fallback);
    const MaxField m = maximal(space, u, alpha, cfg.noncentered);
    const SeminormResult in = campanato_seminorm(space, u, p, beta);
    if (gamma > 0.0) {
      const SeminormResult out = holder_seminorm(space, m.values, gamma);
      lad.add(ratio_row(h, "holder/campanato", in.value, out.value,
                        pair_witness(out.witness.a, out.witness.b),
                        truncated_at(m, out.witness.a, out.witness.b)),
              out.value / in.value, false);
    } else {
      const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
      lad.add(ratio_row(h, "oscillation/campanato", in.value, *hi - *lo,
                        pair_witness(static_cast<PointId>(hi - m.values.begin()),
                                     static_cast<PointId>(lo - m.values.begin())),
                        false),
              (*hi - *lo) / in.value, false);
    }
  }
  lad.finish();
  return r;
}

Report check_thm41(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = Experiment::thm41;
  const double alpha = cfg.alpha.value_or(0.25);
  const double p = cfg.p.value_or(2.0);
  require(p > 1.0, "p>1 (p=" + num(p) + ")");
  Geometry geo{cfg, ladder_of(cfg, false), r.notes};
  const double Q = geo.dimension();
  require(alpha > 0 && alpha < Q / p,
          "0<alpha<Q/p (alpha=" + num(alpha) + ", Q/p=" + brief(Q / p) + ")");
  const double pstar = Q * p / (Q - alpha * p);
  r.notes.push_back("p*=" + num(pstar));
  Ladder lad{r, {}, {}, {}, {}};
  for (double h : geo.ladder) {
    const MetricMeasureSpace space = space_at(cfg, h);
    const ScalarField u = field_for(cfg, space, {TestFunctionKind::bump});
    const MaxField m = maximal(space, u, alpha, cfg.noncentered);
    const double in = lebesgue_norm(space, u, p);
    const double out = lebesgue_norm(space, m.values, pstar);
    const bool trunc = std::any_of(m.truncated.begin(), m.truncated.end(), [](auto t) { return t; });
    lad.add(ratio_row(h, "lp_star/lp", in, out, "", trunc), out / in, false);
  }
  lad.finish();
  return r;
}

Report check_thm42(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = Experiment::thm42;
  const double alpha = cfg.alpha.value_or(0.5);
  const double p = cfg.p.value_or(1.5);
  require(p > 1.0, "p>1 (p=" + num(p) + ")");
  Geometry geo{cfg, ladder_of(cfg, false), r.notes};
  const double delta = geo.delta(false);
  const double Q = geo.dimension();
  require(delta > 0 && delta <= alpha && alpha < Q / p,
          "0<delta<=alpha<Q/p (delta=" + num(delta) + ", alpha=" + num(alpha) +
              ", Q/p=" + brief(Q / p) + ")");
  const bool norms = p < Q;
  const double pstar = Q * p / (Q - alpha * p);
  const double q = Q * p / (Q - (alpha - delta) * p);
  if (!norms)
    r.notes.push_back("norm bounds need 1<p<Q; skipped at p=" + num(p) + ", Q=" + num(Q) +
                      " (gradient certificate still checked)");
  Ladder lad{r, {}, {}, {}, {}};
  for (double h : geo.ladder) {
    const MetricMeasureSpace space = space_at(cfg, h);
    const ScalarField u = field_for(cfg, space, {TestFunctionKind::bump});
    const MaxField m = maximal(space, u, alpha, cfg.noncentered);
    const MaxField g = maximal(space, u, alpha - delta, cfg.noncentered);
    const GradientCertificate c = hajlasz_check(space, m.values, g.values, delta, 1.0);
    const double in = lebesgue_norm(space, u, p);
    lad.add(gradient_row(h, "gradient", in, c, truncated_at(m, c.x, c.y)), c.fitted_constant, true);
    if (norms) {
      lad.add(ratio_row(h, "lp_star/lp", in, lebesgue_norm(space, m.values, pstar), "", false),
              lebesgue_norm(space, m.values, pstar) / in, false);
      lad.add(ratio_row(h, "lq/lp", in, lebesgue_norm(space, g.values, q), "", false),
              lebesgue_norm(space, g.values, q) / in, false);
    }
  }
  lad.finish();
  return r;
}

Report check_thm43(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = Experiment::thm43;
  const double alpha = cfg.alpha.value_or(0.25);
  const double p = cfg.p.value_or(2.0);
  const double q = cfg.q.value_or((1.0 + p) / 2.0);
  require(p > 1.0, "p>1 (p=" + num(p) + ")");
  require(q > 1.0 && q < p, "1<q<p (q=" + num(q) + ")");
  Geometry geo{cfg, ladder_of(cfg, false), r.notes};
  const double Q = geo.dimension();
  require(alpha > 0 && alpha < Q / p,
          "0<alpha<Q/p (alpha=" + num(alpha) + ", Q/p=" + brief(Q / p) + ")");
  const double delta = geo.delta(true);
  const bool geometry_ok = delta >= 0.8;
  if (!geometry_ok)
    r.notes.push_back("relative 1-annular decay not met: fitted delta=" + num(delta) + " < 0.8");
  const double pstar = Q * p / (Q - alpha * p);
  Ladder lad{r, {}, {}, {}, {}};
  for (double h : geo.ladder) {
    const MetricMeasureSpace space = space_at(cfg, h);
    const ScalarField u = field_for(cfg, space, {TestFunctionKind::bump});
    const MaxField m = maximal(space, u, alpha, cfg.noncentered);
    const ScalarField g = canonical_gradient(space, u, 1.0);
    const ScalarField gt = power_mean_maximal(space, g, alpha, q, cfg.noncentered);
    const GradientCertificate c = hajlasz_check(space, m.values, gt, 1.0, 1.0);
    const double in = sobolev_norm(space, u, g, 1.0, p).value;
    lad.add(gradient_row(h, "gradient", in, c, truncated_at(m, c.x, c.y)), c.fitted_constant, true);
    const double out = sobolev_norm(space, m.values, gt, 1.0, pstar).value;
    if (in > 0.0) lad.add(ratio_row(h, "sobolev", in, out, "", false), out / in, false);
  }
  lad.finish();
  if (!geometry_ok && r.verdict == Verdict::consistent) r.verdict = Verdict::truncation_limited;
  return r;
}

Report check_thm44(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = cfg.experiment;
  const char which = cfg.experiment == Experiment::thm44a   ? 'a'
                     : cfg.experiment == Experiment::thm44b ? 'b'
                     : cfg.experiment == Experiment::thm44c ? 'c'
                                                            : '?';
  if (which == '?') throw Error("check_thm44 needs thm44a, thm44b or thm44c");
  const double alpha = cfg.alpha.value_or(0.25);
  const double p = cfg.p.value_or(2.0);
  const double q = cfg.q.value_or((1.0 + p) / 2.0);
  require(alpha > 0.0, "alpha>0");
  require(p > 1.0 && q > 1.0 && q < p, "1<q<p (q=" + num(q) + ", p=" + num(p) + ")");
  Geometry geo{cfg, ladder_of(cfg, false), r.notes};
  const double delta = geo.delta(true);
  const double s = cfg.s.value_or(which == 'a' ? 0.5 : which == 'b' ? delta : 1.0);
  require(s > 0.0, "s>0");
  if (which == 'a') require(s < delta, "s<delta (s=" + num(s) + ", delta=" + num(delta) + ")");
  if (which == 'b') require(s == delta, "s=delta (s=" + num(s) + ", delta=" + num(delta) + ")");
  if (which == 'c') require(s > delta, "s>delta (s=" + num(s) + ", delta=" + num(delta) + ")");
  const double exponent = which == 'c' ? delta : s;
  const TestFunction fallback = which == 'a' ? TestFunction{TestFunctionKind::abs_power, 1.0, 0.5}
                                             : TestFunction{TestFunctionKind::bump};
  Ladder lad{r, {}, {}, {}, {}};
  for (double h : geo.ladder) {
    const MetricMeasureSpace space = space_at(cfg, h);
    const ScalarField u = field_for(cfg, space, fallback);
    const MaxField m = maximal(space, u, alpha, cfg.noncentered);
    const ScalarField g = canonical_gradient(space, u, s);
    ScalarField gt;
    if (which == 'a') gt = maximal(space, g, alpha, cfg.noncentered).values;
    if (which == 'b') gt = power_mean_maximal(space, g, alpha, q, cfg.noncentered);
    if (which == 'c') gt = maximal(space, g, alpha + s - delta, cfg.noncentered).values;
    const GradientCertificate c = hajlasz_check(space, m.values, gt, exponent, 1.0);
    lad.add(gradient_row(h, "gradient", lebesgue_norm(space, g, p), c, truncated_at(m, c.x, c.y)),
            c.fitted_constant, true);
  }
  lad.finish();
  return r;
}

Report check_cor45(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = Experiment::cor45;
  const double alpha = cfg.alpha.value_or(0.25);
  const double p = cfg.p.value_or(2.0);
  const double qq = cfg.q.value_or((1.0 + p) / 2.0);
  require(p > 1.0, "p>1 (p=" + num(p) + ")");
  Geometry geo{cfg, ladder_of(cfg, false), r.notes};
  const double Q = geo.dimension();
  const double delta = geo.delta(true);
  const double s = cfg.s.value_or(0.5);
  require(s > 0.0, "s>0");
  const double pstar = Q * p / (Q - alpha * p);
  const bool low = s <= delta;
  double q = 0.0;
  if (low) {
    require(alpha > 0 && alpha < Q / p, "s<=delta and 0<alpha<Q/p (alpha=" + num(alpha) +
                                            ", Q/p=" + brief(Q / p) + ")");
    require(qq > 1.0 && qq < p, "1<q<p (q=" + num(qq) + ")");
  } else {
    require(alpha > 0 && alpha + s - delta < Q / p,
            "s>=delta and alpha+s-delta<Q/p (alpha+s-delta=" + num(alpha + s - delta) +
                ", Q/p=" + brief(Q / p) + ")");
    q = Q * p / (Q - (alpha + s - delta) * p);
    r.notes.push_back("q=" + num(q));
  }
  r.notes.push_back("p*=" + num(pstar));
  Ladder lad{r, {}, {}, {}, {}};
  for (double h : geo.ladder) {
    const MetricMeasureSpace space = space_at(cfg, h);
    const ScalarField u = field_for(cfg, space, {TestFunctionKind::bump});
    const MaxField m = maximal(space, u, alpha, cfg.noncentered);
    const ScalarField g = canonical_gradient(space, u, s);
    const double in = sobolev_norm(space, u, g, s, p).value;
    ScalarField gt;
    double out = 0.0;
    if (low) {
      gt = s < delta ? maximal(space, g, alpha, cfg.noncentered).values
                     : power_mean_maximal(space, g, alpha, qq, cfg.noncentered);
      out = sobolev_norm(space, m.values, gt, s, pstar).value;
    } else {
      gt = maximal(space, g, alpha + s - delta, cfg.noncentered).values;
      out = lebesgue_norm(space, gt, q) + lebesgue_norm(space, m.values, pstar);
    }
    const GradientCertificate c = hajlasz_check(space, m.values, gt, low ? s : delta, 1.0);
    lad.add(gradient_row(h, "gradient", in, c, truncated_at(m, c.x, c.y)), c.fitted_constant, true);
    lad.add(ratio_row(h, low ? "sobolev" : "homogeneous+lp_star", in, out, "", false), out / in, false);
  }
  lad.finish();
  return r;
}

Report check_lemma32(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = Experiment::lemma32;
  const double beta = cfg.beta.value_or(0.0);
  const double p = cfg.p.value_or(1.0);
  require(beta <= 0.0, "beta<0 or beta=0 (beta=" + num(beta) + ")");
  require(p >= 1.0, "p>=1");
  require(cfg.c0 >= 1.0, "C0>=1");
  const TestFunction fallback = beta == 0.0 ? TestFunction{TestFunctionKind::sign}
                                            : TestFunction{TestFunctionKind::abs_power, 1.0, 0.5};
  Ladder lad{r, {}, {}, {}, {}};
  const std::vector<double> ladder = ladder_of(cfg, false);
  for (double h : ladder) {
    const MetricMeasureSpace space = space_at(cfg, h);
    const ScalarField u = field_for(cfg, space, fallback);
    const double norm = campanato_seminorm(space, u, p, beta).value;
    const std::size_t n = space.size();
    std::vector<FieldProfile> prof(n);
    for (PointId i = 0; i < n; ++i) prof[i] = field_profile(space, u, i);
    // Centers and test points are strided; radii follow a dyadic ladder
    // from the cap down to the smallest positive distance.
    const std::size_t cstride = std::max<std::size_t>(1, n / 32);
    double best = 0.0, best_raw = 0.0;
    std::string where;
    for (PointId x = 0; x < n; x += static_cast<PointId>(cstride)) {
      const auto& radii = space.order(x).radii;
      if (radii.size() < 2) continue;
      const double rmin = radii[1];
      for (double R = space.cap_radius(); R >= rmin; R /= 2.0) {
        const double ux = ball_average(prof[x], R);
        const auto row = space.distance_row(x);
        std::vector<PointId> ys;
        for (PointId y = 0; y < n; ++y)
          if (row[y] < cfg.c0 * R) ys.push_back(y);
        const std::size_t ystride = std::max<std::size_t>(1, ys.size() / 16);
        for (std::size_t k = 0; k < ys.size(); k += ystride) {
          const PointId y = ys[k];
          for (double rr = R; rr >= rmin; rr /= 2.0) {
            const double diff = std::fabs(ball_average(prof[y], rr) - ux);
            const double scale = beta < 0.0 ? std::pow(rr, beta) : std::log(std::numbers::e * R / rr);
            const double v = norm == 0.0 ? 0.0 : diff / (scale * norm);
            if (v > best) {
              best = v;
              best_raw = diff;
              where = "x=" + std::to_string(x) + ";R=" + num(R) + ";y=" + std::to_string(y) +
                      ";r=" + num(rr);
            }
          }
        }
      }
    }
    lad.add({h, beta < 0.0 ? "chain_power" : "chain_log", norm, best_raw, best, best, where, false},
            best, false);
  }
  lad.finish();
  return r;
}

namespace {

struct Probe {
  std::string label;
  std::vector<double> location;
};

ReportRow probe_row(double h, const std::string& label, double bound, const ProbeValue& v,
                    bool noncentered) {
  std::string w = "r=" + num(v.radius);
  if (noncentered) w += ";center=" + std::to_string(v.center);
  return {h, label, bound, v.value, v.value / bound, std::nan(""), w, v.truncated};
}

void slice_plot(Report& r, const MetricMeasureSpace& space, const MaxField& m, double h,
                bool vertical) {
  PlotSeries s;
  s.name = "h=" + num(h);
  std::vector<std::pair<double, double>> pts;
  for (PointId i = 0; i < space.size(); ++i) {
    const double x1 = space.coordinate(i, 0), x2 = space.coordinate(i, 1);
    const double t = vertical ? x2 : x1;
    const bool on = vertical ? x1 == 0.0 : x2 == 0.0;
    if (on && std::fabs(t) <= 0.5) pts.emplace_back(t, m.values[i]);
  }
  std::sort(pts.begin(), pts.end());
  for (auto [a, b] : pts) {
    s.x.push_back(a);
    s.y.push_back(b);
  }
  r.plots.push_back(std::move(s));
}

}  // namespace

Report run_example(const ExperimentConfig& cfg) {
  Report r;
  r.experiment = cfg.experiment;
  r.log_x = false;
  r.plot_y_label = "maximal function";
  const std::vector<double> ladder = ladder_of(cfg, true);
  const double L = cfg.extent > 0.0 ? cfg.extent : 3.0;
  bool violated = false;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) {
      violated = true;
      r.notes.push_back("bound failed: " + what);
    }
  };

  if (cfg.experiment == Experiment::ex51 || cfg.experiment == Experiment::ex51w) {
    const bool weighted = cfg.experiment == Experiment::ex51w;
    const double alpha = cfg.alpha.value_or(weighted ? 0.5 : 0.0);
    if (alpha < 0.0) throw HypothesisError("hypothesis not met: requires alpha>=0");
    if (!weighted && alpha != 0.0)
      throw HypothesisError("hypothesis not met: the unweighted example uses alpha=0");
    if (weighted && alpha > 1.0) {
      r.notes.push_back("alpha>1: M_alpha u is identically infinite (not computed)");
      r.rows.push_back({0.0, "M_alpha_u_identically_infinite", alpha, kInf, kInf, std::nan(""),
                        "", true});
      return r;
    }
    r.plot_x_label = "x on the line";
    const double arc_integral = 11.0 * kPi / 40.0;
    const double mass_factor = 2.0 + kPi / 2.0;
    for (double h : ladder) {
      const MetricMeasureSpace space = buckley_space(L, h, weighted);
      const ScalarField u = buckley_function(space);
      const std::vector<double> origin{0.0, 0.0};
      const ProbeValue at0 = frac_maximal_at(space, u, alpha, origin);
      if (!weighted) {
        const double upper = 3.0 * kPi / (20.0 + 5.0 * kPi);
        r.rows.push_back(probe_row(h, "M(0)", upper, at0, false));
        check(at0.value <= upper + kExampleTol, "M(0) <= 3pi/(20+5pi) + tol at h=" + num(h));
      } else {
        const double expect = arc_integral / mass_factor;
        r.rows.push_back(probe_row(h, "M(0)", expect, at0, false));
        check(std::fabs(at0.value - expect) <= kExampleTol,
              "|M(0) - (11pi/40)/(2+pi/2)| <= tol at h=" + num(h));
        check(!at0.truncated && std::fabs(at0.radius - 1.0) <= 0.05,
              "argmax radius at the origin near 1 at h=" + num(h));
      }
      const double lower = kPi / (8.0 + kPi);
      double nearest = 0.0;
      for (double x : {-0.1, -0.05, -0.02, -0.01, -0.005, -0.001}) {
        const ProbeValue v = frac_maximal_at(space, u, alpha, std::vector<double>{x, 0.0});
        r.rows.push_back(probe_row(h, "M(" + brief(x) + ")", lower, v, false));
        nearest = v.value;
      }
      if (!weighted) check(nearest >= lower - kExampleTol, "M(-0.001) >= pi/(8+pi) - tol at h=" + num(h));
      const double jump = nearest - at0.value;
      r.rows.push_back({h, "jump", 0.0, jump, std::nan(""), std::nan(""), "", false});
      if (!weighted) check(jump >= 0.02, "jump >= 0.02 at h=" + num(h));
      slice_plot(r, space, frac_maximal(space, u, alpha), h, false);
    }
  } else if (cfg.experiment == Experiment::ex52) {
    const double alpha = cfg.alpha.value_or(0.5);
    if (alpha < 0.0 || alpha > 1.0) throw HypothesisError("hypothesis not met: requires 0<=alpha<=1");
    r.plot_x_label = "x2 on the vertical arm";
    for (double h : ladder) {
      const MetricMeasureSpace space = cross_space(L, cfg.depth, h);
      const ScalarField u = cross_function(space);
      const ProbeValue at0 = frac_maximal_at(space, u, alpha, std::vector<double>{0.0, 0.0}, true);
      r.rows.push_back(probe_row(h, "M(0;0)", 1.0 / 3.0, at0, true));
      check(at0.value <= 1.0 / 3.0 + kExampleTol, "M(origin) <= 1/3 + tol at h=" + num(h));
      double at005 = 0.0;
      for (double t : {0.05, 0.02, 0.01}) {
        const ProbeValue v = frac_maximal_at(space, u, alpha, std::vector<double>{0.0, t}, true);
        r.rows.push_back(probe_row(h, "M(0;" + brief(t) + ")", 0.5 - t, v, true));
        check(v.value >= 0.5 - t - kExampleTol, "M(0,t) >= 1/2 - t - tol at t=" + num(t));
        if (t == 0.05) at005 = v.value;
      }
      const double gap = at005 - at0.value;
      r.rows.push_back({h, "gap", 0.0, gap, std::nan(""), std::nan(""), "", false});
      check(gap >= 0.1, "gap >= 0.1 at h=" + num(h));
      slice_plot(r, space, frac_maximal_noncentered(space, u, alpha), h, true);
    }
  } else {
    throw Error("run_example needs ex51, ex51w or ex52");
  }
  r.verdict = violated ? Verdict::violated : Verdict::consistent;
  return r;
}

Report run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::thm31: return check_thm31(cfg);
    case Experiment::thm41: return check_thm41(cfg);
    case Experiment::thm42: return check_thm42(cfg);
    case Experiment::thm43: return check_thm43(cfg);
    case Experiment::thm44a:
    case Experiment::thm44b:
    case Experiment::thm44c: return check_thm44(cfg);
    case Experiment::cor45: return check_cor45(cfg);
    case Experiment::lemma32: return check_lemma32(cfg);
    case Experiment::ex51:
    case Experiment::ex51w:
    case Experiment::ex52: return run_example(cfg);
  }
  throw Error("unknown experiment");
}

}  // namespace fracmax
