#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracmax/error.hpp"
#include "fracmax/gallery.hpp"
#include "fracmax/harness.hpp"
#include "fracmax/io.hpp"
#include "fracmax/maxop.hpp"
#include "fracmax/norms.hpp"
#include "fracmax/parallel.hpp"
#include "fracmax/regularity.hpp"
#include "fracmax/simd.hpp"

using namespace fracmax;

namespace {

// Exit codes: 0 ok or consistent, 1 rejected input, 2 violated,
// 3 truncation-limited.
constexpr int kRejected = 1;
constexpr int kViolated = 2;

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}

template <class Enum, class Parse>
Enum parse_or_throw(const std::string& name, Parse parse, const char* what) {
  const std::optional<Enum> v = parse(name);
  if (!v) throw Error(std::string("unknown ") + what + " '" + name + "'");
  return *v;
}

std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error("bad ladder entry '" + item + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

struct MaxfnArgs {
  std::string space, field, out;
  double alpha = 0.0;
  bool noncentered = false, oracle = false;
};

int run_maxfn(const MaxfnArgs& a) {
  const MetricMeasureSpace space = read_space_file(a.space);
  const ScalarField u = read_field_file(a.field, space.size());
  MaxField m = a.noncentered ? frac_maximal_noncentered(space, u, a.alpha)
                             : frac_maximal(space, u, a.alpha);
  int code = 0;
  if (a.oracle) {
    const MaxField ref = frac_maximal_bruteforce(space, u, a.alpha, a.noncentered, space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
      if (ref.values[i] != m.values[i]) {
        std::cerr << "oracle mismatch at id " << i << ": fast " << format_double(m.values[i])
                  << " reference " << format_double(ref.values[i]) << '\n';
        code = kViolated;
        break;
      }
    m = ref;
  }
  std::ofstream f = open_out(a.out);
  f << "id,value,argmax_radius,argmax_center,truncated\n";
  for (std::size_t i = 0; i < space.size(); ++i)
    f << i << ',' << format_double(m.values[i]) << ',' << format_double(m.argmax_radius[i]) << ','
      << m.argmax_center[i] << ',' << int(m.truncated[i]) << '\n';
  return code;
}

struct SeminormArgs {
  std::string space, field, family, out;
  double p = 1.0, beta = 0.0;
};

int run_seminorm(const SeminormArgs& a) {
  const MetricMeasureSpace space = read_space_file(a.space);
  const ScalarField u = read_field_file(a.field, space.size());
  SeminormResult r;
  if (a.family == "campanato") r = campanato_seminorm(space, u, a.p, a.beta);
  else if (a.family == "holder") r = holder_seminorm(space, u, a.beta);
  else if (a.family == "bmo") r = bmo_seminorm(space, u);
  else if (a.family == "morrey") r = morrey_norm(space, u, a.p, a.beta);
  else throw Error("unknown family '" + a.family + "'");
  const char* kind = r.witness.kind == Witness::Kind::ball   ? "ball"
                     : r.witness.kind == Witness::Kind::pair ? "pair"
                                                             : "none";
  std::ofstream f = open_out(a.out);
  f << "family,p,beta,value,witness_kind,witness_a,witness_b,witness_radius,truncated,"
       "minimal_radius,scanned\n";
  f << family_name(r.family) << ',' << format_double(r.p) << ',' << format_double(r.beta) << ','
    << format_double(r.value) << ',' << kind << ',' << r.witness.a << ',' << r.witness.b << ','
    << format_double(r.witness.radius) << ',' << int(r.truncated) << ',' << int(r.minimal_radius)
    << ',' << r.scanned << '\n';
  return 0;
}

struct GradientArgs {
  std::string space, field, grad, out;
  double s = 1.0, C = 1.0;
};

int run_gradient(const GradientArgs& a) {
  const MetricMeasureSpace space = read_space_file(a.space);
  const ScalarField u = read_field_file(a.field, space.size());
  const ScalarField g = read_field_file(a.grad, space.size());
  const GradientCertificate c = hajlasz_check(space, u, g, a.s, a.C);
  std::ostringstream row;
  row << "s,C,passes,violation_ratio,fitted_constant,x,y\n"
      << format_double(c.s) << ',' << format_double(c.C) << ',' << int(c.passes) << ','
      << format_double(c.violation_ratio) << ',' << format_double(c.fitted_constant) << ',' << c.x
      << ',' << c.y << '\n';
  if (a.out.empty()) std::cout << row.str();
  else open_out(a.out) << row.str();
  std::cout << (c.passes ? "passes" : "fails") << '\n';
  return c.passes ? 0 : kViolated;
}

struct DecayArgs {
  std::string space, variant, out;
  RegularityOptions opt;
};

int run_decay(const DecayArgs& a) {
  const MetricMeasureSpace space = read_space_file(a.space);
  const DecayVariant v = parse_or_throw<DecayVariant>(a.variant, parse_variant, "variant");
  const DecayFit fit = fit_variant(space, v, a.opt);
  std::ofstream f = open_out(a.out);
  f << "variant,C,exponent,witness_x,witness_radius,witness_h,witness_center,witness_ball_radius,"
       "witness_ratio,samples,residual\n";
  const DecayWitness& w = fit.witness;
  f << variant_name(fit.variant) << ',' << format_double(fit.constant) << ','
    << format_double(fit.exponent) << ',' << w.x << ',' << format_double(w.radius) << ','
    << format_double(w.h) << ',' << w.ball_center << ',' << format_double(w.ball_radius) << ','
    << format_double(w.ratio) << ',' << fit.samples << ',' << format_double(fit.residual) << '\n';
  return 0;
}

struct GalleryArgs {
  std::string kind, out, field_out;
  double h = 0.005, extent = 3.0, depth = 3.0, cap = 0.0;
};

int run_gallery(const GalleryArgs& a) {
  GallerySpec spec;
  spec.kind = parse_or_throw<GalleryKind>(a.kind, parse_gallery_kind, "gallery kind");
  spec.step = a.h;
  spec.extent = a.extent;
  spec.depth = a.depth;
  spec.cap = a.cap;
  const MetricMeasureSpace space = make_gallery(spec);
  write_space_file(a.out, space);
  if (!a.field_out.empty()) write_field_file(a.field_out, gallery_field(spec, space));
  return 0;
}

struct VerifyArgs {
  std::string experiment, ladder, function, space, out, svg;
  std::optional<double> alpha, beta, p, q, s, delta, gamma;
  double extent = 0.0, cap = 0.0, c0 = 1.0;
  bool noncentered = false;
};

int run_verify(const VerifyArgs& a) {
  ExperimentConfig cfg;
  cfg.experiment = parse_or_throw<Experiment>(a.experiment, parse_experiment, "experiment");
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.p = a.p;
  cfg.q = a.q;
  cfg.s = a.s;
  cfg.delta = a.delta;
  cfg.extent = a.extent;
  cfg.cap = a.cap;
  cfg.c0 = a.c0;
  cfg.noncentered = a.noncentered;
  if (!a.ladder.empty()) cfg.ladder = parse_ladder(a.ladder);
  if (!a.space.empty())
    cfg.space = parse_or_throw<GalleryKind>(a.space, parse_gallery_kind, "gallery kind");
  if (!a.function.empty()) {
    TestFunction f;
    f.kind = parse_or_throw<TestFunctionKind>(a.function, parse_test_function, "function");
    if (a.gamma) f.gamma = *a.gamma;
    cfg.function = f;
  }
  const Report r = run_experiment(cfg);
  emit_report(a.out, r);
  if (!a.svg.empty()) render_svg(a.svg, r);
  std::cout << experiment_name(r.experiment) << ": " << verdict_name(r.verdict) << '\n';
  return verdict_exit_code(r.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional maximal operators and smoothness seminorms on metric measure spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = 0;
  std::string isa;
  app.add_option("--threads", threads, "worker threads (default: FRACMAX_THREADS or hardware)");
  app.add_option("--isa", isa, "kernel variant: scalar, avx2 or neon");

  MaxfnArgs mx;
  auto* maxfn = app.add_subcommand("maxfn", "fractional maximal function at every point");
  maxfn->add_option("--space", mx.space)->required();
  maxfn->add_option("--field", mx.field)->required();
  maxfn->add_option("--alpha", mx.alpha)->required();
  maxfn->add_flag("--noncentered", mx.noncentered);
  maxfn->add_flag("--oracle", mx.oracle, "evaluate by brute force and cross-check");
  maxfn->add_option("--out", mx.out)->required();

  SeminormArgs sn;
  auto* seminorm = app.add_subcommand("seminorm", "Campanato, Holder, BMO or Morrey seminorm");
  seminorm->add_option("--space", sn.space)->required();
  seminorm->add_option("--field", sn.field)->required();
  seminorm->add_option("--family", sn.family)->required();
  seminorm->add_option("--p", sn.p);
  seminorm->add_option("--beta", sn.beta);
  seminorm->add_option("--out", sn.out)->required();

  GradientArgs gr;
  auto* gradient = app.add_subcommand("gradient", "Hajlasz gradient tools");
  gradient->require_subcommand(1);
  auto* gcheck = gradient->add_subcommand("check", "certify a generalized s-gradient");
  gcheck->add_option("--space", gr.space)->required();
  gcheck->add_option("--field", gr.field)->required();
  gcheck->add_option("--grad", gr.grad)->required();
  gcheck->add_option("--s", gr.s)->required();
  gcheck->add_option("--C", gr.C)->required();
  gcheck->add_option("--out", gr.out);

  DecayArgs dc;
  auto* decay = app.add_subcommand("decay", "geometric regularity fits");
  decay->require_subcommand(1);
  auto* dfit = decay->add_subcommand("fit", "fit one regularity constant");
  dfit->add_option("--space", dc.space)->required();
  dfit->add_option("--variant", dc.variant)->required();
  dfit->add_option("--out", dc.out)->required();
  dfit->add_flag("--include-boundary", dc.opt.include_boundary);
  dfit->add_option("--ceiling", dc.opt.ceiling);
  dfit->add_option("--ladder-depth", dc.opt.ladder_depth);
  dfit->add_option("--margin", dc.opt.margin);

  GalleryArgs ga;
  auto* gallery = app.add_subcommand("gallery", "write a gallery space");
  gallery->add_option("--kind", ga.kind)->required();
  gallery->set_help_flag("--help", "Print this help message and exit");
  gallery->add_option("--h", ga.h, "grid step");
  gallery->add_option("--extent", ga.extent);
  gallery->add_option("--depth", ga.depth);
  gallery->add_option("--cap", ga.cap);
  gallery->add_option("--out", ga.out)->required();
  gallery->add_option("--field-out", ga.field_out);

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "run a theorem check or example reproduction");
  verify->add_option("--experiment", vf.experiment)->required();
  verify->add_option("--alpha", vf.alpha);
  verify->add_option("--beta", vf.beta);
  verify->add_option("--p", vf.p);
  verify->add_option("--q", vf.q);
  verify->add_option("--s", vf.s);
  verify->add_option("--delta", vf.delta);
  verify->add_option("--h-ladder", vf.ladder, "comma separated steps, e.g. 0.02,0.01,0.005");
  verify->add_option("--function", vf.function, "constant|linear|abs_power|clipped_log|bump|sign");
  verify->add_option("--gamma", vf.gamma, "exponent for abs_power");
  verify->add_option("--space", vf.space, "gallery kind for theorem checks (default grid1d)");
  verify->add_option("--extent", vf.extent);
  verify->add_option("--cap", vf.cap);
  verify->add_option("--c0", vf.c0);
  verify->add_flag("--noncentered", vf.noncentered);
  verify->add_option("--out", vf.out)->required();
  verify->add_option("--svg", vf.svg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) set_thread_count(threads);
    if (!isa.empty()) {
      const std::optional<simd::Isa> chosen = simd::parse_isa(isa);
      if (!chosen) throw Error("unknown isa '" + isa + "'");
      if (!simd::kernels_for(*chosen)) throw Error("isa '" + isa + "' is not available on this machine");
      simd::set_isa(chosen);
    }
    if (*maxfn) return run_maxfn(mx);
    if (*seminorm) return run_seminorm(sn);
    if (*gcheck) return run_gradient(gr);
    if (*dfit) return run_decay(dc);
    if (*gallery) return run_gallery(ga);
    if (*verify) return run_verify(vf);
  } catch (const HypothesisError& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return kRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRejected;
  }
  return kRejected;
}
