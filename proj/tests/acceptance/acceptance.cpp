// One PASS/FAIL line per acceptance criterion; exit status is the number
// of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "../support.hpp"
#include "fracmax/gallery.hpp"
#include "fracmax/harness.hpp"
#include "fracmax/maxop.hpp"
#include "fracmax/norms.hpp"
#include "fracmax/regularity.hpp"

using namespace fracmax;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ReportRow* find_row(const Report& r, const std::string& label) {
  for (const ReportRow& row : r.rows)
    if (row.label == label) return &row;
  return nullptr;
}

double row_value(const Report& r, const std::string& label, Outcome& o) {
  const ReportRow* row = find_row(r, label);
  o.require(row != nullptr, "missing row " + label);
  return row ? row->output_norm : std::nan("");
}

ExperimentConfig config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  return c;
}

Outcome criterion_oracle_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<std::size_t> size(5, 200);
  std::size_t mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    const auto s = testing::random_space(rng, size(rng), t % 2 == 0);
    const ScalarField u = testing::random_field(rng, s.size());
    for (double alpha : {0.0, 0.5, 1.0}) {
      if (!testing::same_maxfield(frac_maximal(s, u, alpha), frac_maximal_bruteforce(s, u, alpha, false)))
        ++mismatches;
      if (!testing::same_maxfield(frac_maximal_noncentered(s, u, alpha),
                                  frac_maximal_bruteforce(s, u, alpha, true)))
        ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatching fields");
  o.require(secs < 10.0, "took " + fmt(secs) + " s");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("300 comparisons in ") + fmt(secs) + " s";
  return o;
}

Outcome criterion_line_arc() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = run_example(config(Experiment::ex51));
  const double secs = seconds_since(t0);
  const double at0 = row_value(r, "M(0)", o);
  const double left = row_value(r, "M(-0.001)", o);
  const double jump = row_value(r, "jump", o);
  o.require(at0 >= 0.232 && at0 <= 0.275, "M u(0) = " + fmt(at0));
  o.require(left >= 0.272, "M u(-0.001) = " + fmt(left));
  o.require(jump >= 0.02, "jump = " + fmt(jump));
  o.require(secs < 30.0, "took " + fmt(secs) + " s");
  if (o.pass)
    o.detail = "M u(0)=" + fmt(at0) + " M u(-0.001)=" + fmt(left) + " jump=" + fmt(jump) + " in " + fmt(secs) + " s";
  return o;
}

Outcome criterion_line_arc_weighted() {
  Outcome o;
  ExperimentConfig c = config(Experiment::ex51w);
  c.alpha = 0.5;
  const Report r = run_example(c);
  const ReportRow* at0 = find_row(r, "M(0)");
  o.require(at0 != nullptr, "missing row M(0)");
  const double expect = (11.0 * kPi / 40.0) / (2.0 + kPi / 2.0);
  if (at0) {
    o.require(std::fabs(at0->output_norm - expect) <= 0.01,
              "M_a u(0) = " + fmt(at0->output_norm) + " vs " + fmt(expect));
    o.require(!at0->truncated, "argmax at the cap");
    const double radius = std::stod(at0->witness.substr(2));
    o.require(std::fabs(radius - 1.0) <= 0.05, "argmax radius " + fmt(radius));
  }
  c.alpha = 1.5;
  const Report inf = run_example(c);
  o.require(inf.rows.size() == 1 && inf.rows[0].label == "M_alpha_u_identically_infinite" &&
                std::isinf(inf.rows[0].output_norm),
            "alpha=1.5 not flagged");
  if (o.pass && at0)
    o.detail = "M_a u(0)=" + fmt(at0->output_norm) + " target " + fmt(expect) + " at r=" + at0->witness.substr(2) +
               "; alpha=1.5 flagged";
  return o;
}

Outcome criterion_cross_example() {
  Outcome o;
  std::string summary;
  for (double alpha : {0.0, 0.5, 1.0}) {
    ExperimentConfig c = config(Experiment::ex52);
    c.alpha = alpha;
    const Report r = run_example(c);
    const double origin = row_value(r, "M(0;0)", o);
    const double up = row_value(r, "M(0;0.05)", o);
    const double gap = row_value(r, "gap", o);
    const std::string a = "alpha=" + fmt(alpha) + ": ";
    o.require(origin <= 1.0 / 3.0 + 0.01, a + "origin " + fmt(origin));
    o.require(up >= 0.44, a + "(0,0.05) " + fmt(up));
    o.require(gap >= 0.1, a + "gap " + fmt(gap));
    summary += (summary.empty() ? "" : ", ") + a + fmt(origin) + "/" + fmt(up);
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome criterion_regularity_fits() {
  Outcome o;
  const auto grid = euclidean_grid(1, 0.01, -2.0, 2.0, 1.0);
  const DecayFit d = doubling_constant(grid);
  const DecayFit l = lower_bound_fit(grid);
  const DecayFit a = annular_decay_fit(grid);
  o.require(d.constant >= 1.8 && d.constant <= 2.2, "doubling " + fmt(d.constant));
  o.require(l.exponent >= 0.95 && l.exponent <= 1.05, "Q " + fmt(l.exponent));
  o.require(a.exponent >= 0.9 && a.constant <= 1.3, "annular (" + fmt(a.constant) + ", " + fmt(a.exponent) + ")");
  const auto buck = buckley_space(3.0, 0.01, false);
  const DecayFit b = annular_decay_fit(buck);
  o.require(b.exponent <= 0.2, "line-plus-arc delta " + fmt(b.exponent));
  o.require(std::fabs(b.witness.radius - 1.0) <= 0.02, "line-plus-arc witness R " + fmt(b.witness.radius));
  if (o.pass)
    o.detail = "c_d=" + fmt(d.constant) + " Q=" + fmt(l.exponent) + " (C,delta)=(" + fmt(a.constant) + "," +
               fmt(a.exponent) + ") line-plus-arc delta=" + fmt(b.exponent) + " at R=" + fmt(b.witness.radius);
  return o;
}

std::vector<double> gradient_terms(const Report& r) {
  std::vector<double> out;
  for (const ReportRow& row : r.rows)
    if (row.label == "gradient") out.push_back(row.fitted_constant);
  return out;
}

Outcome criterion_gradient_terms() {
  Outcome o;
  std::string summary;
  for (const TestFunction& f : {TestFunction{TestFunctionKind::bump}, TestFunction{TestFunctionKind::abs_power, 1.0, 0.75}}) {
    ExperimentConfig c = config(Experiment::thm42);
    c.delta = 0.5;
    c.alpha = 0.5;
    c.p = 1.5;
    c.ladder = {0.02, 0.01, 0.005};
    c.function = f;
    const Report r = check_thm42(c);
    const std::vector<double> k = gradient_terms(r);
    const std::string name = f.kind == TestFunctionKind::bump ? "bump" : "abs_power(0.75)";
    o.require(k.size() == 3 && bounded_across_ladder(k), name + " constants not within 2x");
    std::string vals;
    for (double v : k) vals += (vals.empty() ? "" : ",") + fmt(v);
    summary += (summary.empty() ? "" : "; ") + name + " C=" + vals;
  }
  o.detail = o.pass ? summary : o.detail + " (" + summary + ")";
  return o;
}

Outcome criterion_gain_ratios() {
  Outcome o;
  std::string summary;
  ExperimentConfig a = config(Experiment::thm31);
  a.beta = 0.5;
  a.alpha = 0.25;
  a.function = TestFunction{TestFunctionKind::abs_power, 1.0, 0.5};
  ExperimentConfig b = config(Experiment::thm31);
  b.beta = 0.0;
  b.alpha = 0.5;
  b.function = TestFunction{TestFunctionKind::clipped_log};
  for (const ExperimentConfig* c : {&a, &b}) {
    const Report r = check_thm31(*c);
    std::vector<double> ratios;
    for (const ReportRow& row : r.rows) ratios.push_back(row.ratio);
    const std::string name = c == &a ? "(beta=0.5, alpha=0.25)" : "(clipped log, alpha=0.5)";
    o.require(ratios.size() == 3 && bounded_across_ladder(ratios), name + " ratios not within 2x");
    std::string vals;
    for (double v : ratios) vals += (vals.empty() ? "" : ",") + fmt(v);
    summary += (summary.empty() ? "" : "; ") + name + " " + vals;
  }
  o.detail = o.pass ? summary : o.detail + " (" + summary + ")";
  return o;
}

Outcome criterion_invariant_suites() {
  Outcome o;
  std::mt19937_64 rng(777);
  std::size_t instances = 0;
  auto fail = [&](const std::string& what, int t) { o.require(false, what + " on instance " + std::to_string(t)); };
  for (int t = 0; t < 24; ++t) {
    const auto s = testing::random_space(rng, 30 + 5 * static_cast<std::size_t>(t), t % 2 == 0);
    const ScalarField u = testing::random_field(rng, s.size());
    const ScalarField v = testing::random_field(rng, s.size());
    ScalarField sum(u.size()), scaled(u.size()), bigger(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      sum[i] = u[i] + v[i];
      scaled[i] = -3.5 * u[i];
      bigger[i] = std::fabs(u[i]) + std::fabs(v[i]);
    }
    ++instances;
    for (double alpha : {0.0, 0.5, 1.0}) {
      const MaxField mu = frac_maximal(s, u, alpha), mv = frac_maximal(s, v, alpha);
      const MaxField msum = frac_maximal(s, sum, alpha), mscaled = frac_maximal(s, scaled, alpha);
      const MaxField mbig = frac_maximal(s, bigger, alpha);
      const MaxField nc = frac_maximal_noncentered(s, u, alpha);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double tol = 1e-12 * (mu.values[i] + mv.values[i]);
        if (msum.values[i] > mu.values[i] + mv.values[i] + tol) fail("sublinearity", t);
        if (std::fabs(mscaled.values[i] - 3.5 * mu.values[i]) > 1e-12 * mscaled.values[i]) fail("homogeneity", t);
        if (mbig.values[i] < mu.values[i] * (1 - 1e-12)) fail("monotonicity", t);
        if (nc.values[i] < mu.values[i]) fail("noncentered >= centered", t);
      }
    }
    const double bmo = bmo_seminorm(s, u).value;
    for (double p : {1.0, 1.5, 2.0, 3.0})
      if (bmo > campanato_seminorm(s, u, p, 0.0).value * (1 + 1e-12)) fail("bmo <= campanato", t);
    for (double beta : {0.25, 0.5, 1.0})
      if (campanato_seminorm(s, u, 1.0, beta).value > std::pow(2.0, beta) * holder_seminorm(s, u, beta).value * (1 + 1e-12))
        fail("campanato <= 2^beta holder", t);
    for (double sexp : {0.5, 1.0}) {
      const ScalarField g = canonical_gradient(s, u, sexp);
      if (poincare_ratio(s, u, g, sexp).value > std::pow(2.0, sexp + 1.0)) fail("poincare <= 2^(s+1)", t);
    }
    for (const SeminormResult& r :
         {holder_seminorm(s, u, 0.5), campanato_seminorm(s, u, 1.0, 0.5), campanato_seminorm(s, u, 2.0, -0.5),
          campanato_seminorm(s, u, 2.5, 0.0), bmo_seminorm(s, u), morrey_norm(s, u, 2.0, -0.5)})
      if (std::fabs(reevaluate_witness(s, u, r) - r.value) > 1e-12 * std::fabs(r.value)) fail("witness reproduction", t);
  }
  if (o.pass) o.detail = std::to_string(instances) + " random instances";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome cli_determinism(const std::string& cli) {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("fracmax-accept-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string d = dir.string();
  // Each entry: command arguments and the output files it writes.
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"gallery --kind buckley --h 0.02 --extent 3 --out {}/space.txt --field-out {}/field.txt",
       {"space.txt", "field.txt"}},
      {"maxfn --space {}/space.txt --field {}/field.txt --alpha 0.5 --out {}/max.csv", {"max.csv"}},
      {"maxfn --space {}/space.txt --field {}/field.txt --alpha 0.5 --noncentered --oracle --out {}/maxnc.csv",
       {"maxnc.csv"}},
      {"seminorm --space {}/space.txt --field {}/field.txt --family campanato --p 2 --beta 0.5 --out {}/semi.csv",
       {"semi.csv"}},
      {"decay fit --space {}/space.txt --variant relative --out {}/fit.csv", {"fit.csv"}},
      {"verify --experiment ex51 --out {}/ex51.csv --svg {}/ex51.svg", {"ex51.csv", "ex51.svg"}},
      {"verify --experiment thm42 --delta 0.5 --h-ladder 0.04,0.02,0.01 --out {}/thm42.csv --svg {}/thm42.svg",
       {"thm42.csv", "thm42.svg"}},
  };
  auto expand = [&](std::string s) {
    for (std::size_t pos; (pos = s.find("{}")) != std::string::npos;) s.replace(pos, 2, d);
    return s;
  };
  std::vector<std::string> baseline;
  std::size_t compared = 0;
  int pass_no = 0;
  for (const char* threads : {"1", "1", "2", "4"}) {
    std::vector<std::string> outputs;
    for (const auto& [args, files] : runs) {
      const std::string cmd = std::string("FRACMAX_THREADS=") + threads + " \"" + cli + "\" " + expand(args) +
                              " > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, "exit status " + std::to_string(rc) + " for: " + expand(args));
      for (const std::string& f : files) outputs.push_back(slurp(dir / f));
    }
    if (pass_no++ == 0) {
      baseline = outputs;
    } else {
      for (std::size_t k = 0; k < outputs.size(); ++k) {
        ++compared;
        o.require(outputs[k] == baseline[k] && !outputs[k].empty(),
                  "output " + std::to_string(k) + " differs at FRACMAX_THREADS=" + threads);
      }
    }
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(compared) + " files identical over reruns and 1/2/4 threads";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : FRACMAX_CLI_PATH;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", criterion_oracle_equivalence},
      {"unweighted line-plus-arc example", criterion_line_arc},
      {"weighted line-plus-arc example", criterion_line_arc_weighted},
      {"cross example", criterion_cross_example},
      {"regularity fits", criterion_regularity_fits},
      {"gradient-term constants", criterion_gradient_terms},
      {"lipschitz-gain ratios", criterion_gain_ratios},
      {"invariant suites", criterion_invariant_suites},
      {"CLI determinism", [&] { return cli_determinism(cli); }},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %d: %s: %s (%s)\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
