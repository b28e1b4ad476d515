#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracmax/gallery.hpp"
#include "fracmax/regularity.hpp"

namespace fracmax {

enum class Experiment {
  thm31, thm41, thm42, thm43, thm44a, thm44b, thm44c, cor45, lemma32, ex51, ex51w, ex52
};

std::string_view experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

enum class Verdict { consistent, truncation_limited, violated };

std::string_view verdict_name(Verdict v);
int verdict_exit_code(Verdict v);  // 0 consistent, 2 violated, 3 truncation-limited

// Unset parameters take per-experiment defaults (see README).
struct ExperimentConfig {
  Experiment experiment = Experiment::thm31;
  std::optional<double> alpha, beta, p, q, s, delta;
  std::vector<double> ladder;  // empty: 0.02, 0.01, 0.005 (examples: 0.005)
  std::optional<TestFunction> function;
  std::optional<GalleryKind> space;  // theorem checks default to grid1d
  double extent = 0.0;               // 0: 2 for grids, 3 for the example spaces
  double depth = 3.0;
  double cap = 0.0;                  // grids only; 0: equal to the extent
  double c0 = 1.0;                   // lemma32: y ranges over B(x, c0 R)
  bool noncentered = false;
  RegularityOptions regularity;
};

struct ReportRow {
  double h = 0.0;
  std::string label;
  double input_norm = 0.0;
  double output_norm = 0.0;
  double ratio = 0.0;
  double fitted_constant = 0.0;
  std::string witness;
  bool truncated = false;
};

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

struct Report {
  Experiment experiment = Experiment::thm31;
  Verdict verdict = Verdict::consistent;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  // Ratio-vs-h curves for the theorem checks, a slice of the maximal
  // function for the examples.
  std::vector<PlotSeries> plots;
  std::string plot_x_label = "h", plot_y_label = "ratio";
  bool log_x = true;
};

// Throws HypothesisError when the parameters violate the theorem's
// hypotheses and Error on degenerate input.
Report check_thm31(const ExperimentConfig& cfg);
Report check_thm41(const ExperimentConfig& cfg);
Report check_thm42(const ExperimentConfig& cfg);
Report check_thm43(const ExperimentConfig& cfg);
Report check_thm44(const ExperimentConfig& cfg);  // case from cfg.experiment
Report check_cor45(const ExperimentConfig& cfg);
Report check_lemma32(const ExperimentConfig& cfg);
Report run_example(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

// "Bounded across the ladder": all values finite and max <= 2 min (all
// zero counts as bounded).
bool bounded_across_ladder(const std::vector<double>& values);

inline constexpr std::string_view kReportHeader =
    "experiment,h,label,input_norm,output_norm,ratio,fitted_constant,witness,truncated";

void emit_report(std::ostream& out, const Report& r);
void emit_report(const std::string& path, const Report& r);
void render_svg(std::ostream& out, const Report& r);
void render_svg(const std::string& path, const Report& r);

}  // namespace fracmax
