#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pgml/data.hpp"
#include "pgml/ensemble.hpp"

namespace pgml::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3 };

/// Entry point used by main() and by tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Evaluation

struct EvalRow {
  std::string airfoil;
  double reynolds = 0.0;
  double alpha_deg = 0.0;
  double cl_true = 0.0;
  double cl_mean = 0.0;
  double cl_std = 0.0;
};

struct EvalFilter {
  std::vector<std::string> airfoils;  // empty: every test-split airfoil
  std::optional<double> reynolds;
};

std::vector<EvalRow> evaluate(const Ensemble& ensemble, Mode mode, const Normalization& normalization,
                              const Dataset& dataset, const EvalFilter& filter);

/// With `bands`, appends cl_lower and cl_upper = mean -+ 2 std for band plots.
std::string write_eval_csv(std::span<const EvalRow> rows, bool bands = false);
std::vector<EvalRow> read_eval_csv(std::string_view content);

/// Split at |alpha| = boundary: "inner" is |alpha| <= boundary.
struct RegimeMetrics {
  std::size_t inner_count = 0;
  std::size_t outer_count = 0;
  double inner_rmse = 0.0;
  double inner_mean_std = 0.0;
  double outer_rmse = 0.0;
  double outer_mean_std = 0.0;
};

RegimeMetrics regime_metrics(std::span<const EvalRow> rows, double boundary_deg = 10.0);

/// Rows grouped by airfoil in first-appearance order.
std::vector<std::pair<std::string, std::vector<EvalRow>>> group_by_airfoil(std::span<const EvalRow> rows);

struct ComparisonLine {
  std::string airfoil;  // "all" for the pooled line
  RegimeMetrics ml;
  RegimeMetrics pgml;
};

struct Comparison {
  std::vector<ComparisonLine> lines;
  /// PGML mean std strictly below ML's on the inner regime for every airfoil.
  bool inner_uncertainty_reduced = false;
};

/// pgml / ml, with 0/0 reported as 1.
double ratio(double pgml, double ml);

/// Throws InvalidArgument when the two sweeps do not cover the same rows.
Comparison compare(std::span<const EvalRow> ml, std::span<const EvalRow> pgml);
std::string comparison_text(const Comparison& c);
std::string comparison_csv(const Comparison& c);

}  // namespace pgml::cli
