#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pgml/geometry.hpp"
#include "pgml/net.hpp"
#include "pgml/panel.hpp"

namespace pgml {

// ---------------------------------------------------------------------------
// Polars

/// One row of a viscous-solver polar.
struct PolarRecord {
  double alpha_deg = 0.0;
  double cl = 0.0;
  double cd = 0.0;
  double cdp = 0.0;
  double cm = 0.0;

  bool operator==(const PolarRecord&) const = default;
};

/// Reads an XFOIL polar save file: free header, a column line naming alpha
/// and CL, a dashed separator, then rows of at least five numbers. Extra
/// columns (transition locations) are ignored.
/// Throws FormatError without a separator and ParseError (with line) on bad rows.
std::vector<PolarRecord> parse_xfoil_polar(std::string_view content);

/// Emits the same layout XFOIL writes, with its fixed column precisions.
std::string write_xfoil_polar(std::span<const PolarRecord> records, std::string_view airfoil_name, double reynolds);

/// CSV with header alpha_deg,cl,cd,cdp,cm.
std::vector<PolarRecord> parse_polar_csv(std::string_view content);
std::string write_polar_csv(std::span<const PolarRecord> records);

/// Linear interpolation of cl in alpha; nullopt outside the polar's range.
std::optional<double> interpolate_cl(std::span<const PolarRecord> polar, double alpha_deg);

// ---------------------------------------------------------------------------
// Synthetic truth

/// Stall blend used to label samples without an external solver. The
/// constants shape a gap between potential flow and "truth" that opens past
/// roughly +-10 degrees.
struct StallModel {
  double onset_base_deg = 10.0;
  double onset_per_decade_deg = 1.3;
  double blend_width_deg = 1.5;
  double plateau = 0.85;
  double decay_per_deg = 0.02;

  double onset_deg(double reynolds) const;
  /// 1 / (1 + exp((|alpha| - onset) / width)).
  double attached_weight(double alpha_deg, double reynolds) const;
};

/// Blends panel lift with a post-stall model. `solver` must belong to the
/// airfoil being labeled.
double synth_truth(const PanelSolver& solver, const FlowCondition& condition, const StallModel& model = {});
double synth_truth(const Airfoil& airfoil, const FlowCondition& condition, const StallModel& model = {});

// ---------------------------------------------------------------------------
// Samples and normalization

enum class Split { train, validation, test };

std::string to_string(Split split);
Split parse_split(std::string_view name);

enum class Mode { ml, pgml };

std::string to_string(Mode mode);
Mode parse_mode(std::string_view name);
/// 2 for ml (Re, alpha); 4 for pgml (Re, alpha, panel cl, panel cdp).
std::size_t injected_width(Mode mode);

struct Sample {
  std::string airfoil;
  /// x coordinates of every contour point, then every y coordinate.
  std::vector<double> geometry_features;
  FlowCondition condition;
  /// Panel-method lift and pressure-drag coefficients at this geometry and alpha.
  std::array<double, 2> panel_features{};
  double target_cl = 0.0;
  Split split = Split::train;
};

/// Affine map of [min, max] onto [-1, 1]. A degenerate range maps min to 0
/// with unit scale.
struct AffineRange {
  double min = 0.0;
  double max = 1.0;

  double apply(double v) const;
  double invert(double v) const;
  bool operator==(const AffineRange&) const = default;
};

struct Normalization {
  bool fitted = false;
  AffineRange geometry_x{0.0, 1.0};
  AffineRange geometry_y{-1.0, 1.0};
  AffineRange reynolds{1e6, 4e6};
  AffineRange alpha{-20.0, 20.0};
  AffineRange panel_cl{-1.0, 1.0};
  AffineRange panel_cdp{-1.0, 1.0};

  bool operator==(const Normalization&) const = default;

  /// Fits on train-split samples only. Reynolds and alpha ranges are the
  /// nominal [1e6, 4e6] and [-20, 20], widened if the training data exceed them.
  static Normalization fit(std::span<const Sample> samples, bool with_panel_features = true);

  /// Throw StateError when not fitted.
  std::vector<double> apply_geometry(std::span<const double> features) const;
  std::vector<double> invert_geometry(std::span<const double> features) const;
  /// Normalized injected vector for the given mode.
  std::vector<double> injected(const Sample& sample, Mode mode) const;
};

void to_json(nlohmann::json& j, const Normalization& n);
void from_json(const nlohmann::json& j, Normalization& n);

struct Dataset {
  std::vector<Sample> samples;
  Normalization normalization;
  bool has_panel_features = true;
  /// Samples skipped because a polar did not cover their alpha.
  std::size_t dropped_samples = 0;

  std::size_t count(Split split) const;
};

/// Normalized network rows for the samples whose split matches.
TrainingSet make_training_set(const Dataset& dataset, Mode mode, Split split);

// ---------------------------------------------------------------------------
// Dataset construction

/// Polar lookup keyed by (airfoil name, Reynolds number).
using PolarTable = std::map<std::pair<std::string, double>, std::vector<PolarRecord>>;

struct SyntheticTruth {
  StallModel model;
  double noise_std = 0.0;
  std::uint64_t noise_seed = 0;
};

using TruthSource = std::variant<SyntheticTruth, PolarTable>;

struct DatasetRequest {
  std::vector<Airfoil> airfoils;
  /// Always tagged test; any airfoil in `airfoils` with one of these names is too.
  std::vector<Airfoil> test_airfoils;
  std::vector<double> reynolds;
  std::vector<double> alpha_deg;
  TruthSource truth = SyntheticTruth{};
  std::size_t threads = 1;
};

/// Names that are never allowed into training.
const std::vector<std::string>& default_holdout_names();

/// Cartesian product airfoil x Re x alpha. Panel features are solved once per
/// (airfoil, alpha). Throws InvalidArgument on empty grids.
Dataset build_dataset(const DatasetRequest& request);

/// Panel features recomputed from a sample's stored geometry.
std::array<double, 2> recompute_panel_features(const Sample& sample);

/// Dense 1-degree grid from start to stop inclusive.
std::vector<double> alpha_grid(double start, double stop, double step);

/// Training roster: 4-digit plus 210/220/230/240/250 series, thickness 6-18%,
/// 168 sections, test pair excluded.
std::vector<std::string> full_roster();
/// A 22-section subset of the same families for quick runs.
std::vector<std::string> desk_roster();

// ---------------------------------------------------------------------------
// Persistence

/// One row per sample: airfoil, x0..x{n-1}, y0..y{n-1}, re, alpha_deg,
/// cl_panel, cdp_panel, cl_target, split. Values carry 17 significant digits.
std::string write_dataset_csv(const Dataset& dataset);

/// Panel columns are optional; without them has_panel_features is false.
/// Normalization is taken from the sidecar when given, otherwise refitted.
/// Throws SchemaError on missing required columns, ParseError on bad rows.
Dataset read_dataset_csv(std::string_view csv, const std::optional<nlohmann::json>& sidecar = std::nullopt);

nlohmann::json dataset_sidecar(const Dataset& dataset, const std::string& csv_text, nlohmann::json provenance);

/// Hex FNV-1a of the CSV bytes.
std::string dataset_fingerprint(std::string_view csv_text);

/// Sidecar path for a dataset CSV: same stem, .json extension.
std::string sidecar_path(const std::string& csv_path);

}  // namespace pgml
