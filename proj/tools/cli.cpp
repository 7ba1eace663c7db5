#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "pgml/error.hpp"
#include "pgml/parallel.hpp"
#include "pgml/text.hpp"

namespace pgml::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) { return text::format_report(v); }

// Inputs that are wrong are kUsage; failures of a numerical procedure are kNumerical.
struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

void emit(const std::optional<std::string>& path, std::string_view content, std::ostream& out) {
  if (path)
    text::write_file(*path, content);
  else
    out << content;
}

// ---------------------------------------------------------------------------
// JSON config: {"<subcommand>": {"<option>": value}}; explicit flags win.

std::vector<std::string> config_tokens(const json& section, const std::set<std::string>& given) {
  std::vector<std::string> tokens;
  for (auto it = section.begin(); it != section.end(); ++it) {
    const std::string& key = it.key();
    if (given.count(key)) continue;
    const auto& v = it.value();
    const std::string flag = "--" + key;
    auto scalar = [](const json& s) { return s.is_string() ? s.get<std::string>() : s.dump(); };
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back(flag);
    } else if (v.is_array()) {
      tokens.push_back(flag);
      for (const auto& e : v) tokens.push_back(scalar(e));
    } else if (!v.is_null() && !v.is_object()) {
      tokens.push_back(flag);
      tokens.push_back(scalar(v));
    }
  }
  return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CommandError(kUsage, "--config needs a path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path) return rest;
  json cfg;
  try {
    cfg = json::parse(text::read_file(*config_path));
  } catch (const json::exception& e) {
    throw CommandError(kUsage, "config '" + *config_path + "': " + e.what());
  }
  auto sub = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return !a.empty() && a[0] != '-'; });
  if (sub == rest.end() || !cfg.contains(*sub) || !cfg[*sub].is_object()) return rest;
  std::set<std::string> given;
  for (const auto& a : rest)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  auto tokens = config_tokens(cfg[*sub], given);
  rest.insert(sub + 1, tokens.begin(), tokens.end());
  return rest;
}

// ---------------------------------------------------------------------------

Airfoil load_airfoil(const std::string& designation, const std::string& dat_path, int points) {
  if (!dat_path.empty()) return read_dat(text::read_file(dat_path));
  return naca(designation, points);
}

std::vector<Airfoil> airfoils_from(const std::vector<std::string>& names, int points) {
  std::vector<Airfoil> out;
  for (const auto& n : names) out.push_back(naca(n, points));
  return out;
}

PolarTable load_polar_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InvalidFile("polar directory '" + dir + "' does not exist");
  static const std::regex pattern(R"((.+)_re([0-9]+)\.(pol|txt|dat))");
  PolarTable table;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::smatch m;
    const std::string name = p.filename().string();
    if (!std::regex_match(name, m, pattern)) continue;
    try {
      table[{m[1].str(), std::stod(m[2].str())}] = parse_xfoil_polar(text::read_file(p.string()));
    } catch (const ParseError& e) {
      throw ParseError(name + ": " + e.what());
    }
  }
  return table;
}

void print_eval_summary(std::span<const EvalRow> rows, std::ostream& os) {
  for (const auto& [name, group] : group_by_airfoil(rows)) {
    const auto m = regime_metrics(group);
    os << name << " |alpha|<=10: rmse=" << fmt(m.inner_rmse) << " mean_std=" << fmt(m.inner_mean_std)
       << "  |alpha|>10: rmse=" << fmt(m.outer_rmse) << " mean_std=" << fmt(m.outer_mean_std) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommands

struct GenAirfoilArgs {
  std::string designation;
  int points = 201;
  std::optional<std::string> out;
};

int cmd_gen_airfoil(const GenAirfoilArgs& a, std::ostream& out, std::ostream& err) {
  const auto profile = NacaProfile::parse(a.designation);
  const auto airfoil = naca(a.designation, a.points);
  const auto thick = max_thickness(airfoil);
  const auto camber = max_camber(profile);
  emit(a.out, write_dat(airfoil), out);
  std::ostream& info = a.out ? out : err;
  info << airfoil.name() << ": " << airfoil.size() << " points, max thickness " << fmt(thick.thickness) << " at x="
       << fmt(thick.x) << ", max camber " << fmt(camber.height) << " at x=" << fmt(camber.x) << "\n";
  return kOk;
}

struct PanelArgs {
  std::string designation;
  std::string dat;
  int points = 201;
  std::optional<double> alpha;
  std::vector<double> sweep;
  bool polar = false;
  std::optional<std::string> out;
};

int cmd_panel(const PanelArgs& a, std::ostream& out, std::ostream& err) {
  if (a.designation.empty() == a.dat.empty()) throw CommandError(kUsage, "give either a designation or --dat");
  try {
    const auto airfoil = load_airfoil(a.designation, a.dat, a.points);
    if (a.alpha.has_value() == !a.sweep.empty()) throw CommandError(kUsage, "give either --alpha or --sweep");
    const PanelSolver solver(airfoil);
    std::string csv;
    if (a.alpha) {
      const auto sol = solver.solve(*a.alpha);
      if (a.polar) {
        csv = "alpha_deg,cl,cdp\n" + fmt(sol.alpha_deg) + "," + fmt(sol.cl) + "," + fmt(sol.cdp) + "\n";
      } else {
        csv = "x,cp\n";
        const auto& g = solver.geometry();
        for (std::size_t i = 0; i < g.size(); ++i) csv += fmt(g.control_points[i].x) + "," + fmt(sol.cp[i]) + "\n";
        (a.out ? out : err) << airfoil.name() << " alpha=" << fmt(sol.alpha_deg) << " cl=" << fmt(sol.cl)
                            << " cdp=" << fmt(sol.cdp) << "\n";
      }
      if (sol.outside_validity) err << "pgml: warning: |alpha| > 30 deg is outside the potential-flow range\n";
    } else {
      const auto grid = alpha_grid(a.sweep[0], a.sweep[1], a.sweep[2]);
      csv = "alpha_deg,cl,cdp\n";
      for (double alpha : grid) {
        const auto sol = solver.solve(alpha);
        csv += fmt(alpha) + "," + fmt(sol.cl) + "," + fmt(sol.cdp) + "\n";
      }
    }
    emit(a.out, csv, out);
  } catch (const NumericalError& e) {
    throw CommandError(kUsage, e.what());
  }
  return kOk;
}

struct DatasetArgs {
  std::string roster = "desk";
  std::vector<std::string> airfoils;
  std::vector<std::string> test_airfoils{"23012", "23024"};
  std::vector<double> reynolds{1e6, 2e6, 3e6, 4e6};
  double alpha_start = -20.0, alpha_stop = 20.0, alpha_step = 1.0;
  int points = 201;
  std::string polar_dir;
  double noise_std = 0.0;
  std::uint64_t noise_seed = 0;
  StallModel stall;
  bool without_panel = false;
  std::optional<std::size_t> threads;
  std::string out;
};

int cmd_dataset(const DatasetArgs& a, std::ostream& out, std::ostream&) {
  std::vector<std::string> names = a.airfoils;
  if (names.empty()) {
    if (a.roster == "desk")
      names = desk_roster();
    else if (a.roster == "full")
      names = full_roster();
    else
      throw CommandError(kUsage, "roster must be 'desk' or 'full'");
  }
  DatasetRequest req;
  req.airfoils = airfoils_from(names, a.points);
  req.test_airfoils = airfoils_from(a.test_airfoils, a.points);
  req.reynolds = a.reynolds;
  req.alpha_deg = alpha_grid(a.alpha_start, a.alpha_stop, a.alpha_step);
  req.threads = a.threads.value_or(default_thread_count());
  json truth;
  if (!a.polar_dir.empty()) {
    req.truth = load_polar_dir(a.polar_dir);
    truth = {{"source", "xfoil-polars"}};
  } else {
    req.truth = SyntheticTruth{a.stall, a.noise_std, a.noise_seed};
    truth = {{"source", "synthetic"},
             {"stall_onset_deg", a.stall.onset_base_deg},
             {"stall_onset_per_decade_deg", a.stall.onset_per_decade_deg},
             {"blend_width_deg", a.stall.blend_width_deg},
             {"plateau", a.stall.plateau},
             {"decay_per_deg", a.stall.decay_per_deg},
             {"noise_std", a.noise_std},
             {"noise_seed", a.noise_seed}};
  }
  auto ds = build_dataset(req);
  if (a.without_panel) ds.has_panel_features = false;
  const auto csv = write_dataset_csv(ds);
  std::vector<std::string> test_names;
  for (const auto& t : req.test_airfoils) test_names.push_back(t.name());
  json provenance{{"airfoils", names},        {"test_airfoils", test_names}, {"reynolds", a.reynolds},
                  {"alpha_start", a.alpha_start}, {"alpha_stop", a.alpha_stop}, {"alpha_step", a.alpha_step},
                  {"points", a.points},       {"truth", truth}};
  text::write_file(a.out, csv);
  text::write_file(sidecar_path(a.out), dataset_sidecar(ds, csv, provenance).dump(2) + "\n");
  out << "wrote " << ds.samples.size() << " samples (" << ds.count(Split::train) << " train, "
      << ds.count(Split::test) << " test, " << ds.dropped_samples << " dropped) to " << a.out << "\n";
  return kOk;
}

struct LoadedDataset {
  Dataset dataset;
  std::string csv;
};

LoadedDataset load_dataset(const std::string& path) {
  if (!fs::exists(path)) throw CommandError(kUsage, "dataset '" + path + "' does not exist");
  LoadedDataset out;
  out.csv = text::read_file(path);
  std::optional<json> sidecar;
  const auto side = sidecar_path(path);
  if (fs::exists(side)) {
    try {
      sidecar = json::parse(text::read_file(side));
    } catch (const json::exception& e) {
      throw SchemaError("sidecar '" + side + "': " + e.what());
    }
  }
  out.dataset = read_dataset_csv(out.csv, sidecar);
  return out;
}

struct TrainArgs {
  std::string dataset;
  std::string mode;
  std::vector<std::uint64_t> seeds = default_seeds(10);
  TrainConfig config;
  std::optional<std::size_t> patience;
  std::string activation = "tanh";
  std::vector<std::size_t> hidden{20, 20, 20, 20};
  std::size_t inject_layer = 3;
  std::optional<std::size_t> threads;
  std::string out;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream&) {
  const Mode mode = parse_mode(a.mode);
  const auto loaded = load_dataset(a.dataset);
  const auto set = make_training_set(loaded.dataset, mode, Split::train);
  if (set.empty()) throw CommandError(kUsage, "dataset has no training rows");

  NetworkShape shape;
  shape.input_width = set.input_width();
  shape.hidden_widths = a.hidden;
  shape.injection = {a.inject_layer, injected_width(mode)};
  shape.activation = parse_activation(a.activation);
  shape.validate();
  TrainConfig cfg = a.config;
  cfg.early_stopping_patience = a.patience;

  const auto trained = train_ensemble(shape, set, cfg, a.seeds, a.threads.value_or(default_thread_count()));
  json extra{{"mode", to_string(mode)},
             {"normalization", loaded.dataset.normalization},
             {"dataset_fingerprint", dataset_fingerprint(loaded.csv)},
             {"shape",
              {{"input_width", shape.input_width},
               {"hidden_widths", shape.hidden_widths},
               {"output_width", shape.output_width},
               {"injection_layer", shape.injection.layer_index},
               {"injected_width", shape.injection.injected_width},
               {"activation", to_string(shape.activation)}}}};
  save_ensemble(trained.ensemble, a.out, extra);
  for (std::size_t i = 0; i < trained.histories.size(); ++i) {
    const auto& h = trained.histories[i];
    std::string csv = "epoch,train_loss,validation_loss\n";
    for (std::size_t e = 0; e < h.train_loss.size(); ++e)
      csv += std::to_string(e + 1) + "," + fmt(h.train_loss[e]) + "," +
             (e < h.validation_loss.size() ? fmt(h.validation_loss[e]) : std::string()) + "\n";
    char name[32];
    std::snprintf(name, sizeof name, "loss_%03zu.csv", i);
    text::write_file((fs::path(a.out) / name).string(), csv);
  }
  out << "trained " << trained.ensemble.members.size() << " " << to_string(mode) << " members on " << set.size()
      << " rows into " << a.out << "\n";
  return kOk;
}

struct EvaluateArgs {
  std::string ensemble;
  std::string dataset;
  std::vector<std::string> airfoils;
  std::optional<double> reynolds;
  bool bands = false;
  std::optional<std::string> out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(a.ensemble)) throw CommandError(kUsage, "ensemble directory '" + a.ensemble + "' does not exist");
  const auto loaded = load_ensemble(a.ensemble);
  const auto data = load_dataset(a.dataset);
  const Mode mode = parse_mode(loaded.manifest.at("mode").get<std::string>());
  const auto norm = loaded.manifest.at("normalization").get<Normalization>();
  EvalFilter filter;
  for (const auto& n : a.airfoils) filter.airfoils.push_back(NacaProfile::parse(n).name());
  filter.reynolds = a.reynolds;
  const auto rows = evaluate(loaded.ensemble, mode, norm, data.dataset, filter);
  if (rows.empty()) throw CommandError(kUsage, "no dataset rows match the evaluation filter");
  emit(a.out, write_eval_csv(rows, a.bands), out);
  print_eval_summary(rows, a.out ? out : err);
  return kOk;
}

struct ReportArgs {
  std::string ml;
  std::string pgml;
  std::optional<std::string> out;
};

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream&) {
  const auto ml = read_eval_csv(text::read_file(a.ml));
  const auto pg = read_eval_csv(text::read_file(a.pgml));
  const auto c = compare(ml, pg);
  out << comparison_text(c);
  if (a.out) text::write_file(*a.out, comparison_csv(c));
  return kOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation helpers

std::vector<EvalRow> evaluate(const Ensemble& ensemble, Mode mode, const Normalization& normalization,
                              const Dataset& dataset, const EvalFilter& filter) {
  if (mode == Mode::pgml && !dataset.has_panel_features)
    throw SchemaError("pgml ensemble needs cl_panel and cdp_panel columns");
  const std::set<std::string> names(filter.airfoils.begin(), filter.airfoils.end());
  std::vector<EvalRow> rows;
  for (const auto& s : dataset.samples) {
    if (names.empty() ? s.split != Split::test : !names.count(s.airfoil)) continue;
    if (filter.reynolds && s.condition.reynolds != *filter.reynolds) continue;
    const auto x = normalization.apply_geometry(s.geometry_features);
    const auto inj = normalization.injected(s, mode);
    const auto p = predict_with_uncertainty(ensemble, x, inj);
    rows.push_back({s.airfoil, s.condition.reynolds, s.condition.alpha_deg, s.target_cl, p.mean, p.std});
  }
  return rows;
}

std::string write_eval_csv(std::span<const EvalRow> rows, bool bands) {
  std::string out = bands ? "airfoil,Re,alpha_deg,cl_true,cl_mean,cl_std,cl_lower,cl_upper\n"
                          : "airfoil,Re,alpha_deg,cl_true,cl_mean,cl_std\n";
  for (const auto& r : rows) {
    out += r.airfoil + "," + fmt(r.reynolds) + "," + fmt(r.alpha_deg) + "," + fmt(r.cl_true) + "," + fmt(r.cl_mean) +
           "," + fmt(r.cl_std);
    if (bands) out += "," + fmt(r.cl_mean - 2.0 * r.cl_std) + "," + fmt(r.cl_mean + 2.0 * r.cl_std);
    out += "\n";
  }
  return out;
}

std::vector<EvalRow> read_eval_csv(std::string_view content) {
  const auto lines = text::split_lines(content);
  std::vector<EvalRow> rows;
  std::size_t width = 0;  // 6, or 8 with band columns
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const auto f = text::split_char(lines[i], ',');
    if (width == 0) {
      if ((f.size() != 6 && f.size() != 8) || text::trim(f[0]) != "airfoil")
        throw FormatError("evaluation CSV header is missing");
      width = f.size();
      continue;
    }
    if (f.size() != width) throw ParseError("evaluation row needs " + std::to_string(width) + " fields", i + 1);
    EvalRow r;
    r.airfoil = std::string(text::trim(f[0]));
    double* dst[] = {&r.reynolds, &r.alpha_deg, &r.cl_true, &r.cl_mean, &r.cl_std};
    for (std::size_t k = 0; k < 5; ++k) {
      auto v = text::parse_double(f[k + 1]);
      if (!v) throw ParseError("bad number '" + std::string(f[k + 1]) + "'", i + 1);
      *dst[k] = *v;
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw FormatError("evaluation CSV has no rows");
  return rows;
}

RegimeMetrics regime_metrics(std::span<const EvalRow> rows, double boundary_deg) {
  RegimeMetrics m;
  double sse_in = 0, sse_out = 0, std_in = 0, std_out = 0;
  for (const auto& r : rows) {
    const double e = r.cl_mean - r.cl_true;
    if (std::abs(r.alpha_deg) <= boundary_deg) {
      ++m.inner_count;
      sse_in += e * e;
      std_in += r.cl_std;
    } else {
      ++m.outer_count;
      sse_out += e * e;
      std_out += r.cl_std;
    }
  }
  if (m.inner_count) {
    m.inner_rmse = std::sqrt(sse_in / static_cast<double>(m.inner_count));
    m.inner_mean_std = std_in / static_cast<double>(m.inner_count);
  }
  if (m.outer_count) {
    m.outer_rmse = std::sqrt(sse_out / static_cast<double>(m.outer_count));
    m.outer_mean_std = std_out / static_cast<double>(m.outer_count);
  }
  return m;
}

std::vector<std::pair<std::string, std::vector<EvalRow>>> group_by_airfoil(std::span<const EvalRow> rows) {
  std::vector<std::pair<std::string, std::vector<EvalRow>>> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == r.airfoil; });
    if (it == groups.end()) {
      groups.push_back({r.airfoil, {}});
      it = groups.end() - 1;
    }
    it->second.push_back(r);
  }
  return groups;
}

double ratio(double pgml, double ml) {
  if (ml == 0.0) return pgml == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return pgml / ml;
}

Comparison compare(std::span<const EvalRow> ml, std::span<const EvalRow> pgml) {
  if (ml.empty() || pgml.empty()) throw InvalidArgument("comparison needs non-empty sweeps");
  if (ml.size() != pgml.size()) throw InvalidArgument("ML and PGML sweeps have different lengths");
  for (std::size_t i = 0; i < ml.size(); ++i)
    if (ml[i].airfoil != pgml[i].airfoil || ml[i].reynolds != pgml[i].reynolds || ml[i].alpha_deg != pgml[i].alpha_deg)
      throw InvalidArgument("ML and PGML sweeps differ at row " + std::to_string(i + 1));
  Comparison c;
  const auto ml_groups = group_by_airfoil(ml);
  const auto pg_groups = group_by_airfoil(pgml);
  c.inner_uncertainty_reduced = true;
  for (std::size_t g = 0; g < ml_groups.size(); ++g) {
    ComparisonLine line{ml_groups[g].first, regime_metrics(ml_groups[g].second), regime_metrics(pg_groups[g].second)};
    if (!(line.pgml.inner_mean_std < line.ml.inner_mean_std)) c.inner_uncertainty_reduced = false;
    c.lines.push_back(line);
  }
  c.lines.push_back({"all", regime_metrics(ml), regime_metrics(pgml)});
  return c;
}

std::string comparison_text(const Comparison& c) {
  std::ostringstream os;
  os << "airfoil      regime   ML rmse        PGML rmse      rmse ratio     ML std         PGML std       std ratio\n";
  auto line = [&](const std::string& name, const char* regime, double mr, double pr, double ms, double ps) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-12s %-8s %-14s %-14s %-14s %-14s %-14s %-14s\n", name.c_str(), regime,
                  fmt(mr).c_str(), fmt(pr).c_str(), fmt(ratio(pr, mr)).c_str(), fmt(ms).c_str(), fmt(ps).c_str(),
                  fmt(ratio(ps, ms)).c_str());
    os << buf;
  };
  for (const auto& l : c.lines) {
    line(l.airfoil, "|a|<=10", l.ml.inner_rmse, l.pgml.inner_rmse, l.ml.inner_mean_std, l.pgml.inner_mean_std);
    line(l.airfoil, "|a|>10", l.ml.outer_rmse, l.pgml.outer_rmse, l.ml.outer_mean_std, l.pgml.outer_mean_std);
  }
  os << "PGML/ML mean-std ratio < 1 on |alpha|<=10: " << (c.inner_uncertainty_reduced ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string comparison_csv(const Comparison& c) {
  std::string out = "airfoil,regime,ml_rmse,pgml_rmse,rmse_ratio,ml_mean_std,pgml_mean_std,std_ratio\n";
  auto row = [&](const std::string& name, const char* regime, double mr, double pr, double ms, double ps) {
    out += name + "," + regime + "," + fmt(mr) + "," + fmt(pr) + "," + fmt(ratio(pr, mr)) + "," + fmt(ms) + "," +
           fmt(ps) + "," + fmt(ratio(ps, ms)) + "\n";
  };
  for (const auto& l : c.lines) {
    row(l.airfoil, "inner", l.ml.inner_rmse, l.pgml.inner_rmse, l.ml.inner_mean_std, l.pgml.inner_mean_std);
    row(l.airfoil, "outer", l.ml.outer_rmse, l.pgml.outer_rmse, l.ml.outer_mean_std, l.pgml.outer_mean_std);
  }
  return out;
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Physics-guided airfoil lift prediction: panel method, feature-injected networks, ensembles"};
  app.require_subcommand(1);

  GenAirfoilArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-airfoil", "Write a NACA 4/5-digit contour as a .dat file");
  gen_cmd->add_option("designation", gen.designation, "e.g. 2412 or 23012")->required();
  gen_cmd->add_option("--points", gen.points, "Contour point count (odd)");
  gen_cmd->add_option("--out", gen.out, "Output path (stdout if omitted)");

  PanelArgs panel;
  auto* panel_cmd = app.add_subcommand("panel", "Hess-Smith panel solve: Cp distribution or polar sweep");
  panel_cmd->add_option("designation", panel.designation, "NACA designation");
  panel_cmd->add_option("--dat", panel.dat, "Read the contour from a .dat file instead");
  panel_cmd->add_option("--points", panel.points, "Contour point count for generated sections");
  panel_cmd->add_option("--alpha", panel.alpha, "Single angle of attack (deg): emits x,cp");
  panel_cmd->add_option("--sweep", panel.sweep, "START STOP STEP (deg): emits alpha_deg,cl,cdp")->expected(3);
  panel_cmd->add_flag("--polar", panel.polar, "With --alpha, emit one alpha_deg,cl,cdp row instead of Cp");
  panel_cmd->add_option("--out", panel.out, "Output CSV (stdout if omitted)");

  DatasetArgs ds;
  auto* ds_cmd = app.add_subcommand("dataset", "Build a labeled dataset over airfoil x Re x alpha");
  ds_cmd->add_option("--roster", ds.roster, "desk (22 sections) or full (168 sections)");
  ds_cmd->add_option("--airfoils", ds.airfoils, "Explicit training designations (overrides --roster)");
  ds_cmd->add_option("--test-airfoils", ds.test_airfoils, "Held-out designations");
  ds_cmd->add_option("--re", ds.reynolds, "Reynolds numbers");
  ds_cmd->add_option("--alpha-start", ds.alpha_start);
  ds_cmd->add_option("--alpha-stop", ds.alpha_stop);
  ds_cmd->add_option("--alpha-step", ds.alpha_step);
  ds_cmd->add_option("--points", ds.points, "Contour point count");
  ds_cmd->add_option("--polar-dir", ds.polar_dir, "Label from XFOIL polars named <NAME>_re<Re>.pol");
  ds_cmd->add_option("--noise-std", ds.noise_std, "Gaussian label noise for synthetic truth");
  ds_cmd->add_option("--noise-seed", ds.noise_seed);
  ds_cmd->add_option("--stall-onset", ds.stall.onset_base_deg, "Stall onset at Re = 1e6 (deg)");
  ds_cmd->add_option("--stall-slope", ds.stall.onset_per_decade_deg, "Onset shift per decade of Re (deg)");
  ds_cmd->add_option("--stall-width", ds.stall.blend_width_deg, "Blend width (deg)");
  ds_cmd->add_option("--stall-plateau", ds.stall.plateau, "Post-stall fraction of onset lift");
  ds_cmd->add_option("--stall-decay", ds.stall.decay_per_deg, "Post-stall lift loss per degree");
  ds_cmd->add_flag("--without-panel-features", ds.without_panel, "Omit cl_panel/cdp_panel columns");
  ds_cmd->add_option("--threads", ds.threads, "Worker threads (default: PGML_THREADS or all cores)");
  ds_cmd->add_option("--out", ds.out, "Dataset CSV path; the JSON sidecar goes next to it")->required();

  TrainArgs tr;
  std::optional<std::size_t> epochs, batch;
  auto* tr_cmd = app.add_subcommand("train", "Train an ML or PGML ensemble");
  tr_cmd->add_option("--dataset", tr.dataset, "Dataset CSV")->required();
  tr_cmd->add_option("--mode", tr.mode, "ml or pgml")->required();
  tr_cmd->add_option("--seeds", tr.seeds, "Member seeds (default 1..10)");
  tr_cmd->add_option("--epochs", tr.config.epochs);
  tr_cmd->add_option("--lr", tr.config.learning_rate);
  tr_cmd->add_option("--batch-size", tr.config.batch_size);
  tr_cmd->add_option("--patience", tr.patience, "Early-stopping patience (needs --validation-fraction)");
  tr_cmd->add_option("--validation-fraction", tr.config.validation_fraction);
  tr_cmd->add_option("--activation", tr.activation, "tanh or relu");
  tr_cmd->add_option("--hidden", tr.hidden, "Hidden-layer widths");
  tr_cmd->add_option("--inject-layer", tr.inject_layer, "1-based hidden layer receiving injected features");
  tr_cmd->add_option("--threads", tr.threads, "Worker threads (default: PGML_THREADS or all cores)");
  tr_cmd->add_option("--out", tr.out, "Ensemble directory")->required();

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Predict a test sweep with mean and std");
  ev_cmd->add_option("--ensemble", ev.ensemble, "Ensemble directory")->required();
  ev_cmd->add_option("--dataset", ev.dataset, "Dataset CSV")->required();
  ev_cmd->add_option("--airfoil", ev.airfoils, "Airfoils to evaluate (default: test split)");
  ev_cmd->add_option("--re", ev.reynolds, "Reynolds number filter");
  ev_cmd->add_flag("--bands", ev.bands, "Append cl_lower/cl_upper = mean -/+ 2 std");
  ev_cmd->add_option("--out", ev.out, "Evaluation CSV (stdout if omitted)");

  ReportArgs rp;
  auto* rp_cmd = app.add_subcommand("report", "Compare ML and PGML evaluation CSVs");
  rp_cmd->add_option("--ml", rp.ml, "ML evaluation CSV")->required();
  rp_cmd->add_option("--pgml", rp.pgml, "PGML evaluation CSV")->required();
  rp_cmd->add_option("--out", rp.out, "Comparison CSV");

  try {
    const auto args = expand_config(raw_args);
    std::vector<std::string> argv_store{"pgml"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      err << "pgml: error: " << e.what() << "\n";
      return kUsage;
    }

    if (*gen_cmd) return cmd_gen_airfoil(gen, out, err);
    if (*panel_cmd) return cmd_panel(panel, out, err);
    if (*ds_cmd) return cmd_dataset(ds, out, err);
    if (*tr_cmd) return cmd_train(tr, out, err);
    if (*ev_cmd) return cmd_evaluate(ev, out, err);
    if (*rp_cmd) return cmd_report(rp, out, err);
    return kUsage;
  } catch (const CommandError& e) {
    err << "pgml: error: " << e.what() << "\n";
    return e.code;
  } catch (const NumericalError& e) {
    err << "pgml: error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "pgml: error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace pgml::cli
