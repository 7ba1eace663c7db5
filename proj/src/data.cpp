#include "pgml/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

#include "pgml/error.hpp"
#include "pgml/parallel.hpp"
#include "pgml/rng.hpp"
#include "pgml/text.hpp"

namespace pgml {

namespace {

bool is_separator(std::string_view line) {
  line = text::trim(line);
  if (line.size() < 3 || line.front() != '-') return false;
  return std::all_of(line.begin(), line.end(), [](char c) { return c == '-' || c == ' ' || c == '\t'; });
}

std::string polar_number(const char* fmt, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Airfoil airfoil_from_features(const std::string& name, std::span<const double> features) {
  const std::size_t n = features.size() / 2;
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {features[i], features[n + i]};
  return Airfoil(name, std::move(pts));
}

std::vector<double> geometry_features(const Airfoil& airfoil) {
  const auto pts = airfoil.points();
  std::vector<double> f(2 * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    f[i] = pts[i].x;
    f[pts.size() + i] = pts[i].y;
  }
  return f;
}

nlohmann::json range_json(const AffineRange& r) { return nlohmann::json::array({r.min, r.max}); }

AffineRange range_from(const nlohmann::json& j, const char* key) {
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2) throw SchemaError(std::string("normalization field '") + key + "' malformed");
  return {a[0].get<double>(), a[1].get<double>()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Polars

std::vector<PolarRecord> parse_xfoil_polar(std::string_view content) {
  const auto lines = text::split_lines(content);
  std::optional<std::size_t> header, separator;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = text::split_whitespace(lines[i]);
    const bool has_alpha = std::find(fields.begin(), fields.end(), "alpha") != fields.end();
    const bool has_cl = std::find(fields.begin(), fields.end(), "CL") != fields.end();
    if (!header && has_alpha && has_cl) {
      header = i;
      continue;
    }
    if (header && is_separator(lines[i])) {
      separator = i;
      break;
    }
  }
  if (!header) throw FormatError("polar has no column header naming alpha and CL");
  if (!separator) throw FormatError("polar has no dashed separator line after the column header");

  std::vector<PolarRecord> records;
  for (std::size_t i = *separator + 1; i < lines.size(); ++i) {
    const auto fields = text::split_whitespace(lines[i]);
    if (fields.empty()) continue;
    if (fields.size() < 5)
      throw ParseError("polar row has " + std::to_string(fields.size()) + " columns, need at least 5", i + 1);
    double v[5];
    for (std::size_t k = 0; k < 5; ++k) {
      auto d = text::parse_double(fields[k]);
      if (!d || !std::isfinite(*d)) throw ParseError("bad number '" + std::string(fields[k]) + "' in polar row", i + 1);
      v[k] = *d;
    }
    if (v[2] < 0.0) throw ParseError("negative drag coefficient in polar row", i + 1);
    records.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return records;
}

std::string write_xfoil_polar(std::span<const PolarRecord> records, std::string_view airfoil_name, double reynolds) {
  const int exponent = reynolds > 0.0 ? static_cast<int>(std::floor(std::log10(reynolds))) : 0;
  const double mantissa = reynolds / std::pow(10.0, exponent);
  std::string out;
  out += " \n       XFOIL         Version 6.99\n \n";
  out += " Calculated polar for: " + std::string(airfoil_name) + "\n \n";
  out += " 1 1 Reynolds number fixed          Mach number fixed\n \n";
  out += " xtrf =   1.000 (top)        1.000 (bottom)\n";
  out += " Mach =   0.000     Re =" + polar_number("%10.3f", mantissa) + " e " + std::to_string(exponent) +
         "     Ncrit =   9.000\n \n";
  out += "  alpha    CL        CD       CDp       CM\n";
  out += " ------ -------- --------- --------- --------\n";
  for (const auto& r : records) {
    out += polar_number("%8.3f", r.alpha_deg) + polar_number("%9.4f", r.cl) + polar_number("%10.5f", r.cd) +
           polar_number("%10.5f", r.cdp) + polar_number("%9.4f", r.cm) + "\n";
  }
  return out;
}

std::vector<PolarRecord> parse_polar_csv(std::string_view content) {
  const auto lines = text::split_lines(content);
  std::vector<PolarRecord> out;
  bool seen_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const auto fields = text::split_char(lines[i], ',');
    if (!seen_header) {
      if (fields.size() != 5 || text::trim(fields[0]) != "alpha_deg")
        throw FormatError("polar CSV header must be alpha_deg,cl,cd,cdp,cm");
      seen_header = true;
      continue;
    }
    if (fields.size() != 5) throw ParseError("polar CSV row needs 5 fields", i + 1);
    double v[5];
    for (std::size_t k = 0; k < 5; ++k) {
      auto d = text::parse_double(fields[k]);
      if (!d) throw ParseError("bad number '" + std::string(fields[k]) + "'", i + 1);
      v[k] = *d;
    }
    out.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  if (!seen_header) throw FormatError("polar CSV is empty");
  return out;
}

std::string write_polar_csv(std::span<const PolarRecord> records) {
  std::string out = "alpha_deg,cl,cd,cdp,cm\n";
  for (const auto& r : records)
    out += text::format_exact(r.alpha_deg) + "," + text::format_exact(r.cl) + "," + text::format_exact(r.cd) + "," +
           text::format_exact(r.cdp) + "," + text::format_exact(r.cm) + "\n";
  return out;
}

std::optional<double> interpolate_cl(std::span<const PolarRecord> polar, double alpha_deg) {
  if (polar.empty()) return std::nullopt;
  std::vector<PolarRecord> sorted(polar.begin(), polar.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const PolarRecord& a, const PolarRecord& b) { return a.alpha_deg < b.alpha_deg; });
  if (alpha_deg < sorted.front().alpha_deg || alpha_deg > sorted.back().alpha_deg) return std::nullopt;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const auto& a = sorted[i];
    const auto& b = sorted[i + 1];
    if (alpha_deg == a.alpha_deg) return a.cl;
    if (alpha_deg <= b.alpha_deg) {
      if (b.alpha_deg == a.alpha_deg) return a.cl;
      const double t = (alpha_deg - a.alpha_deg) / (b.alpha_deg - a.alpha_deg);
      return a.cl + t * (b.cl - a.cl);
    }
  }
  return sorted.back().cl;
}

// ---------------------------------------------------------------------------
// Synthetic truth

double StallModel::onset_deg(double reynolds) const {
  return onset_base_deg + onset_per_decade_deg * std::log10(reynolds / 1e6);
}

double StallModel::attached_weight(double alpha_deg, double reynolds) const {
  return 1.0 / (1.0 + std::exp((std::abs(alpha_deg) - onset_deg(reynolds)) / blend_width_deg));
}

double synth_truth(const PanelSolver& solver, const FlowCondition& condition, const StallModel& model) {
  condition.validate();
  const double alpha = condition.alpha_deg;
  const double onset = model.onset_deg(condition.reynolds);
  const double s = model.attached_weight(alpha, condition.reynolds);
  const double cl_attached = solver.solve(alpha).cl;
  const double sgn = sign_of(alpha);
  double cl_stall = 0.0;
  if (sgn != 0.0) {
    const double cl_onset = solver.solve(sgn * onset).cl;
    cl_stall = sgn * std::max(0.0, model.plateau * std::abs(cl_onset) - model.decay_per_deg * (std::abs(alpha) - onset));
  }
  return s * cl_attached + (1.0 - s) * cl_stall;
}

double synth_truth(const Airfoil& airfoil, const FlowCondition& condition, const StallModel& model) {
  return synth_truth(PanelSolver(airfoil), condition, model);
}

// ---------------------------------------------------------------------------
// Samples and normalization

std::string to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  name = text::trim(name);
  if (name == "train") return Split::train;
  if (name == "validation") return Split::validation;
  if (name == "test") return Split::test;
  throw ParseError("unknown split tag '" + std::string(name) + "'");
}

std::string to_string(Mode mode) { return mode == Mode::ml ? "ml" : "pgml"; }

Mode parse_mode(std::string_view name) {
  if (name == "ml") return Mode::ml;
  if (name == "pgml") return Mode::pgml;
  throw InvalidArgument("mode must be 'ml' or 'pgml', got '" + std::string(name) + "'");
}

std::size_t injected_width(Mode mode) { return mode == Mode::ml ? 2 : 4; }

double AffineRange::apply(double v) const {
  const double half = 0.5 * (max - min);
  if (!(half > 0.0)) return v - min;
  return (v - min) / half - 1.0;
}

double AffineRange::invert(double v) const {
  const double half = 0.5 * (max - min);
  if (!(half > 0.0)) return v + min;
  return (v + 1.0) * half + min;
}

Normalization Normalization::fit(std::span<const Sample> samples, bool with_panel_features) {
  Normalization n;
  bool any = false;
  double ymin = 0, ymax = 0, remin = 0, remax = 0, amin = 0, amax = 0, clmin = 0, clmax = 0, cdmin = 0, cdmax = 0;
  for (const auto& s : samples) {
    if (s.split != Split::train) continue;
    const std::size_t half = s.geometry_features.size() / 2;
    for (std::size_t i = half; i < s.geometry_features.size(); ++i) {
      const double y = s.geometry_features[i];
      if (!any && i == half) ymin = ymax = y;
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    if (!any) {
      remin = remax = s.condition.reynolds;
      amin = amax = s.condition.alpha_deg;
      clmin = clmax = s.panel_features[0];
      cdmin = cdmax = s.panel_features[1];
    }
    remin = std::min(remin, s.condition.reynolds);
    remax = std::max(remax, s.condition.reynolds);
    amin = std::min(amin, s.condition.alpha_deg);
    amax = std::max(amax, s.condition.alpha_deg);
    clmin = std::min(clmin, s.panel_features[0]);
    clmax = std::max(clmax, s.panel_features[0]);
    cdmin = std::min(cdmin, s.panel_features[1]);
    cdmax = std::max(cdmax, s.panel_features[1]);
    any = true;
  }
  if (!any) throw InvalidArgument("cannot fit normalization without training samples");
  n.geometry_y = {ymin, ymax};
  n.reynolds = {std::min(1e6, remin), std::max(4e6, remax)};
  n.alpha = {std::min(-20.0, amin), std::max(20.0, amax)};
  if (with_panel_features) {
    n.panel_cl = {clmin, clmax};
    n.panel_cdp = {cdmin, cdmax};
  }
  n.fitted = true;
  return n;
}

std::vector<double> Normalization::apply_geometry(std::span<const double> features) const {
  if (!fitted) throw StateError("normalization applied before it was fitted");
  const std::size_t half = features.size() / 2;
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    out[i] = i < half ? geometry_x.apply(features[i]) : geometry_y.apply(features[i]);
  return out;
}

std::vector<double> Normalization::invert_geometry(std::span<const double> features) const {
  if (!fitted) throw StateError("normalization inverted before it was fitted");
  const std::size_t half = features.size() / 2;
  std::vector<double> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i)
    out[i] = i < half ? geometry_x.invert(features[i]) : geometry_y.invert(features[i]);
  return out;
}

std::vector<double> Normalization::injected(const Sample& sample, Mode mode) const {
  if (!fitted) throw StateError("normalization applied before it was fitted");
  std::vector<double> out{reynolds.apply(sample.condition.reynolds), alpha.apply(sample.condition.alpha_deg)};
  if (mode == Mode::pgml) {
    out.push_back(panel_cl.apply(sample.panel_features[0]));
    out.push_back(panel_cdp.apply(sample.panel_features[1]));
  }
  return out;
}

void to_json(nlohmann::json& j, const Normalization& n) {
  j = nlohmann::json{{"fitted", n.fitted},
                     {"geometry_x", range_json(n.geometry_x)},
                     {"geometry_y", range_json(n.geometry_y)},
                     {"reynolds", range_json(n.reynolds)},
                     {"alpha_deg", range_json(n.alpha)},
                     {"cl_panel", range_json(n.panel_cl)},
                     {"cdp_panel", range_json(n.panel_cdp)}};
}

void from_json(const nlohmann::json& j, Normalization& n) {
  try {
    n.fitted = j.at("fitted").get<bool>();
    n.geometry_x = range_from(j, "geometry_x");
    n.geometry_y = range_from(j, "geometry_y");
    n.reynolds = range_from(j, "reynolds");
    n.alpha = range_from(j, "alpha_deg");
    n.panel_cl = range_from(j, "cl_panel");
    n.panel_cdp = range_from(j, "cdp_panel");
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("normalization record: ") + e.what());
  }
}

std::size_t Dataset::count(Split split) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](const Sample& s) { return s.split == split; }));
}

TrainingSet make_training_set(const Dataset& dataset, Mode mode, Split split) {
  if (mode == Mode::pgml && !dataset.has_panel_features)
    throw SchemaError("pgml mode needs cl_panel and cdp_panel columns");
  const std::size_t width = dataset.samples.empty() ? 0 : dataset.samples.front().geometry_features.size();
  TrainingSet set(width, injected_width(mode));
  for (const auto& s : dataset.samples) {
    if (s.split != split) continue;
    if (s.geometry_features.size() != width) throw ShapeError("samples disagree on geometry width");
    const auto x = dataset.normalization.apply_geometry(s.geometry_features);
    const auto inj = dataset.normalization.injected(s, mode);
    set.add(x, inj, s.target_cl);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Dataset construction

const std::vector<std::string>& default_holdout_names() {
  static const std::vector<std::string> names{"NACA23012", "NACA23024"};
  return names;
}

std::vector<double> alpha_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw InvalidArgument("alpha grid needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<std::string> full_roster() {
  std::vector<std::string> names;
  for (int tt : {6, 7, 8, 9, 10, 12, 14, 16, 18}) names.push_back("00" + std::string(tt < 10 ? "0" : "") + std::to_string(tt));
  for (int m = 1; m <= 6; ++m)
    for (int p = 2; p <= 5; ++p)
      for (int tt : {6, 9, 12, 15, 18})
        names.push_back(std::to_string(m) + std::to_string(p) + (tt < 10 ? "0" : "") + std::to_string(tt));
  for (const char* code : {"210", "220", "230", "240", "250"})
    for (int tt : {6, 8, 9, 10, 12, 14, 15, 18}) {
      std::string d = std::string(code) + (tt < 10 ? "0" : "") + std::to_string(tt);
      if (d == "23012") continue;
      names.push_back(d);
    }
  return names;
}

std::vector<std::string> desk_roster() {
  return {"0006",  "0009",  "0012",  "0015",  "0018",  "2406",  "2409",  "2412",  "2415",  "2418",  "4409",
          "4412",  "4415",  "4418",  "21012", "22012", "23006", "23009", "23015", "23018", "24012", "25012"};
}

Dataset build_dataset(const DatasetRequest& request) {
  if (request.airfoils.empty() && request.test_airfoils.empty()) throw InvalidArgument("no airfoils requested");
  if (request.reynolds.empty()) throw InvalidArgument("no Reynolds numbers requested");
  if (request.alpha_deg.empty()) throw InvalidArgument("no angles of attack requested");
  for (double re : request.reynolds) FlowCondition{re, 0.0}.validate();

  std::set<std::string> holdout(default_holdout_names().begin(), default_holdout_names().end());
  for (const auto& a : request.test_airfoils) holdout.insert(a.name());

  struct Job {
    const Airfoil* airfoil;
    Split split;
  };
  std::vector<Job> jobs;
  for (const auto& a : request.airfoils) jobs.push_back({&a, holdout.count(a.name()) ? Split::test : Split::train});
  for (const auto& a : request.test_airfoils) jobs.push_back({&a, Split::test});
  {
    std::set<std::string> seen;
    for (const auto& j : jobs)
      if (!seen.insert(j.airfoil->name()).second)
        throw InvalidArgument("airfoil '" + j.airfoil->name() + "' requested twice");
  }

  const std::size_t per_airfoil = request.reynolds.size() * request.alpha_deg.size();
  std::vector<std::vector<std::optional<Sample>>> slots(jobs.size());

  parallel_for(jobs.size(), request.threads, [&](std::size_t ji) {
    const auto& job = jobs[ji];
    const PanelSolver solver(*job.airfoil);
    const auto features = geometry_features(*job.airfoil);
    std::vector<PanelSolution> solutions;
    solutions.reserve(request.alpha_deg.size());
    for (double a : request.alpha_deg) solutions.push_back(solver.solve(a));

    auto& out = slots[ji];
    out.resize(per_airfoil);
    for (std::size_t ri = 0; ri < request.reynolds.size(); ++ri) {
      const double re = request.reynolds[ri];
      const std::vector<PolarRecord>* polar = nullptr;
      if (const auto* table = std::get_if<PolarTable>(&request.truth)) {
        auto it = table->find({job.airfoil->name(), re});
        if (it != table->end()) polar = &it->second;
      }
      for (std::size_t ai = 0; ai < request.alpha_deg.size(); ++ai) {
        const double alpha = request.alpha_deg[ai];
        const std::size_t slot = ri * request.alpha_deg.size() + ai;
        Sample s;
        s.airfoil = job.airfoil->name();
        s.geometry_features = features;
        s.condition = {re, alpha};
        s.panel_features = {solutions[ai].cl, solutions[ai].cdp};
        s.split = job.split;
        if (const auto* synth = std::get_if<SyntheticTruth>(&request.truth)) {
          s.target_cl = synth_truth(solver, s.condition, synth->model);
          if (synth->noise_std > 0.0) {
            Rng noise(splitmix64(synth->noise_seed ^ text::fnv1a(s.airfoil)) + slot);
            s.target_cl += synth->noise_std * noise.normal();
          }
        } else {
          if (!polar) continue;
          auto cl = interpolate_cl(*polar, alpha);
          if (!cl) continue;
          s.target_cl = *cl;
        }
        out[slot] = std::move(s);
      }
    }
  });

  Dataset ds;
  for (auto& per : slots)
    for (auto& s : per) {
      if (s)
        ds.samples.push_back(std::move(*s));
      else
        ++ds.dropped_samples;
    }
  if (ds.dropped_samples > 0)
    std::cerr << "pgml: warning: dropped " << ds.dropped_samples << " samples without polar coverage\n";
  ds.normalization = Normalization::fit(ds.samples);
  return ds;
}

std::array<double, 2> recompute_panel_features(const Sample& sample) {
  const auto af = airfoil_from_features(sample.airfoil, sample.geometry_features);
  const auto sol = solve_flow(af, sample.condition.alpha_deg);
  return {sol.cl, sol.cdp};
}

// ---------------------------------------------------------------------------
// Persistence

std::string write_dataset_csv(const Dataset& dataset) {
  const std::size_t width = dataset.samples.empty() ? 0 : dataset.samples.front().geometry_features.size();
  const std::size_t n = width / 2;
  std::string out = "airfoil";
  for (std::size_t i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  for (std::size_t i = 0; i < n; ++i) out += ",y" + std::to_string(i);
  out += ",re,alpha_deg";
  if (dataset.has_panel_features) out += ",cl_panel,cdp_panel";
  out += ",cl_target,split\n";
  for (const auto& s : dataset.samples) {
    out += s.airfoil;
    for (double v : s.geometry_features) {
      out += ',';
      out += text::format_exact(v);
    }
    out += "," + text::format_exact(s.condition.reynolds) + "," + text::format_exact(s.condition.alpha_deg);
    if (dataset.has_panel_features)
      out += "," + text::format_exact(s.panel_features[0]) + "," + text::format_exact(s.panel_features[1]);
    out += "," + text::format_exact(s.target_cl) + "," + to_string(s.split) + "\n";
  }
  return out;
}

Dataset read_dataset_csv(std::string_view csv, const std::optional<nlohmann::json>& sidecar) {
  const auto lines = text::split_lines(csv);
  std::size_t li = 0;
  while (li < lines.size() && text::trim(lines[li]).empty()) ++li;
  if (li == lines.size()) throw SchemaError("dataset CSV is empty");
  const auto header = text::split_char(lines[li], ',');

  std::map<std::string, std::size_t> col;
  std::vector<std::size_t> xcols, ycols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(text::trim(header[c]));
    col[name] = c;
  }
  for (std::size_t i = 0;; ++i) {
    auto xi = col.find("x" + std::to_string(i));
    auto yi = col.find("y" + std::to_string(i));
    if (xi == col.end() && yi == col.end()) break;
    if (xi == col.end() || yi == col.end()) throw SchemaError("geometry columns x/y are unpaired at index " + std::to_string(i));
    xcols.push_back(xi->second);
    ycols.push_back(yi->second);
  }
  for (const char* required : {"airfoil", "re", "alpha_deg", "cl_target", "split"})
    if (!col.count(required)) throw SchemaError(std::string("dataset is missing column '") + required + "'");
  if (xcols.empty()) throw SchemaError("dataset has no geometry columns");
  const bool has_cl = col.count("cl_panel") > 0, has_cdp = col.count("cdp_panel") > 0;
  if (has_cl != has_cdp) throw SchemaError("cl_panel and cdp_panel must appear together");

  Dataset ds;
  ds.has_panel_features = has_cl;
  for (++li; li < lines.size(); ++li) {
    if (text::trim(lines[li]).empty()) continue;
    const auto f = text::split_char(lines[li], ',');
    if (f.size() != header.size())
      throw ParseError("row has " + std::to_string(f.size()) + " fields, header has " + std::to_string(header.size()),
                       li + 1);
    auto num = [&](std::size_t c) {
      auto v = text::parse_double(f[c]);
      if (!v || !std::isfinite(*v)) throw ParseError("bad number '" + std::string(f[c]) + "'", li + 1);
      return *v;
    };
    Sample s;
    s.airfoil = std::string(text::trim(f[col["airfoil"]]));
    s.geometry_features.resize(2 * xcols.size());
    for (std::size_t i = 0; i < xcols.size(); ++i) {
      s.geometry_features[i] = num(xcols[i]);
      s.geometry_features[xcols.size() + i] = num(ycols[i]);
    }
    s.condition = {num(col["re"]), num(col["alpha_deg"])};
    if (has_cl) s.panel_features = {num(col["cl_panel"]), num(col["cdp_panel"])};
    s.target_cl = num(col["cl_target"]);
    try {
      s.split = parse_split(f[col["split"]]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), li + 1);
    }
    ds.samples.push_back(std::move(s));
  }
  if (sidecar && sidecar->contains("normalization"))
    ds.normalization = sidecar->at("normalization").get<Normalization>();
  else
    ds.normalization = Normalization::fit(ds.samples, has_cl);
  return ds;
}

nlohmann::json dataset_sidecar(const Dataset& dataset, const std::string& csv_text, nlohmann::json provenance) {
  nlohmann::json j;
  j["format"] = "pgml-dataset";
  j["version"] = 1;
  j["normalization"] = dataset.normalization;
  j["fingerprint"] = dataset_fingerprint(csv_text);
  j["samples"] = {{"train", dataset.count(Split::train)},
                  {"validation", dataset.count(Split::validation)},
                  {"test", dataset.count(Split::test)},
                  {"dropped", dataset.dropped_samples}};
  j["has_panel_features"] = dataset.has_panel_features;
  j["provenance"] = std::move(provenance);
  return j;
}

std::string dataset_fingerprint(std::string_view csv_text) { return text::hex64(text::fnv1a(csv_text)); }

std::string sidecar_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".json");
  return p.string();
}

}  // namespace pgml
