#include "pgml/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "pgml/error.hpp"
#include "pgml/parallel.hpp"
#include "pgml/text.hpp"

namespace pgml {

namespace fs = std::filesystem;

namespace {

std::string member_file(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "member_%03zu.model", index);
  return buf;
}

}  // namespace

void Ensemble::validate() const {
  if (members.empty()) throw InvalidArgument("ensemble has no members");
  if (member_seeds.size() != members.size()) throw InvalidArgument("ensemble seed list does not match its members");
  for (const auto& m : members)
    if (!(m.shape() == members.front().shape())) throw InvalidArgument("ensemble members differ in shape");
}

std::vector<std::uint64_t> default_seeds(std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = i + 1;
  return seeds;
}

EnsembleTraining train_ensemble(const NetworkShape& shape, const TrainingSet& data, const TrainConfig& config,
                                std::span<const std::uint64_t> seeds, std::size_t threads) {
  if (seeds.empty()) throw InvalidArgument("ensemble needs at least one seed");
  EnsembleTraining out;
  {
    std::set<std::uint64_t> seen;
    for (auto s : seeds)
      if (!seen.insert(s).second) out.warnings.push_back("seed " + std::to_string(s) + " appears more than once");
  }
  for (const auto& w : out.warnings) std::cerr << "pgml: warning: " << w << "\n";

  std::vector<std::optional<TrainResult>> results(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    TrainConfig member = config;
    member.seed = seeds[i];
    try {
      results[i] = train(glorot_init(shape, seeds[i]), data, member);
    } catch (const DivergenceError& e) {
      throw DivergenceError("seed " + std::to_string(seeds[i]) + ": " + e.what(), e.epoch());
    }
  });

  out.ensemble.config = config;
  out.ensemble.member_seeds.assign(seeds.begin(), seeds.end());
  for (auto& r : results) {
    out.ensemble.members.push_back(r->network);
    out.histories.push_back(std::move(*r));
  }
  return out;
}

Prediction summarize(std::span<const double> outputs) {
  if (outputs.empty()) throw InvalidArgument("no member outputs to summarize");
  std::vector<double> v(outputs.begin(), outputs.end());
  std::sort(v.begin(), v.end());
  if (v.front() == v.back()) return {v.front(), 0.0};
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(v.size()))};
}

Prediction predict_with_uncertainty(const Ensemble& ensemble, std::span<const double> geometry,
                                    std::span<const double> injected) {
  ensemble.validate();
  std::vector<double> outputs;
  outputs.reserve(ensemble.members.size());
  for (const auto& m : ensemble.members) outputs.push_back(m.predict(geometry, injected));
  return summarize(outputs);
}

nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j{{"learning_rate", c.learning_rate},
                   {"epochs", c.epochs},
                   {"batch_size", c.batch_size},
                   {"validation_fraction", c.validation_fraction}};
  j["early_stopping_patience"] = c.early_stopping_patience ? nlohmann::json(*c.early_stopping_patience) : nullptr;
  return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.validation_fraction = j.at("validation_fraction").get<double>();
  if (j.contains("early_stopping_patience") && !j.at("early_stopping_patience").is_null())
    c.early_stopping_patience = j.at("early_stopping_patience").get<std::size_t>();
  return c;
}

void save_ensemble(const Ensemble& ensemble, const std::string& directory, const nlohmann::json& extra) {
  ensemble.validate();
  fs::create_directories(directory);
  nlohmann::json manifest = extra.is_object() ? extra : nlohmann::json::object();
  manifest["format"] = "pgml-ensemble";
  manifest["version"] = 1;
  manifest["seeds"] = ensemble.member_seeds;
  manifest["config"] = to_json(ensemble.config);
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < ensemble.members.size(); ++i) {
    const auto name = member_file(i);
    text::write_file((fs::path(directory) / name).string(), serialize(ensemble.members[i]));
    files.push_back(name);
  }
  manifest["members"] = files;
  text::write_file((fs::path(directory) / "manifest.json").string(), manifest.dump(2) + "\n");
}

LoadedEnsemble load_ensemble(const std::string& directory) {
  const auto manifest_path = (fs::path(directory) / "manifest.json").string();
  if (!fs::exists(manifest_path)) throw InvalidFile("no ensemble manifest at '" + manifest_path + "'");
  LoadedEnsemble out;
  try {
    out.manifest = nlohmann::json::parse(text::read_file(manifest_path));
    if (out.manifest.at("format") != "pgml-ensemble") throw SchemaError("not an ensemble manifest");
    out.ensemble.config = train_config_from_json(out.manifest.at("config"));
    out.ensemble.member_seeds = out.manifest.at("seeds").get<std::vector<std::uint64_t>>();
    for (const auto& f : out.manifest.at("members"))
      out.ensemble.members.push_back(
          deserialize_network(text::read_file((fs::path(directory) / f.get<std::string>()).string())));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("ensemble manifest: ") + e.what());
  }
  out.ensemble.validate();
  return out;
}

}  // namespace pgml
