#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgml/net.hpp"

namespace pgml {

/// Independently initialized networks of one shape, trained on the same data.
struct Ensemble {
  std::vector<Network> members;
  TrainConfig config;
  std::vector<std::uint64_t> member_seeds;

  const NetworkShape& shape() const { return members.front().shape(); }
  /// Throws InvalidArgument when empty or when member shapes disagree.
  void validate() const;
};

struct EnsembleTraining {
  Ensemble ensemble;
  std::vector<TrainResult> histories;  // networks inside are moved into the ensemble
  std::vector<std::string> warnings;
};

/// Seeds 1..count.
std::vector<std::uint64_t> default_seeds(std::size_t count = 10);

/// One member per seed. Members train concurrently on up to `threads` workers;
/// each member is deterministic on its own, so results do not depend on the
/// thread count. Duplicate seeds produce a warning, not an error. A diverging
/// member raises DivergenceError naming its seed.
EnsembleTraining train_ensemble(const NetworkShape& shape, const TrainingSet& data, const TrainConfig& config,
                                std::span<const std::uint64_t> seeds, std::size_t threads = 1);

struct Prediction {
  double mean = 0.0;
  /// Population standard deviation (divides by the member count).
  double std = 0.0;
};

/// Order-independent mean and population std of member outputs.
Prediction summarize(std::span<const double> outputs);

Prediction predict_with_uncertainty(const Ensemble& ensemble, std::span<const double> geometry,
                                    std::span<const double> injected);

/// Writes member_<index>.model files plus manifest.json into `directory`
/// (created if needed). `extra` is merged into the manifest.
void save_ensemble(const Ensemble& ensemble, const std::string& directory, const nlohmann::json& extra = {});

struct LoadedEnsemble {
  Ensemble ensemble;
  nlohmann::json manifest;
};

LoadedEnsemble load_ensemble(const std::string& directory);

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace pgml
