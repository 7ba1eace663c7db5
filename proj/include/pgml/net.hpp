#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pgml {

enum class Activation { tanh, relu };

std::string to_string(Activation activation);
Activation parse_activation(std::string_view name);

/// Where extra features join the network: after the activation of hidden
/// layer `layer_index` (1-based), the latent vector is concatenated with
/// `injected_width` external values.
struct InjectionSpec {
  std::size_t layer_index = 3;
  std::size_t injected_width = 0;

  bool operator==(const InjectionSpec&) const = default;
};

struct NetworkShape {
  std::size_t input_width = 402;
  std::vector<std::size_t> hidden_widths{20, 20, 20, 20};
  std::size_t output_width = 1;
  InjectionSpec injection;
  Activation activation = Activation::tanh;

  bool operator==(const NetworkShape&) const = default;

  /// Throws InvalidArgument on empty/zero widths or an out-of-range injection layer.
  void validate() const;

  /// Dense layers: one per hidden layer plus the linear output layer.
  std::size_t layer_count() const { return hidden_widths.size() + 1; }
  std::size_t layer_inputs(std::size_t layer) const;
  std::size_t layer_outputs(std::size_t layer) const;
  /// Post-concatenation width at the injection layer (24 for the PGML default).
  std::size_t injected_layer_width() const;
  /// Input width of every dense layer followed by the output width,
  /// e.g. 402 -> 20 -> 20 -> 24 -> 20 -> 1.
  std::vector<std::size_t> width_trace() const;
};

/// Fully connected layer. Weights are stored input-major: w[k * outputs + j]
/// connects input k to output j.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  double& weight(std::size_t k, std::size_t j) { return weights[k * outputs + j]; }
  double weight(std::size_t k, std::size_t j) const { return weights[k * outputs + j]; }
};

class Network {
 public:
  /// All parameters zero.
  explicit Network(NetworkShape shape);

  const NetworkShape& shape() const { return shape_; }
  std::span<DenseLayer> layers() { return layers_; }
  std::span<const DenseLayer> layers() const { return layers_; }

  std::size_t parameter_count() const;
  /// Flattened layer by layer, weights before biases.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> values);
  bool all_finite() const;

  /// Throws ShapeError naming the offending layer when a width does not match.
  std::vector<double> forward(std::span<const double> geometry, std::span<const double> injected) const;
  /// Convenience for single-output networks.
  double predict(std::span<const double> geometry, std::span<const double> injected) const;

 private:
  NetworkShape shape_;
  std::vector<DenseLayer> layers_;
};

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
Network glorot_init(const NetworkShape& shape, std::uint64_t seed);

/// Mean squared error. Throws InvalidArgument for empty or unequal inputs.
double mse_loss(std::span<const double> predictions, std::span<const double> targets);

/// Row-packed, already-normalized samples.
class TrainingSet {
 public:
  TrainingSet(std::size_t input_width, std::size_t injected_width, std::size_t output_width = 1);

  void add(std::span<const double> input, std::span<const double> injected, std::span<const double> target);
  void add(std::span<const double> input, std::span<const double> injected, double target) {
    add(input, injected, std::span<const double>(&target, 1));
  }

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t input_width() const { return input_width_; }
  std::size_t injected_width() const { return injected_width_; }
  std::size_t output_width() const { return output_width_; }

  std::span<const double> input(std::size_t i) const { return {inputs_.data() + i * input_width_, input_width_}; }
  std::span<const double> injected(std::size_t i) const {
    return {injected_.data() + i * injected_width_, injected_width_};
  }
  std::span<const double> target(std::size_t i) const { return {targets_.data() + i * output_width_, output_width_}; }

  TrainingSet subset(std::span<const std::size_t> indices) const;

 private:
  std::size_t input_width_;
  std::size_t injected_width_;
  std::size_t output_width_;
  std::size_t count_ = 0;
  std::vector<double> inputs_;
  std::vector<double> injected_;
  std::vector<double> targets_;
};

/// Loss and its gradient, shaped like the network's layers.
struct Gradients {
  double loss = 0.0;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  std::vector<double> flatten() const;
};

/// Mean squared error over the selected rows.
double batch_loss(const Network& net, const TrainingSet& data, std::span<const std::size_t> rows);
double dataset_loss(const Network& net, const TrainingSet& data);

/// Exact reverse-mode gradient of the batch MSE. Injected features are
/// constants and receive no gradient.
Gradients backward(const Network& net, const TrainingSet& data, std::span<const std::size_t> rows);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t epochs = 500;
  std::size_t batch_size = 64;
  std::uint64_t seed = 1;
  std::optional<std::size_t> early_stopping_patience;
  double validation_fraction = 0.0;

  /// Throws InvalidArgument on out-of-range fields or batch_size > dataset size.
  void validate(std::size_t dataset_size) const;
};

struct TrainResult {
  Network network;
  std::vector<double> train_loss;
  std::vector<double> validation_loss;  // empty without a held-out split
  std::size_t best_epoch = 0;
  bool stopped_early = false;
};

/// Adam on mini-batches. Shuffling is seeded from config.seed; the held-out
/// validation rows depend only on the dataset size and fraction so every
/// ensemble member sees the same split. Throws DivergenceError on a
/// non-finite epoch loss.
TrainResult train(Network network, const TrainingSet& data, const TrainConfig& config);

/// Rows reserved for validation: a fixed permutation, independent of seed.
std::vector<std::size_t> validation_rows(std::size_t dataset_size, double fraction);

/// Self-describing text format; parameters as 17 significant digits.
std::string serialize(const Network& net);
Network deserialize_network(std::string_view content);

}  // namespace pgml
