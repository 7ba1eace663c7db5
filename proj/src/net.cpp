#include "pgml/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pgml/error.hpp"
#include "pgml/rng.hpp"
#include "pgml/text.hpp"

namespace pgml {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;
constexpr std::uint64_t kValidationSplitSeed = 0x5EEDF00DULL;
constexpr std::uint64_t kShuffleStream = 0xA5A5A5A5ULL;

double activate(Activation a, double z) { return a == Activation::tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0); }

// Derivative expressed through the activation output.
double activation_slope(Activation a, double out) { return a == Activation::tanh ? 1.0 - out * out : (out > 0.0 ? 1.0 : 0.0); }

// Per-batch buffers: layer_in[l] holds the B x inputs(l) matrix fed to dense
// layer l, so hidden activations and injected features live side by side.
struct Workspace {
  std::size_t batch = 0;
  std::vector<std::vector<double>> layer_in;
  std::vector<double> output;
  std::vector<std::vector<double>> delta;
};

void forward_batch(const Network& net, const TrainingSet& data, std::span<const std::size_t> rows, Workspace& ws) {
  const auto& shape = net.shape();
  const auto layers = net.layers();
  const std::size_t nl = layers.size();
  const std::size_t b = rows.size();
  ws.batch = b;
  ws.layer_in.resize(nl);
  for (std::size_t l = 0; l < nl; ++l) ws.layer_in[l].assign(b * layers[l].inputs, 0.0);
  ws.output.assign(b * shape.output_width, 0.0);

  const std::size_t in0 = layers[0].inputs;
  for (std::size_t r = 0; r < b; ++r) {
    const auto x = data.input(rows[r]);
    std::copy(x.begin(), x.end(), ws.layer_in[0].begin() + static_cast<std::ptrdiff_t>(r * in0));
  }
  const std::size_t inject_into = shape.injection.layer_index;  // dense layer consuming the concatenation

  for (std::size_t l = 0; l < nl; ++l) {
    const auto& layer = layers[l];
    const std::size_t nin = layer.inputs, nout = layer.outputs;
    const bool last = l + 1 == nl;
    for (std::size_t r = 0; r < b; ++r) {
      const double* in = ws.layer_in[l].data() + r * nin;
      double* z = last ? ws.output.data() + r * nout : ws.layer_in[l + 1].data() + r * layers[l + 1].inputs;
      std::copy(layer.biases.begin(), layer.biases.end(), z);
      for (std::size_t k = 0; k < nin; ++k) {
        const double xk = in[k];
        const double* w = layer.weights.data() + k * nout;
        for (std::size_t j = 0; j < nout; ++j) z[j] += xk * w[j];
      }
      if (!last) {
        for (std::size_t j = 0; j < nout; ++j) z[j] = activate(shape.activation, z[j]);
        if (l + 1 == inject_into && shape.injection.injected_width > 0) {
          const auto inj = data.injected(rows[r]);
          std::copy(inj.begin(), inj.end(), z + nout);
        }
      }
    }
  }
}

double batch_squared_error(const Workspace& ws, const TrainingSet& data, std::span<const std::size_t> rows) {
  const std::size_t nout = data.output_width();
  double sum = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto t = data.target(rows[r]);
    for (std::size_t j = 0; j < nout; ++j) {
      const double e = ws.output[r * nout + j] - t[j];
      sum += e * e;
    }
  }
  return sum;
}

void backward_batch(const Network& net, const TrainingSet& data, std::span<const std::size_t> rows, Workspace& ws,
                    Gradients& g) {
  const auto& shape = net.shape();
  const auto layers = net.layers();
  const std::size_t nl = layers.size();
  const std::size_t b = rows.size();
  const std::size_t nout = shape.output_width;

  g.weights.resize(nl);
  g.biases.resize(nl);
  ws.delta.resize(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    g.weights[l].assign(layers[l].weights.size(), 0.0);
    g.biases[l].assign(layers[l].biases.size(), 0.0);
    ws.delta[l].assign(b * layers[l].outputs, 0.0);
  }

  const double scale = 2.0 / static_cast<double>(b * nout);
  double sq = 0.0;
  for (std::size_t r = 0; r < b; ++r) {
    const auto t = data.target(rows[r]);
    for (std::size_t j = 0; j < nout; ++j) {
      const double e = ws.output[r * nout + j] - t[j];
      sq += e * e;
      ws.delta[nl - 1][r * nout + j] = scale * e;
    }
  }
  g.loss = sq / static_cast<double>(b * nout);

  for (std::size_t l = nl; l-- > 0;) {
    const auto& layer = layers[l];
    const std::size_t nin = layer.inputs, no = layer.outputs;
    auto& gw = g.weights[l];
    auto& gb = g.biases[l];
    for (std::size_t r = 0; r < b; ++r) {
      const double* in = ws.layer_in[l].data() + r * nin;
      const double* d = ws.delta[l].data() + r * no;
      for (std::size_t j = 0; j < no; ++j) gb[j] += d[j];
      for (std::size_t k = 0; k < nin; ++k) {
        const double xk = in[k];
        double* row = gw.data() + k * no;
        for (std::size_t j = 0; j < no; ++j) row[j] += xk * d[j];
      }
    }
    if (l == 0) break;
    // Only the latent part of this layer's input feeds back; injected columns
    // are constants.
    const std::size_t latent = layers[l - 1].outputs;
    for (std::size_t r = 0; r < b; ++r) {
      const double* d = ws.delta[l].data() + r * no;
      const double* act = ws.layer_in[l].data() + r * nin;
      double* prev = ws.delta[l - 1].data() + r * latent;
      for (std::size_t k = 0; k < latent; ++k) {
        const double* w = layer.weights.data() + k * no;
        double s = 0.0;
        for (std::size_t j = 0; j < no; ++j) s += w[j] * d[j];
        prev[k] = s * activation_slope(shape.activation, act[k]);
      }
    }
  }
}

void check_rows(const TrainingSet& data, std::span<const std::size_t> rows) {
  if (rows.empty()) throw InvalidArgument("batch is empty");
  for (auto r : rows)
    if (r >= data.size()) throw InvalidArgument("row " + std::to_string(r) + " out of range");
}

void check_widths(const Network& net, const TrainingSet& data) {
  const auto& s = net.shape();
  if (data.input_width() != s.input_width)
    throw ShapeError("layer 1 expects " + std::to_string(s.input_width) + " inputs, dataset has " +
                     std::to_string(data.input_width()));
  if (data.injected_width() != s.injection.injected_width)
    throw ShapeError("hidden layer " + std::to_string(s.injection.layer_index) + " expects " +
                     std::to_string(s.injection.injected_width) + " injected features, dataset has " +
                     std::to_string(data.injected_width()));
  if (data.output_width() != s.output_width) throw ShapeError("output width does not match dataset targets");
}

}  // namespace

std::string to_string(Activation activation) { return activation == Activation::tanh ? "tanh" : "relu"; }

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

void NetworkShape::validate() const {
  if (input_width == 0 || output_width == 0) throw InvalidArgument("network widths must be positive");
  if (hidden_widths.empty()) throw InvalidArgument("network needs at least one hidden layer");
  for (auto w : hidden_widths)
    if (w == 0) throw InvalidArgument("hidden widths must be positive");
  if (injection.layer_index < 1 || injection.layer_index > hidden_widths.size())
    throw InvalidArgument("injection layer " + std::to_string(injection.layer_index) + " is outside 1.." +
                          std::to_string(hidden_widths.size()));
}

std::size_t NetworkShape::layer_inputs(std::size_t layer) const {
  if (layer == 0) return input_width;
  const std::size_t latent = hidden_widths[layer - 1];
  return layer == injection.layer_index ? latent + injection.injected_width : latent;
}

std::size_t NetworkShape::layer_outputs(std::size_t layer) const {
  return layer < hidden_widths.size() ? hidden_widths[layer] : output_width;
}

std::size_t NetworkShape::injected_layer_width() const { return layer_inputs(injection.layer_index); }

std::vector<std::size_t> NetworkShape::width_trace() const {
  std::vector<std::size_t> t;
  for (std::size_t l = 0; l < layer_count(); ++l) t.push_back(layer_inputs(l));
  t.push_back(output_width);
  return t;
}

Network::Network(NetworkShape shape) : shape_(std::move(shape)) {
  shape_.validate();
  for (std::size_t l = 0; l < shape_.layer_count(); ++l) {
    DenseLayer layer;
    layer.inputs = shape_.layer_inputs(l);
    layer.outputs = shape_.layer_outputs(l);
    layer.weights.assign(layer.inputs * layer.outputs, 0.0);
    layer.biases.assign(layer.outputs, 0.0);
    layers_.push_back(std::move(layer));
  }
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

std::vector<double> Network::parameters() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  for (const auto& l : layers_) {
    p.insert(p.end(), l.weights.begin(), l.weights.end());
    p.insert(p.end(), l.biases.begin(), l.biases.end());
  }
  return p;
}

void Network::set_parameters(std::span<const double> values) {
  if (values.size() != parameter_count())
    throw ShapeError("expected " + std::to_string(parameter_count()) + " parameters, got " +
                     std::to_string(values.size()));
  auto it = values.begin();
  for (auto& l : layers_) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(l.weights.size()), l.weights.begin());
    it += static_cast<std::ptrdiff_t>(l.weights.size());
    std::copy(it, it + static_cast<std::ptrdiff_t>(l.biases.size()), l.biases.begin());
    it += static_cast<std::ptrdiff_t>(l.biases.size());
  }
}

bool Network::all_finite() const {
  for (const auto& l : layers_) {
    for (double w : l.weights)
      if (!std::isfinite(w)) return false;
    for (double b : l.biases)
      if (!std::isfinite(b)) return false;
  }
  return true;
}

std::vector<double> Network::forward(std::span<const double> geometry, std::span<const double> injected) const {
  if (geometry.size() != shape_.input_width)
    throw ShapeError("layer 1 expects " + std::to_string(shape_.input_width) + " inputs, got " +
                     std::to_string(geometry.size()));
  if (injected.size() != shape_.injection.injected_width)
    throw ShapeError("hidden layer " + std::to_string(shape_.injection.layer_index) + " expects " +
                     std::to_string(shape_.injection.injected_width) + " injected features, got " +
                     std::to_string(injected.size()));
  std::vector<double> cur(geometry.begin(), geometry.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    std::vector<double> z(layer.biases);
    for (std::size_t k = 0; k < layer.inputs; ++k) {
      const double xk = cur[k];
      const double* w = layer.weights.data() + k * layer.outputs;
      for (std::size_t j = 0; j < layer.outputs; ++j) z[j] += xk * w[j];
    }
    if (l + 1 < layers_.size()) {
      for (double& v : z) v = activate(shape_.activation, v);
      if (l + 1 == shape_.injection.layer_index) z.insert(z.end(), injected.begin(), injected.end());
    }
    cur = std::move(z);
  }
  return cur;
}

double Network::predict(std::span<const double> geometry, std::span<const double> injected) const {
  return forward(geometry, injected).front();
}

Network glorot_init(const NetworkShape& shape, std::uint64_t seed) {
  Network net(shape);
  Rng rng(splitmix64(seed));
  for (auto& layer : net.layers()) {
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double& w : layer.weights) w = rng.uniform(-bound, bound);
  }
  return net;
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty()) throw InvalidArgument("loss of an empty batch");
  if (predictions.size() != targets.size())
    throw InvalidArgument("loss: " + std::to_string(predictions.size()) + " predictions for " +
                          std::to_string(targets.size()) + " targets");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    s += e * e;
  }
  return s / static_cast<double>(predictions.size());
}

TrainingSet::TrainingSet(std::size_t input_width, std::size_t injected_width, std::size_t output_width)
    : input_width_(input_width), injected_width_(injected_width), output_width_(output_width) {}

void TrainingSet::add(std::span<const double> input, std::span<const double> injected, std::span<const double> target) {
  if (input.size() != input_width_ || injected.size() != injected_width_ || target.size() != output_width_)
    throw ShapeError("training row widths do not match the set");
  inputs_.insert(inputs_.end(), input.begin(), input.end());
  injected_.insert(injected_.end(), injected.begin(), injected.end());
  targets_.insert(targets_.end(), target.begin(), target.end());
  ++count_;
}

TrainingSet TrainingSet::subset(std::span<const std::size_t> indices) const {
  TrainingSet out(input_width_, injected_width_, output_width_);
  for (auto i : indices) out.add(input(i), injected(i), target(i));
  return out;
}

std::vector<double> Gradients::flatten() const {
  std::vector<double> out;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out.insert(out.end(), weights[l].begin(), weights[l].end());
    out.insert(out.end(), biases[l].begin(), biases[l].end());
  }
  return out;
}

double batch_loss(const Network& net, const TrainingSet& data, std::span<const std::size_t> rows) {
  check_widths(net, data);
  check_rows(data, rows);
  Workspace ws;
  forward_batch(net, data, rows, ws);
  return batch_squared_error(ws, data, rows) / static_cast<double>(rows.size() * data.output_width());
}

double dataset_loss(const Network& net, const TrainingSet& data) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return batch_loss(net, data, rows);
}

Gradients backward(const Network& net, const TrainingSet& data, std::span<const std::size_t> rows) {
  check_widths(net, data);
  check_rows(data, rows);
  Workspace ws;
  forward_batch(net, data, rows, ws);
  Gradients g;
  backward_batch(net, data, rows, ws, g);
  return g;
}

void TrainConfig::validate(std::size_t dataset_size) const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InvalidArgument("learning rate must be positive");
  if (epochs == 0) throw InvalidArgument("epochs must be positive");
  if (batch_size == 0) throw InvalidArgument("batch size must be positive");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw InvalidArgument("validation fraction must lie in [0, 1)");
  if (early_stopping_patience && *early_stopping_patience == 0)
    throw InvalidArgument("early stopping patience must be positive");
  if (early_stopping_patience && validation_fraction == 0.0)
    throw InvalidArgument("early stopping needs a validation fraction");
  if (batch_size > dataset_size)
    throw InvalidArgument("batch size " + std::to_string(batch_size) + " exceeds the " +
                          std::to_string(dataset_size) + " training rows");
}

std::vector<std::size_t> validation_rows(std::size_t dataset_size, double fraction) {
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(dataset_size)));
  if (count == 0) return {};
  std::vector<std::size_t> perm(dataset_size);
  for (std::size_t i = 0; i < dataset_size; ++i) perm[i] = i;
  Rng rng(kValidationSplitSeed);
  rng.shuffle(perm);
  perm.resize(count);
  std::sort(perm.begin(), perm.end());
  return perm;
}

TrainResult train(Network network, const TrainingSet& data, const TrainConfig& config) {
  check_widths(network, data);
  const auto held_out = validation_rows(data.size(), config.validation_fraction);
  std::vector<std::size_t> rows;
  {
    std::size_t h = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (h < held_out.size() && held_out[h] == i) {
        ++h;
        continue;
      }
      rows.push_back(i);
    }
  }
  config.validate(rows.size());

  const std::size_t nparams = network.parameter_count();
  std::vector<double> params = network.parameters();
  std::vector<double> m(nparams, 0.0), v(nparams, 0.0);
  std::uint64_t step = 0;
  Rng rng(splitmix64(config.seed ^ kShuffleStream));

  TrainResult result{network, {}, {}, 0, false};
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = params;
  std::size_t since_best = 0;
  Workspace ws;
  Gradients g;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(rows);
    double sq_sum = 0.0;
    for (std::size_t start = 0; start < rows.size(); start += config.batch_size) {
      const std::size_t end = std::min(rows.size(), start + config.batch_size);
      const std::span<const std::size_t> batch(rows.data() + start, end - start);
      forward_batch(network, data, batch, ws);
      backward_batch(network, data, batch, ws, g);
      sq_sum += g.loss * static_cast<double>(batch.size());

      ++step;
      const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
      std::size_t p = 0;
      auto update = [&](std::vector<double>& target, const std::vector<double>& grad) {
        for (std::size_t i = 0; i < target.size(); ++i, ++p) {
          m[p] = kAdamBeta1 * m[p] + (1.0 - kAdamBeta1) * grad[i];
          v[p] = kAdamBeta2 * v[p] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
          target[i] -= config.learning_rate * (m[p] / bc1) / (std::sqrt(v[p] / bc2) + kAdamEpsilon);
        }
      };
      auto layers = network.layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weights, g.weights[l]);
        update(layers[l].biases, g.biases[l]);
      }
    }
    const double epoch_loss = sq_sum / static_cast<double>(rows.size());
    if (!std::isfinite(epoch_loss))
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch + 1), epoch + 1);
    result.train_loss.push_back(epoch_loss);

    if (!held_out.empty()) {
      forward_batch(network, data, held_out, ws);
      const double val = batch_squared_error(ws, data, held_out) /
                         static_cast<double>(held_out.size() * data.output_width());
      if (!std::isfinite(val))
        throw DivergenceError("validation loss diverged at epoch " + std::to_string(epoch + 1), epoch + 1);
      result.validation_loss.push_back(val);
      if (val < best_val) {
        best_val = val;
        best_params = network.parameters();
        result.best_epoch = epoch + 1;
        since_best = 0;
      } else if (config.early_stopping_patience && ++since_best >= *config.early_stopping_patience) {
        network.set_parameters(best_params);
        result.stopped_early = true;
        break;
      }
    } else {
      result.best_epoch = epoch + 1;
    }
  }
  result.network = std::move(network);
  return result;
}

std::string serialize(const Network& net) {
  const auto& s = net.shape();
  std::string out = "pgml-network 1\n";
  out += "activation " + to_string(s.activation) + "\n";
  out += "input_width " + std::to_string(s.input_width) + "\n";
  out += "hidden_widths";
  for (auto w : s.hidden_widths) out += " " + std::to_string(w);
  out += "\noutput_width " + std::to_string(s.output_width) + "\n";
  out += "injection " + std::to_string(s.injection.layer_index) + " " + std::to_string(s.injection.injected_width) +
         "\n";
  const auto layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    out += "layer " + std::to_string(l) + " " + std::to_string(layer.inputs) + " " + std::to_string(layer.outputs) +
           "\n";
    for (std::size_t k = 0; k < layer.inputs; ++k) {
      for (std::size_t j = 0; j < layer.outputs; ++j) {
        if (j) out += ' ';
        out += text::format_exact(layer.weight(k, j));
      }
      out += '\n';
    }
    for (std::size_t j = 0; j < layer.outputs; ++j) {
      if (j) out += ' ';
      out += text::format_exact(layer.biases[j]);
    }
    out += '\n';
  }
  out += "end\n";
  return out;
}

Network deserialize_network(std::string_view content) {
  const auto lines = text::split_lines(content);
  std::size_t li = 0;
  auto next = [&](std::string_view expect_key) {
    while (li < lines.size() && text::trim(lines[li]).empty()) ++li;
    if (li >= lines.size()) throw ParseError("unexpected end of model file, expected '" + std::string(expect_key) + "'");
    auto f = text::split_whitespace(lines[li]);
    if (!expect_key.empty() && (f.empty() || f[0] != expect_key))
      throw ParseError("expected '" + std::string(expect_key) + "'", li + 1);
    ++li;
    return f;
  };
  auto integer = [&](std::string_view tok) {
    auto v = text::parse_integer(tok);
    if (!v || *v < 0) throw ParseError("bad integer '" + std::string(tok) + "'", li);
    return static_cast<std::size_t>(*v);
  };

  auto header = next("pgml-network");
  if (header.size() != 2 || header[1] != "1") throw ParseError("unsupported model format version", li);
  NetworkShape shape;
  auto act = next("activation");
  if (act.size() != 2) throw ParseError("malformed activation line", li);
  shape.activation = parse_activation(act[1]);
  auto in = next("input_width");
  if (in.size() != 2) throw ParseError("malformed input_width line", li);
  shape.input_width = integer(in[1]);
  auto hidden = next("hidden_widths");
  shape.hidden_widths.clear();
  for (std::size_t i = 1; i < hidden.size(); ++i) shape.hidden_widths.push_back(integer(hidden[i]));
  auto out = next("output_width");
  if (out.size() != 2) throw ParseError("malformed output_width line", li);
  shape.output_width = integer(out[1]);
  auto inj = next("injection");
  if (inj.size() != 3) throw ParseError("malformed injection line", li);
  shape.injection = {integer(inj[1]), integer(inj[2])};

  Network net(shape);
  auto layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& layer = layers[l];
    auto hdr = next("layer");
    if (hdr.size() != 4 || integer(hdr[1]) != l || integer(hdr[2]) != layer.inputs ||
        integer(hdr[3]) != layer.outputs)
      throw ParseError("layer header does not match the declared shape", li);
    auto read_row = [&](std::span<double> dst) {
      auto f = next("");
      if (f.size() != dst.size())
        throw ParseError("expected " + std::to_string(dst.size()) + " values, found " + std::to_string(f.size()), li);
      for (std::size_t j = 0; j < dst.size(); ++j) {
        auto v = text::parse_double(f[j]);
        if (!v) throw ParseError("bad number '" + std::string(f[j]) + "'", li);
        dst[j] = *v;
      }
    };
    for (std::size_t k = 0; k < layer.inputs; ++k)
      read_row(std::span<double>(layer.weights.data() + k * layer.outputs, layer.outputs));
    read_row(layer.biases);
  }
  next("end");
  if (!net.all_finite()) throw ParseError("model file contains non-finite parameters");
  return net;
}

}  // namespace pgml
