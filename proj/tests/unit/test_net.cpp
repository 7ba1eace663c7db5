#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pgml/error.hpp"
#include "pgml/net.hpp"
#include "pgml/rng.hpp"

using namespace pgml;

namespace {

NetworkShape small_shape(std::size_t injected = 4) {
  NetworkShape s;
  s.input_width = 8;
  s.hidden_widths = {5, 5, 5, 5};
  s.injection = {3, injected};
  return s;
}

TrainingSet random_set(const NetworkShape& shape, std::size_t rows, std::uint64_t seed) {
  Rng rng(splitmix64(seed + 1000));
  TrainingSet set(shape.input_width, shape.injection.injected_width);
  std::vector<double> x(shape.input_width), z(shape.injection.injected_width);
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto& v : x) v = rng.uniform(-1, 1);
    for (auto& v : z) v = rng.uniform(-1, 1);
    set.add(x, z, rng.uniform(-1, 1));
  }
  return set;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

}  // namespace

TEST_CASE("layer widths through the injected network") {
  NetworkShape pgml;
  pgml.injection = {3, 4};
  CHECK(pgml.width_trace() == std::vector<std::size_t>{402, 20, 20, 24, 20, 1});
  CHECK(pgml.injected_layer_width() == 24);
  NetworkShape ml;
  ml.injection = {3, 2};
  CHECK(ml.injected_layer_width() == 22);
  CHECK(ml.layer_inputs(3) == 22);
  CHECK(ml.layer_outputs(3) == 20);
  CHECK(ml.layer_count() == 5);
}

TEST_CASE("shape validation") {
  NetworkShape s;
  s.injection = {0, 4};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.injection = {5, 4};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.injection = {4, 4};
  CHECK_NOTHROW(s.validate());
  s.hidden_widths = {20, 0};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.hidden_widths = {};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  CHECK(parse_activation("relu") == Activation::relu);
  CHECK_THROWS_AS(parse_activation("sigmoid"), InvalidArgument);
}

TEST_CASE("glorot initialization") {
  NetworkShape s;
  s.injection = {3, 4};
  const auto a = glorot_init(s, 42);
  const auto b = glorot_init(s, 42);
  const auto c = glorot_init(s, 43);
  CHECK(a.parameters() == b.parameters());
  CHECK(a.parameters() != c.parameters());
  const double bound = std::sqrt(6.0 / 40.0);
  CHECK(bound == doctest::Approx(0.3873).epsilon(1e-4));
  const auto& layer = a.layers()[1];
  REQUIRE(layer.inputs == 20);
  REQUIRE(layer.outputs == 20);
  for (double w : layer.weights) CHECK(std::abs(w) <= bound);
  for (const auto& l : a.layers())
    for (double bias : l.biases) CHECK(bias == 0.0);
  CHECK(a.all_finite());
}

TEST_CASE("zero network outputs zero") {
  NetworkShape s;
  s.injection = {3, 4};
  const Network net(s);
  std::vector<double> x(402, 0.7), z{0.1, -0.2, 0.3, 0.4};
  CHECK(net.predict(x, z) == 0.0);
}

TEST_CASE("forward rejects width mismatches") {
  NetworkShape s;
  s.injection = {3, 4};
  const auto net = glorot_init(s, 1);
  std::vector<double> x(402, 0.1), z(4, 0.2);
  CHECK_NOTHROW(net.predict(x, z));
  CHECK_THROWS_AS(net.predict(std::vector<double>(401, 0.1), z), ShapeError);
  CHECK_THROWS_AS(net.predict(x, std::vector<double>(2, 0.2)), ShapeError);
  CHECK_THROWS_AS(net.predict(x, std::vector<double>(5, 0.2)), ShapeError);
  CHECK_THROWS_AS(Network(s).set_parameters(std::vector<double>(3, 0.0)), ShapeError);
}

TEST_CASE("without injection the network is a plain MLP") {
  NetworkShape s = small_shape(0);
  const auto net = glorot_init(s, 9);
  std::vector<double> x{0.1, -0.3, 0.5, 0.2, -0.9, 0.4, 0.0, 0.8};
  // Hand-rolled tanh MLP using the same parameters.
  std::vector<double> h = x;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& layer = net.layers()[l];
    std::vector<double> next(layer.outputs);
    for (std::size_t j = 0; j < layer.outputs; ++j) {
      double a = layer.biases[j];
      for (std::size_t k = 0; k < layer.inputs; ++k) a += layer.weight(k, j) * h[k];
      next[j] = l + 1 < net.layers().size() ? std::tanh(a) : a;
    }
    h = next;
  }
  CHECK(net.predict(x, {}) == doctest::Approx(h[0]).epsilon(1e-14));
}

TEST_CASE("injected values enter after the third hidden activation") {
  NetworkShape s = small_shape(4);
  auto net = glorot_init(s, 5);
  std::vector<double> x(8, 0.3);
  std::vector<double> z1{0, 0, 0, 0}, z2{0, 0, 0, 1};
  const double base = net.predict(x, z1);
  const double moved = net.predict(x, z2);
  CHECK(base != moved);
  // Zeroing the weights that read the injected slots removes their influence.
  auto& l3 = net.layers()[3];
  for (std::size_t k = 5; k < 9; ++k)
    for (std::size_t j = 0; j < l3.outputs; ++j) l3.weight(k, j) = 0.0;
  CHECK(net.predict(x, z1) == net.predict(x, z2));
}

TEST_CASE("mse loss") {
  const std::vector<double> p{1, 3}, t{0, 0};
  CHECK(mse_loss(p, t) == 5.0);
  CHECK(mse_loss(p, p) == 0.0);
  const std::vector<double> a{0.3, -1.2, 4.0}, b{1.0, 2.0, -0.5};
  CHECK(mse_loss(a, b) == mse_loss(b, a));
  CHECK_THROWS_AS(mse_loss({}, {}), InvalidArgument);
  CHECK_THROWS_AS(mse_loss(a, p), InvalidArgument);
}

TEST_CASE("analytic gradients match central differences") {
  const double h = 1e-5;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto shape = small_shape(4);
    auto net = glorot_init(shape, seed);
    // Non-zero biases so their gradients are exercised away from the init point.
    auto params = net.parameters();
    Rng rng(splitmix64(seed * 77));
    for (auto& p : params) p += rng.uniform(-0.1, 0.1);
    net.set_parameters(params);
    const auto data = random_set(shape, 6, seed);
    const auto rows = all_rows(data.size());
    const auto grad = backward(net, data, rows).flatten();
    REQUIRE(grad.size() == params.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto plus = params, minus = params;
      plus[i] += h;
      minus[i] -= h;
      Network np(shape), nm(shape);
      np.set_parameters(plus);
      nm.set_parameters(minus);
      const double fd = (batch_loss(np, data, rows) - batch_loss(nm, data, rows)) / (2 * h);
      const double rel = std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
      worst = std::max(worst, rel);
    }
    CHECK_MESSAGE(worst < 1e-5, "seed " << seed << " worst relative error " << worst);
  }
}

TEST_CASE("gradient vanishes at a zero-residual batch") {
  const auto shape = small_shape(4);
  const auto net = glorot_init(shape, 3);
  auto data = random_set(shape, 4, 3);
  TrainingSet exact(shape.input_width, shape.injection.injected_width);
  for (std::size_t i = 0; i < data.size(); ++i) exact.add(data.input(i), data.injected(i), net.predict(data.input(i), data.injected(i)));
  const auto g = backward(net, exact, all_rows(exact.size()));
  CHECK(g.loss == 0.0);
  for (double v : g.flatten()) CHECK(v == 0.0);
  // Gradients cover exactly the trainable parameters, none for injected inputs.
  CHECK(g.flatten().size() == net.parameter_count());
}

TEST_CASE("training memorizes a single sample") {
  const auto shape = small_shape(4);
  const auto data = random_set(shape, 1, 11);
  TrainConfig cfg;
  cfg.epochs = 2000;
  cfg.batch_size = 1;
  const auto result = train(glorot_init(shape, 11), data, cfg);
  CHECK(result.train_loss.size() == 2000);
  CHECK(result.train_loss.back() < 1e-6);
}

TEST_CASE("training is deterministic and seed-dependent") {
  const auto shape = small_shape(4);
  const auto data = random_set(shape, 100, 4);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 16;
  const auto a = train(glorot_init(shape, 1), data, cfg);
  const auto b = train(glorot_init(shape, 1), data, cfg);
  CHECK(a.network.parameters() == b.network.parameters());
  CHECK(a.train_loss == b.train_loss);
  cfg.seed = 2;
  const auto c = train(glorot_init(shape, 1), data, cfg);
  CHECK(a.network.parameters() != c.network.parameters());
  CHECK(a.train_loss.back() < a.train_loss.front());
}

TEST_CASE("early stopping restores the best epoch") {
  const auto shape = small_shape(4);
  const auto data = random_set(shape, 60, 8);
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e-2;
  cfg.validation_fraction = 0.3;
  cfg.early_stopping_patience = 5;
  const auto r = train(glorot_init(shape, 2), data, cfg);
  REQUIRE_FALSE(r.validation_loss.empty());
  const auto best = std::min_element(r.validation_loss.begin(), r.validation_loss.end());
  CHECK(static_cast<std::size_t>(best - r.validation_loss.begin()) + 1 == r.best_epoch);
  if (r.stopped_early) CHECK(r.validation_loss.size() == r.best_epoch + 5);
  const auto held = validation_rows(data.size(), 0.3);
  CHECK(held.size() == 18);
  CHECK(batch_loss(r.network, data, held) == doctest::Approx(*best).epsilon(1e-12));
  CHECK(validation_rows(60, 0.3) == held);
}

TEST_CASE("training config validation") {
  TrainConfig cfg;
  CHECK_THROWS_AS(cfg.validate(10), InvalidArgument);  // batch 64 > 10 rows
  cfg.batch_size = 10;
  CHECK_NOTHROW(cfg.validate(10));
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(10), InvalidArgument);
  cfg.learning_rate = 1e-3;
  cfg.early_stopping_patience = 3;
  CHECK_THROWS_AS(cfg.validate(10), InvalidArgument);  // patience without a validation split
}

TEST_CASE("divergence is detected") {
  const auto shape = small_shape(4);
  auto data = random_set(shape, 20, 1);
  TrainingSet bad(shape.input_width, shape.injection.injected_width);
  for (std::size_t i = 0; i < data.size(); ++i) bad.add(data.input(i), data.injected(i), 1e200);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 4;
  CHECK_THROWS_AS(train(glorot_init(shape, 1), bad, cfg), DivergenceError);
}

TEST_CASE("serialization round trip is exact") {
  NetworkShape s;
  s.injection = {3, 4};
  const auto net = glorot_init(s, 17);
  const auto text = serialize(net);
  const auto back = deserialize_network(text);
  CHECK(back.shape() == net.shape());
  CHECK(back.parameters() == net.parameters());
  CHECK(serialize(back) == text);
  CHECK_THROWS_AS(deserialize_network("pgml-network 2\n"), ParseError);
  CHECK_THROWS_AS(deserialize_network(text.substr(0, text.size() / 2)), ParseError);
}
