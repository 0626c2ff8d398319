#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cellex/complex.hpp"
#include "cellex/error.hpp"
#include "cellex/model.hpp"
#include "cellex/motifs.hpp"
#include "cellex/random.hpp"
#include "cellex/train.hpp"
#include "oracles.hpp"

using namespace cellex;

namespace {

Graph random_featured_graph(int n, double p, std::uint64_t seed, int dim) {
  Rng rng(seed + 1000);
  Eigen::MatrixXd x(n, dim);
  for (int i = 0; i < x.size(); ++i) x(i) = rng.normal();
  return erdos_renyi(n, p, seed, dim).with_features(x);
}

CellModel small_model(int input_dim, Aggregation agg, std::uint64_t seed, int layers = 2) {
  ModelConfig config;
  config.input_dim = input_dim;
  config.hidden_dim = 4;
  config.layer_count = layers;
  config.aggregation = agg;
  config.seed = seed;
  CellModel model = init_model(config);
  Rng rng(seed + 77);
  for (auto& layer : model.params.layers)
    for (int i = 0; i < layer.bias.size(); ++i) layer.bias(i) = rng.uniform(-0.2, 0.2);
  return model;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6}); }

}  // namespace

TEST_CASE("parameter and input gradients match central differences") {
  for (Aggregation agg : {Aggregation::Sum, Aggregation::Mean}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const CellComplex cx = lift(random_featured_graph(6, 0.5, seed, 2), 4);
      const CellModel model = small_model(2, agg, seed);
      const int label = static_cast<int>(seed % 2);
      const auto analytic = loss_and_gradients(model, cx, label);

      const auto numeric = oracle::central_difference(
          [&](const std::vector<double>& theta) {
            CellModel m = model;
            m.params.assign(theta);
            return loss_and_gradients(m, cx, label).loss;
          },
          model.params.flatten());
      const auto exact = analytic.param_grads.flatten();
      REQUIRE(exact.size() == numeric.size());
      for (std::size_t i = 0; i < exact.size(); ++i) CHECK(rel_err(exact[i], numeric[i]) < 1e-4);

      const Eigen::MatrixXd f = cx.features();
      const auto numeric_x = oracle::central_difference(
          [&](const std::vector<double>& v) {
            return loss_and_gradients(model, cx, Eigen::Map<const Eigen::MatrixXd>(v.data(), f.rows(), f.cols()), label)
                .loss;
          },
          std::vector<double>(f.data(), f.data() + f.size()));
      for (int i = 0; i < f.size(); ++i) CHECK(rel_err(analytic.input_grads.data()[i], numeric_x[i]) < 1e-4);
    }
  }
}

TEST_CASE("zero weights give a uniform prediction") {
  const CellComplex cx = lift(motif_template(MotifKind::House), 5);
  for (int classes : {2, 3, 5}) {
    ModelConfig config;
    config.input_dim = 1;
    config.num_classes = classes;
    CellModel model = init_model(config);
    model.params = model.params.zeros_like();
    const auto lg = loss_and_gradients(model, cx, 0);
    CHECK(lg.loss == doctest::Approx(std::log(classes)).epsilon(1e-12));
    for (int c = 0; c < classes; ++c) CHECK(lg.prediction.probs(c) == doctest::Approx(1.0 / classes));
  }
}

TEST_CASE("single 0-cell uses self maps only") {
  Eigen::MatrixXd x(1, 2);
  x << 0.3, -1.2;
  const CellComplex cx = lift(Graph(1, {}, x), 3);
  const CellModel model = small_model(2, Aggregation::Sum, 4);
  Eigen::RowVectorXd h = x.row(0);
  for (const auto& layer : model.params.layers) h = (h * layer.self + layer.bias).cwiseMax(0.0);
  const Eigen::RowVectorXd expected = h * model.params.readout + model.params.readout_bias;
  const auto pred = forward(model, cx);
  for (int c = 0; c < 2; ++c) CHECK(pred.logits(c) == doctest::Approx(expected(c)).epsilon(1e-14));
}

TEST_CASE("logits are invariant to node relabeling") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_featured_graph(12, 0.3, seed, 3);
    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    for (int i = 11; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const Graph h = permute_nodes(g, perm);
    for (Aggregation agg : {Aggregation::Sum, Aggregation::Mean}) {
      const CellModel model = small_model(3, agg, seed);
      const auto a = forward(model, lift(g, 6));
      const auto b = forward(model, lift(h, 6));
      for (int c = 0; c < 2; ++c) CHECK(std::abs(a.logits(c) - b.logits(c)) < 1e-9);
    }
  }
}

TEST_CASE("probabilities are normalized") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ModelConfig config;
    config.input_dim = 2;
    config.num_classes = 4;
    config.seed = seed;
    const CellModel model = init_model(config);
    const auto pred = forward(model, lift(random_featured_graph(10, 0.4, seed, 2), 5));
    CHECK(std::abs(pred.probs.sum() - 1.0) < 1e-9);
    CHECK((pred.probs.array() >= 0.0).all());
  }
  const Eigen::RowVectorXd big = (Eigen::RowVectorXd(3) << 1000.0, 0.0, -1000.0).finished();
  const Eigen::RowVectorXd p = softmax(big);
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(std::isfinite(p(2)));
}

TEST_CASE("cells beyond the receptive field get exactly zero gradient") {
  // One layer: 2-cells reach 0-cells only through two hops.
  const CellComplex cx = lift(random_featured_graph(8, 0.6, 3, 2), 4);
  REQUIRE(cx.cell_count(2) > 0);
  const CellModel model = small_model(2, Aggregation::Sum, 3, 1);
  const auto lg = loss_and_gradients(model, cx, 1);
  for (int f = 0; f < cx.cell_count(2); ++f) CHECK(lg.input_grads.row(cx.offset(2) + f).isZero(0.0));
  CHECK(!lg.input_grads.topRows(cx.offset(2)).isZero(0.0));
}

TEST_CASE("2-cells change the prediction") {
  const Graph g = motif_template(MotifKind::Square);
  const CellModel model = small_model(1, Aggregation::Sum, 11);
  const auto with_face = forward(model, lift(g, 4));
  const auto without = forward(model, lift(g, 3));
  CHECK((with_face.logits - without.logits).norm() > 1e-6);
}

TEST_CASE("dimension mismatch is rejected") {
  const CellComplex cx = lift(motif_template(MotifKind::House), 4);
  const CellModel model = small_model(3, Aggregation::Sum, 0);
  CHECK_THROWS_AS(forward(model, cx), Error);
  const CellModel ok = small_model(1, Aggregation::Sum, 0);
  CHECK_THROWS_AS(forward(ok, cx, Eigen::MatrixXd::Zero(2, 1)), Error);
  CHECK_THROWS_AS(loss_and_gradients(ok, cx, 2), Error);
}

TEST_CASE("parameter flatten and assign round-trip") {
  CellModel model = small_model(3, Aggregation::Mean, 5);
  const auto flat = model.params.flatten();
  CHECK(flat.size() == model.params.size());
  CellModel other = init_model(model.config);
  other.params.assign(flat);
  CHECK(other.params.flatten() == flat);
  CHECK_THROWS_AS(other.params.assign(std::vector<double>(flat.size() - 1)), Error);
}

TEST_CASE("training is deterministic and learns the house/hexagon task") {
  SyntheticDatasetConfig config;
  config.num_graphs = 200;
  std::vector<CellComplex> complexes;
  for (const auto& g : generate_motif_dataset(config)) complexes.push_back(lift(g, 8));
  std::vector<LabeledComplex> data;
  for (std::size_t i = 0; i < complexes.size(); ++i) data.push_back({&complexes[i], static_cast<int>(i % 2)});

  ModelConfig mc;
  mc.seed = 1;
  const TrainResult a = train(init_model(mc), data, TrainConfig{});
  CHECK(accuracy(a.model, data) >= 0.95);
  CHECK(a.history.size() == 200);
  CHECK(a.history.front().epoch == 0);

  TrainConfig short_run;
  short_run.epochs = 5;
  const TrainResult b = train(init_model(mc), data, short_run);
  const TrainResult c = train(init_model(mc), data, short_run);
  CHECK(b.model.params.flatten() == c.model.params.flatten());
  for (std::size_t i = 0; i < b.history.size(); ++i) CHECK(b.history[i].loss == c.history[i].loss);
}

TEST_CASE("contradictory labels pin accuracy at one half") {
  const CellComplex cx = lift(motif_template(MotifKind::House), 5);
  const std::vector<LabeledComplex> data{{&cx, 0}, {&cx, 1}};
  for (Optimizer opt : {Optimizer::Adam, Optimizer::GradientDescent}) {
    TrainConfig config;
    config.epochs = 50;
    config.optimizer = opt;
    ModelConfig mc;
    mc.input_dim = 1;
    const TrainResult r = train(init_model(mc), data, config);
    CHECK(accuracy(r.model, data) == 0.5);
  }
}

TEST_CASE("training rejects bad configuration and divergence") {
  const CellComplex cx = lift(motif_template(MotifKind::House), 5);
  const std::vector<LabeledComplex> data{{&cx, 0}};
  ModelConfig mc;
  mc.input_dim = 1;
  TrainConfig bad;
  bad.lr = 0.0;
  CHECK_THROWS_AS(train(init_model(mc), data, bad), Error);
  CHECK_THROWS_AS(train(init_model(mc), {}, TrainConfig{}), Error);

  TrainConfig huge;
  huge.optimizer = Optimizer::GradientDescent;
  huge.lr = 1e300;
  huge.epochs = 10;
  try {
    train(init_model(mc), data, huge);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonFinite);
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
}
