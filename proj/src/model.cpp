#include "cellex/model.hpp"

#include <cmath>
#include <string>

#include "cellex/error.hpp"
#include "cellex/random.hpp"

namespace cellex {

namespace {

using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Message operators for one complex under one aggregation rule.
class MessageOps {
 public:
  MessageOps(const CellComplex& cx, Aggregation agg) {
    if (agg == Aggregation::Sum) {
      h_ = &cx.horizontal();
      u_ = &cx.upward();
      d_ = &cx.downward();
    } else {
      h_norm_ = row_normalized(cx.horizontal());
      u_norm_ = row_normalized(cx.upward());
      d_norm_ = row_normalized(cx.downward());
      h_ = &h_norm_;
      u_ = &u_norm_;
      d_ = &d_norm_;
    }
  }
  const Sparse& h() const { return *h_; }
  const Sparse& u() const { return *u_; }
  const Sparse& d() const { return *d_; }

 private:
  static Sparse row_normalized(const Sparse& s) {
    Sparse out = s;
    for (int r = 0; r < out.outerSize(); ++r) {
      double total = 0.0;
      for (Sparse::InnerIterator it(out, r); it; ++it) total += it.value();
      if (total > 0.0)
        for (Sparse::InnerIterator it(out, r); it; ++it) it.valueRef() /= total;
    }
    return out;
  }

  const Sparse* h_ = nullptr;
  const Sparse* u_ = nullptr;
  const Sparse* d_ = nullptr;
  Sparse h_norm_, u_norm_, d_norm_;
};

struct LayerCache {
  Eigen::MatrixXd input;
  Eigen::MatrixXd agg_h, agg_u, agg_d;
  Eigen::MatrixXd pre;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  Eigen::MatrixXd output;
  Eigen::RowVectorXd pooled;
};

Eigen::MatrixXd uniform_matrix(Rng& rng, int rows, int cols) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill order so the stream maps to the flattened layout.
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-bound, bound);
  return m;
}

void check_dims(const CellModel& model, const CellComplex& cx, const Eigen::MatrixXd& features) {
  if (features.rows() != cx.cell_count()) {
    throw Error(Errc::DimensionMismatch, "feature rows (" + std::to_string(features.rows()) +
                                             ") must equal cell count (" + std::to_string(cx.cell_count()) + ")");
  }
  if (features.cols() != model.config.input_dim) {
    throw Error(Errc::DimensionMismatch, "feature dim " + std::to_string(features.cols()) +
                                             " does not match model input dim " +
                                             std::to_string(model.config.input_dim));
  }
  if (cx.cell_count(0) == 0) throw Error(Errc::EmptyGraph, "complex has no 0-cells");
}

Prediction run_forward(const CellModel& model, const CellComplex& cx, const Eigen::MatrixXd& features,
                       ForwardCache* cache) {
  check_dims(model, cx, features);
  const MessageOps ops(cx, model.config.aggregation);
  Eigen::MatrixXd h = features;
  if (cache) cache->layers.clear();
  for (const LayerWeights& w : model.params.layers) {
    LayerCache lc;
    lc.agg_h = ops.h() * h;
    lc.agg_u = ops.u() * h;
    lc.agg_d = ops.d() * h;
    lc.pre = h * w.self + lc.agg_h * w.horizontal + lc.agg_u * w.up + lc.agg_d * w.down;
    lc.pre.rowwise() += w.bias;
    Eigen::MatrixXd next = lc.pre.cwiseMax(0.0);
    if (cache) {
      lc.input = std::move(h);
      cache->layers.push_back(std::move(lc));
    }
    h = std::move(next);
  }

  const int n0 = cx.cell_count(0);
  Prediction pred;
  const Eigen::RowVectorXd pooled = h.topRows(n0).colwise().mean();
  pred.logits = pooled * model.params.readout + model.params.readout_bias;
  pred.probs = softmax(pred.logits);
  if (cache) {
    cache->pooled = pooled;
    cache->output = h;
  }
  pred.activations = std::move(h);
  return pred;
}

}  // namespace

std::string_view aggregation_name(Aggregation agg) { return agg == Aggregation::Sum ? "sum" : "mean"; }

Aggregation parse_aggregation(std::string_view name) {
  if (name == "sum") return Aggregation::Sum;
  if (name == "mean") return Aggregation::Mean;
  throw Error(Errc::InvalidArgument, "unknown aggregation '" + std::string(name) + "'");
}

Parameters Parameters::zeros_like() const {
  Parameters z;
  for (const LayerWeights& w : layers) {
    z.layers.push_back({Eigen::MatrixXd::Zero(w.self.rows(), w.self.cols()),
                        Eigen::MatrixXd::Zero(w.horizontal.rows(), w.horizontal.cols()),
                        Eigen::MatrixXd::Zero(w.up.rows(), w.up.cols()),
                        Eigen::MatrixXd::Zero(w.down.rows(), w.down.cols()),
                        Eigen::RowVectorXd::Zero(w.bias.size())});
  }
  z.readout = Eigen::MatrixXd::Zero(readout.rows(), readout.cols());
  z.readout_bias = Eigen::RowVectorXd::Zero(readout_bias.size());
  return z;
}

void Parameters::add_scaled(double scale, const Parameters& other) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].self += scale * other.layers[l].self;
    layers[l].horizontal += scale * other.layers[l].horizontal;
    layers[l].up += scale * other.layers[l].up;
    layers[l].down += scale * other.layers[l].down;
    layers[l].bias += scale * other.layers[l].bias;
  }
  readout += scale * other.readout;
  readout_bias += scale * other.readout_bias;
}

std::size_t Parameters::size() const {
  std::size_t n = 0;
  for (const LayerWeights& w : layers) {
    n += w.self.size() + w.horizontal.size() + w.up.size() + w.down.size() + w.bias.size();
  }
  return n + readout.size() + readout_bias.size();
}

bool Parameters::all_finite() const {
  for (const LayerWeights& w : layers) {
    if (!w.self.allFinite() || !w.horizontal.allFinite() || !w.up.allFinite() || !w.down.allFinite() ||
        !w.bias.allFinite())
      return false;
  }
  return readout.allFinite() && readout_bias.allFinite();
}

namespace {

template <class Visit>
void visit_blocks(Visit&& visit, auto& params) {
  for (auto& w : params.layers) {
    visit(w.self);
    visit(w.horizontal);
    visit(w.up);
    visit(w.down);
    visit(w.bias);
  }
  visit(params.readout);
  visit(params.readout_bias);
}

}  // namespace

std::vector<double> Parameters::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  visit_blocks(
      [&](const auto& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
          for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
      },
      *this);
  return out;
}

void Parameters::assign(std::span<const double> values) {
  if (values.size() != size()) throw Error(Errc::DimensionMismatch, "parameter vector has the wrong length");
  std::size_t i = 0;
  visit_blocks(
      [&](auto& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
          for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = values[i++];
      },
      *this);
}

CellModel init_model(const ModelConfig& config) {
  if (config.input_dim < 1 || config.hidden_dim < 1 || config.layer_count < 1 || config.num_classes < 2) {
    throw Error(Errc::InvalidArgument, "model needs input_dim, hidden_dim, layer_count >= 1 and >= 2 classes");
  }
  Rng rng(config.seed);
  CellModel model{config, {}};
  int in = config.input_dim;
  for (int l = 0; l < config.layer_count; ++l) {
    LayerWeights w;
    w.self = uniform_matrix(rng, in, config.hidden_dim);
    w.horizontal = uniform_matrix(rng, in, config.hidden_dim);
    w.up = uniform_matrix(rng, in, config.hidden_dim);
    w.down = uniform_matrix(rng, in, config.hidden_dim);
    w.bias = Eigen::RowVectorXd::Zero(config.hidden_dim);
    model.params.layers.push_back(std::move(w));
    in = config.hidden_dim;
  }
  model.params.readout = uniform_matrix(rng, config.hidden_dim, config.num_classes);
  model.params.readout_bias = Eigen::RowVectorXd::Zero(config.num_classes);
  return model;
}

Eigen::RowVectorXd softmax(const Eigen::RowVectorXd& logits) {
  Eigen::RowVectorXd e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

Prediction forward(const CellModel& model, const CellComplex& complex) {
  return run_forward(model, complex, complex.features(), nullptr);
}

Prediction forward(const CellModel& model, const CellComplex& complex, const Eigen::MatrixXd& features) {
  return run_forward(model, complex, features, nullptr);
}

Eigen::MatrixXd node_logits(const CellModel& model, const CellComplex& complex) {
  const Prediction pred = forward(model, complex);
  Eigen::MatrixXd out = pred.activations.topRows(complex.cell_count(0)) * model.params.readout;
  out.rowwise() += model.params.readout_bias;
  return out;
}

namespace {

Backprop run_backward(const CellModel& model, const CellComplex& complex, ForwardCache& cache,
                      Prediction prediction, const Eigen::RowVectorXd& logit_grad) {
  Backprop out;
  out.prediction = std::move(prediction);
  out.param_grads = model.params.zeros_like();

  const int n0 = complex.cell_count(0);
  out.param_grads.readout = cache.pooled.transpose() * logit_grad;
  out.param_grads.readout_bias = logit_grad;

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(cache.output.rows(), cache.output.cols());
  grad.topRows(n0).rowwise() = (logit_grad * model.params.readout.transpose()) / static_cast<double>(n0);

  const MessageOps ops(complex, model.config.aggregation);
  for (int l = static_cast<int>(cache.layers.size()) - 1; l >= 0; --l) {
    const LayerCache& lc = cache.layers[l];
    const LayerWeights& w = model.params.layers[l];
    LayerWeights& g = out.param_grads.layers[l];
    const Eigen::MatrixXd dz = grad.cwiseProduct((lc.pre.array() > 0.0).cast<double>().matrix());
    g.self = lc.input.transpose() * dz;
    g.horizontal = lc.agg_h.transpose() * dz;
    g.up = lc.agg_u.transpose() * dz;
    g.down = lc.agg_d.transpose() * dz;
    g.bias = dz.colwise().sum();
    grad = dz * w.self.transpose();
    grad += ops.h().transpose() * (dz * w.horizontal.transpose());
    grad += ops.u().transpose() * (dz * w.up.transpose());
    grad += ops.d().transpose() * (dz * w.down.transpose());
  }
  out.input_grads = std::move(grad);
  return out;
}

}  // namespace

Backprop backward(const CellModel& model, const CellComplex& complex, const Eigen::MatrixXd& features,
                  const Eigen::RowVectorXd& logit_grad) {
  ForwardCache cache;
  Prediction pred = run_forward(model, complex, features, &cache);
  return run_backward(model, complex, cache, std::move(pred), logit_grad);
}

LossGradients loss_and_gradients(const CellModel& model, const CellComplex& complex, int label) {
  return loss_and_gradients(model, complex, complex.features(), label);
}

LossGradients loss_and_gradients(const CellModel& model, const CellComplex& complex,
                                 const Eigen::MatrixXd& features, int label) {
  if (label < 0 || label >= model.config.num_classes) throw Error(Errc::InvalidArgument, "label out of range");
  ForwardCache cache;
  Prediction pred = run_forward(model, complex, features, &cache);
  // log-sum-exp form keeps the loss finite for confident predictions.
  const double max_logit = pred.logits.maxCoeff();
  const double lse = max_logit + std::log((pred.logits.array() - max_logit).exp().sum());
  const double loss = lse - pred.logits(label);
  if (!std::isfinite(loss)) throw Error(Errc::NonFinite, "non-finite loss");

  Eigen::RowVectorXd dlogits = pred.probs;
  dlogits(label) -= 1.0;
  Backprop bp = run_backward(model, complex, cache, std::move(pred), dlogits);
  return {loss, std::move(bp.param_grads), std::move(bp.input_grads), std::move(bp.prediction)};
}

}  // namespace cellex
