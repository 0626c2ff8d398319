#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cellex/complex.hpp"

namespace cellex {

enum class Aggregation { Sum, Mean };

std::string_view aggregation_name(Aggregation agg);
Aggregation parse_aggregation(std::string_view name);

struct ModelConfig {
  int input_dim = 8;
  int hidden_dim = 16;
  int layer_count = 2;
  int num_classes = 2;
  Aggregation aggregation = Aggregation::Sum;
  std::uint64_t seed = 0;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// One message-passing layer. Every map is in_dim x out_dim and acts on row
/// embeddings: z = h*self + agg_h*horizontal + agg_up*up + agg_down*down + bias.
struct LayerWeights {
  Eigen::MatrixXd self;
  Eigen::MatrixXd horizontal;
  Eigen::MatrixXd up;
  Eigen::MatrixXd down;
  Eigen::RowVectorXd bias;
};

struct Parameters {
  std::vector<LayerWeights> layers;
  Eigen::MatrixXd readout;  // hidden_dim x num_classes
  Eigen::RowVectorXd readout_bias;

  Parameters zeros_like() const;
  /// this += scale * other
  void add_scaled(double scale, const Parameters& other);
  std::size_t size() const;
  bool all_finite() const;

  /// Fixed ordering: per layer self, horizontal, up, down (row-major), bias;
  /// then readout (row-major) and readout bias.
  std::vector<double> flatten() const;
  void assign(std::span<const double> values);
};

struct CellModel {
  ModelConfig config;
  Parameters params;
};

/// Fresh model; weights uniform in +-1/sqrt(fan_in) from config.seed, biases 0.
CellModel init_model(const ModelConfig& config);

struct Prediction {
  Eigen::RowVectorXd logits;
  Eigen::RowVectorXd probs;
  /// Final-layer embedding of every cell, flat order.
  Eigen::MatrixXd activations;
};

/// Graph-level prediction: the layers run over all cells, the readout is the
/// mean of the 0-cell embeddings followed by a linear map.
Prediction forward(const CellModel& model, const CellComplex& complex);

/// As above with input features replaced (the complex is not modified).
Prediction forward(const CellModel& model, const CellComplex& complex, const Eigen::MatrixXd& features);

/// Per-0-cell logits (node classification head), n0 x num_classes.
Eigen::MatrixXd node_logits(const CellModel& model, const CellComplex& complex);

struct Backprop {
  Prediction prediction;
  Parameters param_grads;
  Eigen::MatrixXd input_grads;
};

/// Reverse pass seeded with d(objective)/d(logits).
Backprop backward(const CellModel& model, const CellComplex& complex, const Eigen::MatrixXd& features,
                  const Eigen::RowVectorXd& logit_grad);

struct LossGradients {
  double loss = 0.0;
  Parameters param_grads;
  Eigen::MatrixXd input_grads;
  Prediction prediction;
};

/// Cross-entropy against `label`. Throws on a non-finite loss.
LossGradients loss_and_gradients(const CellModel& model, const CellComplex& complex, int label);
LossGradients loss_and_gradients(const CellModel& model, const CellComplex& complex,
                                 const Eigen::MatrixXd& features, int label);

Eigen::RowVectorXd softmax(const Eigen::RowVectorXd& logits);

}  // namespace cellex
