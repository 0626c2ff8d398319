#pragma once

#include <string_view>
#include <vector>

#include "cellex/model.hpp"

namespace cellex {

struct LabeledComplex {
  const CellComplex* complex = nullptr;
  int label = 0;
};

enum class Optimizer { GradientDescent, Adam };

std::string_view optimizer_name(Optimizer opt);
Optimizer parse_optimizer(std::string_view name);

struct TrainConfig {
  int epochs = 200;
  double lr = 0.01;
  Optimizer optimizer = Optimizer::Adam;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  CellModel model;
  std::vector<EpochStats> history;
};

/// Full-batch training on the mean cross-entropy. The stats of epoch t are
/// measured before that epoch's update. Throws Error{NonFinite} naming the
/// epoch if the loss diverges.
TrainResult train(CellModel model, const std::vector<LabeledComplex>& dataset, const TrainConfig& config);

/// Fraction of complexes whose argmax prediction equals the label.
double accuracy(const CellModel& model, const std::vector<LabeledComplex>& dataset);

}  // namespace cellex
