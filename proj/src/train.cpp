#include "cellex/train.hpp"

#include <cmath>
#include <string>

#include "cellex/error.hpp"

namespace cellex {

std::string_view optimizer_name(Optimizer opt) { return opt == Optimizer::Adam ? "adam" : "gd"; }

Optimizer parse_optimizer(std::string_view name) {
  if (name == "adam") return Optimizer::Adam;
  if (name == "gd") return Optimizer::GradientDescent;
  throw Error(Errc::InvalidArgument, "unknown optimizer '" + std::string(name) + "'");
}

namespace {

int argmax(const Eigen::RowVectorXd& v) {
  Eigen::Index best = 0;
  v.maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

TrainResult train(CellModel model, const std::vector<LabeledComplex>& dataset, const TrainConfig& config) {
  if (dataset.empty()) throw Error(Errc::InvalidArgument, "training set is empty");
  if (config.epochs < 0 || !(config.lr > 0.0)) throw Error(Errc::InvalidArgument, "need epochs >= 0 and lr > 0");

  TrainResult result;
  const double inv_n = 1.0 / static_cast<double>(dataset.size());
  const std::size_t n_params = model.params.size();
  std::vector<double> m1(n_params, 0.0), m2(n_params, 0.0);
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Parameters grad = model.params.zeros_like();
    double loss = 0.0;
    int correct = 0;
    for (const LabeledComplex& item : dataset) {
      LossGradients lg;
      try {
        lg = loss_and_gradients(model, *item.complex, item.label);
      } catch (const Error& e) {
        if (e.code() != Errc::NonFinite) throw;
        throw Error(Errc::NonFinite, "training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
      }
      loss += lg.loss;
      correct += argmax(lg.prediction.logits) == item.label;
      grad.add_scaled(inv_n, lg.param_grads);
    }
    loss *= inv_n;
    if (!std::isfinite(loss) || !grad.all_finite()) {
      throw Error(Errc::NonFinite, "training diverged at epoch " + std::to_string(epoch));
    }
    result.history.push_back({epoch, loss, correct * inv_n});

    if (config.optimizer == Optimizer::GradientDescent) {
      model.params.add_scaled(-config.lr, grad);
    } else {
      std::vector<double> p = model.params.flatten();
      const std::vector<double> g = grad.flatten();
      const double t = epoch + 1;
      const double c1 = 1.0 - std::pow(beta1, t);
      const double c2 = 1.0 - std::pow(beta2, t);
      for (std::size_t i = 0; i < n_params; ++i) {
        m1[i] = beta1 * m1[i] + (1.0 - beta1) * g[i];
        m2[i] = beta2 * m2[i] + (1.0 - beta2) * g[i] * g[i];
        p[i] -= config.lr * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + eps);
      }
      model.params.assign(p);
    }
    if (!model.params.all_finite()) {
      throw Error(Errc::NonFinite, "training diverged at epoch " + std::to_string(epoch));
    }
  }
  result.model = std::move(model);
  return result;
}

double accuracy(const CellModel& model, const std::vector<LabeledComplex>& dataset) {
  if (dataset.empty()) return 0.0;
  int correct = 0;
  for (const LabeledComplex& item : dataset) correct += argmax(forward(model, *item.complex).logits) == item.label;
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

}  // namespace cellex
