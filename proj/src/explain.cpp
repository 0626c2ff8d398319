#include "cellex/explain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cellex/error.hpp"
#include "cellex/random.hpp"

namespace cellex {

std::string_view mask_origin_name(MaskOrigin origin) {
  switch (origin) {
    case MaskOrigin::Gradient: return "grad";
    case MaskOrigin::Occlusion: return "occlusion";
    case MaskOrigin::LearnedMask: return "mask";
    case MaskOrigin::Random: return "random";
  }
  return "unknown";
}

MaskOrigin parse_mask_origin(std::string_view name) {
  if (name == "grad" || name == "gradient") return MaskOrigin::Gradient;
  if (name == "occlusion") return MaskOrigin::Occlusion;
  if (name == "mask" || name == "learned_mask") return MaskOrigin::LearnedMask;
  if (name == "random") return MaskOrigin::Random;
  throw Error(Errc::InvalidArgument, "unknown explainer '" + std::string(name) + "'");
}

int predicted_class(const CellModel& model, const CellComplex& complex) {
  Eigen::Index best = 0;
  forward(model, complex).logits.maxCoeff(&best);
  return static_cast<int>(best);
}

Eigen::VectorXd min_max_normalize(const Eigen::VectorXd& raw) {
  if (raw.size() == 0) return raw;
  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  if (!(hi > lo)) return Eigen::VectorXd::Constant(raw.size(), 0.5);
  return (raw.array() - lo) / (hi - lo);
}

namespace {

void check_target(const CellModel& model, int target) {
  if (target < 0 || target >= model.config.num_classes) throw Error(Errc::InvalidArgument, "target class out of range");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Mask explain_gradient(const CellModel& model, const CellComplex& complex, int target) {
  check_target(model, target);
  Eigen::RowVectorXd seed = Eigen::RowVectorXd::Zero(model.config.num_classes);
  seed(target) = 1.0;
  const Backprop bp = backward(model, complex, complex.features(), seed);
  return {min_max_normalize(bp.input_grads.rowwise().norm()), MaskOrigin::Gradient, target};
}

Mask explain_occlusion(const CellModel& model, const CellComplex& complex, int target) {
  check_target(model, target);
  const double base = forward(model, complex).probs(target);
  Eigen::MatrixXd x = complex.features();
  Eigen::VectorXd drops(complex.cell_count());
  for (int c = 0; c < complex.cell_count(); ++c) {
    const Eigen::RowVectorXd saved = x.row(c);
    x.row(c).setZero();
    drops(c) = std::max(0.0, base - forward(model, complex, x).probs(target));
    x.row(c) = saved;
  }
  return {min_max_normalize(drops), MaskOrigin::Occlusion, target};
}

Mask explain_learned_mask(const CellModel& model, const CellComplex& complex, int target,
                          const LearnedMaskParams& params) {
  check_target(model, target);
  if (params.epochs < 0 || !(params.lr > 0.0)) throw Error(Errc::InvalidArgument, "need epochs >= 0 and lr > 0");
  const int n = complex.cell_count();
  const Eigen::MatrixXd& x = complex.features();

  Rng rng(params.seed);
  Eigen::VectorXd theta(n);
  for (int c = 0; c < n; ++c) theta(c) = rng.uniform(-0.1, 0.1);

  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(n), m2 = Eigen::VectorXd::Zero(n);
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  Eigen::VectorXd mask(n);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (int c = 0; c < n; ++c) mask(c) = sigmoid(theta(c));
    const Eigen::MatrixXd masked = x.array().colwise() * mask.array();
    const LossGradients lg = loss_and_gradients(model, complex, masked, target);

    Eigen::VectorXd grad_mask = lg.input_grads.cwiseProduct(x).rowwise().sum();
    for (int c = 0; c < n; ++c) {
      const double m = std::clamp(mask(c), 1e-12, 1.0 - 1e-12);
      grad_mask(c) += params.l1 + params.entropy_coef * std::log((1.0 - m) / m);
    }
    const Eigen::VectorXd grad = grad_mask.cwiseProduct(mask.cwiseProduct((1.0 - mask.array()).matrix()));
    if (!grad.allFinite()) {
      throw Error(Errc::NonFinite, "mask optimisation diverged at epoch " + std::to_string(epoch));
    }
    const double t = epoch + 1;
    m1 = beta1 * m1 + (1.0 - beta1) * grad;
    m2 = beta2 * m2 + (1.0 - beta2) * grad.cwiseProduct(grad);
    const Eigen::ArrayXd step = (m1.array() / (1.0 - std::pow(beta1, t))) /
                                ((m2.array() / (1.0 - std::pow(beta2, t))).sqrt() + eps);
    theta -= params.lr * step.matrix();
  }
  for (int c = 0; c < n; ++c) mask(c) = sigmoid(theta(c));
  return {mask, MaskOrigin::LearnedMask, target};
}

Mask explain_random(const CellComplex& complex, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd scores(complex.cell_count());
  for (int c = 0; c < complex.cell_count(); ++c) scores(c) = rng.uniform();
  return {scores, MaskOrigin::Random, 0};
}

Mask explain(const ExplainerSpec& spec, const CellModel& model, const CellComplex& complex, int target) {
  if (target < 0) target = predicted_class(model, complex);
  switch (spec.kind) {
    case MaskOrigin::Gradient: return explain_gradient(model, complex, target);
    case MaskOrigin::Occlusion: return explain_occlusion(model, complex, target);
    case MaskOrigin::LearnedMask: return explain_learned_mask(model, complex, target, spec.mask);
    case MaskOrigin::Random: {
      Mask m = explain_random(complex, spec.seed);
      m.target = target;
      return m;
    }
  }
  throw Error(Errc::InvalidArgument, "unknown explainer");
}

}  // namespace cellex
