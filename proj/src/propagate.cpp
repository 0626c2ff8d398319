#include "cellex/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cellex/error.hpp"

namespace cellex {

std::string_view propagation_name(PropagationAlgorithm alg) {
  switch (alg) {
    case PropagationAlgorithm::Hierarchical: return "hier";
    case PropagationAlgorithm::Direct: return "direct";
    case PropagationAlgorithm::Entropy: return "entropy";
    case PropagationAlgorithm::Activation: return "activation";
  }
  return "unknown";
}

PropagationAlgorithm parse_propagation(std::string_view name) {
  if (name == "hier" || name == "hierarchical") return PropagationAlgorithm::Hierarchical;
  if (name == "direct") return PropagationAlgorithm::Direct;
  if (name == "entropy") return PropagationAlgorithm::Entropy;
  if (name == "activation") return PropagationAlgorithm::Activation;
  throw Error(Errc::InvalidArgument, "unknown propagation algorithm '" + std::string(name) + "'");
}

std::string_view ablation_name(AblationMode mode) {
  switch (mode) {
    case AblationMode::Base: return "base";
    case AblationMode::BaseLift: return "base-lift";
    case AblationMode::ForgeLift: return "forge-lift";
    case AblationMode::Forge: return "forge";
  }
  return "unknown";
}

AblationMode parse_ablation(std::string_view name) {
  if (name == "base") return AblationMode::Base;
  if (name == "base-lift") return AblationMode::BaseLift;
  if (name == "forge-lift") return AblationMode::ForgeLift;
  if (name == "forge") return AblationMode::Forge;
  throw Error(Errc::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

double entropy_confidence(double s) {
  s = std::clamp(s, 0.0, 1.0);
  double h = 0.0;
  if (s > 0.0) h -= s * std::log(s);
  if (s < 1.0) h -= (1.0 - s) * std::log(1.0 - s);
  return 1.0 - h / std::numbers::ln2;
}

namespace {

void check_domain(const Mask& mask, const CellComplex& cx, const PropagationParams& params) {
  if (mask.scores.size() != cx.cell_count()) {
    throw Error(Errc::DomainMismatch, "mask covers " + std::to_string(mask.scores.size()) + " cells, complex has " +
                                          std::to_string(cx.cell_count()));
  }
  if (params.alpha_c < 0.0 || params.alpha_e < 0.0) throw Error(Errc::InvalidArgument, "alpha must be >= 0");
}

NodeMask finish(Eigen::VectorXd scores, const Mask& mask, const CellComplex& cx, const PropagationParams& params) {
  Eigen::VectorXd nodes = scores.head(cx.cell_count(0));
  if (params.clamp) nodes = nodes.cwiseMax(0.0).cwiseMin(1.0);
  return {std::move(nodes), mask.origin, mask.target};
}

/// Shared two-pass update; weight(flat, score) scales each contribution.
template <class Weight>
NodeMask two_pass(const Mask& mask, const CellComplex& cx, const PropagationParams& params, Weight&& weight) {
  check_domain(mask, cx, params);
  Eigen::VectorXd s = mask.scores;
  const int off1 = cx.offset(1);
  const int off2 = cx.offset(2);
  for (int f = 0; f < cx.cell_count(2); ++f) {
    const double sf = s(off2 + f);
    const double delta = (sf - 0.5) * params.alpha_c * weight(off2 + f, sf);
    for (int e : cx.face_edges(f)) s(off1 + e) += delta;
  }
  for (int e = 0; e < cx.cell_count(1); ++e) {
    const double se = s(off1 + e);
    const double delta = (se - 0.5) * params.alpha_e * weight(off1 + e, se);
    const Edge& ends = cx.cells1()[e];
    s(ends.u) += delta;
    s(ends.v) += delta;
  }
  return finish(std::move(s), mask, cx, params);
}

}  // namespace

NodeMask propagate_hierarchical(const Mask& mask, const CellComplex& complex, const PropagationParams& params) {
  return two_pass(mask, complex, params, [](int, double) { return 1.0; });
}

NodeMask propagate_entropy(const Mask& mask, const CellComplex& complex, const PropagationParams& params) {
  return two_pass(mask, complex, params, [](int, double s) { return entropy_confidence(s); });
}

NodeMask propagate_activation(const Mask& mask, const CellComplex& complex, const PropagationParams& params,
                              const Prediction& prediction) {
  if (!params.activation_weighting) return propagate_hierarchical(mask, complex, params);
  if (prediction.activations.rows() != complex.cell_count()) {
    throw Error(Errc::DomainMismatch, "activations do not cover the complex");
  }
  const Eigen::VectorXd norms = prediction.activations.rowwise().norm();
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(complex.cell_count());
  for (int d = 1; d <= 2; ++d) {
    const int n = complex.cell_count(d);
    if (n == 0) continue;
    const auto block = norms.segment(complex.offset(d), n);
    const double lo = block.minCoeff();
    const double hi = block.maxCoeff();
    if (hi > lo) {
      weights.segment(complex.offset(d), n) = (block.array() - lo) / (hi - lo);
    } else {
      weights.segment(complex.offset(d), n).setConstant(hi > 0.0 ? 1.0 : 0.0);
    }
  }
  return two_pass(mask, complex, params, [&](int flat, double) { return weights(flat); });
}

NodeMask propagate_direct(const Mask& mask, const CellComplex& complex, const PropagationParams& params) {
  check_domain(mask, complex, params);
  const int n0 = complex.cell_count(0);
  const int off1 = complex.offset(1);
  const int off2 = complex.offset(2);
  Eigen::VectorXd out(n0);
  for (int v = 0; v < n0; ++v) {
    double num = mask.scores(v);
    double den = 1.0;
    for (int e : complex.node_edges(v)) {
      num += params.alpha_e * mask.scores(off1 + e);
      den += params.alpha_e;
    }
    for (int f : complex.node_faces(v)) {
      num += params.alpha_c * mask.scores(off2 + f);
      den += params.alpha_c;
    }
    out(v) = num / den;
  }
  Eigen::VectorXd full = mask.scores;
  full.head(n0) = out;
  return finish(std::move(full), mask, complex, params);
}

NodeMask propagate(const Mask& mask, const CellComplex& complex, const PropagationParams& params,
                   const Prediction* prediction) {
  switch (params.algorithm) {
    case PropagationAlgorithm::Hierarchical: return propagate_hierarchical(mask, complex, params);
    case PropagationAlgorithm::Direct: return propagate_direct(mask, complex, params);
    case PropagationAlgorithm::Entropy: return propagate_entropy(mask, complex, params);
    case PropagationAlgorithm::Activation:
      if (!prediction) throw Error(Errc::InvalidArgument, "activation propagation needs a prediction");
      return propagate_activation(mask, complex, params, *prediction);
  }
  throw Error(Errc::InvalidArgument, "unknown propagation algorithm");
}

NodeMask forge_on_complexes(const ExplainerSpec& explainer, const CellModel& model, const CellComplex& plain,
                            const CellComplex& lifted, AblationMode mode, const PropagationParams& params) {
  if (mode == AblationMode::Base) {
    const Mask m = explain(explainer, model, plain);
    PropagationParams none = params;
    none.alpha_c = none.alpha_e = 0.0;
    return propagate_hierarchical(m, plain, none);
  }
  const Mask m = explain(explainer, model, lifted);
  if (mode == AblationMode::ForgeLift) {
    NodeMask out{m.scores.head(lifted.cell_count(0)), m.origin, m.target};
    if (params.clamp) out.scores = out.scores.cwiseMax(0.0).cwiseMin(1.0);
    return out;
  }
  if (params.algorithm == PropagationAlgorithm::Activation) {
    const Prediction pred = forward(model, lifted);
    return propagate(m, lifted, params, &pred);
  }
  return propagate(m, lifted, params);
}

NodeMask forge_pipeline(const ExplainerSpec& explainer, const CellModel& model, const Graph& graph,
                        int max_cycle_len, AblationMode mode, const PropagationParams& params) {
  const CellComplex plain = plain_complex(graph);
  const CellComplex lifted = mode == AblationMode::Base ? CellComplex{} : lift(graph, max_cycle_len);
  return forge_on_complexes(explainer, model, plain, lifted, mode, params);
}

}  // namespace cellex
