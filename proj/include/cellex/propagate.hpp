#pragma once

#include <Eigen/Dense>
#include <string_view>

#include "cellex/explain.hpp"
#include "cellex/graph.hpp"

namespace cellex {

enum class PropagationAlgorithm { Hierarchical, Direct, Entropy, Activation };

std::string_view propagation_name(PropagationAlgorithm alg);
PropagationAlgorithm parse_propagation(std::string_view name);

struct PropagationParams {
  PropagationAlgorithm algorithm = PropagationAlgorithm::Hierarchical;
  double alpha_c = 2.0;  // 2-cell weight
  double alpha_e = 0.5;  // 1-cell weight
  bool clamp = true;
  /// Activation only: false turns the activation weights off.
  bool activation_weighting = true;
};

/// Explanation over the original graph's nodes.
struct NodeMask {
  Eigen::VectorXd scores;
  MaskOrigin origin = MaskOrigin::Random;
  int target = 0;
};

/// Two passes over the precomputed incidences. First every 2-cell pushes
/// (s_face - 0.5) * alpha_c onto each boundary 1-cell, then every 1-cell pushes
/// (s_edge - 0.5) * alpha_e onto both endpoints, using the updated edge
/// scores. Returns the 0-cell scores. O(|Sigma|).
NodeMask propagate_hierarchical(const Mask& mask, const CellComplex& complex, const PropagationParams& params);

/// Weighted mean of the node's own score (weight 1), its incident 1-cells
/// (alpha_e each) and the 2-cells through it (alpha_c each).
NodeMask propagate_direct(const Mask& mask, const CellComplex& complex, const PropagationParams& params);

/// Hierarchical, each contribution scaled by 1 - H(s)/ln 2 of the
/// contributing cell (binary entropy on s clamped to [0, 1]).
NodeMask propagate_entropy(const Mask& mask, const CellComplex& complex, const PropagationParams& params);

/// Hierarchical, each contribution scaled by the contributing cell's
/// final-layer activation norm, min-max normalised within its dimension.
NodeMask propagate_activation(const Mask& mask, const CellComplex& complex, const PropagationParams& params,
                              const Prediction& prediction);

/// 1 - H_b(s)/ln 2.
double entropy_confidence(double s);

/// Dispatch on params.algorithm; `prediction` is required for Activation.
NodeMask propagate(const Mask& mask, const CellComplex& complex, const PropagationParams& params,
                   const Prediction* prediction = nullptr);

/// Explanation pipeline variants.
///   Base      explain on the plain graph, take node scores
///   BaseLift  explain on the lifted complex, propagate (model trained plain)
///   ForgeLift explain on the lifted complex, take 0-cell scores
///   Forge     explain on the lifted complex, propagate
enum class AblationMode { Base, BaseLift, ForgeLift, Forge };

std::string_view ablation_name(AblationMode mode);
AblationMode parse_ablation(std::string_view name);

/// True for modes whose model is trained on lifted complexes.
inline bool trains_lifted(AblationMode mode) {
  return mode == AblationMode::ForgeLift || mode == AblationMode::Forge;
}

/// PROP(E(F, LIFT(G))) and its ablations, on complexes already built.
NodeMask forge_on_complexes(const ExplainerSpec& explainer, const CellModel& model, const CellComplex& plain,
                            const CellComplex& lifted, AblationMode mode, const PropagationParams& params);

NodeMask forge_pipeline(const ExplainerSpec& explainer, const CellModel& model, const Graph& graph,
                        int max_cycle_len, AblationMode mode, const PropagationParams& params);

}  // namespace cellex
