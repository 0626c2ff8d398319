#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string_view>

#include "cellex/model.hpp"

namespace cellex {

enum class MaskOrigin { Gradient, Occlusion, LearnedMask, Random };

std::string_view mask_origin_name(MaskOrigin origin);
MaskOrigin parse_mask_origin(std::string_view name);

/// Importance score in [0, 1] for every cell of one complex, flat order.
struct Mask {
  Eigen::VectorXd scores;
  MaskOrigin origin = MaskOrigin::Random;
  int target = 0;

  double score(const CellComplex& cx, CellId id) const { return scores(cx.flat(id)); }
};

struct LearnedMaskParams {
  int epochs = 100;
  double lr = 0.1;
  double l1 = 0.005;
  double entropy_coef = 0.1;
  std::uint64_t seed = 0;
};

struct ExplainerSpec {
  MaskOrigin kind = MaskOrigin::Gradient;
  LearnedMaskParams mask;
  std::uint64_t seed = 0;
};

/// Class the model predicts for this complex.
int predicted_class(const CellModel& model, const CellComplex& complex);

/// Min-max normalisation to [0, 1]; a constant field maps to 0.5 everywhere.
Eigen::VectorXd min_max_normalize(const Eigen::VectorXd& raw);

/// L2 norm of d logit_target / d x_c per cell, min-max normalised.
Mask explain_gradient(const CellModel& model, const CellComplex& complex, int target);

/// Drop in p_target when one cell's features are zeroed (negative drops count
/// as zero), min-max normalised.
Mask explain_occlusion(const CellModel& model, const CellComplex& complex, int target);

/// Soft mask m = sigmoid(theta) over cells, fitted with Adam to
///   CE(F(m * X), target) + l1 * sum m + entropy_coef * sum H(m).
Mask explain_learned_mask(const CellModel& model, const CellComplex& complex, int target,
                          const LearnedMaskParams& params);

/// i.i.d. uniform scores.
Mask explain_random(const CellComplex& complex, std::uint64_t seed);

/// Dispatch on spec.kind. A negative target means the predicted class.
Mask explain(const ExplainerSpec& spec, const CellModel& model, const CellComplex& complex, int target = -1);

}  // namespace cellex
