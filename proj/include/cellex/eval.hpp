#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cellex/propagate.hpp"
#include "cellex/train.hpp"

namespace cellex {

enum class SelectionRule { TopK, Threshold };

/// Indices of the k highest scores in ascending index order; ties go to the
/// lower index.
std::vector<int> top_k_nodes(const Eigen::VectorXd& scores, int k);

/// Jaccard overlap between the selected node set and the ground truth. TopK
/// selects |gt| nodes, Threshold selects scores >= 0.5.
double gea(const Eigen::VectorXd& node_scores, std::span<const int> gt_nodes,
           SelectionRule rule = SelectionRule::TopK);

/// sum_i p_i ln((p_i + eps) / (q_i + eps)).
double kl_divergence(const Eigen::RowVectorXd& p, const Eigen::RowVectorXd& q, double eps = 1e-12);

/// 1 - exp(-KL(p || q)).
double gef_from_probs(const Eigen::RowVectorXd& p, const Eigen::RowVectorXd& q);

/// Input features with every cell outside the kept set zeroed. A 0-cell is
/// kept iff listed; higher cells iff all their boundary vertices are kept.
Eigen::MatrixXd keep_only(const CellComplex& complex, std::span<const int> kept_nodes);

/// Faithfulness of a node explanation: keep the top ceil(keep_fraction * n)
/// nodes and compare the model's output distributions. Lower is better.
double gef(const CellModel& model, const CellComplex& complex, const Eigen::VectorXd& node_scores,
           double keep_fraction = 0.25);

/// Graphs with their lifted and plain complexes, built once.
struct PreparedDataset {
  std::vector<Graph> graphs;
  std::vector<CellComplex> lifted;
  std::vector<CellComplex> plain;
  int max_cycle_len = 8;

  std::vector<LabeledComplex> training_set(bool lifted_inputs) const;
};

PreparedDataset prepare_dataset(std::vector<Graph> graphs, int max_cycle_len);

struct ExperimentConfig {
  ModelConfig model;
  TrainConfig training;
  ExplainerSpec explainer;
  AblationMode mode = AblationMode::Forge;
  PropagationParams propagation;
  std::vector<std::uint64_t> seeds;
  SelectionRule selection = SelectionRule::TopK;
};

struct EvalRow {
  int graph_id = 0;
  std::uint64_t seed = 0;
  double gea = 0.0;
  double gef = 0.0;
  /// Non-empty when this graph failed; the metrics are then meaningless.
  std::string error;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  /// Per-seed means over graphs, parallel to seeds.
  std::vector<double> seed_gea;
  std::vector<double> seed_gef;
  MetricSummary gea;
  MetricSummary gef;
  AblationMode mode = AblationMode::Forge;
  MaskOrigin explainer = MaskOrigin::Gradient;
  PropagationAlgorithm propagation = PropagationAlgorithm::Hierarchical;
  std::vector<std::uint64_t> seeds;
  int max_cycle_len = 0;
};

/// Mean and sample standard deviation.
MetricSummary summarize(std::span<const double> values);

/// Recomputes seed means and aggregates from rows (failed rows skipped).
void aggregate(EvalReport& report);

/// Trained models keyed by (seed, trained on lifted complexes).
using ModelCache = std::map<std::pair<std::uint64_t, bool>, CellModel>;

/// Model for one seed: trains on the whole dataset with model.seed = seed, or
/// returns the cached one.
const CellModel& model_for_seed(const PreparedDataset& data, const ExperimentConfig& config, std::uint64_t seed,
                                bool lifted_inputs, ModelCache& cache);

/// For each seed: obtain the model for the mode, explain every graph, score
/// GEA against its ground truth and GEF at keep fraction |gt| / n. When
/// fixed_model is set it is used for every seed instead of training.
EvalReport run_experiment(const PreparedDataset& data, const ExperimentConfig& config, ModelCache* cache = nullptr,
                          const CellModel* fixed_model = nullptr);

}  // namespace cellex
