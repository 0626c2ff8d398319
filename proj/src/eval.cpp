#include "cellex/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cellex/error.hpp"
#include "cellex/random.hpp"

namespace cellex {

std::vector<int> top_k_nodes(const Eigen::VectorXd& scores, int k) {
  std::vector<int> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::clamp(k, 0, static_cast<int>(idx.size()));
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return scores(a) > scores(b); });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double gea(const Eigen::VectorXd& node_scores, std::span<const int> gt_nodes, SelectionRule rule) {
  if (gt_nodes.empty()) throw Error(Errc::InvalidArgument, "ground truth is empty");
  std::vector<char> truth(node_scores.size(), 0);
  for (int v : gt_nodes) {
    if (v < 0 || v >= node_scores.size()) throw Error(Errc::DomainMismatch, "ground-truth node outside the mask");
    truth[v] = 1;
  }
  std::vector<char> picked(node_scores.size(), 0);
  if (rule == SelectionRule::TopK) {
    for (int v : top_k_nodes(node_scores, static_cast<int>(gt_nodes.size()))) picked[v] = 1;
  } else {
    for (Eigen::Index v = 0; v < node_scores.size(); ++v) picked[v] = node_scores(v) >= 0.5;
  }
  int inter = 0, uni = 0;
  for (std::size_t v = 0; v < truth.size(); ++v) {
    inter += truth[v] && picked[v];
    uni += truth[v] || picked[v];
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double kl_divergence(const Eigen::RowVectorXd& p, const Eigen::RowVectorXd& q, double eps) {
  if (p.size() != q.size()) throw Error(Errc::DimensionMismatch, "distributions differ in length");
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) kl += p(i) * std::log((p(i) + eps) / (q(i) + eps));
  }
  return std::max(kl, 0.0);
}

double gef_from_probs(const Eigen::RowVectorXd& p, const Eigen::RowVectorXd& q) {
  return 1.0 - std::exp(-kl_divergence(p, q));
}

Eigen::MatrixXd keep_only(const CellComplex& complex, std::span<const int> kept_nodes) {
  std::vector<char> keep(complex.cell_count(0), 0);
  for (int v : kept_nodes) keep[v] = 1;
  Eigen::MatrixXd x = complex.features();
  for (int v = 0; v < complex.cell_count(0); ++v)
    if (!keep[v]) x.row(v).setZero();
  for (int e = 0; e < complex.cell_count(1); ++e) {
    const Edge& ends = complex.cells1()[e];
    if (!(keep[ends.u] && keep[ends.v])) x.row(complex.offset(1) + e).setZero();
  }
  for (int f = 0; f < complex.cell_count(2); ++f) {
    const auto& cycle = complex.cells2()[f];
    if (!std::all_of(cycle.begin(), cycle.end(), [&](int v) { return keep[v] != 0; })) {
      x.row(complex.offset(2) + f).setZero();
    }
  }
  return x;
}

double gef(const CellModel& model, const CellComplex& complex, const Eigen::VectorXd& node_scores,
           double keep_fraction) {
  const int n = complex.cell_count(0);
  if (node_scores.size() != n) throw Error(Errc::DomainMismatch, "node mask does not cover the complex's nodes");
  if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) throw Error(Errc::InvalidArgument, "keep_fraction in [0, 1]");
  const int k = static_cast<int>(std::ceil(keep_fraction * n - 1e-9));
  const auto kept = top_k_nodes(node_scores, k);
  const Prediction original = forward(model, complex);
  const Prediction masked = forward(model, complex, keep_only(complex, kept));
  return gef_from_probs(original.probs, masked.probs);
}

std::vector<LabeledComplex> PreparedDataset::training_set(bool lifted_inputs) const {
  std::vector<LabeledComplex> out;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (!graphs[i].label()) throw Error(Errc::InvalidArgument, "graph " + std::to_string(i) + " has no label");
    out.push_back({lifted_inputs ? &lifted[i] : &plain[i], *graphs[i].label()});
  }
  return out;
}

PreparedDataset prepare_dataset(std::vector<Graph> graphs, int max_cycle_len) {
  PreparedDataset data;
  data.max_cycle_len = max_cycle_len;
  for (const Graph& g : graphs) {
    data.lifted.push_back(lift(g, max_cycle_len));
    data.plain.push_back(plain_complex(g));
  }
  data.graphs = std::move(graphs);
  return data;
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

void aggregate(EvalReport& report) {
  report.seed_gea.clear();
  report.seed_gef.clear();
  for (std::uint64_t seed : report.seeds) {
    std::vector<double> g, f;
    for (const EvalRow& row : report.rows) {
      if (row.seed == seed && row.error.empty()) {
        g.push_back(row.gea);
        f.push_back(row.gef);
      }
    }
    report.seed_gea.push_back(summarize(g).mean);
    report.seed_gef.push_back(summarize(f).mean);
  }
  report.gea = summarize(report.seed_gea);
  report.gef = summarize(report.seed_gef);
}

const CellModel& model_for_seed(const PreparedDataset& data, const ExperimentConfig& config, std::uint64_t seed,
                                bool lifted_inputs, ModelCache& cache) {
  const auto key = std::make_pair(seed, lifted_inputs);
  auto it = cache.find(key);
  if (it == cache.end()) {
    ModelConfig mc = config.model;
    mc.seed = seed;
    TrainResult trained = train(init_model(mc), data.training_set(lifted_inputs), config.training);
    it = cache.emplace(key, std::move(trained.model)).first;
  }
  return it->second;
}

EvalReport run_experiment(const PreparedDataset& data, const ExperimentConfig& config, ModelCache* cache,
                          const CellModel* fixed_model) {
  if (config.seeds.empty()) throw Error(Errc::InvalidArgument, "need at least one seed");
  ModelCache local;
  ModelCache& models = cache ? *cache : local;

  EvalReport report;
  report.mode = config.mode;
  report.explainer = config.explainer.kind;
  report.propagation = config.propagation.algorithm;
  report.seeds = config.seeds;
  report.max_cycle_len = data.max_cycle_len;

  for (std::uint64_t seed : config.seeds) {
    const CellModel& model =
        fixed_model ? *fixed_model : model_for_seed(data, config, seed, trains_lifted(config.mode), models);
    for (std::size_t i = 0; i < data.graphs.size(); ++i) {
      EvalRow row;
      row.graph_id = static_cast<int>(i);
      row.seed = seed;
      try {
        const Graph& g = data.graphs[i];
        if (!g.gt_nodes() || g.gt_nodes()->empty()) throw Error(Errc::InvalidArgument, "graph has no ground truth");
        ExplainerSpec spec = config.explainer;
        spec.seed = stream_seed(seed, i);
        spec.mask.seed = spec.seed;
        const NodeMask nm =
            forge_on_complexes(spec, model, data.plain[i], data.lifted[i], config.mode, config.propagation);
        row.gea = gea(nm.scores, *g.gt_nodes(), config.selection);
        const double keep = static_cast<double>(g.gt_nodes()->size()) / g.node_count();
        const CellComplex& evaluated = config.mode == AblationMode::Base ? data.plain[i] : data.lifted[i];
        row.gef = gef(model, evaluated, nm.scores, keep);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      report.rows.push_back(std::move(row));
    }
  }
  aggregate(report);
  return report;
}

}  // namespace cellex
