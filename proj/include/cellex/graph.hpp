#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cellex {

/// Undirected edge stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Simple undirected graph with a dense node-feature matrix (one row per node).
///
/// Edges are canonicalized (u < v), sorted and deduplicated at construction;
/// the edge index used everywhere else is the position in that sorted list.
/// Values are immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Throws Error{EmptyGraph} for node_count == 0, Error{EndpointRange} for an
  /// out-of-range endpoint, Error{InvalidArgument} for a self-loop and
  /// Error{DimensionMismatch} when features are not node_count x d with d >= 1.
  Graph(int node_count, std::vector<Edge> edges, Eigen::MatrixXd features);

  /// Graph whose features are the all-ones vector of dimension 1.
  static Graph with_unit_features(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int feature_dim() const { return static_cast<int>(features_.cols()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Eigen::MatrixXd& features() const { return features_; }

  int degree(int v) const { return adj_offsets_[v + 1] - adj_offsets_[v]; }

  /// Sorted neighbour list of v.
  std::span<const int> neighbors(int v) const {
    return {adj_.data() + adj_offsets_[v], static_cast<std::size_t>(degree(v))};
  }

  /// Edge indices incident to v, parallel to neighbors(v).
  std::span<const int> incident_edges(int v) const {
    return {adj_edge_.data() + adj_offsets_[v], static_cast<std::size_t>(degree(v))};
  }

  /// Index of edge {a, b}, or -1.
  int find_edge(int a, int b) const;

  const std::optional<int>& label() const { return label_; }
  const std::optional<std::vector<int>>& gt_nodes() const { return gt_nodes_; }
  const std::optional<std::vector<Edge>>& gt_edges() const { return gt_edges_; }

  /// Copies carrying annotations. Ground-truth ids are range-checked.
  Graph with_label(std::optional<int> label) const;
  Graph with_ground_truth(std::vector<int> nodes, std::vector<Edge> edges) const;
  Graph with_features(Eigen::MatrixXd features) const;

  /// Per-node boolean view of gt_nodes (all false when absent).
  std::vector<bool> node_gt_mask() const;

  /// Dense 0/1 adjacency.
  Eigen::MatrixXi adjacency() const;

  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void build_adjacency();

  int node_count_ = 0;
  std::vector<Edge> edges_;
  Eigen::MatrixXd features_;
  std::optional<int> label_;
  std::optional<std::vector<int>> gt_nodes_;
  std::optional<std::vector<Edge>> gt_edges_;

  std::vector<int> adj_offsets_;
  std::vector<int> adj_;
  std::vector<int> adj_edge_;
};

/// G(n, p): every one of the n(n-1)/2 pairs is an edge independently with
/// probability p. Deterministic for a fixed seed.
Graph erdos_renyi(int n, double p, std::uint64_t seed, int feature_dim = 1);

/// Disjoint union; the second graph's vertices are shifted by a.node_count().
Graph disjoint_union(const Graph& a, const Graph& b);

/// Relabels vertex v to perm[v]. Annotations follow the relabeling.
Graph permute_nodes(const Graph& g, std::span<const int> perm);

}  // namespace cellex
