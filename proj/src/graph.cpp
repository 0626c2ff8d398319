#include "cellex/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cellex/error.hpp"
#include "cellex/random.hpp"

namespace cellex {

Graph::Graph(int node_count, std::vector<Edge> edges, Eigen::MatrixXd features)
    : node_count_(node_count), features_(std::move(features)) {
  if (node_count <= 0) throw Error(Errc::EmptyGraph, "graph must have at least one node");
  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count) {
      throw Error(Errc::EndpointRange, "edge [" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                           "] out of range for " + std::to_string(node_count) + " nodes");
    }
    if (e.u == e.v) throw Error(Errc::InvalidArgument, "self-loop at node " + std::to_string(e.u));
    e = make_edge(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  if (features_.rows() != node_count || features_.cols() < 1) {
    throw Error(Errc::DimensionMismatch, "feature matrix must be node_count x d with d >= 1");
  }
  build_adjacency();
}

Graph Graph::with_unit_features(int node_count, std::vector<Edge> edges) {
  return Graph(node_count, std::move(edges), Eigen::MatrixXd::Ones(std::max(node_count, 0), 1));
}

void Graph::build_adjacency() {
  adj_offsets_.assign(node_count_ + 1, 0);
  for (const Edge& e : edges_) {
    ++adj_offsets_[e.u + 1];
    ++adj_offsets_[e.v + 1];
  }
  std::partial_sum(adj_offsets_.begin(), adj_offsets_.end(), adj_offsets_.begin());
  adj_.resize(2 * edges_.size());
  adj_edge_.resize(2 * edges_.size());
  std::vector<int> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  // Edges are sorted by (u, v), so each row ends up sorted by neighbour as
  // long as lower neighbours (where this vertex is v) precede higher ones.
  for (int idx = 0; idx < edge_count(); ++idx) {
    const Edge& e = edges_[idx];
    adj_[fill[e.v]] = e.u;
    adj_edge_[fill[e.v]++] = idx;
  }
  for (int idx = 0; idx < edge_count(); ++idx) {
    const Edge& e = edges_[idx];
    adj_[fill[e.u]] = e.v;
    adj_edge_[fill[e.u]++] = idx;
  }
}

int Graph::find_edge(int a, int b) const {
  const Edge key = make_edge(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

Graph Graph::with_label(std::optional<int> label) const {
  Graph g = *this;
  g.label_ = label;
  return g;
}

Graph Graph::with_ground_truth(std::vector<int> nodes, std::vector<Edge> edges) const {
  for (int v : nodes) {
    if (v < 0 || v >= node_count_) throw Error(Errc::EndpointRange, "ground-truth node out of range");
  }
  for (Edge& e : edges) {
    if (find_edge(e.u, e.v) < 0) throw Error(Errc::EndpointRange, "ground-truth edge is not a graph edge");
    e = make_edge(e.u, e.v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Graph g = *this;
  g.gt_nodes_ = std::move(nodes);
  g.gt_edges_ = std::move(edges);
  return g;
}

Graph Graph::with_features(Eigen::MatrixXd features) const {
  if (features.rows() != node_count_ || features.cols() < 1) {
    throw Error(Errc::DimensionMismatch, "feature matrix must be node_count x d with d >= 1");
  }
  Graph g = *this;
  g.features_ = std::move(features);
  return g;
}

std::vector<bool> Graph::node_gt_mask() const {
  std::vector<bool> mask(node_count_, false);
  if (gt_nodes_) {
    for (int v : *gt_nodes_) mask[v] = true;
  }
  return mask;
}

Eigen::MatrixXi Graph::adjacency() const {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(node_count_, node_count_);
  for (const Edge& e : edges_) {
    a(e.u, e.v) = 1;
    a(e.v, e.u) = 1;
  }
  return a;
}

bool Graph::is_connected() const {
  std::vector<char> seen(node_count_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == node_count_;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.node_count_ == b.node_count_ && a.edges_ == b.edges_ && a.features_ == b.features_ &&
         a.label_ == b.label_ && a.gt_nodes_ == b.gt_nodes_ && a.gt_edges_ == b.gt_edges_;
}

Graph erdos_renyi(int n, double p, std::uint64_t seed, int feature_dim) {
  if (n <= 0) throw Error(Errc::EmptyGraph, "erdos_renyi needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidArgument, "edge probability must lie in [0, 1]");
  if (feature_dim < 1) throw Error(Errc::InvalidArgument, "feature_dim must be >= 1");

  std::vector<Edge> edges;
  if (p >= 1.0) {
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
  } else if (p > 0.0) {
    // Geometric skipping over the lower triangle (Batagelj and Brandes), so
    // sparse graphs cost O(n + m) instead of O(n^2).
    Rng rng(seed);
    const double log_q = std::log1p(-p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double r = rng.uniform();
      w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
      while (w >= v && v < n) {
        w -= v;
        ++v;
      }
      if (v < n) edges.push_back(make_edge(static_cast<int>(w), static_cast<int>(v)));
    }
  }
  return Graph(n, std::move(edges), Eigen::MatrixXd::Ones(n, feature_dim));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  if (a.feature_dim() != b.feature_dim()) throw Error(Errc::DimensionMismatch, "feature dims differ");
  const int off = a.node_count();
  std::vector<Edge> edges = a.edges();
  for (const Edge& e : b.edges()) edges.push_back({e.u + off, e.v + off});
  Eigen::MatrixXd x(a.node_count() + b.node_count(), a.feature_dim());
  x << a.features(), b.features();
  return Graph(a.node_count() + b.node_count(), std::move(edges), std::move(x));
}

Graph permute_nodes(const Graph& g, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != g.node_count()) {
    throw Error(Errc::InvalidArgument, "permutation size must equal node count");
  }
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) edges.push_back(make_edge(perm[e.u], perm[e.v]));
  Eigen::MatrixXd x(g.node_count(), g.feature_dim());
  for (int v = 0; v < g.node_count(); ++v) x.row(perm[v]) = g.features().row(v);
  Graph out(g.node_count(), std::move(edges), std::move(x));
  out = out.with_label(g.label());
  if (g.gt_nodes()) {
    std::vector<int> nodes;
    for (int v : *g.gt_nodes()) nodes.push_back(perm[v]);
    std::vector<Edge> gte;
    if (g.gt_edges()) {
      for (const Edge& e : *g.gt_edges()) gte.push_back(make_edge(perm[e.u], perm[e.v]));
    }
    out = out.with_ground_truth(std::move(nodes), std::move(gte));
  }
  return out;
}

}  // namespace cellex
