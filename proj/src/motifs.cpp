#include "cellex/motifs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cellex/error.hpp"
#include "cellex/random.hpp"

namespace cellex {

namespace {

std::vector<Edge> cycle_edges(int n, int offset = 0) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back(make_edge(offset + i, offset + (i + 1) % n));
  return edges;
}

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

std::string_view motif_name(MotifKind kind) {
  switch (kind) {
    case MotifKind::Bull: return "bull";
    case MotifKind::Square: return "square";
    case MotifKind::Hexagon: return "hexagon";
    case MotifKind::Wheel: return "wheel";
    case MotifKind::House: return "house";
    case MotifKind::Cube: return "cube";
  }
  return "unknown";
}

MotifKind parse_motif(std::string_view name) {
  for (MotifKind k : {MotifKind::Bull, MotifKind::Square, MotifKind::Hexagon, MotifKind::Wheel,
                      MotifKind::House, MotifKind::Cube}) {
    if (motif_name(k) == name) return k;
  }
  throw Error(Errc::InvalidArgument, "unknown motif '" + std::string(name) + "'");
}

Graph motif_template(MotifKind kind) {
  switch (kind) {
    case MotifKind::Bull:
      return Graph::with_unit_features(5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 4}});
    case MotifKind::Square:
      return Graph::with_unit_features(4, cycle_edges(4));
    case MotifKind::Hexagon:
      return Graph::with_unit_features(6, cycle_edges(6));
    case MotifKind::Wheel: {
      auto edges = cycle_edges(5, 1);
      for (int i = 1; i <= 5; ++i) edges.push_back({0, i});
      return Graph::with_unit_features(6, std::move(edges));
    }
    case MotifKind::House: {
      auto edges = cycle_edges(4);
      edges.push_back({0, 4});
      edges.push_back({1, 4});
      return Graph::with_unit_features(5, std::move(edges));
    }
    case MotifKind::Cube: {
      std::vector<Edge> edges;
      for (int v = 0; v < 8; ++v)
        for (int bit = 1; bit < 8; bit <<= 1)
          if ((v ^ bit) > v) edges.push_back({v, v ^ bit});
      return Graph::with_unit_features(8, std::move(edges));
    }
  }
  throw Error(Errc::InvalidArgument, "unknown motif");
}

void SyntheticDatasetConfig::validate() const {
  if (motif_a == motif_b) throw Error(Errc::InvalidArgument, "motif_a and motif_b must differ");
  if (num_graphs < 1) throw Error(Errc::InvalidArgument, "num_graphs must be positive");
  if (base_nodes_min < 1 || base_nodes_max < base_nodes_min) {
    throw Error(Errc::InvalidArgument, "need 1 <= base_nodes_min <= base_nodes_max");
  }
  if (base_edge_prob && !(*base_edge_prob >= 0.0 && *base_edge_prob <= 1.0)) {
    throw Error(Errc::InvalidArgument, "base_edge_prob must lie in [0, 1]");
  }
  if (attach_edges < 1) throw Error(Errc::InvalidArgument, "attach_edges must be positive");
  if (feature_dim < 1) throw Error(Errc::InvalidArgument, "feature_dim must be positive");
}

double auto_base_edge_prob(int n) { return n <= 1 ? 0.0 : std::min(1.0, 1.0 / n); }

std::vector<Graph> generate_motif_dataset(const SyntheticDatasetConfig& config) {
  config.validate();
  std::vector<Graph> out;
  out.reserve(config.num_graphs);
  const double feature_value = 1.0 / std::sqrt(static_cast<double>(config.feature_dim));

  for (int i = 0; i < config.num_graphs; ++i) {
    Rng rng(stream_seed(config.seed, static_cast<std::uint64_t>(i)));
    const int label = i % 2;
    const Graph motif = motif_template(label == 0 ? config.motif_a : config.motif_b);

    const int base_n = static_cast<int>(rng.between(config.base_nodes_min, config.base_nodes_max));
    const double p = config.base_edge_prob.value_or(auto_base_edge_prob(base_n));
    const Graph base = erdos_renyi(base_n, p, rng.next());

    const int n = base_n + motif.node_count();
    std::vector<Edge> edges = base.edges();
    std::vector<Edge> motif_edges;
    for (const Edge& e : motif.edges()) motif_edges.push_back({e.u + base_n, e.v + base_n});
    edges.insert(edges.end(), motif_edges.begin(), motif_edges.end());

    const int attach = std::min(config.attach_edges, base_n * motif.node_count());
    std::vector<Edge> attached;
    while (static_cast<int>(attached.size()) < attach) {
      const Edge e{static_cast<int>(rng.below(base_n)), base_n + static_cast<int>(rng.below(motif.node_count()))};
      if (std::find(attached.begin(), attached.end(), e) == attached.end()) attached.push_back(e);
    }
    edges.insert(edges.end(), attached.begin(), attached.end());

    // Bridge every remaining component to the one containing node 0.
    DisjointSet dsu(n);
    for (const Edge& e : edges) dsu.unite(e.u, e.v);
    for (int v = 0; v < n; ++v) {
      if (dsu.find(v) != dsu.find(0)) {
        std::vector<int> root_side;
        for (int w = 0; w < n; ++w)
          if (dsu.find(w) == dsu.find(0)) root_side.push_back(w);
        const int anchor = root_side[rng.below(root_side.size())];
        edges.push_back(make_edge(v, anchor));
        dsu.unite(v, anchor);
      }
    }

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);

    std::vector<int> gt_nodes;
    for (int v = 0; v < motif.node_count(); ++v) gt_nodes.push_back(base_n + v);

    Graph g = Graph(n, std::move(edges), Eigen::MatrixXd::Constant(n, config.feature_dim, feature_value))
                  .with_label(label)
                  .with_ground_truth(std::move(gt_nodes), std::move(motif_edges));
    out.push_back(permute_nodes(g, perm));
  }
  return out;
}

}  // namespace cellex
