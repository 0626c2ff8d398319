#include "cellex/complex.hpp"

#include <string>

#include "cellex/error.hpp"

namespace cellex {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

template <class Fn>
void build_csr(int rows, std::vector<int>& offsets, std::vector<int>& items, Fn&& for_each_pair) {
  offsets.assign(rows + 1, 0);
  for_each_pair([&](int row, int) { ++offsets[row + 1]; });
  for (int r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  items.assign(offsets[rows], 0);
  std::vector<int> fill(offsets.begin(), offsets.end() - 1);
  for_each_pair([&](int row, int item) { items[fill[row]++] = item; });
}

void cycle_dfs(const Graph& g, int start, int max_len, std::vector<int>& path, std::vector<char>& on_path,
               std::vector<std::vector<int>>& out) {
  const int u = path.back();
  for (int w : g.neighbors(u)) {
    if (w == start) {
      if (path.size() >= 3 && path[1] < path.back()) out.push_back(path);
    } else if (w > start && !on_path[w] && static_cast<int>(path.size()) < max_len) {
      path.push_back(w);
      on_path[w] = 1;
      cycle_dfs(g, start, max_len, path, on_path, out);
      on_path[w] = 0;
      path.pop_back();
    }
  }
}

}  // namespace

std::string_view lift_mode_name(LiftMode mode) {
  switch (mode) {
    case LiftMode::Restricted: return "restricted";
    case LiftMode::Full: return "full";
    case LiftMode::Plain: return "plain";
  }
  return "unknown";
}

LiftMode parse_lift_mode(std::string_view name) {
  if (name == "restricted") return LiftMode::Restricted;
  if (name == "full") return LiftMode::Full;
  if (name == "plain") return LiftMode::Plain;
  throw Error(Errc::InvalidArgument, "unknown lift mode '" + std::string(name) + "'");
}

std::string_view relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::NodeNode: return "node_node";
    case RelationKind::NodeEdge: return "node_edge";
    case RelationKind::EdgeFace: return "edge_face";
    case RelationKind::EdgeEdge: return "edge_edge";
  }
  return "unknown";
}

CellId CellComplex::cell(int flat) const {
  for (int d = 0; d < 3; ++d) {
    if (flat < offsets_[d + 1]) return {d, flat - offsets_[d]};
  }
  throw Error(Errc::InvalidArgument, "flat cell index out of range");
}

std::vector<std::vector<int>> enumerate_simple_cycles(const Graph& graph, int max_len) {
  if (max_len < 3) throw Error(Errc::InvalidArgument, "cycle length bound must be >= 3");
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<char> on_path(graph.node_count(), 0);
  for (int s = 0; s < graph.node_count(); ++s) {
    path.assign(1, s);
    on_path[s] = 1;
    cycle_dfs(graph, s, max_len, path, on_path, out);
    on_path[s] = 0;
  }
  return out;
}

CellComplex lift(const Graph& graph, int max_cycle_len, LiftMode mode) {
  if (max_cycle_len < 3) throw Error(Errc::InvalidArgument, "K must be >= 3");
  std::vector<std::vector<int>> cycles;
  if (mode != LiftMode::Plain) cycles = enumerate_simple_cycles(graph, max_cycle_len);
  return lift_with_cycles(graph, max_cycle_len, mode, std::move(cycles));
}

CellComplex lift_with_cycles(const Graph& graph, int max_cycle_len, LiftMode mode,
                             std::vector<std::vector<int>> cycles) {
  if (max_cycle_len < 3) throw Error(Errc::InvalidArgument, "K must be >= 3");
  CellComplex cx;
  cx.mode_ = mode;
  cx.max_cycle_len_ = max_cycle_len;

  cx.cells0_.resize(graph.node_count());
  for (int v = 0; v < graph.node_count(); ++v) cx.cells0_[v] = v;

  if (mode == LiftMode::Plain) {
    for (const Edge& e : graph.edges()) {
      cx.relations_.push_back({{0, e.u}, {0, e.v}, RelationKind::NodeNode});
    }
  } else {
    cx.cells1_ = graph.edges();
    for (int idx = 0; idx < graph.edge_count(); ++idx) {
      const Edge& e = graph.edges()[idx];
      cx.relations_.push_back({{0, e.u}, {0, e.v}, RelationKind::NodeNode});
      cx.relations_.push_back({{0, e.u}, {1, idx}, RelationKind::NodeEdge});
      cx.relations_.push_back({{0, e.v}, {1, idx}, RelationKind::NodeEdge});
    }
    for (auto& cycle : cycles) {
      const int len = static_cast<int>(cycle.size());
      if (len < 3 || len > max_cycle_len) throw Error(Errc::InvalidArgument, "cycle length outside [3, K]");
      const int face = static_cast<int>(cx.cells2_.size());
      for (int i = 0; i < len; ++i) {
        const int e = graph.find_edge(cycle[i], cycle[(i + 1) % len]);
        if (e < 0) throw Error(Errc::InvalidArgument, "cycle uses a non-edge");
        cx.relations_.push_back({{1, e}, {2, face}, RelationKind::EdgeFace});
      }
      cx.cells2_.push_back(std::move(cycle));
    }
    if (mode == LiftMode::Full) {
      for (int v = 0; v < graph.node_count(); ++v) {
        const auto inc = graph.incident_edges(v);
        for (std::size_t a = 0; a < inc.size(); ++a)
          for (std::size_t b = a + 1; b < inc.size(); ++b) {
            const int lo = std::min(inc[a], inc[b]);
            const int hi = std::max(inc[a], inc[b]);
            cx.relations_.push_back({{1, lo}, {1, hi}, RelationKind::EdgeEdge});
          }
      }
    }
  }
  cx.finalize(graph);
  return cx;
}

void CellComplex::finalize(const Graph& graph) {
  offsets_[0] = 0;
  offsets_[1] = static_cast<int>(cells0_.size());
  offsets_[2] = offsets_[1] + static_cast<int>(cells1_.size());
  offsets_[3] = offsets_[2] + static_cast<int>(cells2_.size());
  const int total = offsets_[3];

  build_csr(total, incidence_.offsets, incidence_.items, [&](auto&& emit) {
    for (int r = 0; r < static_cast<int>(relations_.size()); ++r) {
      emit(flat(relations_[r].lo), r);
      emit(flat(relations_[r].hi), r);
    }
  });
  build_csr(static_cast<int>(cells2_.size()), face_edges_.offsets, face_edges_.items, [&](auto&& emit) {
    for (const BoundaryRelation& rel : relations_)
      if (rel.kind == RelationKind::EdgeFace) emit(rel.hi.index, rel.lo.index);
  });
  build_csr(static_cast<int>(cells0_.size()), node_edges_.offsets, node_edges_.items, [&](auto&& emit) {
    for (const BoundaryRelation& rel : relations_)
      if (rel.kind == RelationKind::NodeEdge) emit(rel.lo.index, rel.hi.index);
  });
  build_csr(static_cast<int>(cells0_.size()), node_faces_.offsets, node_faces_.items, [&](auto&& emit) {
    for (int f = 0; f < static_cast<int>(cells2_.size()); ++f)
      for (int v : cells2_[f]) emit(v, f);
  });

  const int d = graph.feature_dim();
  features_.resize(total, d);
  features_.topRows(offsets_[1]) = graph.features();
  for (int e = 0; e < static_cast<int>(cells1_.size()); ++e) {
    features_.row(offsets_[1] + e) =
        0.5 * (graph.features().row(cells1_[e].u) + graph.features().row(cells1_[e].v));
  }
  for (int f = 0; f < static_cast<int>(cells2_.size()); ++f) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
    const auto edges = face_edges(f);
    for (int e : edges) acc += features_.row(offsets_[1] + e);
    features_.row(offsets_[2] + f) = acc / static_cast<double>(edges.size());
  }

  Triplets h, up, down;
  for (const BoundaryRelation& rel : relations_) {
    const int a = flat(rel.lo);
    const int b = flat(rel.hi);
    if (rel.lo.dim == rel.hi.dim) {
      h.emplace_back(a, b, 1.0);
      h.emplace_back(b, a, 1.0);
    } else {
      up.emplace_back(b, a, 1.0);
      down.emplace_back(a, b, 1.0);
    }
  }
  horizontal_.resize(total, total);
  horizontal_.setFromTriplets(h.begin(), h.end());
  upward_.resize(total, total);
  upward_.setFromTriplets(up.begin(), up.end());
  downward_.resize(total, total);
  downward_.setFromTriplets(down.begin(), down.end());
}

}  // namespace cellex
