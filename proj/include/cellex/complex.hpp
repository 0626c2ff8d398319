#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <string_view>
#include <vector>

#include "cellex/graph.hpp"

namespace cellex {

/// Restricted drops every horizontal relation between cells of dimension
/// >= 1; Full adds the edge-edge relations of edges sharing a vertex. Plain is
/// the unlifted graph seen as a complex: 0-cells and node-node relations only.
enum class LiftMode { Restricted, Full, Plain };

std::string_view lift_mode_name(LiftMode mode);
LiftMode parse_lift_mode(std::string_view name);

struct CellId {
  int dim = 0;
  int index = 0;

  friend bool operator==(const CellId&, const CellId&) = default;
  friend auto operator<=>(const CellId&, const CellId&) = default;
};

enum class RelationKind { NodeNode, NodeEdge, EdgeFace, EdgeEdge };

std::string_view relation_kind_name(RelationKind kind);

/// Undirected relation, stored with lo < hi.
struct BoundaryRelation {
  CellId lo;
  CellId hi;
  RelationKind kind = RelationKind::NodeNode;

  friend bool operator==(const BoundaryRelation&, const BoundaryRelation&) = default;
};

/// Two-dimensional cell complex lifted from a graph.
///
/// 0-cell i is vertex i, 1-cell j is the graph's edge j, and 2-cells are the
/// enumerated cycles in enumeration order. Cells are also addressed by a flat
/// index (all 0-cells, then 1-cells, then 2-cells) which is the row order of
/// features() and of the message-passing operators.
class CellComplex {
 public:
  CellComplex() = default;

  const std::vector<int>& cells0() const { return cells0_; }
  const std::vector<Edge>& cells1() const { return cells1_; }
  const std::vector<std::vector<int>>& cells2() const { return cells2_; }
  const std::vector<BoundaryRelation>& relations() const { return relations_; }
  LiftMode mode() const { return mode_; }
  int max_cycle_len() const { return max_cycle_len_; }

  int cell_count(int dim) const { return offsets_[dim + 1] - offsets_[dim]; }
  int cell_count() const { return offsets_[3]; }
  int offset(int dim) const { return offsets_[dim]; }
  int flat(CellId id) const { return offsets_[id.dim] + id.index; }
  CellId cell(int flat) const;

  /// One row per cell in flat order.
  const Eigen::MatrixXd& features() const { return features_; }
  int feature_dim() const { return static_cast<int>(features_.cols()); }

  /// Relation indices touching a cell (flat index).
  std::span<const int> incident_relations(int flat) const { return slice(incidence_, flat); }

  /// 1-cells bounding 2-cell f, in relation order.
  std::span<const int> face_edges(int face) const { return slice(face_edges_, face); }
  /// 1-cells incident to vertex v.
  std::span<const int> node_edges(int v) const { return slice(node_edges_, v); }
  /// 2-cells whose cycle passes through vertex v.
  std::span<const int> node_faces(int v) const { return slice(node_faces_, v); }

  /// Sum-form message operators, rows are receivers, columns senders, both in
  /// flat order. horizontal(): same-dimension relations; upward(): boundary to
  /// coboundary; downward(): coboundary to boundary.
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& horizontal() const { return horizontal_; }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& upward() const { return upward_; }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& downward() const { return downward_; }

  friend CellComplex lift(const Graph& graph, int max_cycle_len, LiftMode mode);
  friend CellComplex lift_with_cycles(const Graph& graph, int max_cycle_len, LiftMode mode,
                                      std::vector<std::vector<int>> cycles);

 private:
  struct Csr {
    std::vector<int> offsets{0};
    std::vector<int> items;
  };
  static std::span<const int> slice(const Csr& csr, int row) {
    return {csr.items.data() + csr.offsets[row],
            static_cast<std::size_t>(csr.offsets[row + 1] - csr.offsets[row])};
  }
  void finalize(const Graph& graph);

  std::vector<int> cells0_;
  std::vector<Edge> cells1_;
  std::vector<std::vector<int>> cells2_;
  std::vector<BoundaryRelation> relations_;
  LiftMode mode_ = LiftMode::Restricted;
  int max_cycle_len_ = 0;
  int offsets_[4] = {0, 0, 0, 0};
  Eigen::MatrixXd features_;
  Csr incidence_;
  Csr face_edges_;
  Csr node_edges_;
  Csr node_faces_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> horizontal_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> upward_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> downward_;
};

/// Every simple cycle of length 3..max_len, once each, as a vertex list that
/// starts at its smallest vertex and continues towards the smaller of that
/// vertex's two cycle neighbours. Ordered by start vertex, then DFS order over
/// sorted adjacency.
std::vector<std::vector<int>> enumerate_simple_cycles(const Graph& graph, int max_len);

/// Lifts a graph. Every vertex becomes a 0-cell (isolated ones included);
/// per edge (u, v) the relations {u,v}, {u,e}, {v,e} are added; each cycle of
/// length <= max_cycle_len becomes a 2-cell with one edge-face relation per
/// cycle edge. Full mode appends one edge-edge relation per pair of edges
/// sharing a vertex. Plain mode ignores max_cycle_len and keeps only 0-cells
/// and node-node relations.
///
/// Cell features: 0-cells copy node features, 1-cells average their
/// endpoints, 2-cells average their boundary 1-cells.
CellComplex lift(const Graph& graph, int max_cycle_len, LiftMode mode = LiftMode::Restricted);

/// As lift(), reusing cycles already enumerated for the same graph.
CellComplex lift_with_cycles(const Graph& graph, int max_cycle_len, LiftMode mode,
                             std::vector<std::vector<int>> cycles);

inline CellComplex plain_complex(const Graph& graph) { return lift(graph, 3, LiftMode::Plain); }

}  // namespace cellex
