#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cellex/graph.hpp"

namespace cellex {

enum class MotifKind { Bull, Square, Hexagon, Wheel, House, Cube };

std::string_view motif_name(MotifKind kind);
MotifKind parse_motif(std::string_view name);

/// Fixed template graph for a motif (unit features of dimension 1).
///   Bull    5 nodes  5 edges   triangle with two pendant horns
///   Square  4 nodes  4 edges   4-cycle
///   Hexagon 6 nodes  6 edges   6-cycle
///   Wheel   6 nodes 10 edges   hub joined to every node of a 5-cycle
///   House   5 nodes  6 edges   4-cycle plus an apex on two adjacent nodes
///   Cube    8 nodes 12 edges   3-cube Q3
Graph motif_template(MotifKind kind);

struct SyntheticDatasetConfig {
  MotifKind motif_a = MotifKind::House;
  MotifKind motif_b = MotifKind::Hexagon;
  int num_graphs = 200;
  int base_nodes_min = 15;
  int base_nodes_max = 30;
  /// Base edge probability; empty means "auto" (see auto_base_edge_prob).
  std::optional<double> base_edge_prob;
  int attach_edges = 1;
  int feature_dim = 8;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Edge probability used for base graphs when none is configured: 1/n,
/// i.e. ER at expected degree one. Bases are sparse with O(1) short cycles.
double auto_base_edge_prob(int n);

/// Class-balanced motif classification dataset. Graph i carries motif_a
/// (label 0) when i is even and motif_b (label 1) when i is odd. Each graph is
/// an ER base plus the motif, joined by attach_edges random base-motif edges;
/// remaining components are bridged by one edge each, and vertex ids are then
/// shuffled. Ground truth marks exactly the motif's nodes and internal edges.
std::vector<Graph> generate_motif_dataset(const SyntheticDatasetConfig& config);

}  // namespace cellex
