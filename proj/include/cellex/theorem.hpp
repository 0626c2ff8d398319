#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cellex/graph.hpp"

namespace cellex {

/// tr(A^k): the number of closed walks of length k. Exact; throws
/// Error{Overflow} if a walk count leaves the int64 range.
std::int64_t closed_walk_count(const Graph& graph, int k);

/// tr(A^k) for k = 0..max_k (entry 0 is |V|).
std::vector<std::int64_t> closed_walk_counts(const Graph& graph, int max_k);

/// Number of simple cycles of each length 0..max_len.
std::vector<std::int64_t> cycle_counts_by_length(const Graph& graph, int max_len);

/// Sum over vertices of C(deg v, 2): pairs of edges that share a vertex.
std::int64_t incident_edge_pairs(const Graph& graph);

struct CellCountFormulas {
  std::int64_t cells = 0;
  std::int64_t relations_restricted = 0;
  std::int64_t relations_full_lower_bound = 0;
  /// W_k for k = 0..K (closed k-walks that are not k-cycles).
  std::vector<std::int64_t> non_cycle_walks;

  friend bool operator==(const CellCountFormulas&, const CellCountFormulas&) = default;
};

/// Closed-form complex sizes for cycles up to length K:
///   |C|            = |V| + |E| + sum_k (tr(A^k) - W_k) / 2k
///   |Sigma|_restr  = 3|E| + 1/2 sum_k (tr(A^k) - W_k)
///   |Sigma|_full  >= |Sigma|_restr + sum_v C(deg v, 2)
/// with W_k = tr(A^k) - 2k * #k-cycles. Throws Error{Consistency} if a
/// quotient is not integral or some W_k is negative.
CellCountFormulas closed_form_counts(const Graph& graph, int max_cycle_len);

struct ClosedFormReport {
  CellCountFormulas expected;
  std::int64_t measured_cells = 0;
  std::int64_t measured_restricted = 0;
  std::int64_t measured_full = 0;
  bool passed = false;
  /// Names of the violated identities, empty when passed.
  std::string violated;
};

/// Lifts in both modes and compares the measured sizes with the formulas.
ClosedFormReport validate_closed_form(const Graph& graph, int max_cycle_len);

}  // namespace cellex
