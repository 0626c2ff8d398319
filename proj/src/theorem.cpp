#include "cellex/theorem.hpp"

#include "cellex/complex.hpp"
#include "cellex/error.hpp"

namespace cellex {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(Errc::Overflow, "closed-walk count overflows int64");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(Errc::Overflow, "closed-walk count overflows int64");
  return out;
}

}  // namespace

std::vector<std::int64_t> closed_walk_counts(const Graph& graph, int max_k) {
  if (max_k < 0) throw Error(Errc::InvalidArgument, "walk length must be non-negative");
  const int n = graph.node_count();
  std::vector<std::int64_t> trace(max_k + 1, 0);
  trace[0] = n;

  // Row s of A^k, grown one step at a time from e_s. Only vertices within k
  // hops are touched, so sparse graphs stay cheap.
  std::vector<std::int64_t> cur(n, 0), next(n, 0);
  std::vector<int> cur_support, next_support;
  std::vector<char> in_next(n, 0);
  for (int s = 0; s < n; ++s) {
    cur[s] = 1;
    cur_support.assign(1, s);
    for (int step = 1; step <= max_k; ++step) {
      next_support.clear();
      for (int u : cur_support) {
        const std::int64_t c = cur[u];
        for (int w : graph.neighbors(u)) {
          if (!in_next[w]) {
            in_next[w] = 1;
            next_support.push_back(w);
          }
          next[w] = checked_add(next[w], c);
        }
        cur[u] = 0;
      }
      trace[step] = checked_add(trace[step], next[s]);
      for (int w : next_support) in_next[w] = 0;
      std::swap(cur, next);
      std::swap(cur_support, next_support);
    }
    for (int u : cur_support) cur[u] = 0;
  }
  return trace;
}

std::int64_t closed_walk_count(const Graph& graph, int k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "walk length must be >= 1");
  return closed_walk_counts(graph, k)[k];
}

std::vector<std::int64_t> cycle_counts_by_length(const Graph& graph, int max_len) {
  std::vector<std::int64_t> counts(max_len + 1, 0);
  for (const auto& c : enumerate_simple_cycles(graph, max_len)) ++counts[c.size()];
  return counts;
}

std::int64_t incident_edge_pairs(const Graph& graph) {
  std::int64_t total = 0;
  for (int v = 0; v < graph.node_count(); ++v) {
    const std::int64_t d = graph.degree(v);
    total += d * (d - 1) / 2;
  }
  return total;
}

CellCountFormulas closed_form_counts(const Graph& graph, int max_cycle_len) {
  if (max_cycle_len < 3) throw Error(Errc::InvalidArgument, "K must be >= 3");
  const auto trace = closed_walk_counts(graph, max_cycle_len);
  const auto cycles = cycle_counts_by_length(graph, max_cycle_len);

  CellCountFormulas out;
  out.non_cycle_walks.assign(max_cycle_len + 1, 0);
  for (int k = 0; k < 3; ++k) out.non_cycle_walks[k] = trace[k];

  std::int64_t face_cells = 0;
  std::int64_t face_relations = 0;
  for (int k = 3; k <= max_cycle_len; ++k) {
    const std::int64_t w = trace[k] - checked_mul(2 * k, cycles[k]);
    if (w < 0) {
      throw Error(Errc::Consistency, "W_" + std::to_string(k) + " negative: cycle enumeration overcounts");
    }
    out.non_cycle_walks[k] = w;
    const std::int64_t cycle_walks = trace[k] - w;
    if (cycle_walks % (2 * k) != 0 || cycle_walks % 2 != 0) {
      throw Error(Errc::Consistency, "tr(A^" + std::to_string(k) + ") - W_k not divisible by 2k");
    }
    face_cells += cycle_walks / (2 * k);
    face_relations += cycle_walks / 2;
  }

  const std::int64_t n = graph.node_count();
  const std::int64_t m = graph.edge_count();
  out.cells = n + m + face_cells;
  out.relations_restricted = 3 * m + face_relations;
  out.relations_full_lower_bound = out.relations_restricted + incident_edge_pairs(graph);
  return out;
}

ClosedFormReport validate_closed_form(const Graph& graph, int max_cycle_len) {
  ClosedFormReport report;
  report.expected = closed_form_counts(graph, max_cycle_len);

  auto cycles = enumerate_simple_cycles(graph, max_cycle_len);
  const CellComplex restricted = lift_with_cycles(graph, max_cycle_len, LiftMode::Restricted, cycles);
  const CellComplex full = lift_with_cycles(graph, max_cycle_len, LiftMode::Full, std::move(cycles));

  report.measured_cells = restricted.cell_count();
  report.measured_restricted = static_cast<std::int64_t>(restricted.relations().size());
  report.measured_full = static_cast<std::int64_t>(full.relations().size());

  std::string violated;
  auto note = [&](const char* what) {
    if (!violated.empty()) violated += ",";
    violated += what;
  };
  if (report.measured_cells != report.expected.cells || full.cell_count() != report.expected.cells) note("eq1_cells");
  if (report.measured_full != report.expected.relations_full_lower_bound) note("eq2_full_relations");
  if (report.measured_restricted != report.expected.relations_restricted) note("eq3_restricted_relations");
  report.violated = violated;
  report.passed = violated.empty();
  return report;
}

}  // namespace cellex
