#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cellex/propagate.hpp"

namespace cellex {

enum class SweepKind { Density, Growth };

/// Density: n fixed, mean degree swept. Growth: mean degree fixed, n swept.
struct SigmaSweep {
  SweepKind kind = SweepKind::Density;
  int fixed_n = 500;
  std::vector<double> mean_degrees{2, 3, 4, 5, 6, 7, 8, 9, 10};
  double fixed_mean_degree = 4.0;
  std::vector<int> node_counts{100, 200, 500, 1000, 2000, 5000, 10000};
  int max_cycle_len = 3;
  std::vector<std::uint64_t> seeds{0};
};

struct SigmaRow {
  int n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::int64_t vertices = 0;
  std::int64_t edges = 0;
  std::int64_t sigma_restricted = 0;
  std::int64_t sigma_full = 0;
  std::int64_t incident_pairs = 0;
  double lift_ms = 0.0;
};

/// ER graph per grid point and seed, lifted in both modes. Every row is
/// checked against the closed-form counts; on a mismatch the graph is written
/// to bench_mismatch_graph.json and Error{Consistency} is thrown.
std::vector<SigmaRow> bench_sigma_growth(const SigmaSweep& sweep);

struct PropagationRow {
  int n = 0;
  std::int64_t edges = 0;
  std::int64_t sigma = 0;
  PropagationAlgorithm algorithm = PropagationAlgorithm::Hierarchical;
  double prop_ms = 0.0;
};

/// Times propagation of a random mask on lifted sparse ER graphs. Each time is
/// the median of 5 repetitions of a batch long enough to measure, divided by
/// the batch size.
std::vector<PropagationRow> bench_propagation(std::span<const int> node_counts, double mean_degree,
                                              int max_cycle_len, PropagationAlgorithm algorithm,
                                              std::uint64_t seed = 0);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Timings are optional so the default output is reproducible byte for byte.
std::string sigma_rows_to_csv(const std::vector<SigmaRow>& rows, bool with_timings = false);
std::string propagation_rows_to_csv(const std::vector<PropagationRow>& rows);

}  // namespace cellex
