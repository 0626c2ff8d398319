#include "cellex/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cellex/error.hpp"
#include "cellex/io.hpp"
#include "cellex/random.hpp"
#include "cellex/theorem.hpp"

namespace cellex {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

SigmaRow measure(int n, double p, std::uint64_t seed, int k) {
  const Graph g = erdos_renyi(n, p, seed);
  SigmaRow row{n, p, seed, g.node_count(), g.edge_count()};

  std::vector<double> times;
  CellComplex restricted, full;
  for (int rep = 0; rep < 5; ++rep) {
    const auto start = Clock::now();
    restricted = lift(g, k, LiftMode::Restricted);
    times.push_back(elapsed_ms(start));
  }
  row.lift_ms = median(times);
  full = lift(g, k, LiftMode::Full);
  row.sigma_restricted = static_cast<std::int64_t>(restricted.relations().size());
  row.sigma_full = static_cast<std::int64_t>(full.relations().size());
  row.incident_pairs = incident_edge_pairs(g);

  const CellCountFormulas expected = closed_form_counts(g, k);
  if (expected.cells != restricted.cell_count() || expected.relations_restricted != row.sigma_restricted ||
      expected.relations_full_lower_bound != row.sigma_full ||
      row.sigma_full - row.sigma_restricted != row.incident_pairs) {
    write_graph_json(g, "bench_mismatch_graph.json");
    throw Error(Errc::Consistency, "complex size differs from the closed form for n=" + std::to_string(n) +
                                       " p=" + format_double(p) + "; graph written to bench_mismatch_graph.json");
  }
  return row;
}

}  // namespace

std::vector<SigmaRow> bench_sigma_growth(const SigmaSweep& sweep) {
  if (sweep.seeds.empty()) throw Error(Errc::InvalidArgument, "sweep needs at least one seed");
  std::vector<SigmaRow> rows;
  if (sweep.kind == SweepKind::Density) {
    if (sweep.mean_degrees.empty()) throw Error(Errc::InvalidArgument, "empty degree grid");
    for (double d : sweep.mean_degrees)
      for (std::uint64_t seed : sweep.seeds)
        rows.push_back(measure(sweep.fixed_n, std::min(1.0, d / (sweep.fixed_n - 1)), seed, sweep.max_cycle_len));
  } else {
    if (sweep.node_counts.empty()) throw Error(Errc::InvalidArgument, "empty node-count grid");
    for (int n : sweep.node_counts)
      for (std::uint64_t seed : sweep.seeds)
        rows.push_back(measure(n, std::min(1.0, sweep.fixed_mean_degree / std::max(1, n - 1)), seed,
                               sweep.max_cycle_len));
  }
  return rows;
}

std::vector<PropagationRow> bench_propagation(std::span<const int> node_counts, double mean_degree,
                                              int max_cycle_len, PropagationAlgorithm algorithm,
                                              std::uint64_t seed) {
  if (node_counts.empty()) throw Error(Errc::InvalidArgument, "empty node-count grid");
  std::vector<PropagationRow> rows;
  PropagationParams params;
  params.algorithm = algorithm;
  for (int n : node_counts) {
    const Graph g = erdos_renyi(n, std::min(1.0, mean_degree / std::max(1, n - 1)), seed);
    const CellComplex cx = lift(g, max_cycle_len);
    const Mask mask = explain_random(cx, seed + 1);
    Prediction pred;
    pred.activations.resize(cx.cell_count(), 4);
    Rng rng(seed + 2);
    for (Eigen::Index i = 0; i < pred.activations.size(); ++i) pred.activations.data()[i] = rng.uniform();
    const Prediction* pp = algorithm == PropagationAlgorithm::Activation ? &pred : nullptr;

    // Grow the batch until one batch takes at least ~2 ms.
    int batch = 1;
    for (;;) {
      const auto start = Clock::now();
      for (int i = 0; i < batch; ++i) propagate(mask, cx, params, pp);
      if (elapsed_ms(start) >= 2.0 || batch >= (1 << 20)) break;
      batch *= 2;
    }
    std::vector<double> times;
    double sink = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      const auto start = Clock::now();
      for (int i = 0; i < batch; ++i) sink += propagate(mask, cx, params, pp).scores(0);
      times.push_back(elapsed_ms(start) / batch);
    }
    if (!std::isfinite(sink)) throw Error(Errc::NonFinite, "propagation produced non-finite scores");
    rows.push_back({n, g.edge_count(), static_cast<std::int64_t>(cx.relations().size()), algorithm, median(times)});
  }
  return rows;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(Errc::InvalidArgument, "need >= 2 paired points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw Error(Errc::InvalidArgument, "log-log fit needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error(Errc::InvalidArgument, "x values are all equal");
  return sxy / sxx;
}

std::string sigma_rows_to_csv(const std::vector<SigmaRow>& rows, bool with_timings) {
  std::string out = "n,p,seed,V,E,sigma_restricted,sigma_full,incident_pairs";
  out += with_timings ? ",lift_ms\n" : "\n";
  for (const SigmaRow& r : rows) {
    out += std::to_string(r.n) + "," + format_double(r.p) + "," + std::to_string(r.seed) + "," +
           std::to_string(r.vertices) + "," + std::to_string(r.edges) + "," + std::to_string(r.sigma_restricted) +
           "," + std::to_string(r.sigma_full) + "," + std::to_string(r.incident_pairs);
    out += with_timings ? "," + format_double(r.lift_ms) + "\n" : "\n";
  }
  return out;
}

std::string propagation_rows_to_csv(const std::vector<PropagationRow>& rows) {
  std::string out = "n,E,sigma,algorithm,prop_ms\n";
  for (const PropagationRow& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.edges) + "," + std::to_string(r.sigma) + "," +
           std::string(propagation_name(r.algorithm)) + "," + format_double(r.prop_ms) + "\n";
  }
  return out;
}

}  // namespace cellex
