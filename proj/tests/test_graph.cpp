#include <doctest.h>

#include <cmath>

#include "cellex/error.hpp"
#include "cellex/motifs.hpp"
#include "cellex/theorem.hpp"
#include "cellex/complex.hpp"
#include "oracles.hpp"

using namespace cellex;

TEST_CASE("graph construction canonicalizes and validates") {
  const Graph g = Graph::with_unit_features(3, {{2, 0}, {0, 2}, {1, 0}});
  CHECK(g.edge_count() == 2);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[1] == Edge{0, 2});
  CHECK(g.degree(0) == 2);
  CHECK(g.find_edge(2, 0) == 1);
  CHECK(g.find_edge(1, 2) == -1);

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  CHECK(code_of([] { Graph::with_unit_features(0, {}); }) == Errc::EmptyGraph);
  CHECK(code_of([] { Graph::with_unit_features(3, {{0, 3}}); }) == Errc::EndpointRange);
  CHECK(code_of([] { Graph::with_unit_features(3, {{1, 1}}); }) == Errc::InvalidArgument);
  CHECK(code_of([] { Graph(3, {}, Eigen::MatrixXd::Ones(2, 1)); }) == Errc::DimensionMismatch);
}

TEST_CASE("neighbour lists are sorted") {
  const Graph g = erdos_renyi(40, 0.3, 5);
  for (int v = 0; v < g.node_count(); ++v) {
    auto nb = g.neighbors(v);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    for (std::size_t i = 0; i < nb.size(); ++i) CHECK(g.edges()[g.incident_edges(v)[i]] == make_edge(v, nb[i]));
  }
}

TEST_CASE("erdos_renyi extremes and determinism") {
  CHECK(erdos_renyi(5, 0.0, 7).edge_count() == 0);
  CHECK(erdos_renyi(4, 1.0, 7).edge_count() == 6);
  CHECK(erdos_renyi(60, 0.2, 11) == erdos_renyi(60, 0.2, 11));
  CHECK_FALSE(erdos_renyi(60, 0.2, 11) == erdos_renyi(60, 0.2, 12));
  CHECK_THROWS_AS(erdos_renyi(0, 0.5, 1), Error);
  CHECK_THROWS_AS(erdos_renyi(5, 1.5, 1), Error);
}

TEST_CASE("erdos_renyi edge count follows the binomial law") {
  // C(1000, 2) * 0.01 = 4995, variance 4995 * 0.99.
  const double mean = 4995.0;
  const double sd = std::sqrt(4995.0 * 0.99);
  const int m = erdos_renyi(1000, 0.01, 1).edge_count();
  CHECK(std::abs(m - mean) < 4 * sd);

  // Pooled over seeds the mean should sit much closer.
  double total = 0;
  for (std::uint64_t s = 0; s < 20; ++s) total += erdos_renyi(300, 0.05, s).edge_count();
  const double expect = 300.0 * 299 / 2 * 0.05;
  CHECK(std::abs(total / 20 - expect) < 4 * std::sqrt(expect * 0.95 / 20));
}

TEST_CASE("motif templates have the stated sizes") {
  struct Size {
    MotifKind kind;
    int nodes, edges;
  };
  for (auto [kind, n, m] : {Size{MotifKind::Bull, 5, 5}, Size{MotifKind::Square, 4, 4},
                            Size{MotifKind::Hexagon, 6, 6}, Size{MotifKind::Wheel, 6, 10},
                            Size{MotifKind::House, 5, 6}, Size{MotifKind::Cube, 8, 12}}) {
    const Graph g = motif_template(kind);
    CHECK(g.node_count() == n);
    CHECK(g.edge_count() == m);
    CHECK(g.is_connected());
  }
  CHECK(oracle::cycle_edge_sets(motif_template(MotifKind::Square), 8).size() == 1);

  // Q3: brute-force search finds exactly six 4-cycles (its faces).
  const auto cube_cycles = oracle::cycle_edge_sets(motif_template(MotifKind::Cube), 4);
  CHECK(cube_cycles.size() == 6);
  for (const auto& c : cube_cycles) CHECK(c.size() == 4);

  // Wheel: hub of degree 5.
  CHECK(motif_template(MotifKind::Wheel).degree(0) == 5);
}

TEST_CASE("motif names round-trip") {
  for (MotifKind k : {MotifKind::Bull, MotifKind::Square, MotifKind::Hexagon, MotifKind::Wheel, MotifKind::House,
                      MotifKind::Cube})
    CHECK(parse_motif(motif_name(k)) == k);
  CHECK_THROWS_AS(parse_motif("pentagon"), Error);
}

TEST_CASE("motif dataset contract") {
  SyntheticDatasetConfig cfg;
  cfg.motif_a = MotifKind::House;
  cfg.motif_b = MotifKind::Hexagon;
  cfg.num_graphs = 4;
  cfg.seed = 9;
  const auto data = generate_motif_dataset(cfg);
  REQUIRE(data.size() == 4);
  int zeros = 0;
  for (const Graph& g : data) {
    REQUIRE(g.label());
    REQUIRE(g.gt_nodes());
    CHECK(g.is_connected());
    const int expect_nodes = *g.label() == 0 ? 5 : 6;
    const int expect_edges = *g.label() == 0 ? 6 : 6;
    CHECK(static_cast<int>(g.gt_nodes()->size()) == expect_nodes);
    CHECK(static_cast<int>(g.gt_edges()->size()) == expect_edges);
    zeros += *g.label() == 0;
    CHECK(g.feature_dim() == 8);
    CHECK(g.features()(0, 0) == doctest::Approx(1.0 / std::sqrt(8.0)));
    // Ground-truth edges are internal to the ground-truth nodes.
    const auto mask = g.node_gt_mask();
    for (const Edge& e : *g.gt_edges()) CHECK((mask[e.u] && mask[e.v]));
  }
  CHECK(zeros == 2);
  CHECK(generate_motif_dataset(cfg) == data);
}

TEST_CASE("balanced classes over larger datasets") {
  SyntheticDatasetConfig cfg;
  cfg.motif_a = MotifKind::Wheel;
  cfg.motif_b = MotifKind::Cube;
  cfg.num_graphs = 50;
  cfg.seed = 3;
  int zeros = 0;
  for (const Graph& g : generate_motif_dataset(cfg)) {
    zeros += *g.label() == 0;
    CHECK(g.gt_nodes()->size() == (*g.label() == 0 ? 6u : 8u));
  }
  CHECK(zeros == 25);
}

TEST_CASE("empty bases leave the motif as the only cycle") {
  SyntheticDatasetConfig cfg;
  cfg.motif_a = MotifKind::Square;
  cfg.motif_b = MotifKind::Hexagon;
  cfg.num_graphs = 10;
  cfg.base_edge_prob = 0.0;
  cfg.seed = 4;
  for (const Graph& g : generate_motif_dataset(cfg)) {
    CHECK(g.is_connected());
    const auto cycles = enumerate_simple_cycles(g, 8);
    REQUIRE(cycles.size() == 1);
    std::vector<int> boundary = cycles.front();
    std::sort(boundary.begin(), boundary.end());
    CHECK(boundary == *g.gt_nodes());
  }
}

TEST_CASE("invalid dataset configs are rejected") {
  SyntheticDatasetConfig cfg;
  cfg.motif_b = cfg.motif_a;
  CHECK_THROWS_AS(generate_motif_dataset(cfg), Error);
  cfg = {};
  cfg.base_nodes_min = 10;
  cfg.base_nodes_max = 5;
  CHECK_THROWS_AS(generate_motif_dataset(cfg), Error);
}
