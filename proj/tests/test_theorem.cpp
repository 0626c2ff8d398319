#include <doctest.h>

#include "cellex/complex.hpp"
#include "cellex/error.hpp"
#include "cellex/motifs.hpp"
#include "cellex/random.hpp"
#include "cellex/theorem.hpp"
#include "oracles.hpp"

using namespace cellex;

namespace {

Graph triangle() { return Graph::with_unit_features(3, {{0, 1}, {1, 2}, {0, 2}}); }

}  // namespace

TEST_CASE("closed walk counts") {
  CHECK(closed_walk_count(triangle(), 3) == 6);
  CHECK(closed_walk_count(motif_template(MotifKind::Square), 4) == 32);
  CHECK(closed_walk_count(erdos_renyi(12, 0.5, 3), 1) == 0);
  CHECK(closed_walk_count(triangle(), 2) == 6);  // 2 * |E|
  CHECK_THROWS_AS(closed_walk_count(triangle(), 0), Error);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = erdos_renyi(9, 0.4, seed);
    const Eigen::MatrixXi a = g.adjacency();
    Eigen::MatrixXi power = Eigen::MatrixXi::Identity(9, 9);
    for (int k = 1; k <= 6; ++k) {
      power = power * a;
      CHECK(closed_walk_count(g, k) == power.trace());
      CHECK(closed_walk_count(g, k) == oracle::closed_walks(g, k).closed);
    }
  }
}

TEST_CASE("closed walk overflow is reported") {
  const Graph k40 = erdos_renyi(40, 1.0, 0);
  // tr(A^k) of K_n grows like (n-1)^k; 39^13 > 2^63.
  CHECK_NOTHROW(closed_walk_count(k40, 6));
  try {
    closed_walk_count(k40, 13);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Overflow);
  }
}

TEST_CASE("closed form counts on hand-traced graphs") {
  const auto tri = closed_form_counts(triangle(), 3);
  CHECK(tri.cells == 7);
  CHECK(tri.relations_restricted == 12);
  CHECK(tri.relations_full_lower_bound == 15);
  CHECK(tri.non_cycle_walks[3] == 0);

  const auto sq = closed_form_counts(motif_template(MotifKind::Square), 4);
  CHECK(sq.cells == 9);
  CHECK(sq.relations_restricted == 16);
  CHECK(sq.relations_full_lower_bound == 20);
  CHECK(sq.non_cycle_walks[4] == 24);

  const Graph empty = Graph::with_unit_features(7, {});
  for (int k = 3; k <= 6; ++k) {
    const auto c = closed_form_counts(empty, k);
    CHECK(c.cells == 7);
    CHECK(c.relations_restricted == 0);
    CHECK(c.relations_full_lower_bound == 0);
  }
}

TEST_CASE("cell counts are additive over components") {
  const Graph two = disjoint_union(triangle(), triangle());
  const auto c = closed_form_counts(two, 3);
  CHECK(c.cells == 14);
  const auto report = validate_closed_form(two, 3);
  CHECK(report.passed);
  CHECK(report.measured_cells == 14);
}

TEST_CASE("validate_closed_form on the triangle") {
  const auto r = validate_closed_form(triangle(), 3);
  CHECK(r.passed);
  CHECK(r.violated.empty());
  CHECK(r.measured_cells == 7);
  CHECK(r.measured_restricted == 12);
  CHECK(r.measured_full == 15);
}

TEST_CASE("lift sizes equal the closed forms on random graphs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int n = static_cast<int>(rng.between(1, 40));
    const double p = rng.uniform(0.0, 0.3);
    const int k = static_cast<int>(rng.between(3, 6));
    const auto r = validate_closed_form(erdos_renyi(n, p, seed), k);
    CHECK_MESSAGE(r.passed, "seed " << seed << " violated " << r.violated);
  }
}

TEST_CASE("W_k from the trace identity equals walk classification") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const Graph g = erdos_renyi(static_cast<int>(rng.between(3, 12)), rng.uniform(0.2, 0.6), seed);
    const auto formulas = closed_form_counts(g, 6);
    for (int k = 3; k <= 6; ++k) {
      const auto census = oracle::closed_walks(g, k);
      CHECK(formulas.non_cycle_walks[k] == census.closed - census.cycles);
    }
  }
}
