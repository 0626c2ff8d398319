#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cellex/complex.hpp"
#include "cellex/error.hpp"
#include "cellex/motifs.hpp"
#include "cellex/propagate.hpp"
#include "cellex/random.hpp"

using namespace cellex;

namespace {

const PropagationAlgorithm kAll[] = {PropagationAlgorithm::Hierarchical, PropagationAlgorithm::Direct,
                                     PropagationAlgorithm::Entropy, PropagationAlgorithm::Activation};

CellComplex triangle() { return lift(Graph::with_unit_features(3, {{0, 1}, {1, 2}, {0, 2}}), 3); }

Mask uniform_mask(const CellComplex& cx, double s) { return Mask{Eigen::VectorXd::Constant(cx.cell_count(), s)}; }

Mask random_mask(const CellComplex& cx, std::uint64_t seed) {
  Rng rng(seed);
  Mask m{Eigen::VectorXd(cx.cell_count())};
  for (int i = 0; i < m.scores.size(); ++i) m.scores(i) = rng.uniform();
  return m;
}

Prediction fake_prediction(const CellComplex& cx, std::uint64_t seed) {
  Rng rng(seed);
  Prediction p;
  p.activations = Eigen::MatrixXd(cx.cell_count(), 3);
  for (int i = 0; i < p.activations.size(); ++i) p.activations(i) = rng.uniform();
  return p;
}

PropagationParams with(PropagationAlgorithm alg, double ac = 0.5, double ae = 0.5) {
  PropagationParams p;
  p.algorithm = alg;
  p.alpha_c = ac;
  p.alpha_e = ae;
  return p;
}

}  // namespace

TEST_CASE("hierarchical triangle trace") {
  const CellComplex cx = triangle();
  Mask m = uniform_mask(cx, 0.5);
  for (int e = 0; e < 3; ++e) m.scores(cx.flat({1, e})) = 0.6;
  m.scores(cx.flat({2, 0})) = 0.9;
  const NodeMask out = propagate_hierarchical(m, cx, with(PropagationAlgorithm::Hierarchical));
  REQUIRE(out.scores.size() == 3);
  for (int v = 0; v < 3; ++v) CHECK(out.scores(v) == 0.8);
}

TEST_CASE("all 0.5 is a fixed point of every algorithm") {
  const CellComplex cx = lift(erdos_renyi(20, 0.25, 3), 6);
  const Prediction pred = fake_prediction(cx, 3);
  for (PropagationAlgorithm alg : kAll) {
    const NodeMask out = propagate(uniform_mask(cx, 0.5), cx, with(alg, 1.3, 0.7), &pred);
    CHECK((out.scores.array() == 0.5).all());
  }
}

TEST_CASE("zero alphas leave the 0-cell scores unchanged") {
  const CellComplex cx = lift(erdos_renyi(15, 0.3, 5), 5);
  const Mask m = random_mask(cx, 5);
  const Prediction pred = fake_prediction(cx, 5);
  for (PropagationAlgorithm alg : kAll) {
    const NodeMask out = propagate(m, cx, with(alg, 0.0, 0.0), &pred);
    CHECK(out.scores == m.scores.head(cx.cell_count(0)));
  }
}

TEST_CASE("direct propagation") {
  const CellComplex cx = triangle();
  Mask m = uniform_mask(cx, 1.0);
  m.scores.head(3).setZero();
  const NodeMask out = propagate_direct(m, cx, with(PropagationAlgorithm::Direct, 1.0, 1.0));
  for (int v = 0; v < 3; ++v) CHECK(out.scores(v) == doctest::Approx(0.75).epsilon(1e-15));

  const CellComplex lonely = lift(Graph::with_unit_features(4, {{0, 1}}), 3);
  Mask lm = random_mask(lonely, 2);
  CHECK(propagate_direct(lm, lonely, with(PropagationAlgorithm::Direct)).scores(3) == lm.scores(3));

  // Vertex-transitive complex with uniform scores and equal weights.
  const CellComplex cube = lift(motif_template(MotifKind::Cube), 4);
  const NodeMask u = propagate_direct(uniform_mask(cube, 0.37), cube, with(PropagationAlgorithm::Direct, 0.8, 0.8));
  for (int v = 0; v < 8; ++v) CHECK(u.scores(v) == doctest::Approx(0.37));
}

TEST_CASE("entropy confidence") {
  CHECK(entropy_confidence(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(entropy_confidence(1.0) == 1.0);
  CHECK(entropy_confidence(0.0) == 1.0);
  const double h = -0.9 * std::log(0.9) - 0.1 * std::log(0.1);
  CHECK(entropy_confidence(0.9) == doctest::Approx(1.0 - h / std::log(2.0)));
  CHECK(entropy_confidence(0.9) == doctest::Approx(0.531).epsilon(1e-3));

  // A face at 0.5 and edges at 0.5 contribute nothing regardless of alpha.
  const CellComplex cx = triangle();
  Mask m = uniform_mask(cx, 0.5);
  m.scores.head(3) << 0.1, 0.2, 0.3;
  const NodeMask out = propagate_entropy(m, cx, with(PropagationAlgorithm::Entropy, 5.0, 5.0));
  CHECK(out.scores == m.scores.head(3));

  // Edge score 1: full-confidence contribution on each endpoint.
  Mask full = uniform_mask(cx, 0.5);
  full.scores.segment(cx.offset(1), 3).setOnes();
  full.scores.head(3).setZero();
  const NodeMask f = propagate_entropy(full, cx, with(PropagationAlgorithm::Entropy, 0.0, 0.25));
  for (int v = 0; v < 3; ++v) CHECK(f.scores(v) == doctest::Approx(2 * 0.5 * 0.25));
}

TEST_CASE("activation propagation") {
  const CellComplex cx = lift(erdos_renyi(18, 0.25, 9), 6);
  const Mask m = random_mask(cx, 9);
  const Prediction pred = fake_prediction(cx, 9);

  PropagationParams off = with(PropagationAlgorithm::Activation);
  off.activation_weighting = false;
  const NodeMask a = propagate_activation(m, cx, off, pred);
  const NodeMask h = propagate_hierarchical(m, cx, with(PropagationAlgorithm::Hierarchical));
  CHECK(a.scores == h.scores);

  // Equal activations within a dimension give weight 1: same as hierarchical.
  Prediction flat = pred;
  flat.activations.setConstant(0.4);
  CHECK(propagate_activation(m, cx, with(PropagationAlgorithm::Activation), flat).scores == h.scores);

  // Zero activation on every higher cell removes their contribution.
  Prediction silent = pred;
  silent.activations.bottomRows(cx.cell_count() - cx.cell_count(0)).setZero();
  PropagationParams unclamped = with(PropagationAlgorithm::Activation);
  unclamped.clamp = false;
  CHECK(propagate_activation(m, cx, unclamped, silent).scores == m.scores.head(cx.cell_count(0)));

  CHECK_THROWS_AS(propagate(m, cx, with(PropagationAlgorithm::Activation)), Error);
}

TEST_CASE("clamping") {
  const CellComplex cx = lift(motif_template(MotifKind::Wheel), 3);
  const Mask ones = uniform_mask(cx, 1.0);
  PropagationParams p = with(PropagationAlgorithm::Hierarchical, 2.0, 2.0);
  CHECK(propagate(ones, cx, p).scores.maxCoeff() == 1.0);
  p.clamp = false;
  CHECK(propagate(ones, cx, p).scores.maxCoeff() > 1.0);
  const Mask zeros = uniform_mask(cx, 0.0);
  p.clamp = true;
  for (PropagationAlgorithm alg : kAll) {
    const Prediction pred = fake_prediction(cx, 1);
    const NodeMask out = propagate(random_mask(cx, 4), cx, with(alg, 3.0, 3.0), &pred);
    CHECK(out.scores.minCoeff() >= 0.0);
    CHECK(out.scores.maxCoeff() <= 1.0);
  }
  CHECK(propagate(zeros, cx, p).scores.minCoeff() == 0.0);
}

TEST_CASE("locality") {
  // Two components: perturbing cells of one leaves the other's nodes unchanged.
  const Graph a = erdos_renyi(8, 0.5, 1);
  const Graph g = disjoint_union(a, a);
  const CellComplex cx = lift(g, 5);
  const Prediction pred = fake_prediction(cx, 2);
  Mask m = random_mask(cx, 3);
  Mask changed = m;
  for (int e = 0; e < cx.cell_count(1); ++e)
    if (cx.cells1()[e].u >= 8) changed.scores(cx.offset(1) + e) = 1.0 - m.scores(cx.offset(1) + e);
  for (int f = 0; f < cx.cell_count(2); ++f)
    if (cx.cells2()[f].front() >= 8) changed.scores(cx.offset(2) + f) = 0.0;
  for (PropagationAlgorithm alg : {PropagationAlgorithm::Hierarchical, PropagationAlgorithm::Direct,
                                   PropagationAlgorithm::Entropy}) {
    const NodeMask x = propagate(m, cx, with(alg), &pred);
    const NodeMask y = propagate(changed, cx, with(alg), &pred);
    CHECK(x.scores.head(8) == y.scores.head(8));
  }
  // Within one graph: a node's score ignores edges and faces not incident to it.
  const CellComplex sq = lift(motif_template(MotifKind::House), 4);
  Mask base = random_mask(sq, 7);
  Mask far = base;
  const int apex = 4;
  for (int e = 0; e < sq.cell_count(1); ++e) {
    const Edge ed = sq.cells1()[e];
    if (ed.u != apex && ed.v != apex) {
      bool touches_apex_face = false;
      for (int f = 0; f < sq.cell_count(2); ++f) {
        const auto& cyc = sq.cells2()[f];
        if (std::find(cyc.begin(), cyc.end(), apex) == cyc.end()) continue;
        for (int fe : sq.face_edges(f)) touches_apex_face |= fe == e;
      }
      if (!touches_apex_face) far.scores(sq.offset(1) + e) = 0.99;
    }
  }
  CHECK(propagate_hierarchical(base, sq, with(PropagationAlgorithm::Hierarchical)).scores(apex) ==
        propagate_hierarchical(far, sq, with(PropagationAlgorithm::Hierarchical)).scores(apex));
}

TEST_CASE("raising a 2-cell score never lowers a node score") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CellComplex cx = lift(erdos_renyi(12, 0.35, seed), 5);
    if (cx.cell_count(2) == 0) continue;
    const Mask m = random_mask(cx, seed);
    PropagationParams p = with(PropagationAlgorithm::Hierarchical);
    p.clamp = false;
    const NodeMask before = propagate_hierarchical(m, cx, p);
    Mask up = m;
    const int f = static_cast<int>(seed % cx.cell_count(2));
    up.scores(cx.offset(2) + f) = std::min(1.0, m.scores(cx.offset(2) + f) + 0.3);
    const NodeMask after = propagate_hierarchical(up, cx, p);
    CHECK((after.scores.array() >= before.scores.array()).all());
  }
}

TEST_CASE("errors") {
  const CellComplex cx = triangle();
  Mask small{Eigen::VectorXd::Constant(3, 0.5)};
  for (PropagationAlgorithm alg : kAll) {
    try {
      const Prediction pred = fake_prediction(cx, 0);
      propagate(small, cx, with(alg), &pred);
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DomainMismatch);
    }
  }
  CHECK_THROWS_AS(propagate(uniform_mask(cx, 0.5), cx, with(PropagationAlgorithm::Hierarchical, -1.0, 0.5)), Error);
  CHECK(parse_propagation("hier") == PropagationAlgorithm::Hierarchical);
  CHECK_THROWS_AS(parse_propagation("sideways"), Error);
  CHECK(parse_ablation("forge-lift") == AblationMode::ForgeLift);
}

TEST_CASE("ablation pipelines") {
  SyntheticDatasetConfig config;
  config.num_graphs = 2;
  config.feature_dim = 2;
  const Graph g = generate_motif_dataset(config).front();
  ModelConfig mc;
  mc.input_dim = 2;
  const CellModel model = init_model(mc);
  ExplainerSpec spec;
  spec.kind = MaskOrigin::Random;
  spec.seed = 8;
  const CellComplex plain = plain_complex(g);
  const CellComplex lifted = lift(g, 8);
  PropagationParams params;

  const NodeMask forge = forge_pipeline(spec, model, g, 8, AblationMode::Forge, params);
  CHECK(forge.scores == forge_on_complexes(spec, model, plain, lifted, AblationMode::Forge, params).scores);

  PropagationParams zero = params;
  zero.alpha_c = zero.alpha_e = 0.0;
  const NodeMask fl = forge_on_complexes(spec, model, plain, lifted, AblationMode::ForgeLift, params);
  CHECK(fl.scores == forge_on_complexes(spec, model, plain, lifted, AblationMode::Forge, zero).scores);

  const NodeMask base = forge_on_complexes(spec, model, plain, lifted, AblationMode::Base, params);
  CHECK(base.scores == explain_random(plain, 8).scores);
  for (AblationMode mode : {AblationMode::Base, AblationMode::BaseLift, AblationMode::ForgeLift, AblationMode::Forge}) {
    const NodeMask out = forge_on_complexes(spec, model, plain, lifted, mode, params);
    CHECK(out.scores.size() == g.node_count());
    CHECK(out.scores.minCoeff() >= 0.0);
    CHECK(out.scores.maxCoeff() <= 1.0);
  }
  CHECK(trains_lifted(AblationMode::Forge));
  CHECK(!trains_lifted(AblationMode::BaseLift));
}
