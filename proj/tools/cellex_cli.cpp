// cellex: lift graphs to cell complexes, train, explain and evaluate.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "cellex/bench.hpp"
#include "cellex/error.hpp"
#include "cellex/io.hpp"
#include "cellex/random.hpp"
#include "cellex/theorem.hpp"

using namespace cellex;
namespace fs = std::filesystem;

namespace {

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kIo = 3,
  kSchema = 4,
  kInvalid = 5,
  kNumeric = 6,
};

constexpr const char* kExitCodes =
    "Exit codes: 0 success, 1 verification failed, 2 usage error, 3 missing/unwritable file,\n"
    "4 schema violation, 5 invalid argument, 6 numeric failure.\n"
    "Environment: CELLEX_K, CELLEX_ALPHA_C, CELLEX_ALPHA_E override the defaults of --k, --alpha-c, --alpha-e.";

int exit_code(Errc code) {
  switch (code) {
    case Errc::Io: return kIo;
    case Errc::Malformed:
    case Errc::DimensionMismatch:
    case Errc::EndpointRange:
    case Errc::DomainMismatch:
    case Errc::EmptyGraph: return kSchema;
    case Errc::InvalidArgument: return kInvalid;
    case Errc::Overflow:
    case Errc::Consistency:
    case Errc::NonFinite: return kNumeric;
  }
  return kInvalid;
}

int fail(std::string_view code, int exit, const std::string& message) {
  std::string msg = message;
  for (char& c : msg)
    if (c == '\n' || c == '"') c = '\'';
  std::fprintf(stderr, "error code=%.*s exit=%d message=\"%s\"\n", static_cast<int>(code.size()), code.data(), exit,
               msg.c_str());
  return exit;
}

template <class T>
T env_or(const char* name, T fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  std::istringstream in(v);
  T out;
  if (!(in >> out)) return fallback;
  return out;
}

Json parse_json_file(const fs::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(Errc::Malformed, path.string() + ": " + e.what());
  }
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      seeds.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "bad seed '" + item + "'");
    }
  }
  if (seeds.empty()) throw Error(Errc::InvalidArgument, "no seeds given");
  return seeds;
}

struct GenOptions {
  std::string motif_a = "house";
  std::string motif_b = "hexagon";
  int num = 200;
  std::uint64_t seed = 0;
  int base_min = 15;
  int base_max = 30;
  std::string base_p = "auto";
  int attach = 1;
  int feature_dim = 8;
  std::string out;
};

int run_gen(const GenOptions& o) {
  SyntheticDatasetConfig c;
  c.motif_a = parse_motif(o.motif_a);
  c.motif_b = parse_motif(o.motif_b);
  c.num_graphs = o.num;
  c.seed = o.seed;
  c.base_nodes_min = o.base_min;
  c.base_nodes_max = o.base_max;
  if (o.base_p != "auto") {
    try {
      c.base_edge_prob = std::stod(o.base_p);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "--base-p must be 'auto' or a probability");
    }
  }
  c.attach_edges = o.attach;
  c.feature_dim = o.feature_dim;
  write_dataset(generate_motif_dataset(c), c, o.out);
  std::printf("wrote %d graphs to %s\n", c.num_graphs, o.out.c_str());
  return kOk;
}

struct LiftOptions {
  std::string in;
  int k = env_or("CELLEX_K", 8);
  std::string mode = "restricted";
  std::string out;
};

int run_lift(const LiftOptions& o) {
  const Graph g = read_graph_json(o.in);
  const CellComplex cx = lift(g, o.k, parse_lift_mode(o.mode));
  write_file_atomic(o.out, dump(complex_to_json(cx)));
  std::printf("cells=%d relations=%zu\n", cx.cell_count(), cx.relations().size());
  return kOk;
}

struct VerifyOptions {
  int n = 30;
  double p = 0.15;
  int k = 5;
  int trials = 50;
  std::uint64_t seed = 0;
};

int run_verify(const VerifyOptions& o) {
  std::printf("%-6s %-6s %-6s %-10s %-10s %-12s %-12s %-12s %-12s %s\n", "trial", "V", "E", "cells", "eq1",
              "sigma_restr", "eq3", "sigma_full", "eq2_rhs", "status");
  int passed = 0;
  for (int t = 0; t < o.trials; ++t) {
    const Graph g = erdos_renyi(o.n, o.p, stream_seed(o.seed, t));
    const ClosedFormReport r = validate_closed_form(g, o.k);
    passed += r.passed;
    std::printf("%-6d %-6d %-6d %-10lld %-10lld %-12lld %-12lld %-12lld %-12lld %s\n", t, g.node_count(),
                g.edge_count(), static_cast<long long>(r.measured_cells), static_cast<long long>(r.expected.cells),
                static_cast<long long>(r.measured_restricted),
                static_cast<long long>(r.expected.relations_restricted), static_cast<long long>(r.measured_full),
                static_cast<long long>(r.expected.relations_full_lower_bound),
                r.passed ? "pass" : ("FAIL " + r.violated).c_str());
  }
  std::printf("%d/%d pass\n", passed, o.trials);
  return passed == o.trials ? kOk : kCheckFailed;
}

struct TrainOptions {
  std::string data;
  int k = env_or("CELLEX_K", 8);
  int epochs = 200;
  double lr = 0.01;
  std::uint64_t seed = 0;
  int hidden = 16;
  int layers = 2;
  std::string aggregation = "sum";
  std::string optimizer = "adam";
  bool plain = false;
  std::string out;
  std::string history;
};

int run_train(const TrainOptions& o) {
  PreparedDataset data = prepare_dataset(read_dataset(o.data), o.k);
  if (data.graphs.empty()) throw Error(Errc::InvalidArgument, "dataset is empty");
  ModelConfig mc;
  mc.input_dim = data.graphs.front().feature_dim();
  mc.hidden_dim = o.hidden;
  mc.layer_count = o.layers;
  mc.aggregation = parse_aggregation(o.aggregation);
  mc.seed = o.seed;
  TrainConfig tc{o.epochs, o.lr, parse_optimizer(o.optimizer)};
  const TrainResult result = train(init_model(mc), data.training_set(!o.plain), tc);
  write_file_atomic(o.out, dump(checkpoint_to_json({result.model, !o.plain, o.k})));
  const std::string history = o.history.empty() ? o.out + ".history.csv" : o.history;
  write_file_atomic(history, history_to_csv(result.history));
  const double acc = accuracy(result.model, data.training_set(!o.plain));
  std::printf("trained %zu graphs, final accuracy %.4f\n", data.graphs.size(), acc);
  return kOk;
}

struct ExplainOptions {
  std::string model;
  std::string graph;
  std::string explainer = "grad";
  std::string mode = "forge";
  std::string prop = "hier";
  double alpha_c = env_or("CELLEX_ALPHA_C", 2.0);
  double alpha_e = env_or("CELLEX_ALPHA_E", 0.5);
  int k = 0;
  std::uint64_t seed = 0;
  bool no_clamp = false;
  std::string out;
  std::string cell_mask_out;
};

int run_explain(const ExplainOptions& o) {
  const Checkpoint ckpt = checkpoint_from_json(parse_json_file(o.model));
  const Graph g = read_graph_json(o.graph);
  const int k = o.k > 0 ? o.k : env_or("CELLEX_K", ckpt.max_cycle_len);
  ExplainerSpec spec;
  spec.kind = parse_mask_origin(o.explainer);
  spec.seed = o.seed;
  spec.mask.seed = o.seed;
  PropagationParams params;
  params.algorithm = parse_propagation(o.prop);
  params.alpha_c = o.alpha_c;
  params.alpha_e = o.alpha_e;
  params.clamp = !o.no_clamp;
  const AblationMode mode = parse_ablation(o.mode);

  const CellComplex plain = plain_complex(g);
  const CellComplex lifted = lift(g, k);
  const NodeMask nm = forge_on_complexes(spec, ckpt.model, plain, lifted, mode, params);
  write_file_atomic(o.out, dump(node_mask_to_json(nm, {mode, params, k})));
  if (!o.cell_mask_out.empty()) {
    const CellComplex& cx = mode == AblationMode::Base ? plain : lifted;
    write_file_atomic(o.cell_mask_out, dump(mask_to_json(explain(spec, ckpt.model, cx), cx)));
  }
  std::printf("explained %d nodes (target class %d)\n", g.node_count(), nm.target);
  return kOk;
}

struct EvalOptions {
  std::string model;
  std::string data;
  std::string explainer = "grad";
  std::string mode = "forge";
  std::string prop = "hier";
  double alpha_c = env_or("CELLEX_ALPHA_C", 2.0);
  double alpha_e = env_or("CELLEX_ALPHA_E", 0.5);
  int k = 0;
  std::string seeds = "1,2,3,4,5,6,7,8,9,10";
  int epochs = 200;
  double lr = 0.01;
  bool threshold = false;
  bool no_clamp = false;
  std::string out;
  std::string csv;
};

int run_eval(const EvalOptions& o) {
  std::optional<Checkpoint> ckpt;
  if (!o.model.empty()) ckpt = checkpoint_from_json(parse_json_file(o.model));
  const int k = o.k > 0 ? o.k : env_or("CELLEX_K", ckpt ? ckpt->max_cycle_len : 8);
  const PreparedDataset data = prepare_dataset(read_dataset(o.data), k);
  if (data.graphs.empty()) throw Error(Errc::InvalidArgument, "dataset is empty");
  ExperimentConfig cfg;
  cfg.model.input_dim = data.graphs.front().feature_dim();
  cfg.training.epochs = o.epochs;
  cfg.training.lr = o.lr;
  cfg.explainer.kind = parse_mask_origin(o.explainer);
  cfg.mode = parse_ablation(o.mode);
  cfg.propagation.algorithm = parse_propagation(o.prop);
  cfg.propagation.alpha_c = o.alpha_c;
  cfg.propagation.alpha_e = o.alpha_e;
  cfg.propagation.clamp = !o.no_clamp;
  cfg.seeds = parse_seeds(o.seeds);
  cfg.selection = o.threshold ? SelectionRule::Threshold : SelectionRule::TopK;
  const EvalReport report = run_experiment(data, cfg, nullptr, ckpt ? &ckpt->model : nullptr);
  write_file_atomic(o.out, dump(report_to_json(report)));
  if (!o.csv.empty()) write_file_atomic(o.csv, report_to_csv(report));
  std::printf("runs=%zu gea=%.4f+-%.4f gef=%.4f+-%.4f\n", report.seeds.size(), report.gea.mean, report.gea.std,
              report.gef.mean, report.gef.std);
  return kOk;
}

struct BenchOptions {
  std::string sweep = "density";
  int k = 0;
  std::string seeds = "0";
  std::string prop = "hier";
  bool emit_json = false;
  std::string timings_out;
  std::string out;
};

int run_bench(const BenchOptions& o) {
  const auto seeds = parse_seeds(o.seeds);
  std::string csv;
  Json rows_json = Json::array();
  if (o.sweep == "density" || o.sweep == "growth") {
    SigmaSweep sweep;
    sweep.kind = o.sweep == "density" ? SweepKind::Density : SweepKind::Growth;
    sweep.max_cycle_len = o.k > 0 ? o.k : (sweep.kind == SweepKind::Density ? 3 : 4);
    sweep.seeds = seeds;
    const auto rows = bench_sigma_growth(sweep);
    csv = sigma_rows_to_csv(rows);
    if (!o.timings_out.empty()) write_file_atomic(o.timings_out, sigma_rows_to_csv(rows, true));
    for (const SigmaRow& r : rows) {
      rows_json.push_back({{"n", r.n}, {"p", r.p}, {"seed", r.seed}, {"V", r.vertices}, {"E", r.edges},
                           {"sigma_restricted", r.sigma_restricted}, {"sigma_full", r.sigma_full},
                           {"incident_pairs", r.incident_pairs}});
    }
  } else if (o.sweep == "propagation") {
    const std::vector<int> ns{1000, 3000, 10000, 30000, 100000};
    const auto rows = bench_propagation(ns, 4.0, o.k > 0 ? o.k : 4, parse_propagation(o.prop), seeds.front());
    // Timings are the primary output here, so this sweep is not byte-stable.
    csv = propagation_rows_to_csv(rows);
    for (const PropagationRow& r : rows) {
      rows_json.push_back({{"n", r.n}, {"E", r.edges}, {"sigma", r.sigma}, {"prop_ms", r.prop_ms}});
    }
  } else {
    throw Error(Errc::InvalidArgument, "--sweep must be density, growth or propagation");
  }
  write_file_atomic(o.out, csv);
  if (o.emit_json) write_file_atomic(o.out + ".json", dump(rows_json));
  std::printf("wrote %s\n", o.out.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellex: cell-complex lifting, explanation and propagation toolkit"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic two-motif dataset");
  g->add_option("--motif-a", gen.motif_a, "Motif for label 0 (bull|square|hexagon|wheel|house|cube)")
      ->capture_default_str();
  g->add_option("--motif-b", gen.motif_b, "Motif for label 1")->capture_default_str();
  g->add_option("--num", gen.num, "Number of graphs")->capture_default_str();
  g->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  g->add_option("--base-min", gen.base_min, "Minimum base-graph size")->capture_default_str();
  g->add_option("--base-max", gen.base_max, "Maximum base-graph size")->capture_default_str();
  g->add_option("--base-p", gen.base_p, "Base ER edge probability or 'auto' (1/n)")->capture_default_str();
  g->add_option("--attach", gen.attach, "Random base-motif edges")->capture_default_str();
  g->add_option("--feature-dim", gen.feature_dim, "Node feature dimension")->capture_default_str();
  g->add_option("--out", gen.out, "Output directory")->required();

  LiftOptions lo;
  auto* l = app.add_subcommand("lift", "Lift a graph JSON to a cell-complex JSON");
  l->add_option("--in", lo.in, "Input graph JSON")->required();
  l->add_option("--k", lo.k, "Maximum cycle length K")->capture_default_str();
  l->add_option("--mode", lo.mode, "restricted|full|plain")->capture_default_str();
  l->add_option("--out", lo.out, "Output complex JSON")->required();

  VerifyOptions vo;
  auto* v = app.add_subcommand("verify-theorem", "Check complex sizes against the closed-form counts on ER graphs");
  v->add_option("--n", vo.n, "Nodes per graph")->capture_default_str();
  v->add_option("--p", vo.p, "Edge probability")->capture_default_str();
  v->add_option("--k", vo.k, "Maximum cycle length K")->capture_default_str();
  v->add_option("--trials", vo.trials, "Number of graphs")->capture_default_str();
  v->add_option("--seed", vo.seed, "Seed")->capture_default_str();

  TrainOptions to;
  auto* t = app.add_subcommand("train", "Train the cell-complex classifier on a dataset");
  t->add_option("--data", to.data, "Dataset directory")->required();
  t->add_option("--k", to.k, "Maximum cycle length K")->capture_default_str();
  t->add_option("--epochs", to.epochs, "Full-batch epochs")->capture_default_str();
  t->add_option("--lr", to.lr, "Learning rate")->capture_default_str();
  t->add_option("--seed", to.seed, "Initialisation seed")->capture_default_str();
  t->add_option("--hidden", to.hidden, "Hidden width")->capture_default_str();
  t->add_option("--layers", to.layers, "Message-passing layers")->capture_default_str();
  t->add_option("--aggregation", to.aggregation, "sum|mean")->capture_default_str();
  t->add_option("--optimizer", to.optimizer, "adam|gd")->capture_default_str();
  t->add_flag("--plain", to.plain, "Train on unlifted graphs (for base / base-lift modes)");
  t->add_option("--out", to.out, "Checkpoint JSON")->required();
  t->add_option("--history", to.history, "History CSV (default: <out>.history.csv)");

  ExplainOptions eo;
  auto* e = app.add_subcommand("explain", "Explain one graph and write its node mask");
  e->add_option("--model", eo.model, "Checkpoint JSON")->required();
  e->add_option("--graph", eo.graph, "Graph JSON")->required();
  e->add_option("--explainer", eo.explainer, "grad|occlusion|mask|random")->capture_default_str();
  e->add_option("--mode", eo.mode, "base|base-lift|forge-lift|forge")->capture_default_str();
  e->add_option("--prop", eo.prop, "hier|direct|entropy|activation")->capture_default_str();
  e->add_option("--alpha-c", eo.alpha_c, "2-cell weight")->capture_default_str();
  e->add_option("--alpha-e", eo.alpha_e, "1-cell weight")->capture_default_str();
  e->add_option("--k", eo.k, "Maximum cycle length K (default: from checkpoint)");
  e->add_option("--seed", eo.seed, "Explainer seed")->capture_default_str();
  e->add_flag("--no-clamp", eo.no_clamp, "Do not clamp propagated scores to [0, 1]");
  e->add_option("--out", eo.out, "Node mask JSON")->required();
  e->add_option("--cell-mask-out", eo.cell_mask_out, "Also write the cell mask JSON");

  EvalOptions ev;
  auto* ea = app.add_subcommand("eval", "Score explanations (GEA, GEF) over a dataset and seeds");
  ea->add_option("--model", ev.model, "Checkpoint JSON; omitted: train one model per seed");
  ea->add_option("--data", ev.data, "Dataset directory")->required();
  ea->add_option("--explainer", ev.explainer, "grad|occlusion|mask|random")->capture_default_str();
  ea->add_option("--mode", ev.mode, "base|base-lift|forge-lift|forge")->capture_default_str();
  ea->add_option("--prop", ev.prop, "hier|direct|entropy|activation")->capture_default_str();
  ea->add_option("--alpha-c", ev.alpha_c, "2-cell weight")->capture_default_str();
  ea->add_option("--alpha-e", ev.alpha_e, "1-cell weight")->capture_default_str();
  ea->add_option("--k", ev.k, "Maximum cycle length K (default: from checkpoint, else 8)");
  ea->add_option("--seeds", ev.seeds, "Comma-separated seeds")->capture_default_str();
  ea->add_option("--epochs", ev.epochs, "Training epochs when no model is given")->capture_default_str();
  ea->add_option("--lr", ev.lr, "Training learning rate when no model is given")->capture_default_str();
  ea->add_flag("--no-clamp", ev.no_clamp, "Do not clamp propagated scores to [0, 1]");
  ea->add_flag("--threshold", ev.threshold, "Select nodes by score >= 0.5 instead of top-|gt|");
  ea->add_option("--out", ev.out, "Report JSON")->required();
  ea->add_option("--csv", ev.csv, "Per-graph CSV");

  BenchOptions bo;
  auto* b = app.add_subcommand("bench-scale", "Relation-count and propagation scaling sweeps");
  b->add_option("--sweep", bo.sweep, "density|growth|propagation")->capture_default_str();
  b->add_option("--k", bo.k, "Maximum cycle length (default 3 density, 4 growth/propagation)");
  b->add_option("--seeds", bo.seeds, "Comma-separated seeds")->capture_default_str();
  b->add_option("--prop", bo.prop, "Propagation algorithm for --sweep propagation")->capture_default_str();
  b->add_flag("--emit-json", bo.emit_json, "Also write <out>.json");
  b->add_option("--timings-out", bo.timings_out, "Write lift timings to this CSV");
  b->add_option("--out", bo.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    return fail("usage", kUsage, ex.what());
  }

  try {
    if (*g) return run_gen(gen);
    if (*l) return run_lift(lo);
    if (*v) return run_verify(vo);
    if (*t) return run_train(to);
    if (*e) return run_explain(eo);
    if (*ea) return run_eval(ev);
    if (*b) return run_bench(bo);
  } catch (const Error& ex) {
    return fail(errc_name(ex.code()), exit_code(ex.code()), ex.what());
  } catch (const fs::filesystem_error& ex) {
    return fail("io", kIo, ex.what());
  } catch (const std::exception& ex) {
    return fail("internal", kNumeric, ex.what());
  }
  return kUsage;
}
