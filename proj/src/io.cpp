#include "cellex/io.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include "cellex/error.hpp"

namespace cellex {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(Errc::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const Json& doc) { return doc.dump(1) + "\n"; }

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

Json parse(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::Malformed, where + ": " + e.what());
  }
}

template <class T>
T field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(Errc::Malformed, std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(Errc::Malformed, std::string("bad field '") + key + "': " + e.what());
  }
}

Json edge_list(const std::vector<Edge>& edges) {
  Json arr = Json::array();
  for (const Edge& e : edges) arr.push_back({e.u, e.v});
  return arr;
}

std::vector<Edge> parse_edges(const Json& doc, const char* key) {
  std::vector<Edge> edges;
  for (const auto& pair : field<std::vector<std::vector<long long>>>(doc, key)) {
    if (pair.size() != 2) throw Error(Errc::Malformed, std::string("'") + key + "' entries must be [u, v] pairs");
    edges.push_back({static_cast<int>(pair[0]), static_cast<int>(pair[1])});
  }
  return edges;
}

}  // namespace

Json graph_to_json(const Graph& graph) {
  Json doc;
  doc["node_count"] = graph.node_count();
  doc["edges"] = edge_list(graph.edges());
  Json feats = Json::array();
  for (int v = 0; v < graph.node_count(); ++v) {
    Json row = Json::array();
    for (int c = 0; c < graph.feature_dim(); ++c) row.push_back(graph.features()(v, c));
    feats.push_back(std::move(row));
  }
  doc["features"] = std::move(feats);
  if (graph.label()) doc["label"] = *graph.label();
  if (graph.gt_nodes()) doc["gt_nodes"] = *graph.gt_nodes();
  if (graph.gt_edges()) doc["gt_edges"] = edge_list(*graph.gt_edges());
  return doc;
}

Graph graph_from_json(const Json& doc) {
  const long long n = field<long long>(doc, "node_count");
  if (n <= 0) throw Error(Errc::EmptyGraph, "node_count must be positive");
  std::vector<Edge> edges = parse_edges(doc, "edges");
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw Error(Errc::EndpointRange, "edge [" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                           "] out of range for node_count " + std::to_string(n));
    }
  }
  const auto rows = field<std::vector<std::vector<double>>>(doc, "features");
  if (static_cast<long long>(rows.size()) != n) {
    throw Error(Errc::DimensionMismatch, "features has " + std::to_string(rows.size()) + " rows, expected " +
                                             std::to_string(n));
  }
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  if (d == 0) throw Error(Errc::DimensionMismatch, "feature rows must be non-empty");
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != d) throw Error(Errc::DimensionMismatch, "ragged feature row " + std::to_string(r));
    for (std::size_t c = 0; c < d; ++c) x(r, c) = rows[r][c];
  }
  Graph g(static_cast<int>(n), std::move(edges), std::move(x));
  if (doc.contains("label")) g = g.with_label(field<int>(doc, "label"));
  if (doc.contains("gt_nodes")) {
    std::vector<Edge> gte;
    if (doc.contains("gt_edges")) gte = parse_edges(doc, "gt_edges");
    g = g.with_ground_truth(field<std::vector<int>>(doc, "gt_nodes"), std::move(gte));
  }
  return g;
}

void write_graph_json(const Graph& graph, const fs::path& path) {
  write_file_atomic(path, dump(graph_to_json(graph)));
}

Graph read_graph_json(const fs::path& path) { return graph_from_json(parse(read_file(path), path.string())); }

Json dataset_config_to_json(const SyntheticDatasetConfig& c) {
  Json doc;
  doc["motif_a"] = motif_name(c.motif_a);
  doc["motif_b"] = motif_name(c.motif_b);
  doc["num_graphs"] = c.num_graphs;
  doc["base_nodes_min"] = c.base_nodes_min;
  doc["base_nodes_max"] = c.base_nodes_max;
  if (c.base_edge_prob) {
    doc["base_edge_prob"] = *c.base_edge_prob;
  } else {
    doc["base_edge_prob"] = "auto";
  }
  doc["attach_edges"] = c.attach_edges;
  doc["feature_dim"] = c.feature_dim;
  doc["seed"] = c.seed;
  return doc;
}

SyntheticDatasetConfig dataset_config_from_json(const Json& doc) {
  SyntheticDatasetConfig c;
  c.motif_a = parse_motif(field<std::string>(doc, "motif_a"));
  c.motif_b = parse_motif(field<std::string>(doc, "motif_b"));
  c.num_graphs = field<int>(doc, "num_graphs");
  c.base_nodes_min = field<int>(doc, "base_nodes_min");
  c.base_nodes_max = field<int>(doc, "base_nodes_max");
  if (doc.contains("base_edge_prob") && doc["base_edge_prob"].is_number()) {
    c.base_edge_prob = field<double>(doc, "base_edge_prob");
  }
  c.attach_edges = field<int>(doc, "attach_edges");
  c.feature_dim = field<int>(doc, "feature_dim");
  c.seed = field<std::uint64_t>(doc, "seed");
  return c;
}

namespace {

std::string graph_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "graph_%05zu.json", i);
  return buf;
}

}  // namespace

void write_dataset(const std::vector<Graph>& graphs, const SyntheticDatasetConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < graphs.size(); ++i) write_graph_json(graphs[i], dir / graph_file_name(i));
  Json manifest;
  manifest["format"] = "cellex-dataset";
  manifest["config"] = dataset_config_to_json(config);
  manifest["seed"] = config.seed;
  manifest["num_graphs"] = graphs.size();
  write_file_atomic(dir / "manifest.json", dump(manifest));
}

std::vector<Graph> read_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  const Json manifest = parse(read_file(manifest_path), manifest_path.string());
  const auto count = field<std::size_t>(manifest, "num_graphs");
  std::vector<Graph> graphs;
  graphs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) graphs.push_back(read_graph_json(dir / graph_file_name(i)));
  return graphs;
}

Json complex_to_json(const CellComplex& cx) {
  Json doc;
  doc["mode"] = lift_mode_name(cx.mode());
  doc["K"] = cx.max_cycle_len();
  doc["cells_0"] = cx.cells0();
  doc["cells_1"] = edge_list(cx.cells1());
  doc["cells_2"] = cx.cells2();
  Json rels = Json::array();
  for (const BoundaryRelation& r : cx.relations()) {
    Json rel;
    rel["lo"] = {r.lo.dim, r.lo.index};
    rel["hi"] = {r.hi.dim, r.hi.index};
    rel["kind"] = relation_kind_name(r.kind);
    rels.push_back(std::move(rel));
  }
  doc["relations"] = std::move(rels);
  return doc;
}

namespace {

Json tensor(const std::string& name, const Eigen::MatrixXd& m) {
  Json t;
  t["name"] = name;
  t["shape"] = {m.rows(), m.cols()};
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  t["data"] = std::move(data);
  return t;
}

Eigen::MatrixXd read_tensor(const Json& t, const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  if (field<std::string>(t, "name") != name) throw Error(Errc::Malformed, "expected tensor '" + name + "'");
  const auto shape = field<std::vector<long long>>(t, "shape");
  if (shape.size() != 2 || shape[0] != rows || shape[1] != cols) {
    throw Error(Errc::DimensionMismatch, "tensor '" + name + "' has the wrong shape");
  }
  const auto data = field<std::vector<double>>(t, "data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw Error(Errc::DimensionMismatch, "tensor '" + name + "' has the wrong length");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  return m;
}

}  // namespace

Json checkpoint_to_json(const Checkpoint& ckpt) {
  const ModelConfig& c = ckpt.model.config;
  Json doc;
  doc["format"] = "cellex-model";
  doc["version"] = 1;
  doc["config"] = {{"input_dim", c.input_dim},     {"hidden_dim", c.hidden_dim},
                   {"layer_count", c.layer_count}, {"num_classes", c.num_classes},
                   {"aggregation", aggregation_name(c.aggregation)}, {"seed", c.seed}};
  doc["trained_on"] = ckpt.trained_lifted ? "lifted" : "plain";
  doc["max_cycle_len"] = ckpt.max_cycle_len;
  Json tensors = Json::array();
  for (std::size_t l = 0; l < ckpt.model.params.layers.size(); ++l) {
    const LayerWeights& w = ckpt.model.params.layers[l];
    const std::string p = "layer" + std::to_string(l) + ".";
    tensors.push_back(tensor(p + "self", w.self));
    tensors.push_back(tensor(p + "horizontal", w.horizontal));
    tensors.push_back(tensor(p + "up", w.up));
    tensors.push_back(tensor(p + "down", w.down));
    tensors.push_back(tensor(p + "bias", w.bias));
  }
  tensors.push_back(tensor("readout", ckpt.model.params.readout));
  tensors.push_back(tensor("readout_bias", ckpt.model.params.readout_bias));
  doc["tensors"] = std::move(tensors);
  return doc;
}

Checkpoint checkpoint_from_json(const Json& doc) {
  if (field<std::string>(doc, "format") != "cellex-model") throw Error(Errc::Malformed, "not a model checkpoint");
  const Json& cfg = doc.at("config");
  ModelConfig c;
  c.input_dim = field<int>(cfg, "input_dim");
  c.hidden_dim = field<int>(cfg, "hidden_dim");
  c.layer_count = field<int>(cfg, "layer_count");
  c.num_classes = field<int>(cfg, "num_classes");
  c.aggregation = parse_aggregation(field<std::string>(cfg, "aggregation"));
  c.seed = field<std::uint64_t>(cfg, "seed");

  Checkpoint ckpt;
  ckpt.model = init_model(c);
  ckpt.trained_lifted = field<std::string>(doc, "trained_on") == "lifted";
  ckpt.max_cycle_len = field<int>(doc, "max_cycle_len");
  const auto& tensors = doc.at("tensors");
  const std::size_t expected = 5 * static_cast<std::size_t>(c.layer_count) + 2;
  if (!tensors.is_array() || tensors.size() != expected) throw Error(Errc::Malformed, "wrong tensor count");
  std::size_t t = 0;
  for (int l = 0; l < c.layer_count; ++l) {
    LayerWeights& w = ckpt.model.params.layers[l];
    const std::string p = "layer" + std::to_string(l) + ".";
    const Eigen::Index in = w.self.rows();
    w.self = read_tensor(tensors[t++], p + "self", in, c.hidden_dim);
    w.horizontal = read_tensor(tensors[t++], p + "horizontal", in, c.hidden_dim);
    w.up = read_tensor(tensors[t++], p + "up", in, c.hidden_dim);
    w.down = read_tensor(tensors[t++], p + "down", in, c.hidden_dim);
    w.bias = read_tensor(tensors[t++], p + "bias", 1, c.hidden_dim);
  }
  ckpt.model.params.readout = read_tensor(tensors[t++], "readout", c.hidden_dim, c.num_classes);
  ckpt.model.params.readout_bias = read_tensor(tensors[t++], "readout_bias", 1, c.num_classes);
  if (!ckpt.model.params.all_finite()) throw Error(Errc::NonFinite, "checkpoint holds non-finite weights");
  return ckpt;
}

Json mask_to_json(const Mask& mask, const CellComplex& complex) {
  if (mask.scores.size() != complex.cell_count()) throw Error(Errc::DomainMismatch, "mask does not match complex");
  Json doc;
  doc["target"] = mask.target;
  doc["origin"] = mask_origin_name(mask.origin);
  Json scores = Json::array();
  for (int c = 0; c < complex.cell_count(); ++c) {
    const CellId id = complex.cell(c);
    scores.push_back({{"dim", id.dim}, {"index", id.index}, {"score", mask.scores(c)}});
  }
  doc["scores"] = std::move(scores);
  return doc;
}

Mask mask_from_json(const Json& doc, const CellComplex& complex) {
  Mask m;
  m.target = field<int>(doc, "target");
  m.origin = parse_mask_origin(field<std::string>(doc, "origin"));
  m.scores = Eigen::VectorXd::Constant(complex.cell_count(), std::numeric_limits<double>::quiet_NaN());
  const auto& scores = doc.at("scores");
  if (!scores.is_array() || static_cast<int>(scores.size()) != complex.cell_count()) {
    throw Error(Errc::DomainMismatch, "mask does not cover the complex");
  }
  for (const auto& s : scores) {
    const int dim = field<int>(s, "dim");
    const int index = field<int>(s, "index");
    if (dim < 0 || dim > 2 || index < 0 || index >= complex.cell_count(dim)) {
      throw Error(Errc::DomainMismatch, "mask cell outside the complex");
    }
    m.scores(complex.flat({dim, index})) = field<double>(s, "score");
  }
  if (!m.scores.allFinite()) throw Error(Errc::DomainMismatch, "mask leaves cells uncovered");
  return m;
}

Json node_mask_to_json(const NodeMask& mask, const NodeMaskProvenance& prov) {
  Json doc;
  doc["scores"] = std::vector<double>(mask.scores.data(), mask.scores.data() + mask.scores.size());
  doc["provenance"] = {{"mode", ablation_name(prov.mode)},
                       {"algorithm", propagation_name(prov.propagation.algorithm)},
                       {"alpha_c", prov.propagation.alpha_c},
                       {"alpha_e", prov.propagation.alpha_e},
                       {"clamp", prov.propagation.clamp},
                       {"explainer", mask_origin_name(mask.origin)},
                       {"target", mask.target},
                       {"K", prov.max_cycle_len}};
  return doc;
}

Json report_to_json(const EvalReport& r) {
  Json doc;
  doc["mode"] = ablation_name(r.mode);
  doc["explainer"] = mask_origin_name(r.explainer);
  doc["propagation"] = propagation_name(r.propagation);
  doc["K"] = r.max_cycle_len;
  doc["seeds"] = r.seeds;
  doc["aggregates"] = {{"gea_mean", r.gea.mean},
                       {"gea_std", r.gea.std},
                       {"gef_mean", r.gef.mean},
                       {"gef_std", r.gef.std},
                       {"runs", r.seeds.size()}};
  doc["seed_means"] = {{"gea", r.seed_gea}, {"gef", r.seed_gef}};
  Json rows = Json::array();
  for (const EvalRow& row : r.rows) {
    Json j = {{"graph_id", row.graph_id}, {"seed", row.seed}, {"gea", row.gea}, {"gef", row.gef}};
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  doc["per_graph"] = std::move(rows);
  return doc;
}

std::string report_to_csv(const EvalReport& r) {
  std::string out = "graph_id,seed,gea,gef,error\n";
  for (const EvalRow& row : r.rows) {
    std::string err = row.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    out += std::to_string(row.graph_id) + "," + std::to_string(row.seed) + "," + format_double(row.gea) + "," +
           format_double(row.gef) + "," + err + "\n";
  }
  return out;
}

std::string history_to_csv(const std::vector<EpochStats>& history) {
  std::string out = "epoch,loss,accuracy\n";
  for (const EpochStats& s : history) {
    out += std::to_string(s.epoch) + "," + format_double(s.loss) + "," + format_double(s.accuracy) + "\n";
  }
  return out;
}

}  // namespace cellex
