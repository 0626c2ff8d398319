#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cellex/eval.hpp"
#include "cellex/motifs.hpp"

namespace cellex {

using Json = nlohmann::ordered_json;

/// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// Pretty-printed with a trailing newline; byte-stable for equal values.
std::string dump(const Json& doc);

// Graph: {node_count, edges: [[u,v]...], features: [[...]...], label?, gt_nodes?, gt_edges?}
Json graph_to_json(const Graph& graph);
/// Error{Malformed} for a bad document, Error{DimensionMismatch} for ragged
/// or short feature rows, Error{EndpointRange} for an endpoint >= node_count.
Graph graph_from_json(const Json& doc);
void write_graph_json(const Graph& graph, const std::filesystem::path& path);
Graph read_graph_json(const std::filesystem::path& path);

Json dataset_config_to_json(const SyntheticDatasetConfig& config);
SyntheticDatasetConfig dataset_config_from_json(const Json& doc);
/// DIR/graph_00000.json ... plus DIR/manifest.json.
void write_dataset(const std::vector<Graph>& graphs, const SyntheticDatasetConfig& config,
                   const std::filesystem::path& dir);
std::vector<Graph> read_dataset(const std::filesystem::path& dir);

// Complex: {mode, K, cells_0, cells_1, cells_2, relations: [{lo:[d,i], hi:[d,i], kind}]}
Json complex_to_json(const CellComplex& complex);

// Checkpoint: {format, config, trained_on, max_cycle_len, tensors: [{name, shape, data}]}
struct Checkpoint {
  CellModel model;
  bool trained_lifted = true;
  int max_cycle_len = 8;
};
Json checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const Json& doc);

// Mask: {target, origin, scores: [{dim, index, score}]}
Json mask_to_json(const Mask& mask, const CellComplex& complex);
Mask mask_from_json(const Json& doc, const CellComplex& complex);

struct NodeMaskProvenance {
  AblationMode mode = AblationMode::Forge;
  PropagationParams propagation;
  int max_cycle_len = 8;
};
// Node mask: {scores: [...], provenance: {...}}
Json node_mask_to_json(const NodeMask& mask, const NodeMaskProvenance& provenance);

Json report_to_json(const EvalReport& report);
/// graph_id,seed,gea,gef,error
std::string report_to_csv(const EvalReport& report);

/// epoch,loss,accuracy
std::string history_to_csv(const std::vector<EpochStats>& history);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace cellex
