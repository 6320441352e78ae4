#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "streamclique/pipeline.hpp"

namespace streamclique::io {

using Json = nlohmann::ordered_json;

/// Keys: n, prune_k, max_depth, min_clique_size, epsilon, max_iters,
/// support_threshold, smoothing, seed.
Json to_json(const PipelineConfig& config);
/// Overlays the keys present in `j` on `base`. A document with a "config" member
/// (such as report.json) is read through that member. Unknown keys and wrong
/// types raise InvalidParameter.
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});

Json to_json(const SimilarityMatrix& matrix);

/// {"classes": [{"members": [ids], "weights": {id: w}, "cohesiveness": x}],
///  "leftover": [ids], "warnings": [...]}. Indices refer to `dataset`.
Json clusters_to_json(const ClusterResult& clusters, const Dataset& dataset);
/// Inverse of clusters_to_json against the same dataset. Raises InvalidParameter
/// on unknown or repeated activity ids.
ClusterResult clusters_from_json(const Json& j, const Dataset& dataset);

Json motifs_to_json(std::span<const MotifSet> motifs, const Vocabulary& vocabulary);

inline constexpr const char* kModelsFormat = "streamclique-models";
inline constexpr int kModelsVersion = 1;

Json models_to_json(std::span<const ClassModel> models, const Vocabulary& vocabulary,
                    const PipelineConfig& config);

struct LoadedModels {
    Vocabulary vocabulary;
    PipelineConfig config;
    std::vector<ClassModel> models;
};

LoadedModels models_from_json(const Json& j);

Json classification_to_json(const Dataset& dataset, std::span<const Classification> results);

Json truth_to_json(const GroundTruth& truth, const Vocabulary& vocabulary);
GroundTruth truth_from_json(const Json& j, const Vocabulary& vocabulary);

Json to_json(const SyntheticSpec& spec);

Json report_to_json(const DiscoveryReport& report, const Dataset& dataset);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);
Json read_json(const std::filesystem::path& path);
/// Writes bytes verbatim; raises IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace streamclique::io
