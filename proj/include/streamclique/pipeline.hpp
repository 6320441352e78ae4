#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamclique/dominant_sets.hpp"
#include "streamclique/event.hpp"
#include "streamclique/ngram.hpp"
#include "streamclique/similarity.hpp"
#include "streamclique/synthetic.hpp"
#include "streamclique/vmmc.hpp"

namespace streamclique {

struct PipelineConfig {
    std::size_t n = 3;
    double k_param = 0.5;
    std::size_t max_depth = 8;
    std::size_t min_clique_size = 3;
    double epsilon = 1e-8;
    std::size_t max_iters = 10000;
    double support_threshold = 1e-4;
    double smoothing = 0.5;
    std::uint64_t seed = 0;
    Execution execution = Execution::Parallel;  // not part of the persisted config

    /// Throws InvalidParameter on out-of-range values.
    void validate() const;
    SolverParams solver() const;

    bool operator==(const PipelineConfig&) const = default;
};

struct DiscoveryOutcome {
    std::vector<NGramHistogram> histograms;  // one per dataset activity
    SimilarityMatrix matrix;                 // over activities with a non-empty histogram
    std::vector<std::size_t> matrix_rows;    // dataset index of each matrix row
    ClusterResult clusters;                  // dataset indices
    std::vector<std::string> warnings;
};

/// n-gram bags -> similarity graph -> dominant-set peeling. Activities whose bag
/// is empty (shorter than n) skip the graph and go straight to leftover.
DiscoveryOutcome run_discovery(const Dataset& dataset, const PipelineConfig& config);

ClassAssignment assignment_from(const ClusterResult& clusters);

struct MotifOutcome {
    std::vector<ClassModel> models;  // pruned, one per discovered class
    std::vector<MotifSet> motifs;
    std::vector<std::string> warnings;
};

/// Context counts, bit gains, pruning and motif ranking over the discovered
/// classes. Leftover activities take no part. Throws InvalidParameter when there
/// is no class.
MotifOutcome run_motifs(const Dataset& dataset, const ClusterResult& clusters,
                        const PipelineConfig& config);

/// Matrix rows ordered class by class (peel order, members in input order),
/// then leftover in input order.
std::vector<std::size_t> cluster_ordering(const DiscoveryOutcome& outcome);

/// Binary grayscale PGM (P5): one pixel per entry, value round(255 * sim),
/// rows and columns permuted by `ordering` when given. Throws InvalidParameter
/// if `ordering` is not a permutation.
std::string render_similarity_image(const SimilarityMatrix& matrix,
                                    std::optional<std::span<const std::size_t>> ordering = std::nullopt);

struct TruthComparison {
    std::vector<int> class_labels;  // majority planted label per discovered class
    std::size_t clustered = 0;
    double purity = 0.0;    // over clustered activities
    double coverage = 0.0;  // clustered / all activities
    /// motif_found[c][k]: planted motif k of class c matched in the top-k list of a
    /// discovered class whose majority label is c.
    std::vector<std::vector<bool>> motif_found;
    double motif_recall = 0.0;
    bool leftover_is_noise = false;  // leftover == exactly the structureless instances
};

/// A discovered motif, extended by its most likely next event, and a planted
/// motif match when one is a contiguous run inside the other. The extension has
/// at least two events, so a bare event never matches on its own.
bool motif_matches(const Motif& motif, std::span<const EventId> planted);

TruthComparison compare_with_truth(const Dataset& dataset, const ClusterResult& clusters,
                                   std::span<const MotifSet> motifs, const GroundTruth& truth,
                                   std::size_t top_k = 5);

struct DiscoveryReport {
    PipelineConfig config;
    DiscoveryOutcome discovery;
    MotifOutcome motifs;
    std::vector<ObjectiveReport> objectives;
    std::optional<TruthComparison> truth;
};

DiscoveryReport run_report(const Dataset& dataset, const PipelineConfig& config,
                           const std::optional<GroundTruth>& truth = std::nullopt);

}  // namespace streamclique
