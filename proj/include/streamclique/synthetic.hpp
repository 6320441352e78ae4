#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "streamclique/event.hpp"

namespace streamclique {

struct SyntheticSpec {
    std::size_t vocab_size = 12;
    std::size_t num_classes = 3;
    std::size_t instances_per_class = 30;
    std::size_t sequence_length = 50;
    std::size_t motifs_per_class = 1;
    std::size_t motif_length = 5;
    double noise_rate = 0.3;  // share of each instance filled with i.i.d. background events
    std::size_t noise_instances = 0;  // extra activities made only of background events
    std::uint64_t seed = 1;
};

inline constexpr int kNoiseLabel = -1;

struct GroundTruth {
    /// Activity id -> planted class, or kNoiseLabel for structureless instances.
    std::map<std::string, int> labels;
    /// motifs[c] = planted motifs of class c, oldest event first.
    std::vector<std::vector<std::vector<EventId>>> motifs;
};

struct SyntheticData {
    Dataset dataset;
    GroundTruth truth;
};

/// Throws SpecError when the spec is infeasible (a motif does not fit, motifs
/// cannot be made distinct, noise rate outside [0, 1], ...).
void check_spec(const SyntheticSpec& spec);

/// Builds each class instance by shuffling intact motif occurrences (each motif
/// of the class at least once, round-robin) with single background events drawn
/// uniformly from the vocabulary. Activity ids are assigned after a global
/// shuffle, so classes interleave in id order. Deterministic in spec.seed.
SyntheticData generate(const SyntheticSpec& spec);

struct LabelledActivity {
    ActivityInstance activity;
    int label = kNoiseLabel;
};

/// Fresh instances of the planted classes in `truth` (for held-out scoring),
/// `per_class` for every class, drawn from an independent stream keyed by `seed`.
std::vector<LabelledActivity> generate_holdout(const SyntheticSpec& spec, const GroundTruth& truth,
                                               std::size_t per_class, std::uint64_t seed);

/// Names used for synthetic vocabularies: e00, e01, ... (zero padded so that the
/// lexicographic order equals the index order).
std::vector<std::string> synthetic_event_names(std::size_t vocab_size);

}  // namespace streamclique
