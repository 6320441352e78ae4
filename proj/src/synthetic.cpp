#include "streamclique/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "streamclique/error.hpp"

namespace streamclique {

namespace {

using Rng = std::mt19937_64;

std::size_t background_count(const SyntheticSpec& spec) {
    return static_cast<std::size_t>(std::lround(spec.noise_rate * static_cast<double>(spec.sequence_length)));
}

std::size_t motif_occurrences(const SyntheticSpec& spec) {
    return (spec.sequence_length - background_count(spec)) / spec.motif_length;
}

// Number of length-m sequences of distinct events, saturating at `cap`.
std::size_t distinct_sequences(std::size_t vocab, std::size_t m, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        total *= vocab - i;
        if (total >= cap)
            return cap;
    }
    return total;
}

std::string padded(const char* prefix, std::size_t value, std::size_t width) {
    std::string digits = std::to_string(value);
    if (digits.size() < width)
        digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

std::vector<std::vector<std::vector<EventId>>> plant_motifs(const SyntheticSpec& spec, Rng& rng) {
    std::vector<EventId> vocab(spec.vocab_size);
    for (std::size_t i = 0; i < vocab.size(); ++i)
        vocab[i] = EventId{static_cast<std::uint32_t>(i)};

    // Events are dealt from successive shuffles of the vocabulary, so motifs use
    // disjoint events whenever the vocabulary is large enough.
    std::deque<EventId> pool;
    auto draw_motif = [&] {
        std::vector<EventId> motif;
        std::vector<EventId> deferred;
        while (motif.size() < spec.motif_length) {
            if (pool.empty()) {
                std::shuffle(vocab.begin(), vocab.end(), rng);
                pool.insert(pool.end(), vocab.begin(), vocab.end());
            }
            const EventId e = pool.front();
            pool.pop_front();
            if (std::find(motif.begin(), motif.end(), e) != motif.end())
                deferred.push_back(e);
            else
                motif.push_back(e);
        }
        pool.insert(pool.begin(), deferred.begin(), deferred.end());
        return motif;
    };

    std::vector<std::vector<EventId>> planted;
    std::vector<std::vector<std::vector<EventId>>> motifs(spec.num_classes);
    for (auto& class_motifs : motifs) {
        for (std::size_t k = 0; k < spec.motifs_per_class; ++k) {
            auto motif = draw_motif();
            for (int attempt = 0; std::find(planted.begin(), planted.end(), motif) != planted.end();
                 ++attempt) {
                if (attempt == 1000)
                    throw SpecError("could not draw pairwise distinct motifs");
                std::shuffle(vocab.begin(), vocab.end(), rng);
                motif.assign(vocab.begin(), vocab.begin() + static_cast<std::ptrdiff_t>(spec.motif_length));
            }
            planted.push_back(motif);
            class_motifs.push_back(std::move(motif));
        }
    }
    return motifs;
}

std::vector<EventId> background_sequence(std::size_t length, std::size_t vocab_size, Rng& rng) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(vocab_size - 1));
    std::vector<EventId> events(length);
    for (auto& e : events)
        e = EventId{pick(rng)};
    return events;
}

std::vector<EventId> class_instance(const SyntheticSpec& spec,
                                    const std::vector<std::vector<EventId>>& motifs, Rng& rng) {
    const std::size_t occurrences = motif_occurrences(spec);
    const std::size_t singles = spec.sequence_length - occurrences * spec.motif_length;

    // -1 marks a background event, k >= 0 an intact copy of motif k.
    std::vector<int> blocks;
    blocks.reserve(occurrences + singles);
    for (std::size_t i = 0; i < occurrences; ++i)
        blocks.push_back(static_cast<int>(i % motifs.size()));
    blocks.insert(blocks.end(), singles, -1);
    std::shuffle(blocks.begin(), blocks.end(), rng);

    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(spec.vocab_size - 1));
    std::vector<EventId> events;
    events.reserve(spec.sequence_length);
    for (int block : blocks) {
        if (block < 0) {
            events.push_back(EventId{pick(rng)});
        } else {
            const auto& motif = motifs[static_cast<std::size_t>(block)];
            events.insert(events.end(), motif.begin(), motif.end());
        }
    }
    return events;
}

}  // namespace

std::vector<std::string> synthetic_event_names(std::size_t vocab_size) {
    const std::size_t width = std::max<std::size_t>(2, std::to_string(vocab_size == 0 ? 0 : vocab_size - 1).size());
    std::vector<std::string> names;
    names.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i)
        names.push_back(padded("e", i, width));
    return names;
}

void check_spec(const SyntheticSpec& spec) {
    if (spec.vocab_size == 0)
        throw SpecError("vocab_size must be positive");
    if (spec.sequence_length == 0)
        throw SpecError("sequence_length must be positive");
    if (!(spec.noise_rate >= 0.0 && spec.noise_rate <= 1.0))
        throw SpecError("noise_rate must lie in [0, 1]");
    if (spec.num_classes == 0 && spec.noise_instances == 0)
        throw SpecError("spec generates no activities");
    if (spec.num_classes == 0)
        return;
    if (spec.instances_per_class == 0)
        throw SpecError("instances_per_class must be positive");
    if (spec.motifs_per_class == 0)
        throw SpecError("motifs_per_class must be positive");
    if (spec.motif_length == 0 || spec.motif_length > spec.sequence_length)
        throw SpecError("motif_length must lie in [1, sequence_length]");
    if (spec.motif_length > spec.vocab_size)
        throw SpecError("motif_length exceeds vocab_size (motif events are distinct)");
    const std::size_t motifs = spec.num_classes * spec.motifs_per_class;
    if (distinct_sequences(spec.vocab_size, spec.motif_length, motifs) < motifs)
        throw SpecError("vocabulary too small for " + std::to_string(motifs) + " distinct motifs");
    if (motif_occurrences(spec) < spec.motifs_per_class)
        throw SpecError("only " + std::to_string(motif_occurrences(spec)) +
                        " motif occurrences fit in a sequence of length " +
                        std::to_string(spec.sequence_length) + " at noise rate " +
                        std::to_string(spec.noise_rate) + "; need " +
                        std::to_string(spec.motifs_per_class));
}

SyntheticData generate(const SyntheticSpec& spec) {
    check_spec(spec);
    Rng rng(spec.seed);

    SyntheticData out;
    out.truth.motifs = plant_motifs(spec, rng);

    std::vector<LabelledActivity> instances;
    for (std::size_t c = 0; c < spec.num_classes; ++c)
        for (std::size_t i = 0; i < spec.instances_per_class; ++i)
            instances.push_back({{"", class_instance(spec, out.truth.motifs[c], rng)}, static_cast<int>(c)});
    for (std::size_t i = 0; i < spec.noise_instances; ++i)
        instances.push_back({{"", background_sequence(spec.sequence_length, spec.vocab_size, rng)}, kNoiseLabel});

    std::vector<std::size_t> order(instances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t width = std::max<std::size_t>(4, std::to_string(instances.size()).size());
    std::vector<ActivityInstance> activities;
    activities.reserve(instances.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        auto& inst = instances[order[pos]];
        inst.activity.id = padded("a", pos, width);
        out.truth.labels.emplace(inst.activity.id, inst.label);
        activities.push_back(std::move(inst.activity));
    }
    out.dataset = Dataset(Vocabulary(synthetic_event_names(spec.vocab_size)), std::move(activities));
    return out;
}

std::vector<LabelledActivity> generate_holdout(const SyntheticSpec& spec, const GroundTruth& truth,
                                               std::size_t per_class, std::uint64_t seed) {
    check_spec(spec);
    std::seed_seq seq{seed, std::uint64_t{0x686f6c646f7574}};
    Rng rng(seq);
    std::vector<LabelledActivity> out;
    const std::size_t width = std::max<std::size_t>(4, std::to_string(truth.motifs.size() * per_class).size());
    for (std::size_t c = 0; c < truth.motifs.size(); ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            LabelledActivity item{{padded("h", out.size(), width), class_instance(spec, truth.motifs[c], rng)},
                                  static_cast<int>(c)};
            out.push_back(std::move(item));
        }
    }
    return out;
}

}  // namespace streamclique
