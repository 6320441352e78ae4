#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "streamclique/error.hpp"
#include "streamclique/synthetic.hpp"

using namespace streamclique;

namespace {

bool contains_run(const std::vector<EventId>& seq, const std::vector<EventId>& run) {
    return std::search(seq.begin(), seq.end(), run.begin(), run.end()) != seq.end();
}

std::size_t occurrences(const std::vector<EventId>& seq, const std::vector<EventId>& run) {
    std::size_t count = 0;
    for (auto it = seq.begin(); (it = std::search(it, seq.end(), run.begin(), run.end())) != seq.end(); ++it)
        ++count;
    return count;
}

}  // namespace

TEST_CASE("same spec, same dataset") {
    SyntheticSpec spec;
    const auto first = generate(spec);
    const auto second = generate(spec);
    CHECK(first.dataset == second.dataset);
    CHECK(first.truth.labels == second.truth.labels);
    CHECK(first.truth.motifs == second.truth.motifs);

    std::ostringstream a, b;
    export_event_log(first.dataset, a);
    export_event_log(second.dataset, b);
    CHECK(a.str() == b.str());

    spec.seed = 2;
    CHECK_FALSE(generate(spec).dataset == first.dataset);
}

TEST_CASE("default spec structure") {
    const SyntheticSpec spec;
    const auto data = generate(spec);
    CHECK(data.dataset.size() == 90);
    CHECK(data.dataset.total_length() == 90 * 50);
    CHECK(data.dataset.vocabulary().size() == 12);
    CHECK(validate(data.dataset).empty());
    REQUIRE(data.truth.motifs.size() == 3);

    for (const auto& class_motifs : data.truth.motifs) {
        REQUIRE(class_motifs.size() == 1);
        const auto& motif = class_motifs[0];
        CHECK(motif.size() == 5);
        CHECK(std::set<EventId>(motif.begin(), motif.end()).size() == 5);
    }
    CHECK(data.truth.motifs[0][0] != data.truth.motifs[1][0]);
    CHECK(data.truth.motifs[1][0] != data.truth.motifs[2][0]);

    std::map<int, int> per_label;
    for (std::size_t i = 0; i < data.dataset.size(); ++i) {
        const auto& act = data.dataset[i];
        const int label = data.truth.labels.at(act.id);
        ++per_label[label];
        CHECK(act.events.size() == 50);
        CHECK(occurrences(act.events, data.truth.motifs[label][0]) >= 2);
    }
    CHECK(per_label == std::map<int, int>{{0, 30}, {1, 30}, {2, 30}});
}

TEST_CASE("large vocabularies give disjoint motifs") {
    SyntheticSpec spec;
    spec.vocab_size = 61;
    spec.num_classes = 7;
    spec.instances_per_class = 4;
    spec.noise_instances = 5;
    const auto data = generate(spec);
    std::set<EventId> used;
    std::size_t total = 0;
    for (const auto& class_motifs : data.truth.motifs)
        for (const auto& motif : class_motifs) {
            used.insert(motif.begin(), motif.end());
            total += motif.size();
        }
    CHECK(used.size() == total);
    int noise = 0;
    for (const auto& [id, label] : data.truth.labels)
        noise += label == kNoiseLabel;
    CHECK(noise == 5);
    CHECK(data.dataset.size() == 33);
}

TEST_CASE("noise-free spec with motif_length = sequence_length repeats the motif exactly") {
    SyntheticSpec spec;
    spec.noise_rate = 0.0;
    spec.motif_length = 6;
    spec.sequence_length = 6;
    spec.num_classes = 2;
    spec.instances_per_class = 3;
    const auto data = generate(spec);
    for (const auto& act : data.dataset.activities())
        CHECK(act.events == data.truth.motifs[data.truth.labels.at(act.id)][0]);
}

TEST_CASE("multiple motifs per class all appear") {
    SyntheticSpec spec;
    spec.motifs_per_class = 2;
    spec.motif_length = 3;
    spec.vocab_size = 20;
    const auto data = generate(spec);
    for (const auto& act : data.dataset.activities()) {
        const int label = data.truth.labels.at(act.id);
        for (const auto& motif : data.truth.motifs[label])
            CHECK(contains_run(act.events, motif));
    }
}

TEST_CASE("infeasible specs") {
    SyntheticSpec spec;
    spec.motif_length = 60;
    CHECK_THROWS_AS(generate(spec), SpecError);

    spec = SyntheticSpec{};
    spec.motif_length = 13;
    spec.sequence_length = 100;
    CHECK_THROWS_AS(generate(spec), SpecError);

    spec = SyntheticSpec{};
    spec.noise_rate = 1.5;
    CHECK_THROWS_AS(generate(spec), SpecError);

    spec = SyntheticSpec{};
    spec.noise_rate = 0.95;
    CHECK_THROWS_AS(generate(spec), SpecError);

    spec = SyntheticSpec{};
    spec.vocab_size = 2;
    spec.motif_length = 2;
    spec.num_classes = 3;
    CHECK_THROWS_AS(generate(spec), SpecError);
}

TEST_CASE("held-out instances follow the planted classes") {
    const SyntheticSpec spec;
    const auto data = generate(spec);
    const auto hold = generate_holdout(spec, data.truth, 10, 99);
    CHECK(hold.size() == 30);
    for (const auto& item : hold) {
        CHECK(item.activity.events.size() == 50);
        CHECK(contains_run(item.activity.events, data.truth.motifs[item.label][0]));
        CHECK(data.truth.labels.count(item.activity.id) == 0);
    }
    const auto again = generate_holdout(spec, data.truth, 10, 99);
    CHECK(again.front().activity == hold.front().activity);
}

TEST_CASE("event names sort like their indices") {
    const auto names = synthetic_event_names(61);
    CHECK(names.front() == "e00");
    CHECK(names.back() == "e60");
    CHECK(std::is_sorted(names.begin(), names.end()));
}
