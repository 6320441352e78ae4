#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "streamclique/error.hpp"
#include "streamclique/pipeline.hpp"
#include "oracles.hpp"

using namespace streamclique;
using oracle::ids;

namespace {

Dataset make_dataset(const std::vector<std::vector<EventId>>& seqs, std::size_t vocab = 10) {
    std::vector<ActivityInstance> acts;
    for (std::size_t i = 0; i < seqs.size(); ++i)
        acts.push_back({"act" + std::to_string(10 + i), seqs[i]});
    return Dataset(Vocabulary(synthetic_event_names(vocab)), acts);
}

std::vector<EventId> repeat(std::initializer_list<std::uint32_t> cycle, std::size_t times) {
    std::vector<EventId> out;
    for (std::size_t t = 0; t < times; ++t)
        for (auto e : cycle)
            out.push_back(EventId{e});
    return out;
}

// Five copies of one cyclic activity over events 0..4, four of another over 5..9.
Dataset two_blocks() {
    std::vector<std::vector<EventId>> seqs;
    for (int i = 0; i < 5; ++i)
        seqs.push_back(repeat({0, 1, 2, 3, 4}, 4));
    for (int i = 0; i < 4; ++i)
        seqs.push_back(repeat({5, 6, 7, 8, 9}, 4));
    return make_dataset(seqs);
}

std::set<std::size_t> as_set(const NodeSubset& s) {
    return {s.begin(), s.end()};
}

std::uint8_t pixel(const std::string& pgm, std::size_t k, std::size_t i, std::size_t j) {
    const std::string header = "P5\n" + std::to_string(k) + " " + std::to_string(k) + "\n255\n";
    return static_cast<std::uint8_t>(pgm[header.size() + i * k + j]);
}

ClusterResult clusters_of(std::vector<NodeSubset> classes, NodeSubset leftover = {}) {
    ClusterResult r;
    for (auto& members : classes) {
        DiscoveredClass cls;
        cls.membership_weights.assign(members.size(), 1.0 / static_cast<double>(members.size()));
        cls.members = std::move(members);
        r.classes.push_back(std::move(cls));
    }
    r.leftover = std::move(leftover);
    return r;
}

}  // namespace

TEST_CASE("config validation") {
    PipelineConfig c;
    CHECK_NOTHROW(c.validate());
    auto broken = [](auto mutate) {
        PipelineConfig cfg;
        mutate(cfg);
        return cfg;
    };
    CHECK_THROWS_AS(broken([](PipelineConfig& x) { x.n = 0; }).validate(), InvalidParameter);
    CHECK_THROWS_AS(broken([](PipelineConfig& x) { x.k_param = 0.0; }).validate(), InvalidParameter);
    CHECK_THROWS_AS(broken([](PipelineConfig& x) { x.max_depth = 0; }).validate(), InvalidParameter);
    CHECK_THROWS_AS(broken([](PipelineConfig& x) { x.min_clique_size = 1; }).validate(), InvalidParameter);
    CHECK_THROWS_AS(broken([](PipelineConfig& x) { x.epsilon = 0.0; }).validate(), InvalidParameter);
    CHECK_THROWS_AS(broken([](PipelineConfig& x) { x.support_threshold = 1.0; }).validate(), InvalidParameter);
    CHECK_THROWS_AS(broken([](PipelineConfig& x) { x.smoothing = 0.0; }).validate(), InvalidParameter);
}

TEST_CASE("discovery") {
    SUBCASE("three identical activities form one class") {
        const auto d = make_dataset({repeat({0, 1, 2}, 3), repeat({0, 1, 2}, 3), repeat({0, 1, 2}, 3)});
        const auto out = run_discovery(d, {});
        REQUIRE(out.clusters.classes.size() == 1);
        CHECK(out.clusters.classes[0].members == NodeSubset{0, 1, 2});
        CHECK(out.clusters.leftover.empty());
    }
    SUBCASE("two planted blocks") {
        const auto out = run_discovery(two_blocks(), {});
        REQUIRE(out.clusters.classes.size() == 2);
        CHECK(as_set(out.clusters.classes[0].members) == std::set<std::size_t>{0, 1, 2, 3, 4});
        CHECK(as_set(out.clusters.classes[1].members) == std::set<std::size_t>{5, 6, 7, 8});
        CHECK(out.clusters.leftover.empty());
    }
    SUBCASE("a single activity is leftover") {
        const auto out = run_discovery(make_dataset({repeat({0, 1, 2}, 3)}), {});
        CHECK(out.clusters.classes.empty());
        CHECK(out.clusters.leftover == NodeSubset{0});
    }
    SUBCASE("activities shorter than n skip the graph") {
        auto seqs = std::vector<std::vector<EventId>>(3, repeat({0, 1, 2}, 3));
        seqs.push_back(ids({4, 5}));
        const auto out = run_discovery(make_dataset(seqs), {});
        CHECK(out.matrix.size() == 3);
        CHECK(out.matrix_rows == std::vector<std::size_t>{0, 1, 2});
        CHECK(out.histograms[3].empty());
        CHECK(out.clusters.leftover == NodeSubset{3});
        REQUIRE_FALSE(out.warnings.empty());
        CHECK(out.warnings[0].find("act13") != std::string::npos);
    }
}

TEST_CASE("discovery is deterministic and independent of the execution mode") {
    PipelineConfig serial, parallel;
    serial.execution = Execution::Serial;
    const auto d = generate(SyntheticSpec{}).dataset;
    const auto a = run_discovery(d, serial);
    const auto b = run_discovery(d, parallel);
    CHECK(a.matrix == b.matrix);
    REQUIRE(a.clusters.classes.size() == b.clusters.classes.size());
    for (std::size_t k = 0; k < a.clusters.classes.size(); ++k) {
        CHECK(a.clusters.classes[k].members == b.clusters.classes[k].members);
        CHECK(a.clusters.classes[k].membership_weights == b.clusters.classes[k].membership_weights);
    }
    CHECK(a.clusters.leftover == b.clusters.leftover);
}

TEST_CASE("motifs") {
    SUBCASE("no classes") {
        const auto d = make_dataset({repeat({0, 1}, 3)});
        CHECK_THROWS_AS(run_motifs(d, ClusterResult{}, {}), InvalidParameter);
    }
    SUBCASE("a single class keeps psi equal to delta") {
        const auto d = make_dataset({repeat({0, 1, 2}, 5), repeat({0, 1, 2}, 5), repeat({0, 1, 2}, 5)});
        const auto out = run_motifs(d, clusters_of({{0, 1, 2}}), {});
        REQUIRE(out.models.size() == 1);
        for (const auto& node : out.models[0].nodes())
            if (node.depth() > 0)
                CHECK(node.psi == node.deltas[0]);
        CHECK_FALSE(out.motifs[0].motifs.empty());
    }
    SUBCASE("two classes: bit gain of the worked context") {
        const auto d = make_dataset({ids({0, 1, 0, 1, 0, 1}), ids({1, 0, 1, 0, 1, 0})}, 2);
        PipelineConfig cfg;
        cfg.k_param = 0.01;
        cfg.max_depth = 1;
        const auto out = run_motifs(d, clusters_of({{0}, {1}}), cfg);
        const auto& model = out.models[0];
        const auto node = model.find(ids({0}));
        REQUIRE(node.has_value());
        CHECK(model.nodes()[*node].psi == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("leftover activities take no part in training") {
        const auto d = make_dataset({repeat({0, 1, 2}, 4), repeat({0, 1, 2}, 4), repeat({0, 1, 2}, 4),
                                     repeat({7, 8, 9}, 4)});
        const auto out = run_motifs(d, clusters_of({{0, 1, 2}}, {3}), {});
        CHECK(out.models[0].root().counts.total == 36);
        CHECK(out.models[0].root().counts.count(EventId{7}) == 0);
    }
    SUBCASE("tiny classes warn") {
        const auto d = make_dataset({ids({3}), repeat({0, 1}, 3), repeat({0, 1}, 3)});
        const auto out = run_motifs(d, clusters_of({{1, 2}, {0}}), {});
        REQUIRE(out.warnings.size() == 1);
        CHECK(out.warnings[0].find("class 1") != std::string::npos);
    }
}

TEST_CASE("similarity image") {
    SUBCASE("2 x 2 pixels") {
        const std::string pgm = render_similarity_image(SimilarityMatrix(2, {0, 0.5, 0.5, 0}));
        const std::string expected = std::string("P5\n2 2\n255\n") + '\x00' + '\x80' + '\x80' + '\x00';
        CHECK(pgm == expected);
    }
    SUBCASE("all-ones similarity is white off the diagonal") {
        const std::size_t k = 4;
        std::vector<double> v(k * k, 1.0);
        for (std::size_t i = 0; i < k; ++i)
            v[i * k + i] = 0.0;
        const auto pgm = render_similarity_image(SimilarityMatrix(k, v));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                CHECK(pixel(pgm, k, i, j) == (i == j ? 0 : 255));
    }
    SUBCASE("permutation") {
        const SimilarityMatrix m(3, {0, 0.2, 0.6, 0.2, 0, 1.0, 0.6, 1.0, 0});
        const std::vector<std::size_t> order{2, 0, 1};
        const auto pgm = render_similarity_image(m, std::span<const std::size_t>(order));
        CHECK(pixel(pgm, 3, 0, 1) == std::lround(255 * 0.6));
        CHECK(pixel(pgm, 3, 0, 2) == 255);
        CHECK(pixel(pgm, 3, 1, 2) == std::lround(255 * 0.2));
        const std::vector<std::size_t> bad{0, 0, 1}, short_one{0, 1};
        CHECK_THROWS_AS(render_similarity_image(m, std::span<const std::size_t>(bad)), InvalidParameter);
        CHECK_THROWS_AS(render_similarity_image(m, std::span<const std::size_t>(short_one)), InvalidParameter);
    }
    SUBCASE("sorting by cluster makes the blocks diagonal") {
        const auto out = run_discovery(two_blocks(), {});
        const auto order = cluster_ordering(out);
        CHECK(order == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8});
        const auto pgm = render_similarity_image(out.matrix, std::span<const std::size_t>(order));
        double within = 0.0, across = 0.0;
        std::size_t nw = 0, na = 0;
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) {
                if (i == j)
                    continue;
                if ((i < 5) == (j < 5)) {
                    within += pixel(pgm, 9, i, j);
                    ++nw;
                } else {
                    across += pixel(pgm, 9, i, j);
                    ++na;
                }
            }
        CHECK(within / nw > across / na);
    }
}

TEST_CASE("comparison with planted truth") {
    const auto d = two_blocks();
    GroundTruth truth;
    for (std::size_t i = 0; i < d.size(); ++i)
        truth.labels[d[i].id] = i < 5 ? 0 : 1;
    truth.motifs = {{ids({0, 1, 2})}, {ids({5, 6, 7})}};
    const auto report = run_report(d, {}, truth);
    REQUIRE(report.truth.has_value());
    const auto& t = *report.truth;
    CHECK(t.class_labels == std::vector<int>{0, 1});
    CHECK(t.purity == 1.0);
    CHECK(t.coverage == 1.0);
    CHECK(t.leftover_is_noise);
    CHECK(report.objectives.size() == 2);
}

TEST_CASE("motif matching") {
    Motif m;
    m.events = ids({1, 2});
    m.next = {{EventId{3}, 0.9}, {EventId{0}, 0.1}};
    CHECK(motif_matches(m, ids({0, 1, 2, 3, 4})));
    CHECK(motif_matches(m, ids({2, 3})));
    CHECK_FALSE(motif_matches(m, ids({1, 2, 4})));
    Motif bare;
    bare.events = ids({1});
    CHECK_FALSE(motif_matches(bare, ids({1, 2})));
}
