#include <doctest.h>

#include <algorithm>
#include <random>

#include "streamclique/error.hpp"
#include "streamclique/ngram.hpp"
#include "oracles.hpp"

using namespace streamclique;
using oracle::ids;

namespace {

NGram gram(std::initializer_list<std::uint32_t> raw) {
    return NGram{ids(raw)};
}

}  // namespace

TEST_CASE("overlapping windows in order") {
    const auto abcd = ids({0, 1, 2, 3});
    CHECK(extract_ngrams(abcd, 3) == std::vector<NGram>{gram({0, 1, 2}), gram({1, 2, 3})});
    CHECK(extract_ngrams(ids({0, 1}), 3).empty());
    CHECK(extract_ngrams(ids({0, 0, 0}), 1) == std::vector<NGram>(3, gram({0})));
    CHECK_THROWS_AS(extract_ngrams(abcd, 0), InvalidParameter);
    CHECK_THROWS_AS(build_histogram(abcd, 0), InvalidParameter);
}

TEST_CASE("histogram counts") {
    const auto h = build_histogram(ids({0, 1, 0, 1}), 2);
    CHECK(h.total() == 3);
    CHECK(h.support_size() == 2);
    CHECK(h.count(gram({0, 1})) == 2);
    CHECK(h.count(gram({1, 0})) == 1);
    CHECK(h.count(gram({1, 1})) == 0);

    const auto short_one = build_histogram(ids({0, 1}), 3);
    CHECK(short_one.empty());
    CHECK(short_one.total() == 0);
    CHECK(short_one.n() == 3);
}

TEST_CASE("histogram equals a brute-force window scan") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto seq = oracle::random_sequence(rng, 50, 12);
        const auto h = build_histogram(seq, 3);
        CHECK(h.total() == 48);
        CHECK(oracle::to_bag(h) == oracle::window_counts(seq, 3));
    }
}

TEST_CASE("total is L - n + 1 for every n up to L") {
    std::mt19937_64 rng(11);
    for (std::size_t len = 1; len <= 20; ++len) {
        const auto seq = oracle::random_sequence(rng, len, 4);
        for (std::size_t n = 1; n <= len + 2; ++n) {
            const auto h = build_histogram(seq, n);
            CHECK(h.total() == (len >= n ? len - n + 1 : 0));
            for (const auto& [g, c] : h.entries()) {
                CHECK(g.events.size() == n);
                CHECK(c >= 1);
            }
        }
    }
}

TEST_CASE("order matters for n >= 2 but not for monograms") {
    CHECK(build_histogram(ids({0, 1, 2}), 2) != build_histogram(ids({2, 1, 0}), 2));

    std::mt19937_64 rng(5);
    auto seq = oracle::random_sequence(rng, 15, 6);
    const auto reference = build_histogram(seq, 1);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(seq.begin(), seq.end(), rng);
        CHECK(build_histogram(seq, 1) == reference);
    }
}

TEST_CASE("explicit construction validates entries") {
    using E = NGramHistogram::Entry;
    CHECK_NOTHROW(NGramHistogram(2, {E{gram({0, 1}), 2}, E{gram({1, 0}), 1}}));
    CHECK(NGramHistogram(2, {E{gram({0, 1}), 2}, E{gram({1, 0}), 1}}).total() == 3);
    CHECK_THROWS_AS(NGramHistogram(2, {E{gram({1, 0}), 1}, E{gram({0, 1}), 2}}), InvalidParameter);
    CHECK_THROWS_AS(NGramHistogram(2, {E{gram({0, 1}), 0}}), InvalidParameter);
    CHECK_THROWS_AS(NGramHistogram(2, {E{gram({0}), 1}}), InvalidParameter);
}
