#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "streamclique/error.hpp"
#include "streamclique/event.hpp"
#include "oracles.hpp"

using namespace streamclique;

namespace {

std::string record(const std::string& activity, int seq, const std::string& event) {
    return R"({"activity": ")" + activity + R"(", "seq": )" + std::to_string(seq) + R"(, "event": ")" + event + "\"}\n";
}

}  // namespace

TEST_CASE("vocabulary maps names to dense ids") {
    Vocabulary v({"open", "close", "lift"});
    CHECK(v.size() == 3);
    CHECK(v.at("close") == EventId{1});
    CHECK(v.name(EventId{2}) == "lift");
    CHECK_FALSE(v.find("teleport").has_value());
    CHECK_THROWS_AS(v.at("teleport"), UnknownEventError);
    CHECK_THROWS_AS(Vocabulary({"a", "a"}), InvalidParameter);
    CHECK_THROWS_AS(Vocabulary({"a", ""}), InvalidParameter);
}

TEST_CASE("ingest of an empty file gives an empty dataset") {
    std::istringstream empty("");
    const Dataset d = ingest(empty);
    CHECK(d.size() == 0);
    CHECK(d.vocabulary().empty());
    CHECK(d.total_length() == 0);

    std::istringstream again("");
    const Dataset with_vocab = ingest(again, Vocabulary({"a", "b", "c"}));
    CHECK(with_vocab.size() == 0);
    CHECK(with_vocab.vocabulary().size() == 3);
}

TEST_CASE("total length sums activity lengths") {
    std::string log;
    for (int i = 0; i < 3; ++i)
        log += record("x", i, "a");
    for (int i = 0; i < 4; ++i)
        log += record("y", i, "b");
    std::istringstream in(log);
    const Dataset d = ingest(in);
    CHECK(d.size() == 2);
    CHECK(d.total_length() == 7);
}

TEST_CASE("events are ordered by seq and the vocabulary is induced lexicographically") {
    std::istringstream in(record("A1", 7, "zeta") + record("A1", 2, "alpha") + "\n" +
                          record("A1", 5, "mid"));
    const Dataset d = ingest(in);
    REQUIRE(d.size() == 1);
    CHECK(d.vocabulary().names() == std::vector<std::string>{"alpha", "mid", "zeta"});
    CHECK(d[0].events == oracle::ids({0, 1, 2}));
}

TEST_CASE("ingest ignores extra fields such as timestamps") {
    std::istringstream in(R"({"activity":"a","seq":0,"event":"x","timestamp":"2009-01-01T00:00:00"})" "\n");
    const Dataset d = ingest(in);
    CHECK(d.total_length() == 1);
}

TEST_CASE("ingest errors") {
    SUBCASE("unknown event against a supplied vocabulary names the event") {
        std::istringstream in(record("a", 0, "a") + record("a", 1, "teleport"));
        try {
            ingest(in, Vocabulary({"a", "b", "c"}));
            FAIL("expected UnknownEventError");
        } catch (const UnknownEventError& e) {
            CHECK(e.name() == "teleport");
            CHECK(std::string(e.what()).find("teleport") != std::string::npos);
        }
    }
    SUBCASE("malformed line reports its line number") {
        std::istringstream in(record("a", 0, "x") + "{not json\n");
        try {
            ingest(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("missing or mistyped fields") {
        std::istringstream missing(R"({"activity":"a","event":"x"})" "\n");
        CHECK_THROWS_AS(ingest(missing), ParseError);
        std::istringstream wrong(R"({"activity":"a","seq":"zero","event":"x"})" "\n");
        CHECK_THROWS_AS(ingest(wrong), ParseError);
    }
    SUBCASE("duplicate (activity, seq)") {
        std::istringstream in(record("a", 0, "x") + record("a", 0, "y"));
        CHECK_THROWS_AS(ingest(in), DuplicateRecordError);
    }
}

TEST_CASE("validate reports each broken invariant") {
    const Vocabulary v({"a", "b"});
    CHECK(validate(Dataset(v, {{"x", oracle::ids({0, 1})}})).empty());

    const auto empty = validate(Dataset(v, {{"x", oracle::ids({0})}, {"hollow", {}}}));
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].kind == Violation::Kind::EmptyActivity);
    CHECK(empty[0].activity_id == "hollow");

    const auto dup = validate(Dataset(v, {{"A7", oracle::ids({0})}, {"A7", oracle::ids({1})}}));
    REQUIRE(dup.size() == 1);
    CHECK(dup[0].kind == Violation::Kind::DuplicateId);

    const auto range = validate(Dataset(v, {{"x", oracle::ids({0, 5})}}));
    REQUIRE(range.size() == 1);
    CHECK(range[0].kind == Violation::Kind::EventOutOfRange);
}

TEST_CASE("export then ingest is the identity") {
    std::mt19937_64 rng(42);
    const Vocabulary v({"e0", "e1", "e2", "e3", "e4"});
    std::vector<ActivityInstance> acts;
    for (int i = 0; i < 12; ++i)
        acts.push_back({"act" + std::to_string(100 + i), oracle::random_sequence(rng, 1 + i * 3, 5)});
    const Dataset original(v, acts);

    std::ostringstream out;
    export_event_log(original, out);
    std::istringstream in(out.str());
    CHECK(ingest(in, v) == original);
}

TEST_CASE("line order does not matter") {
    std::vector<std::string> lines;
    for (int a = 0; a < 4; ++a)
        for (int s = 0; s < 6; ++s)
            lines.push_back(record("act" + std::to_string(a), s * 10, "ev" + std::to_string((a * 7 + s * 3) % 5)));
    auto join = [](const std::vector<std::string>& ls) {
        std::string out;
        for (const auto& l : ls)
            out += l;
        return out;
    };
    std::istringstream first(join(lines));
    const Dataset reference = ingest(first);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(lines.begin(), lines.end(), rng);
        std::istringstream in(join(lines));
        CHECK(ingest(in) == reference);
    }
}

TEST_CASE("vocabulary file round trip") {
    const Vocabulary v({"Person opens door", "cart is full", "x"});
    std::ostringstream out;
    write_vocabulary(v, out);
    CHECK(out.str() == "Person opens door\ncart is full\nx\n");
}
