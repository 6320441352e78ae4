#include "streamclique/event.hpp"

#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "streamclique/error.hpp"

namespace streamclique {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
    index_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty())
            throw InvalidParameter("vocabulary entry " + std::to_string(i) + " is empty");
        auto [it, inserted] = index_.emplace(names_[i], EventId{static_cast<std::uint32_t>(i)});
        if (!inserted)
            throw InvalidParameter("duplicate vocabulary entry '" + names_[i] + "'");
    }
}

std::optional<EventId> Vocabulary::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

EventId Vocabulary::at(const std::string& name) const {
    if (auto id = find(name))
        return *id;
    throw UnknownEventError(name);
}

Dataset::Dataset(Vocabulary vocabulary, std::vector<ActivityInstance> activities)
    : vocabulary_(std::move(vocabulary)), activities_(std::move(activities)) {
    total_length_ = std::accumulate(activities_.begin(), activities_.end(), std::size_t{0},
                                    [](std::size_t acc, const ActivityInstance& a) {
                                        return acc + a.events.size();
                                    });
}

std::vector<Violation> validate(const Dataset& dataset) {
    std::vector<Violation> report;
    std::unordered_set<std::string> seen;
    const auto vocab_size = dataset.vocabulary().size();
    for (const auto& activity : dataset.activities()) {
        if (!seen.insert(activity.id).second)
            report.push_back({Violation::Kind::DuplicateId, activity.id,
                              "duplicate activity id '" + activity.id + "'"});
        if (activity.events.empty())
            report.push_back({Violation::Kind::EmptyActivity, activity.id,
                              "activity '" + activity.id + "' has no events"});
        for (std::size_t pos = 0; pos < activity.events.size(); ++pos) {
            if (activity.events[pos].index >= vocab_size) {
                report.push_back({Violation::Kind::EventOutOfRange, activity.id,
                                  "activity '" + activity.id + "' position " + std::to_string(pos) +
                                      ": event id " + std::to_string(activity.events[pos].index) +
                                      " outside vocabulary of size " + std::to_string(vocab_size)});
                break;
            }
        }
    }
    return report;
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open vocabulary file " + path.string());
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        names.push_back(line);
    }
    return Vocabulary(std::move(names));
}

void write_vocabulary(const Vocabulary& vocabulary, std::ostream& out) {
    for (const auto& name : vocabulary.names())
        out << name << '\n';
}

namespace {

const nlohmann::json& required_field(const nlohmann::json& record, const char* key,
                                     std::size_t line) {
    auto it = record.find(key);
    if (it == record.end())
        throw ParseError(line, std::string("missing field '") + key + "'");
    return *it;
}

}  // namespace

Dataset ingest(std::istream& in, const std::optional<Vocabulary>& vocabulary) {
    std::map<std::string, std::map<std::int64_t, std::string>> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!record.is_object())
            throw ParseError(line_no, "record is not a JSON object");
        const auto& activity = required_field(record, "activity", line_no);
        const auto& seq = required_field(record, "seq", line_no);
        const auto& event = required_field(record, "event", line_no);
        if (!activity.is_string())
            throw ParseError(line_no, "'activity' must be a string");
        if (!seq.is_number_integer())
            throw ParseError(line_no, "'seq' must be an integer");
        if (!event.is_string())
            throw ParseError(line_no, "'event' must be a string");
        auto name = event.get<std::string>();
        if (name.empty())
            throw ParseError(line_no, "'event' must be non-empty");

        auto& events = records[activity.get<std::string>()];
        auto [it, inserted] = events.emplace(seq.get<std::int64_t>(), std::move(name));
        if (!inserted)
            throw DuplicateRecordError("line " + std::to_string(line_no) +
                                       ": duplicate record for activity '" +
                                       activity.get<std::string>() + "' seq " +
                                       std::to_string(seq.get<std::int64_t>()));
    }

    Vocabulary vocab;
    if (vocabulary) {
        vocab = *vocabulary;
    } else {
        std::set<std::string> names;
        for (const auto& [id, events] : records)
            for (const auto& [seq, name] : events)
                names.insert(name);
        vocab = Vocabulary(std::vector<std::string>(names.begin(), names.end()));
    }

    std::vector<ActivityInstance> activities;
    activities.reserve(records.size());
    for (auto& [id, events] : records) {
        ActivityInstance instance{id, {}};
        instance.events.reserve(events.size());
        for (const auto& [seq, name] : events)
            instance.events.push_back(vocab.at(name));
        activities.push_back(std::move(instance));
    }
    return Dataset(std::move(vocab), std::move(activities));
}

Dataset ingest(const std::filesystem::path& path,
               const std::optional<std::filesystem::path>& vocab_path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open event log " + path.string());
    std::optional<Vocabulary> vocab;
    if (vocab_path)
        vocab = read_vocabulary(*vocab_path);
    return ingest(in, vocab);
}

void export_event_log(const Dataset& dataset, std::ostream& out) {
    const auto& vocab = dataset.vocabulary();
    for (const auto& activity : dataset.activities()) {
        for (std::size_t seq = 0; seq < activity.events.size(); ++seq) {
            nlohmann::ordered_json record;
            record["activity"] = activity.id;
            record["seq"] = seq;
            record["event"] = vocab.name(activity.events[seq]);
            out << record.dump() << '\n';
        }
    }
}

}  // namespace streamclique
