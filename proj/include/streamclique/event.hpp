#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace streamclique {

/// Dense index of an event inside a Vocabulary.
struct EventId {
    std::uint32_t index = 0;

    constexpr auto operator<=>(const EventId&) const = default;
};

class Vocabulary {
public:
    Vocabulary() = default;
    /// Throws InvalidParameter on empty or duplicate names.
    explicit Vocabulary(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }
    const std::string& name(EventId id) const { return names_.at(id.index); }
    std::optional<EventId> find(const std::string& name) const;
    /// Throws UnknownEventError.
    EventId at(const std::string& name) const;
    const std::vector<std::string>& names() const noexcept { return names_; }

    bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, EventId> index_;
};

struct ActivityInstance {
    std::string id;
    std::vector<EventId> events;

    bool operator==(const ActivityInstance&) const = default;
};

/// Vocabulary plus pre-segmented activities. Not validated on construction; see validate().
class Dataset {
public:
    Dataset() = default;
    Dataset(Vocabulary vocabulary, std::vector<ActivityInstance> activities);

    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    const std::vector<ActivityInstance>& activities() const noexcept { return activities_; }
    std::size_t size() const noexcept { return activities_.size(); }
    const ActivityInstance& operator[](std::size_t i) const { return activities_[i]; }
    /// Sum of all activity lengths.
    std::size_t total_length() const noexcept { return total_length_; }

    bool operator==(const Dataset&) const = default;

private:
    Vocabulary vocabulary_;
    std::vector<ActivityInstance> activities_;
    std::size_t total_length_ = 0;
};

struct Violation {
    enum class Kind { EmptyActivity, EventOutOfRange, DuplicateId };
    Kind kind;
    std::string activity_id;
    std::string message;
};

/// Lists every broken Dataset invariant; empty iff the dataset is well formed.
std::vector<Violation> validate(const Dataset& dataset);

/// Reads a newline-separated vocabulary file (index = line number).
Vocabulary read_vocabulary(const std::filesystem::path& path);
void write_vocabulary(const Vocabulary& vocabulary, std::ostream& out);

/// Parses a JSON-lines event log. Each record needs `activity`, `seq` and `event`;
/// any other field (timestamps) is ignored. Activities come back sorted by id and
/// events sorted by `seq`, so the result does not depend on line order. Without an
/// explicit vocabulary one is induced from the data in lexicographic order.
Dataset ingest(std::istream& in, const std::optional<Vocabulary>& vocabulary = std::nullopt);
Dataset ingest(const std::filesystem::path& path,
               const std::optional<std::filesystem::path>& vocab_path = std::nullopt);

/// Writes the dataset as a JSON-lines log with seq = 0..L-1; ingest() inverts it.
void export_event_log(const Dataset& dataset, std::ostream& out);

}  // namespace streamclique
