#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "streamclique/event.hpp"

namespace streamclique {

struct NGram {
    std::vector<EventId> events;

    auto operator<=>(const NGram&) const = default;
    bool operator==(const NGram&) const = default;
};

/// Sparse bag of overlapping n-grams. Entries are sorted by n-gram and every
/// stored count is at least 1.
class NGramHistogram {
public:
    using Entry = std::pair<NGram, std::uint32_t>;

    NGramHistogram() = default;
    explicit NGramHistogram(std::size_t n) : n_(n) {}
    /// `entries` must be sorted, unique and positive; total is recomputed.
    NGramHistogram(std::size_t n, std::vector<Entry> entries);

    std::size_t n() const noexcept { return n_; }
    std::size_t total() const noexcept { return total_; }
    /// Number of distinct n-grams (the cardinality of the support set).
    std::size_t support_size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::uint32_t count(const NGram& gram) const;

    bool operator==(const NGramHistogram&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t total_ = 0;
    std::vector<Entry> entries_;
};

/// The L - n + 1 overlapping windows in sequence order. Throws InvalidParameter if n == 0.
std::vector<NGram> extract_ngrams(std::span<const EventId> events, std::size_t n);
inline std::vector<NGram> extract_ngrams(const ActivityInstance& activity, std::size_t n) {
    return extract_ngrams(std::span<const EventId>(activity.events), n);
}

NGramHistogram build_histogram(std::span<const EventId> events, std::size_t n);
inline NGramHistogram build_histogram(const ActivityInstance& activity, std::size_t n) {
    return build_histogram(std::span<const EventId>(activity.events), n);
}

}  // namespace streamclique
