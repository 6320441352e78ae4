#include "streamclique/ngram.hpp"

#include <algorithm>
#include <map>

#include "streamclique/error.hpp"

namespace streamclique {

NGramHistogram::NGramHistogram(std::size_t n, std::vector<Entry> entries)
    : n_(n), entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].second == 0)
            throw InvalidParameter("histogram counts must be positive");
        if (entries_[i].first.events.size() != n_)
            throw InvalidParameter("histogram n-gram length differs from n");
        if (i > 0 && !(entries_[i - 1].first < entries_[i].first))
            throw InvalidParameter("histogram entries must be sorted and unique");
        total_ += entries_[i].second;
    }
}

std::uint32_t NGramHistogram::count(const NGram& gram) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), gram,
                               [](const Entry& e, const NGram& g) { return e.first < g; });
    if (it == entries_.end() || it->first != gram)
        return 0;
    return it->second;
}

std::vector<NGram> extract_ngrams(std::span<const EventId> events, std::size_t n) {
    if (n == 0)
        throw InvalidParameter("n-gram length must be at least 1");
    std::vector<NGram> grams;
    if (events.size() < n)
        return grams;
    grams.reserve(events.size() - n + 1);
    for (std::size_t i = 0; i + n <= events.size(); ++i)
        grams.push_back(NGram{{events.begin() + i, events.begin() + i + n}});
    return grams;
}

NGramHistogram build_histogram(std::span<const EventId> events, std::size_t n) {
    std::map<NGram, std::uint32_t> counts;
    for (auto& gram : extract_ngrams(events, n))
        ++counts[std::move(gram)];
    std::vector<NGramHistogram::Entry> entries(std::make_move_iterator(counts.begin()),
                                               std::make_move_iterator(counts.end()));
    return NGramHistogram(n, std::move(entries));
}

}  // namespace streamclique
