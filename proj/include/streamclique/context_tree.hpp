#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "streamclique/event.hpp"
#include "streamclique/kernels.hpp"

namespace streamclique {

using ClassIndex = std::size_t;

/// Next-event counts N(s, y) of one context in one class slice; total = N(s).
struct NextCounts {
    std::uint64_t total = 0;
    std::vector<std::pair<EventId, std::uint64_t>> next;  // sorted by event

    std::uint64_t count(EventId y) const;
    void add(EventId y, std::uint64_t k = 1);

    bool operator==(const NextCounts&) const = default;
};

/// Bits saved by predicting the events that follow s with s rather than with its
/// suffix:  sum_y N(s,y) log2( p(y|s) / p(y|suffix(s)) ),  maximum-likelihood p.
/// Zero when s never occurs.
double bit_saving(const NextCounts& context, const NextCounts& suffix);

/// Shared context trie over all class slices. The root is the empty context; a
/// child extends its parent one event further into the past, so the parent of
/// a node is exactly suffix(s) (s with its oldest event removed).
///
/// Counts cover every position of every activity: for position i and each depth
/// m <= min(i, max_depth) the context (y_{i-1}, ..., y_{i-m}) is credited with
/// next event y_i. Windows never cross activity boundaries.
class ContextTrie {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    struct Node {
        EventId edge;                // oldest event of the context (unused at the root)
        std::size_t parent = npos;   // suffix(s)
        std::size_t depth = 0;
        std::vector<std::pair<EventId, std::size_t>> children;  // sorted by edge
        std::vector<NextCounts> counts;                         // one per class
    };

    ContextTrie(std::size_t num_classes, std::size_t max_depth);

    void add_activity(ClassIndex c, std::span<const EventId> events);

    std::size_t num_classes() const noexcept { return num_classes_; }
    std::size_t max_depth() const noexcept { return max_depth_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const Node& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    std::size_t child(std::size_t node, EventId y) const;
    /// Node for a context given most-recent-first, or nullopt if never seen.
    std::optional<std::size_t> find(std::span<const EventId> context) const;
    /// Context of a node, most-recent-first.
    std::vector<EventId> context(std::size_t node) const;

private:
    std::size_t child_or_insert(std::size_t node, EventId y);

    std::size_t num_classes_;
    std::size_t max_depth_;
    std::vector<Node> nodes_;
};

/// Activities grouped by discovered class; leftover activities appear nowhere.
struct ClassAssignment {
    std::vector<std::vector<std::size_t>> members;  // dataset indices per class

    std::size_t num_classes() const noexcept { return members.size(); }
    std::optional<ClassIndex> class_of(std::size_t activity) const;
};

/// Throws InvalidParameter when max_depth == 0 and EmptyClass naming the first
/// class without activities.
ContextTrie build_counts(const Dataset& dataset, const ClassAssignment& assignment,
                         std::size_t max_depth);

/// Bit saving of `node` in class slice `c` (0 for the root or unseen contexts).
double delta(const ContextTrie& trie, std::size_t node, ClassIndex c);

/// Class-exclusive bit gain: delta in c minus the summed delta of every other class.
double psi(const ContextTrie& trie, std::size_t node, ClassIndex c);
/// Same, reading precomputed savings laid out as [node * classes + class].
double psi(std::span<const double> savings, std::size_t num_classes, std::size_t node,
           ClassIndex c);

/// delta() for every (node, class) pair, laid out as [node * classes + class].
std::vector<double> all_bit_savings(const ContextTrie& trie,
                                    Execution execution = Execution::Parallel);

}  // namespace streamclique
