#include "streamclique/context_tree.hpp"

#include <algorithm>
#include <cmath>

#include "streamclique/error.hpp"

namespace streamclique {

namespace {

template <typename Vec>
auto lower_bound_event(Vec& pairs, EventId y) {
    return std::lower_bound(pairs.begin(), pairs.end(), y,
                            [](const auto& p, EventId e) { return p.first < e; });
}

}  // namespace

std::uint64_t NextCounts::count(EventId y) const {
    auto it = lower_bound_event(next, y);
    return (it != next.end() && it->first == y) ? it->second : 0;
}

void NextCounts::add(EventId y, std::uint64_t k) {
    auto it = lower_bound_event(next, y);
    if (it != next.end() && it->first == y)
        it->second += k;
    else
        next.insert(it, {y, k});
    total += k;
}

double bit_saving(const NextCounts& context, const NextCounts& suffix) {
    if (context.total == 0)
        return 0.0;
    const double n_s = static_cast<double>(context.total);
    const double n_suffix = static_cast<double>(suffix.total);
    double bits = 0.0;
    for (const auto& [y, n] : context.next) {
        const double p_s = static_cast<double>(n) / n_s;
        const double p_suffix = static_cast<double>(suffix.count(y)) / n_suffix;
        bits += static_cast<double>(n) * std::log2(p_s / p_suffix);
    }
    return bits;
}

ContextTrie::ContextTrie(std::size_t num_classes, std::size_t max_depth)
    : num_classes_(num_classes), max_depth_(max_depth) {
    if (max_depth == 0)
        throw InvalidParameter("max_depth must be at least 1");
    nodes_.push_back(Node{EventId{}, npos, 0, {}, std::vector<NextCounts>(num_classes)});
}

std::size_t ContextTrie::child(std::size_t node, EventId y) const {
    const auto& children = nodes_[node].children;
    auto it = lower_bound_event(children, y);
    return (it != children.end() && it->first == y) ? it->second : npos;
}

std::size_t ContextTrie::child_or_insert(std::size_t node, EventId y) {
    auto& children = nodes_[node].children;
    auto it = lower_bound_event(children, y);
    if (it != children.end() && it->first == y)
        return it->second;
    const std::size_t index = nodes_.size();
    children.insert(it, {y, index});
    // `children` may dangle after the push_back below.
    const std::size_t depth = nodes_[node].depth + 1;
    nodes_.push_back(Node{y, node, depth, {}, std::vector<NextCounts>(num_classes_)});
    return index;
}

void ContextTrie::add_activity(ClassIndex c, std::span<const EventId> events) {
    if (c >= num_classes_)
        throw InvalidParameter("class index out of range");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const EventId next = events[i];
        std::size_t node = 0;
        nodes_[node].counts[c].add(next);
        const std::size_t depth = std::min(i, max_depth_);
        for (std::size_t m = 1; m <= depth; ++m) {
            node = child_or_insert(node, events[i - m]);
            nodes_[node].counts[c].add(next);
        }
    }
}

std::optional<std::size_t> ContextTrie::find(std::span<const EventId> context) const {
    std::size_t node = 0;
    for (EventId y : context) {
        node = child(node, y);
        if (node == npos)
            return std::nullopt;
    }
    return node;
}

std::vector<EventId> ContextTrie::context(std::size_t node) const {
    std::vector<EventId> events;
    for (; node != 0; node = nodes_[node].parent)
        events.push_back(nodes_[node].edge);
    std::reverse(events.begin(), events.end());
    return events;
}

std::optional<ClassIndex> ClassAssignment::class_of(std::size_t activity) const {
    for (ClassIndex c = 0; c < members.size(); ++c)
        if (std::find(members[c].begin(), members[c].end(), activity) != members[c].end())
            return c;
    return std::nullopt;
}

ContextTrie build_counts(const Dataset& dataset, const ClassAssignment& assignment,
                         std::size_t max_depth) {
    ContextTrie trie(assignment.num_classes(), max_depth);
    for (ClassIndex c = 0; c < assignment.num_classes(); ++c) {
        if (assignment.members[c].empty())
            throw EmptyClass("class " + std::to_string(c) + " has no activities");
        for (std::size_t a : assignment.members[c])
            trie.add_activity(c, dataset.activities().at(a).events);
    }
    return trie;
}

double delta(const ContextTrie& trie, std::size_t node, ClassIndex c) {
    const auto& n = trie.node(node);
    if (n.parent == ContextTrie::npos)
        return 0.0;
    return bit_saving(n.counts[c], trie.node(n.parent).counts[c]);
}

double psi(const ContextTrie& trie, std::size_t node, ClassIndex c) {
    double gain = delta(trie, node, c);
    for (ClassIndex other = 0; other < trie.num_classes(); ++other)
        if (other != c)
            gain -= delta(trie, node, other);
    return gain;
}

double psi(std::span<const double> savings, std::size_t num_classes, std::size_t node,
           ClassIndex c) {
    const double* row = savings.data() + node * num_classes;
    double gain = row[c];
    for (ClassIndex other = 0; other < num_classes; ++other)
        if (other != c)
            gain -= row[other];
    return gain;
}

std::vector<double> all_bit_savings(const ContextTrie& trie, Execution execution) {
    std::vector<double> out(trie.size() * trie.num_classes(), 0.0);
    if (execution == Execution::Parallel)
        kernels::bit_savings_parallel(trie, out);
    else
        kernels::bit_savings_serial(trie, out);
    return out;
}

}  // namespace streamclique
