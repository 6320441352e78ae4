#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "streamclique/context_tree.hpp"
#include "streamclique/event.hpp"

namespace streamclique {

struct ContextNode {
    std::vector<EventId> context;  // most recent event first; empty for the root
    NextCounts counts;             // owning class only
    std::vector<double> deltas;    // bit saving per class
    double psi = 0.0;
    bool selected = false;    // passed the pruning threshold itself
    bool structural = false;  // kept only so the retained tree stays suffix-closed
    std::size_t parent = ContextTrie::npos;
    std::vector<std::pair<EventId, std::size_t>> children;  // sorted by edge (older event)

    std::size_t depth() const noexcept { return context.size(); }
};

/// Variable-memory Markov chain of one discovered class: a context tree rooted at
/// the empty context. Before prune() it holds every context seen in the class; after
/// it only the retained, suffix-closed subtree.
class ClassModel {
public:
    ClassModel() = default;

    /// Every context with a nonzero count in class c. `savings` comes from
    /// all_bit_savings(trie).
    static ClassModel from_trie(const ContextTrie& trie, std::span<const double> savings,
                                ClassIndex c, std::size_t vocab_size);

    /// Rebuilds a model from serialized nodes (parents must precede children).
    static ClassModel from_nodes(ClassIndex c, std::size_t vocab_size, std::size_t max_depth,
                                 double k_param, std::size_t ell, bool pruned,
                                 std::vector<ContextNode> nodes);

    ClassIndex class_id() const noexcept { return class_id_; }
    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::size_t max_depth() const noexcept { return max_depth_; }
    bool pruned() const noexcept { return pruned_; }
    double k_param() const noexcept { return k_param_; }
    std::size_t ell() const noexcept { return ell_; }
    const std::vector<ContextNode>& nodes() const noexcept { return nodes_; }
    const ContextNode& root() const { return nodes_.front(); }

    std::optional<std::size_t> find(std::span<const EventId> context) const;
    /// Deepest context in the tree matching the events right before `position`.
    std::size_t deepest_context(std::span<const EventId> events, std::size_t position) const;

private:
    friend ClassModel prune(const ClassModel&, double, std::size_t);
    void link_children();

    ClassIndex class_id_ = 0;
    std::size_t vocab_size_ = 0;
    std::size_t max_depth_ = 0;
    bool pruned_ = false;
    double k_param_ = 0.0;
    std::size_t ell_ = 0;
    std::vector<ContextNode> nodes_;
};

/// Keeps a context s (depth >= 1) iff psi(s) > k_param * log2(ell), then closes
/// the kept set under suffix(); ancestors kept only for closure are marked
/// structural. The root always survives. Throws InvalidParameter unless
/// k_param > 0 and ell >= 1.
ClassModel prune(const ClassModel& model, double k_param, std::size_t ell);

/// One model per class, built from a shared trie and pruned with (k_param, ell).
std::vector<ClassModel> build_models(const ContextTrie& trie, std::size_t vocab_size,
                                     double k_param, std::size_t ell,
                                     Execution execution = Execution::Parallel);

struct Motif {
    std::vector<EventId> events;  // oldest -> newest
    double psi = 0.0;
    std::vector<std::pair<EventId, double>> next;  // maximum-likelihood next-event distribution

    std::size_t depth() const noexcept { return events.size(); }
};

struct MotifSet {
    ClassIndex class_id = 0;
    std::vector<Motif> motifs;  // descending psi; ties by depth, then events
};

/// Selected (non-structural) contexts of depth >= 1 of a pruned model.
MotifSet extract_motifs(const ClassModel& model);

/// sum_i log2 p(y_i | s_i) with s_i the deepest retained context of the history
/// and p(y|s) = (N(s,y) + smoothing) / (N(s) + smoothing * |vocab|).
/// Returns -infinity when an event gets probability zero (smoothing = 0).
double log_likelihood(std::span<const EventId> events, const ClassModel& model, double smoothing);

struct Classification {
    std::optional<ClassIndex> label;  // nullopt: every model gives likelihood zero
    std::vector<double> posterior;    // p(c | a), uniform class prior
    std::vector<double> log_likelihoods;
};

Classification classify(std::span<const EventId> events, std::span<const ClassModel> models,
                        double smoothing);

struct ObjectiveReport {
    ClassIndex class_id = 0;
    double log2_gamma = 0.0;  // sum over own members of log2 p(c|a)
    /// Per competitor c': log2 of prod_{a in A_c'} p(c|a).
    std::vector<std::pair<ClassIndex, double>> log2_competitors;
    double log2_lambda = 0.0;  // log2 of the competitor sum; -inf when there are none
    std::optional<double> q;   // gamma - lambda; empty when both underflow
    bool underflowed = false;
};

/// Diagnostic objective gamma - lambda per class using normalized posteriors.
std::vector<ObjectiveReport> objective(std::span<const ClassModel> models, const Dataset& dataset,
                                       const ClassAssignment& assignment, double smoothing);

}  // namespace streamclique
