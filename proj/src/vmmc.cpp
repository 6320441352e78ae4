#include "streamclique/vmmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "streamclique/error.hpp"

namespace streamclique {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log2(sum_i 2^v_i); -inf for an empty or all -inf input.
double log2_sum_exp2(std::span<const double> values) {
    double top = kNegInf;
    for (double v : values)
        top = std::max(top, v);
    if (top == kNegInf)
        return kNegInf;
    double total = 0.0;
    for (double v : values)
        total += std::exp2(v - top);
    return top + std::log2(total);
}

}  // namespace

ClassModel ClassModel::from_trie(const ContextTrie& trie, std::span<const double> savings,
                                 ClassIndex c, std::size_t vocab_size) {
    const std::size_t classes = trie.num_classes();
    if (c >= classes)
        throw InvalidParameter("class index out of range");
    if (savings.size() != trie.size() * classes)
        throw InvalidParameter("bit-saving table does not match the trie");

    ClassModel model;
    model.class_id_ = c;
    model.vocab_size_ = vocab_size;
    model.max_depth_ = trie.max_depth();

    std::vector<std::size_t> remap(trie.size(), ContextTrie::npos);
    for (std::size_t i = 0; i < trie.size(); ++i) {
        const auto& node = trie.node(i);
        if (i != 0 && node.counts[c].total == 0)
            continue;
        ContextNode out;
        out.context = trie.context(i);
        out.counts = node.counts[c];
        out.deltas.assign(savings.begin() + static_cast<std::ptrdiff_t>(i * classes),
                          savings.begin() + static_cast<std::ptrdiff_t>((i + 1) * classes));
        out.psi = i == 0 ? 0.0 : psi(savings, classes, i, c);
        out.parent = i == 0 ? ContextTrie::npos : remap[node.parent];
        remap[i] = model.nodes_.size();
        model.nodes_.push_back(std::move(out));
    }
    model.link_children();
    return model;
}

ClassModel ClassModel::from_nodes(ClassIndex c, std::size_t vocab_size, std::size_t max_depth,
                                  double k_param, std::size_t ell, bool pruned,
                                  std::vector<ContextNode> nodes) {
    if (nodes.empty() || !nodes.front().context.empty())
        throw InvalidParameter("model nodes must start with the empty context");
    ClassModel model;
    model.class_id_ = c;
    model.vocab_size_ = vocab_size;
    model.max_depth_ = max_depth;
    model.k_param_ = k_param;
    model.ell_ = ell;
    model.pruned_ = pruned;
    model.nodes_ = std::move(nodes);
    model.nodes_.front().parent = ContextTrie::npos;
    std::map<std::vector<EventId>, std::size_t> index;
    index.emplace(std::vector<EventId>{}, 0);
    for (std::size_t i = 1; i < model.nodes_.size(); ++i) {
        auto& node = model.nodes_[i];
        if (node.context.empty())
            throw InvalidParameter("model holds the empty context twice");
        std::vector<EventId> suffix(node.context.begin(), node.context.end() - 1);
        auto parent = index.find(suffix);
        if (parent == index.end())
            throw InvalidParameter("model node listed before its suffix");
        node.parent = parent->second;
        if (!index.emplace(node.context, i).second)
            throw InvalidParameter("model holds a context twice");
    }
    model.link_children();
    return model;
}

void ClassModel::link_children() {
    for (auto& node : nodes_)
        node.children.clear();
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const std::size_t parent = nodes_[i].parent;
        if (parent == ContextTrie::npos)
            continue;
        nodes_[parent].children.emplace_back(nodes_[i].context.back(), i);
    }
    for (auto& node : nodes_)
        std::sort(node.children.begin(), node.children.end());
}

namespace {

std::size_t find_child(const ContextNode& node, EventId y) {
    auto it = std::lower_bound(node.children.begin(), node.children.end(), y,
                               [](const auto& p, EventId e) { return p.first < e; });
    return (it != node.children.end() && it->first == y) ? it->second : ContextTrie::npos;
}

}  // namespace

std::optional<std::size_t> ClassModel::find(std::span<const EventId> context) const {
    std::size_t node = 0;
    for (EventId y : context) {
        node = find_child(nodes_[node], y);
        if (node == ContextTrie::npos)
            return std::nullopt;
    }
    return node;
}

std::size_t ClassModel::deepest_context(std::span<const EventId> events,
                                        std::size_t position) const {
    std::size_t node = 0;
    for (std::size_t m = 1; m <= position; ++m) {
        const std::size_t next = find_child(nodes_[node], events[position - m]);
        if (next == ContextTrie::npos)
            break;
        node = next;
    }
    return node;
}

ClassModel prune(const ClassModel& model, double k_param, std::size_t ell) {
    if (!(k_param > 0.0))
        throw InvalidParameter("prune parameter must be positive");
    if (ell == 0)
        throw InvalidParameter("total corpus length must be positive");
    const double threshold = k_param * std::log2(static_cast<double>(ell));

    const auto& nodes = model.nodes_;
    std::vector<bool> selected(nodes.size(), false);
    std::vector<bool> keep(nodes.size(), false);
    for (std::size_t i = 1; i < nodes.size(); ++i)
        selected[i] = nodes[i].psi > threshold;
    keep[0] = true;
    // Children always come after their parent, so a reverse sweep closes under suffix().
    for (std::size_t i = nodes.size(); i-- > 1;) {
        if (selected[i])
            keep[i] = true;
        if (keep[i])
            keep[nodes[i].parent] = true;
    }

    ClassModel out;
    out.class_id_ = model.class_id_;
    out.vocab_size_ = model.vocab_size_;
    out.max_depth_ = model.max_depth_;
    out.pruned_ = true;
    out.k_param_ = k_param;
    out.ell_ = ell;
    std::vector<std::size_t> remap(nodes.size(), ContextTrie::npos);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!keep[i])
            continue;
        ContextNode node = nodes[i];
        node.selected = selected[i];
        node.structural = i != 0 && !selected[i];
        node.parent = i == 0 ? ContextTrie::npos : remap[nodes[i].parent];
        remap[i] = out.nodes_.size();
        out.nodes_.push_back(std::move(node));
    }
    out.link_children();
    return out;
}

std::vector<ClassModel> build_models(const ContextTrie& trie, std::size_t vocab_size,
                                     double k_param, std::size_t ell, Execution execution) {
    const auto savings = all_bit_savings(trie, execution);
    std::vector<ClassModel> models;
    models.reserve(trie.num_classes());
    for (ClassIndex c = 0; c < trie.num_classes(); ++c)
        models.push_back(prune(ClassModel::from_trie(trie, savings, c, vocab_size), k_param, ell));
    return models;
}

MotifSet extract_motifs(const ClassModel& model) {
    MotifSet set;
    set.class_id = model.class_id();
    for (const auto& node : model.nodes()) {
        if (node.depth() == 0 || !node.selected)
            continue;
        Motif motif;
        motif.events.assign(node.context.rbegin(), node.context.rend());
        motif.psi = node.psi;
        for (const auto& [y, n] : node.counts.next)
            motif.next.emplace_back(y, static_cast<double>(n) / static_cast<double>(node.counts.total));
        set.motifs.push_back(std::move(motif));
    }
    std::sort(set.motifs.begin(), set.motifs.end(), [](const Motif& a, const Motif& b) {
        if (a.psi != b.psi)
            return a.psi > b.psi;
        if (a.depth() != b.depth())
            return a.depth() < b.depth();
        return a.events < b.events;
    });
    return set;
}

double log_likelihood(std::span<const EventId> events, const ClassModel& model, double smoothing) {
    if (!model.pruned())
        throw InvalidParameter("log_likelihood needs a pruned model");
    if (!(smoothing >= 0.0))
        throw InvalidParameter("smoothing must be nonnegative");
    const double vocab = static_cast<double>(model.vocab_size());
    double total = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& counts = model.nodes()[model.deepest_context(events, i)].counts;
        const double numerator = static_cast<double>(counts.count(events[i])) + smoothing;
        const double denominator = static_cast<double>(counts.total) + smoothing * vocab;
        if (!(numerator > 0.0) || !(denominator > 0.0))
            return kNegInf;
        total += std::log2(numerator / denominator);
    }
    return total;
}

Classification classify(std::span<const EventId> events, std::span<const ClassModel> models,
                        double smoothing) {
    if (models.empty())
        throw InvalidParameter("classify needs at least one model");
    Classification result;
    result.log_likelihoods.reserve(models.size());
    for (const auto& model : models)
        result.log_likelihoods.push_back(log_likelihood(events, model, smoothing));

    const double norm = log2_sum_exp2(result.log_likelihoods);
    if (norm == kNegInf) {
        result.posterior.assign(models.size(), 0.0);
        return result;
    }
    std::size_t best = 0;
    for (std::size_t c = 0; c < models.size(); ++c) {
        result.posterior.push_back(std::exp2(result.log_likelihoods[c] - norm));
        if (result.log_likelihoods[c] > result.log_likelihoods[best])
            best = c;
    }
    result.label = best;
    return result;
}

std::vector<ObjectiveReport> objective(std::span<const ClassModel> models, const Dataset& dataset,
                                       const ClassAssignment& assignment, double smoothing) {
    const std::size_t classes = assignment.num_classes();
    if (models.size() != classes)
        throw InvalidParameter("objective: one model per class required");

    // log2 p(c | a) for every assigned activity, indexed like assignment.members.
    std::vector<std::vector<std::vector<double>>> log_post(classes);
    for (ClassIndex c = 0; c < classes; ++c) {
        for (std::size_t a : assignment.members[c]) {
            const auto& events = dataset.activities().at(a).events;
            std::vector<double> ll;
            ll.reserve(classes);
            for (const auto& model : models)
                ll.push_back(log_likelihood(events, model, smoothing));
            const double norm = log2_sum_exp2(ll);
            for (auto& v : ll)
                v = norm == kNegInf ? kNegInf : v - norm;
            log_post[c].push_back(std::move(ll));
        }
    }

    std::vector<ObjectiveReport> reports;
    for (ClassIndex c = 0; c < classes; ++c) {
        ObjectiveReport report;
        report.class_id = c;
        for (const auto& lp : log_post[c])
            report.log2_gamma += lp[c];
        std::vector<double> competitor_terms;
        for (ClassIndex other = 0; other < classes; ++other) {
            if (other == c)
                continue;
            double term = 0.0;
            for (const auto& lp : log_post[other])
                term += lp[c];
            report.log2_competitors.emplace_back(other, term);
            competitor_terms.push_back(term);
        }
        report.log2_lambda = log2_sum_exp2(competitor_terms);

        constexpr double kMinNormalExp = -1022.0;
        if (report.log2_gamma < kMinNormalExp && report.log2_lambda < kMinNormalExp) {
            report.underflowed = true;
        } else {
            report.q = std::exp2(report.log2_gamma) - std::exp2(report.log2_lambda);
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

}  // namespace streamclique
