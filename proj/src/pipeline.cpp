#include "streamclique/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "streamclique/error.hpp"

namespace streamclique {

void PipelineConfig::validate() const {
    if (n < 1)
        throw InvalidParameter("n must be at least 1");
    if (!(k_param > 0.0))
        throw InvalidParameter("prune-k must be positive");
    if (max_depth < 1)
        throw InvalidParameter("max-depth must be at least 1");
    if (min_clique_size < 2)
        throw InvalidParameter("min-clique-size must be at least 2");
    if (!(epsilon > 0.0))
        throw InvalidParameter("epsilon must be positive");
    if (max_iters < 1)
        throw InvalidParameter("max-iters must be at least 1");
    if (!(support_threshold > 0.0 && support_threshold < 1.0))
        throw InvalidParameter("support-threshold must lie in (0, 1)");
    if (!(smoothing > 0.0))
        throw InvalidParameter("smoothing must be positive");
}

SolverParams PipelineConfig::solver() const {
    return SolverParams{epsilon, max_iters, support_threshold, min_clique_size, execution};
}

DiscoveryOutcome run_discovery(const Dataset& dataset, const PipelineConfig& config) {
    config.validate();
    if (dataset.size() == 0)
        throw InvalidParameter("dataset has no activities");

    DiscoveryOutcome out;
    out.histograms.reserve(dataset.size());
    for (const auto& activity : dataset.activities())
        out.histograms.push_back(build_histogram(activity, config.n));

    std::vector<NGramHistogram> nonempty;
    std::vector<std::string> ids;
    NodeSubset skipped;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (out.histograms[i].empty()) {
            skipped.push_back(i);
            out.warnings.push_back("activity '" + dataset[i].id + "' is shorter than n = " +
                                   std::to_string(config.n) + "; sent to leftover");
            continue;
        }
        out.matrix_rows.push_back(i);
        nonempty.push_back(out.histograms[i]);
        ids.push_back(dataset[i].id);
    }

    out.matrix = build_matrix(nonempty, std::move(ids), config.execution);
    ClusterResult local = peel_clusters(out.matrix, config.solver());

    for (auto& cls : local.classes)
        for (auto& member : cls.members)
            member = out.matrix_rows[member];
    for (auto& node : local.leftover)
        node = out.matrix_rows[node];
    local.leftover.insert(local.leftover.end(), skipped.begin(), skipped.end());
    std::sort(local.leftover.begin(), local.leftover.end());
    out.warnings.insert(out.warnings.end(), local.warnings.begin(), local.warnings.end());
    out.clusters = std::move(local);
    return out;
}

ClassAssignment assignment_from(const ClusterResult& clusters) {
    ClassAssignment assignment;
    for (const auto& cls : clusters.classes)
        assignment.members.push_back(cls.members);
    return assignment;
}

MotifOutcome run_motifs(const Dataset& dataset, const ClusterResult& clusters,
                        const PipelineConfig& config) {
    config.validate();
    if (clusters.classes.empty())
        throw InvalidParameter("motif discovery needs at least one discovered class");
    MotifOutcome out;
    const ClassAssignment assignment = assignment_from(clusters);
    for (ClassIndex c = 0; c < assignment.num_classes(); ++c) {
        std::size_t events = 0;
        for (std::size_t a : assignment.members[c])
            events += dataset.activities().at(a).events.size();
        if (events < 2)
            out.warnings.push_back("class " + std::to_string(c) +
                                   " has fewer than 2 events; its model is empty");
    }
    const ContextTrie trie = build_counts(dataset, assignment, config.max_depth);
    out.models = build_models(trie, dataset.vocabulary().size(), config.k_param,
                              dataset.total_length(), config.execution);
    for (const auto& model : out.models)
        out.motifs.push_back(extract_motifs(model));
    return out;
}

std::vector<std::size_t> cluster_ordering(const DiscoveryOutcome& outcome) {
    std::map<std::size_t, std::size_t> row_of;
    for (std::size_t r = 0; r < outcome.matrix_rows.size(); ++r)
        row_of.emplace(outcome.matrix_rows[r], r);
    std::vector<std::size_t> order;
    order.reserve(outcome.matrix_rows.size());
    for (const auto& cls : outcome.clusters.classes)
        for (std::size_t member : cls.members)
            order.push_back(row_of.at(member));
    for (std::size_t node : outcome.clusters.leftover)
        if (auto it = row_of.find(node); it != row_of.end())
            order.push_back(it->second);
    return order;
}

std::string render_similarity_image(const SimilarityMatrix& matrix,
                                    std::optional<std::span<const std::size_t>> ordering) {
    const std::size_t k = matrix.size();
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i)
        order[i] = i;
    if (ordering) {
        if (ordering->size() != k)
            throw InvalidParameter("ordering has " + std::to_string(ordering->size()) +
                                   " entries for " + std::to_string(k) + " nodes");
        std::vector<bool> seen(k, false);
        for (std::size_t v : *ordering) {
            if (v >= k || seen[v])
                throw InvalidParameter("ordering is not a permutation");
            seen[v] = true;
        }
        order.assign(ordering->begin(), ordering->end());
    }

    std::string image = "P5\n" + std::to_string(k) + " " + std::to_string(k) + "\n255\n";
    image.reserve(image.size() + k * k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            const double v = std::clamp(matrix(order[r], order[c]), 0.0, 1.0);
            image.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
        }
    return image;
}

namespace {

std::vector<EventId> extended_motif(const Motif& motif) {
    std::vector<EventId> events = motif.events;
    if (motif.next.empty())
        return events;
    auto best = motif.next.front();
    for (const auto& entry : motif.next)
        if (entry.second > best.second)
            best = entry;
    events.push_back(best.first);
    return events;
}

bool contains_run(std::span<const EventId> haystack, std::span<const EventId> needle) {
    if (needle.empty() || needle.size() > haystack.size())
        return false;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
           haystack.end();
}

}  // namespace

bool motif_matches(const Motif& motif, std::span<const EventId> planted) {
    const auto extended = extended_motif(motif);
    if (extended.size() < 2)
        return false;
    return contains_run(planted, extended) || contains_run(extended, planted);
}

TruthComparison compare_with_truth(const Dataset& dataset, const ClusterResult& clusters,
                                   std::span<const MotifSet> motifs, const GroundTruth& truth,
                                   std::size_t top_k) {
    auto label_of = [&](std::size_t activity) {
        const auto& id = dataset[activity].id;
        auto it = truth.labels.find(id);
        if (it == truth.labels.end())
            throw InvalidParameter("ground truth has no label for activity '" + id + "'");
        return it->second;
    };

    TruthComparison out;
    std::size_t agreeing = 0;
    for (const auto& cls : clusters.classes) {
        std::map<int, std::size_t> votes;
        for (std::size_t a : cls.members)
            ++votes[label_of(a)];
        auto best = std::max_element(votes.begin(), votes.end(), [](const auto& x, const auto& y) {
            return x.second < y.second;
        });
        out.class_labels.push_back(best->first);
        agreeing += best->second;
        out.clustered += cls.members.size();
    }
    out.purity = out.clustered == 0 ? 0.0 : static_cast<double>(agreeing) / static_cast<double>(out.clustered);
    out.coverage = dataset.size() == 0 ? 0.0 : static_cast<double>(out.clustered) / static_cast<double>(dataset.size());

    std::size_t planted = 0, found = 0;
    out.motif_found.resize(truth.motifs.size());
    for (std::size_t c = 0; c < truth.motifs.size(); ++c) {
        for (const auto& motif : truth.motifs[c]) {
            bool hit = false;
            for (std::size_t d = 0; d < out.class_labels.size() && d < motifs.size() && !hit; ++d) {
                if (out.class_labels[d] != static_cast<int>(c))
                    continue;
                const auto& ranked = motifs[d].motifs;
                for (std::size_t r = 0; r < ranked.size() && r < top_k && !hit; ++r)
                    hit = motif_matches(ranked[r], motif);
            }
            out.motif_found[c].push_back(hit);
            ++planted;
            found += hit ? 1 : 0;
        }
    }
    out.motif_recall = planted == 0 ? 0.0 : static_cast<double>(found) / static_cast<double>(planted);

    std::set<std::string> leftover_ids, noise_ids;
    for (std::size_t a : clusters.leftover)
        leftover_ids.insert(dataset[a].id);
    for (const auto& [id, label] : truth.labels)
        if (label == kNoiseLabel)
            noise_ids.insert(id);
    out.leftover_is_noise = leftover_ids == noise_ids;
    return out;
}

DiscoveryReport run_report(const Dataset& dataset, const PipelineConfig& config,
                           const std::optional<GroundTruth>& truth) {
    DiscoveryReport report;
    report.config = config;
    report.discovery = run_discovery(dataset, config);
    if (!report.discovery.clusters.classes.empty()) {
        report.motifs = run_motifs(dataset, report.discovery.clusters, config);
        report.objectives = objective(report.motifs.models, dataset,
                                      assignment_from(report.discovery.clusters), config.smoothing);
    }
    if (truth)
        report.truth = compare_with_truth(dataset, report.discovery.clusters, report.motifs.motifs,
                                          *truth);
    return report;
}

}  // namespace streamclique
