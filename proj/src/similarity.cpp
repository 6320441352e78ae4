#include "streamclique/similarity.hpp"

#include <cmath>
#include <cstdlib>

#include "streamclique/error.hpp"

namespace streamclique {

double sim(const NGramHistogram& a, const NGramHistogram& b) {
    if (a.n() != b.n())
        throw InvalidParameter("similarity of histograms with different n (" +
                               std::to_string(a.n()) + " vs " + std::to_string(b.n()) + ")");
    const std::size_t norm = a.support_size() + b.support_size();
    if (norm == 0)
        throw UndefinedSimilarity("similarity undefined for two empty histograms");

    // Merge walk over the two sorted supports.
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    double divergence = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
            divergence += 1.0;
            ++i;
        } else if (i == ea.size() || eb[j].first < ea[i].first) {
            divergence += 1.0;
            ++j;
        } else {
            const double fa = ea[i].second;
            const double fb = eb[j].second;
            divergence += std::abs(fa - fb) / (fa + fb);
            ++i;
            ++j;
        }
    }
    return 1.0 - divergence / static_cast<double>(norm);
}

namespace {

std::vector<std::string> default_ids(std::size_t k, std::vector<std::string> ids) {
    if (ids.empty()) {
        ids.reserve(k);
        for (std::size_t i = 0; i < k; ++i)
            ids.push_back(std::to_string(i));
    }
    if (ids.size() != k)
        throw InvalidParameter("similarity matrix: " + std::to_string(ids.size()) + " ids for " +
                               std::to_string(k) + " nodes");
    return ids;
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t k, std::vector<std::string> ids)
    : size_(k), values_(k * k, 0.0), ids_(default_ids(k, std::move(ids))) {}

SimilarityMatrix::SimilarityMatrix(std::size_t k, std::vector<double> values,
                                   std::vector<std::string> ids)
    : size_(k), values_(std::move(values)), ids_(default_ids(k, std::move(ids))) {
    if (values_.size() != k * k)
        throw InvalidParameter("similarity matrix needs k*k values");
    for (std::size_t i = 0; i < k; ++i) {
        if (values_[i * k + i] != 0.0)
            throw InvalidParameter("similarity matrix diagonal must be zero");
        for (std::size_t j = i + 1; j < k; ++j) {
            const double v = values_[i * k + j];
            if (!std::isfinite(v) || v < 0.0)
                throw InvalidParameter("similarity matrix entries must be finite and nonnegative");
            if (v != values_[j * k + i])
                throw InvalidParameter("similarity matrix must be symmetric");
        }
    }
}

SimilarityMatrix SimilarityMatrix::induced(std::span<const std::size_t> nodes) const {
    SimilarityMatrix sub;
    sub.size_ = nodes.size();
    sub.values_.resize(nodes.size() * nodes.size());
    sub.ids_.reserve(nodes.size());
    for (std::size_t r = 0; r < nodes.size(); ++r) {
        sub.ids_.push_back(ids_.at(nodes[r]));
        for (std::size_t c = 0; c < nodes.size(); ++c)
            sub.values_[r * nodes.size() + c] = (*this)(nodes[r], nodes[c]);
    }
    return sub;
}

SimilarityMatrix SimilarityMatrix::scaled(double factor) const {
    if (!(factor > 0.0))
        throw InvalidParameter("scale factor must be positive");
    SimilarityMatrix out = *this;
    for (auto& v : out.values_)
        v *= factor;
    return out;
}

SimilarityMatrix build_matrix(std::span<const NGramHistogram> histograms,
                              std::vector<std::string> ids, Execution execution) {
    const std::size_t k = histograms.size();
    auto label = [&](std::size_t i) { return i < ids.size() ? "'" + ids[i] + "'" : std::to_string(i); };
    std::ptrdiff_t first_empty = -1;
    for (std::size_t i = 0; i < k; ++i) {
        if (histograms[i].n() != histograms[0].n())
            throw InvalidParameter("histogram " + std::to_string(i) + " has n = " +
                                   std::to_string(histograms[i].n()) + ", expected " +
                                   std::to_string(histograms[0].n()));
        if (histograms[i].empty()) {
            if (first_empty >= 0)
                throw UndefinedSimilarity("similarity undefined for pair (" +
                                          label(static_cast<std::size_t>(first_empty)) + ", " + label(i) +
                                          "): both histograms are empty");
            first_empty = static_cast<std::ptrdiff_t>(i);
        }
    }

    SimilarityMatrix matrix(k, std::move(ids));
    if (execution == Execution::Parallel)
        kernels::fill_similarity_parallel(histograms, matrix.values_);
    else
        kernels::fill_similarity_serial(histograms, matrix.values_);
    return matrix;
}

}  // namespace streamclique
