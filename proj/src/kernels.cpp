#include "streamclique/kernels.hpp"

#include <cstdint>

#include "streamclique/context_tree.hpp"
#include "streamclique/similarity.hpp"

namespace streamclique::kernels {

void fill_similarity_serial(std::span<const NGramHistogram> histograms, std::span<double> out) {
    const std::size_t k = histograms.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            out[i * k + j] = out[j * k + i] = sim(histograms[i], histograms[j]);
}

void fill_similarity_parallel(std::span<const NGramHistogram> histograms, std::span<double> out) {
    const auto k = static_cast<std::int64_t>(histograms.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < k; ++i)
        for (std::int64_t j = i + 1; j < k; ++j)
            out[i * k + j] = out[j * k + i] = sim(histograms[i], histograms[j]);
}

void matvec_serial(std::span<const double> a, std::size_t k, std::span<const double> x,
                   std::span<double> y) {
    for (std::size_t i = 0; i < k; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            acc += a[i * k + j] * x[j];
        y[i] = acc;
    }
}

void matvec_parallel(std::span<const double> a, std::size_t k, std::span<const double> x,
                     std::span<double> y) {
    const auto n = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(static) if (n >= 64)
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::int64_t j = 0; j < n; ++j)
            acc += a[i * n + j] * x[j];
        y[i] = acc;
    }
}

void bit_savings_serial(const ContextTrie& trie, std::span<double> out) {
    const std::size_t classes = trie.num_classes();
    for (std::size_t node = 0; node < trie.size(); ++node)
        for (std::size_t c = 0; c < classes; ++c)
            out[node * classes + c] = delta(trie, node, c);
}

void bit_savings_parallel(const ContextTrie& trie, std::span<double> out) {
    const auto size = static_cast<std::int64_t>(trie.size());
    const std::size_t classes = trie.num_classes();
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t node = 0; node < size; ++node)
        for (std::size_t c = 0; c < classes; ++c)
            out[node * classes + c] = delta(trie, static_cast<std::size_t>(node), c);
}

}  // namespace streamclique::kernels
