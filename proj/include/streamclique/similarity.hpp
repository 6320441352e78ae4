#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "streamclique/kernels.hpp"
#include "streamclique/ngram.hpp"

namespace streamclique {

/// Divergence-style similarity of two n-gram bags:
///
///   sim = 1 - kappa * sum_{g in Y u Z} |f_a(g) - f_b(g)| / (f_a(g) + f_b(g)),
///   kappa = 1 / (|Y| + |Z|),
///
/// where Y and Z are the supports. An n-gram present in only one bag contributes
/// exactly 1. One empty bag against a non-empty one gives 0.
///
/// Throws InvalidParameter on differing n and UndefinedSimilarity when both bags
/// are empty.
double sim(const NGramHistogram& a, const NGramHistogram& b);

/// Dense symmetric K x K matrix with zero diagonal; the weighted activity graph.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    /// Zero matrix of size k.
    explicit SimilarityMatrix(std::size_t k, std::vector<std::string> ids = {});
    /// Row-major values. Throws InvalidParameter unless the matrix is symmetric,
    /// finite, nonnegative and has a zero diagonal.
    SimilarityMatrix(std::size_t k, std::vector<double> values, std::vector<std::string> ids = {});

    std::size_t size() const noexcept { return size_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * size_, size_};
    }
    std::span<const double> values() const noexcept { return values_; }
    /// Node index -> activity id. Defaults to "0", "1", ... when not supplied.
    const std::vector<std::string>& ids() const noexcept { return ids_; }

    /// Principal submatrix on `nodes` (in the given order), ids carried along.
    SimilarityMatrix induced(std::span<const std::size_t> nodes) const;
    SimilarityMatrix scaled(double factor) const;

    bool operator==(const SimilarityMatrix&) const = default;

private:
    friend SimilarityMatrix build_matrix(std::span<const NGramHistogram>, std::vector<std::string>,
                                         Execution);
    std::size_t size_ = 0;
    std::vector<double> values_;
    std::vector<std::string> ids_;
};

/// Fills every unordered pair once with sim(); diagonal stays 0. Serial and
/// parallel execution give bit-identical matrices.
///
/// Throws UndefinedSimilarity naming the first pair of empty histograms and
/// InvalidParameter when the histograms do not share n.
SimilarityMatrix build_matrix(std::span<const NGramHistogram> histograms,
                              std::vector<std::string> ids = {},
                              Execution execution = Execution::Parallel);

}  // namespace streamclique
