#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an OpenMP
// version; the two must produce bit-identical output (each output element is
// written by exactly one iteration and reductions keep the serial order).

#include <cstddef>
#include <span>

#include "streamclique/ngram.hpp"

namespace streamclique {

enum class Execution { Serial, Parallel };

class ContextTrie;

namespace kernels {

// out is K x K row-major; only off-diagonal entries are written.
void fill_similarity_serial(std::span<const NGramHistogram> histograms, std::span<double> out);
void fill_similarity_parallel(std::span<const NGramHistogram> histograms, std::span<double> out);

// y = A x for a K x K row-major matrix.
void matvec_serial(std::span<const double> a, std::size_t k, std::span<const double> x,
                   std::span<double> y);
void matvec_parallel(std::span<const double> a, std::size_t k, std::span<const double> x,
                     std::span<double> y);

// out[node * classes + c] = bit saving of context `node` in class slice c.
void bit_savings_serial(const ContextTrie& trie, std::span<double> out);
void bit_savings_parallel(const ContextTrie& trie, std::span<double> out);

}  // namespace kernels
}  // namespace streamclique
