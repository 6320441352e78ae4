#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "streamclique/context_tree.hpp"
#include "streamclique/kernels.hpp"
#include "streamclique/synthetic.hpp"

using namespace streamclique;

namespace {

std::vector<NGramHistogram> histograms(std::size_t k) {
    SyntheticSpec spec;
    spec.vocab_size = 61;
    spec.num_classes = 1;
    spec.instances_per_class = k;
    spec.noise_rate = 0.6;
    const auto data = generate(spec);
    std::vector<NGramHistogram> out;
    for (const auto& act : data.dataset.activities())
        out.push_back(build_histogram(act, 3));
    return out;
}

template <auto Kernel>
void bm_similarity(benchmark::State& state) {
    const auto hs = histograms(static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(hs.size() * hs.size());
    for (auto _ : state) {
        Kernel(hs, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void bm_matvec(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> a(k * k), x(k, 1.0 / static_cast<double>(k)), y(k);
    for (auto& v : a)
        v = u(rng);
    for (auto _ : state) {
        Kernel(a, k, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

ContextTrie sample_trie(std::size_t activities) {
    SyntheticSpec spec;
    spec.vocab_size = 61;
    spec.num_classes = 7;
    spec.instances_per_class = activities / 7;
    const auto data = generate(spec);
    ClassAssignment assign;
    assign.members.resize(7);
    for (std::size_t i = 0; i < data.dataset.size(); ++i)
        assign.members[static_cast<std::size_t>(data.truth.labels.at(data.dataset[i].id))].push_back(i);
    return build_counts(data.dataset, assign, 8);
}

template <auto Kernel>
void bm_bit_savings(benchmark::State& state) {
    const auto trie = sample_trie(static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(trie.size() * 7);
    for (auto _ : state) {
        Kernel(trie, out);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(bm_similarity<kernels::fill_similarity_serial>)->Arg(150)->Arg(400);
BENCHMARK(bm_similarity<kernels::fill_similarity_parallel>)->Arg(150)->Arg(400);
BENCHMARK(bm_matvec<kernels::matvec_serial>)->Arg(150)->Arg(1000);
BENCHMARK(bm_matvec<kernels::matvec_parallel>)->Arg(150)->Arg(1000);
BENCHMARK(bm_bit_savings<kernels::bit_savings_serial>)->Arg(140)->Arg(700);
BENCHMARK(bm_bit_savings<kernels::bit_savings_parallel>)->Arg(140)->Arg(700);

BENCHMARK_MAIN();
