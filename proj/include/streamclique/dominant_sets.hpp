#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "streamclique/kernels.hpp"
#include "streamclique/similarity.hpp"

namespace streamclique {

/// Sorted, distinct node indices into a SimilarityMatrix.
using NodeSubset = std::vector<std::size_t>;

struct SolverParams {
    double epsilon = 1e-8;             // L1 change between iterates that counts as converged
    std::size_t max_iters = 10000;
    double support_threshold = 1e-4;
    std::size_t min_clique_size = 3;
    Execution execution = Execution::Parallel;
};

/// Average weighted degree of i w.r.t. s: (1/|s|) sum_{j in s} a_ij. The j = i
/// term is included and contributes a_ii = 0.
double awdeg(std::span<const std::size_t> s, std::size_t i, const SimilarityMatrix& a);

/// Relative similarity of an outside node j to i in s: a_ij - awdeg(s, i).
double phi(std::span<const std::size_t> s, std::size_t i, std::size_t j,
           const SimilarityMatrix& a);

/// Exact coupling weights by the recursive subset definition
///
///   w_S(i) = 1                                            if |S| = 1
///   w_S(i) = sum_{j in S\{i}} phi_{S\{i}}(j, i) w_{S\{i}}(j)   otherwise
///
/// memoized per subset. Cost is exponential in |S|, so it is an oracle for small
/// graphs only: subsets are capped at `size_limit` nodes and the graph at 64.
class CouplingOracle {
public:
    explicit CouplingOracle(const SimilarityMatrix& a, std::size_t size_limit = 12);

    double node_weight(std::span<const std::size_t> s, std::size_t i);
    double total_weight(std::span<const std::size_t> s);
    /// Internal homogeneity (w_S(i) > 0 inside), external inhomogeneity
    /// (w_{S+i}(i) < 0 outside) and W(T) > 0 for every non-empty T within S.
    bool is_dominant(std::span<const std::size_t> s);

private:
    using Mask = std::uint64_t;
    Mask to_mask(std::span<const std::size_t> s, std::size_t extra_allowance) const;
    const std::vector<double>& weights(Mask mask);  // w_S(i) for members in ascending order

    const SimilarityMatrix& a_;
    std::size_t size_limit_;
    std::unordered_map<Mask, std::vector<double>> memo_;
};

double node_weight(std::span<const std::size_t> s, std::size_t i, const SimilarityMatrix& a,
                   std::size_t size_limit = 12);
double total_weight(std::span<const std::size_t> s, const SimilarityMatrix& a,
                    std::size_t size_limit = 12);
bool is_dominant(std::span<const std::size_t> s, const SimilarityMatrix& a,
                 std::size_t size_limit = 12);

/// A point of the probability simplex over the graph's nodes.
struct CharacteristicVector {
    std::vector<double> weights;

    static CharacteristicVector barycenter(std::size_t k);
    NodeSubset support(double threshold) const;
    double sum() const;
};

/// x'_i = x_i (Ax)_i / (x'Ax). Throws DegenerateGraph when x'Ax is not positive.
CharacteristicVector replicator_step(const CharacteristicVector& x, const SimilarityMatrix& a,
                                     Execution execution = Execution::Parallel);

/// x'Ax.
double quadratic_form(const CharacteristicVector& x, const SimilarityMatrix& a,
                      Execution execution = Execution::Parallel);

/// True iff A restricted to `support` is negative definite on the directions
/// that keep the sum fixed, i.e. x'Ax curves strictly downward inside that face.
/// Plateaus (e.g. a star whose spokes are mutually unrelated) fail this test.
bool has_strict_curvature(const NodeSubset& support, const SimilarityMatrix& a);

/// True iff x is a strict local maximizer of x'Ax on the simplex with support
/// `support`: outside nodes earn strictly less than x'Ax and A restricted to the
/// support passes has_strict_curvature.
bool is_strict_maximizer(const CharacteristicVector& x, const NodeSubset& support,
                         const SimilarityMatrix& a);

struct DiscoveredClass {
    NodeSubset members;
    std::vector<double> membership_weights;  // aligned with members, sums to 1
    double cohesiveness = 0.0;               // x'Ax at convergence
};

struct DominantSetResult {
    DiscoveredClass cls;
    CharacteristicVector state;  // final iterate
    bool converged = false;
    std::size_t iterations = 0;
    bool strict = false;   // see is_strict_maximizer
    bool curved = false;   // see has_strict_curvature
};

/// Replicator dynamics from the barycenter until the L1 step falls below
/// epsilon or max_iters is hit (then converged = false and the last iterate is
/// returned). Throws DegenerateGraph when the graph has no positive edge.
DominantSetResult find_dominant_set(const SimilarityMatrix& a, const SolverParams& params = {});

struct ClusterResult {
    std::vector<DiscoveredClass> classes;  // extraction order; node indices of the input graph
    NodeSubset leftover;
    std::vector<std::string> warnings;
};

/// Extracts dominant sets one after another, each on the subgraph induced by the
/// nodes not yet assigned. Peeling stops at the first support smaller than
/// min_clique_size, when fewer than min_clique_size nodes remain, when the
/// remaining graph has no positive edge, or when the support found sits on a
/// plateau (fails has_strict_curvature). Whatever remains is leftover.
ClusterResult peel_clusters(const SimilarityMatrix& a, const SolverParams& params = {});

}  // namespace streamclique
