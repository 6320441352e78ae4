#include "streamclique/dominant_sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "streamclique/error.hpp"

namespace streamclique {

namespace {

void require_member(std::span<const std::size_t> s, std::size_t i, const char* what) {
    if (std::find(s.begin(), s.end(), i) == s.end())
        throw InvalidParameter(std::string(what) + ": node " + std::to_string(i) +
                               " is not in the subset");
}

}  // namespace

double awdeg(std::span<const std::size_t> s, std::size_t i, const SimilarityMatrix& a) {
    if (s.empty())
        throw InvalidParameter("awdeg: empty subset");
    require_member(s, i, "awdeg");
    double total = 0.0;
    for (std::size_t j : s)
        total += a(i, j);
    return total / static_cast<double>(s.size());
}

double phi(std::span<const std::size_t> s, std::size_t i, std::size_t j,
           const SimilarityMatrix& a) {
    if (std::find(s.begin(), s.end(), j) != s.end())
        throw InvalidParameter("phi: node " + std::to_string(j) + " must lie outside the subset");
    return a(i, j) - awdeg(s, i, a);
}

// ---------------------------------------------------------------------------
// Exact oracle

CouplingOracle::CouplingOracle(const SimilarityMatrix& a, std::size_t size_limit)
    : a_(a), size_limit_(size_limit) {
    if (a.size() > 64)
        throw OracleLimit("coupling-weight oracle supports at most 64 nodes, graph has " +
                          std::to_string(a.size()));
}

CouplingOracle::Mask CouplingOracle::to_mask(std::span<const std::size_t> s,
                                             std::size_t extra_allowance) const {
    if (s.empty())
        throw InvalidParameter("coupling weight of an empty subset");
    if (s.size() > size_limit_ + extra_allowance)
        throw OracleLimit("subset of " + std::to_string(s.size()) +
                          " nodes exceeds the oracle limit of " + std::to_string(size_limit_));
    Mask mask = 0;
    for (std::size_t i : s) {
        if (i >= a_.size())
            throw InvalidParameter("node " + std::to_string(i) + " out of range");
        const Mask bit = Mask{1} << i;
        if (mask & bit)
            throw InvalidParameter("subset contains node " + std::to_string(i) + " twice");
        mask |= bit;
    }
    return mask;
}

const std::vector<double>& CouplingOracle::weights(Mask mask) {
    if (auto it = memo_.find(mask); it != memo_.end())
        return it->second;

    std::vector<std::size_t> members;
    for (Mask m = mask; m != 0; m &= m - 1)
        members.push_back(static_cast<std::size_t>(std::countr_zero(m)));

    std::vector<double> w(members.size(), 1.0);
    if (members.size() > 1) {
        for (std::size_t idx = 0; idx < members.size(); ++idx) {
            const std::size_t i = members[idx];
            const Mask rest = mask & ~(Mask{1} << i);
            // Copy: the recursive call may rehash memo_.
            const std::vector<double> w_rest = weights(rest);
            const double inv_size = 1.0 / static_cast<double>(members.size() - 1);
            double total = 0.0;
            std::size_t r = 0;
            for (std::size_t j : members) {
                if (j == i)
                    continue;
                double deg = 0.0;
                for (std::size_t k : members)
                    if (k != i)
                        deg += a_(j, k);
                total += (a_(j, i) - deg * inv_size) * w_rest[r++];
            }
            w[idx] = total;
        }
    }
    return memo_.emplace(mask, std::move(w)).first->second;
}

double CouplingOracle::node_weight(std::span<const std::size_t> s, std::size_t i) {
    const Mask mask = to_mask(s, 0);
    require_member(s, i, "node_weight");
    const auto& w = weights(mask);
    const auto rank = std::popcount(mask & ((Mask{1} << i) - 1));
    return w[static_cast<std::size_t>(rank)];
}

double CouplingOracle::total_weight(std::span<const std::size_t> s) {
    const auto& w = weights(to_mask(s, 0));
    double total = 0.0;
    for (double v : w)
        total += v;
    return total;
}

bool CouplingOracle::is_dominant(std::span<const std::size_t> s) {
    const Mask mask = to_mask(s, 0);
    for (double v : weights(mask))
        if (!(v > 0.0))
            return false;
    for (std::size_t j = 0; j < a_.size(); ++j) {
        const Mask bit = Mask{1} << j;
        if (mask & bit)
            continue;
        const Mask grown = mask | bit;
        const auto& w = weights(grown);
        const auto rank = std::popcount(grown & (bit - 1));
        if (!(w[static_cast<std::size_t>(rank)] < 0.0))
            return false;
    }
    for (Mask t = mask; t != 0; t = (t - 1) & mask) {
        double total = 0.0;
        for (double v : weights(t))
            total += v;
        if (!(total > 0.0))
            return false;
    }
    return true;
}

namespace {

// Relabels s onto a compact subgraph so the 64-node oracle cap only applies to |s|.
struct LocalSubset {
    SimilarityMatrix graph;
    std::vector<std::size_t> nodes;
};

LocalSubset localize(std::span<const std::size_t> s, const SimilarityMatrix& a) {
    for (std::size_t i : s)
        if (i >= a.size())
            throw InvalidParameter("node " + std::to_string(i) + " out of range");
    std::vector<std::size_t> nodes(s.size());
    for (std::size_t r = 0; r < s.size(); ++r)
        nodes[r] = r;
    return {a.induced(s), std::move(nodes)};
}

}  // namespace

double node_weight(std::span<const std::size_t> s, std::size_t i, const SimilarityMatrix& a,
                   std::size_t size_limit) {
    require_member(s, i, "node_weight");
    if (s.size() > size_limit)
        throw OracleLimit("subset of " + std::to_string(s.size()) +
                          " nodes exceeds the oracle limit of " + std::to_string(size_limit));
    auto local = localize(s, a);
    CouplingOracle oracle(local.graph, size_limit);
    const auto pos = static_cast<std::size_t>(std::find(s.begin(), s.end(), i) - s.begin());
    return oracle.node_weight(local.nodes, pos);
}

double total_weight(std::span<const std::size_t> s, const SimilarityMatrix& a,
                    std::size_t size_limit) {
    if (s.size() > size_limit)
        throw OracleLimit("subset of " + std::to_string(s.size()) +
                          " nodes exceeds the oracle limit of " + std::to_string(size_limit));
    auto local = localize(s, a);
    CouplingOracle oracle(local.graph, size_limit);
    return oracle.total_weight(local.nodes);
}

bool is_dominant(std::span<const std::size_t> s, const SimilarityMatrix& a,
                 std::size_t size_limit) {
    CouplingOracle oracle(a, size_limit);
    return oracle.is_dominant(s);
}

// ---------------------------------------------------------------------------
// Replicator dynamics

CharacteristicVector CharacteristicVector::barycenter(std::size_t k) {
    return {std::vector<double>(k, 1.0 / static_cast<double>(k))};
}

NodeSubset CharacteristicVector::support(double threshold) const {
    NodeSubset s;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i] > threshold)
            s.push_back(i);
    return s;
}

double CharacteristicVector::sum() const {
    double total = 0.0;
    for (double v : weights)
        total += v;
    return total;
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        total += x[i] * y[i];
    return total;
}

std::vector<double> payoffs(const CharacteristicVector& x, const SimilarityMatrix& a,
                            Execution execution) {
    if (x.weights.size() != a.size())
        throw InvalidParameter("characteristic vector length differs from graph size");
    std::vector<double> ax(a.size());
    if (execution == Execution::Parallel)
        kernels::matvec_parallel(a.values(), a.size(), x.weights, ax);
    else
        kernels::matvec_serial(a.values(), a.size(), x.weights, ax);
    return ax;
}

}  // namespace

double quadratic_form(const CharacteristicVector& x, const SimilarityMatrix& a,
                      Execution execution) {
    return dot(x.weights, payoffs(x, a, execution));
}

CharacteristicVector replicator_step(const CharacteristicVector& x, const SimilarityMatrix& a,
                                     Execution execution) {
    const auto ax = payoffs(x, a, execution);
    const double fitness = dot(x.weights, ax);
    if (!(fitness > 0.0))
        throw DegenerateGraph("replicator step: x'Ax = 0 on the current support");
    CharacteristicVector next{std::vector<double>(x.weights.size())};
    for (std::size_t i = 0; i < ax.size(); ++i)
        next.weights[i] = x.weights[i] * ax[i] / fitness;
    return next;
}

bool has_strict_curvature(const NodeSubset& support, const SimilarityMatrix& a) {
    const std::size_t m = support.size();
    if (m < 2)
        return false;
    double scale = 0.0;
    for (double v : a.values())
        scale = std::max(scale, v);
    const double tol = 1e-9 * std::max(scale, 1e-300);

    // Orthonormal basis of {v : sum v = 0} from the Householder reflection of 1.
    Eigen::MatrixXd restricted(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
            restricted(r, c) = a(support[r], support[c]);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd basis = q.rightCols(static_cast<Eigen::Index>(m - 1));
    const Eigen::MatrixXd tangent = basis.transpose() * restricted * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tangent, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff() < -tol;
}

bool is_strict_maximizer(const CharacteristicVector& x, const NodeSubset& support,
                         const SimilarityMatrix& a) {
    if (support.size() < 2)
        return false;
    const auto ax = payoffs(x, a, Execution::Serial);
    const double fitness = dot(x.weights, ax);
    std::size_t next = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (next < support.size() && support[next] == j) {
            ++next;
            continue;
        }
        if (!(ax[j] < fitness))
            return false;
    }
    return has_strict_curvature(support, a);
}

DominantSetResult find_dominant_set(const SimilarityMatrix& a, const SolverParams& params) {
    bool has_edge = false;
    for (double v : a.values())
        if (v > 0.0) {
            has_edge = true;
            break;
        }
    if (!has_edge)
        throw DegenerateGraph("graph of " + std::to_string(a.size()) + " nodes has no positive edge");

    DominantSetResult result;
    CharacteristicVector x = CharacteristicVector::barycenter(a.size());
    for (std::size_t it = 0; it < params.max_iters; ++it) {
        CharacteristicVector next = replicator_step(x, a, params.execution);
        double change = 0.0;
        for (std::size_t i = 0; i < x.weights.size(); ++i)
            change += std::abs(next.weights[i] - x.weights[i]);
        x = std::move(next);
        result.iterations = it + 1;
        if (change < params.epsilon) {
            result.converged = true;
            break;
        }
    }

    auto& cls = result.cls;
    cls.members = x.support(params.support_threshold);
    double mass = 0.0;
    for (std::size_t i : cls.members)
        mass += x.weights[i];
    cls.membership_weights.reserve(cls.members.size());
    for (std::size_t i : cls.members)
        cls.membership_weights.push_back(x.weights[i] / mass);
    cls.cohesiveness = quadratic_form(x, a, params.execution);
    result.curved = has_strict_curvature(cls.members, a);
    result.strict = result.curved && is_strict_maximizer(x, cls.members, a);
    result.state = std::move(x);
    return result;
}

ClusterResult peel_clusters(const SimilarityMatrix& a, const SolverParams& params) {
    if (params.min_clique_size < 1)
        throw InvalidParameter("min_clique_size must be positive");
    ClusterResult result;
    std::vector<std::size_t> remaining(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        remaining[i] = i;

    while (remaining.size() >= params.min_clique_size && !remaining.empty()) {
        const SimilarityMatrix sub = a.induced(remaining);
        DominantSetResult found;
        try {
            found = find_dominant_set(sub, params);
        } catch (const DegenerateGraph&) {
            break;
        }
        if (!found.converged)
            result.warnings.push_back("replicator dynamics did not converge within " +
                                      std::to_string(params.max_iters) +
                                      " iterations; using the last iterate");
        if (found.cls.members.size() < params.min_clique_size)
            break;
        if (!found.curved) {
            result.warnings.push_back("support of " + std::to_string(found.cls.members.size()) +
                                      " nodes lies on a plateau of x'Ax; peeling stopped");
            break;
        }

        DiscoveredClass cls = std::move(found.cls);
        std::vector<bool> taken(remaining.size(), false);
        for (auto& member : cls.members) {
            taken[member] = true;
            member = remaining[member];
        }
        std::vector<std::size_t> rest;
        for (std::size_t r = 0; r < remaining.size(); ++r)
            if (!taken[r])
                rest.push_back(remaining[r]);
        remaining = std::move(rest);
        result.classes.push_back(std::move(cls));
    }
    result.leftover = std::move(remaining);
    return result;
}

}  // namespace streamclique
