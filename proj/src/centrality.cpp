#include "collabnet/centrality.hpp"

#include "collabnet/error.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/paths.hpp"
#include "collabnet/series.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>

namespace collabnet {

namespace {

constexpr std::size_t kSourceBlock = 256;

CentralityVector make_vector(const CollabNetwork& net, std::string metric) {
    CentralityVector v;
    v.metric = std::move(metric);
    v.nodes = net.nodes();
    v.scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.size()));
    return v;
}

// Brandes dependency of `source` on every node.
void accumulate_dependency(const ShortestPathDag& dag, Eigen::Ref<Eigen::VectorXd> delta) {
    delta.setZero();
    for (auto it = dag.order.rbegin(); it != dag.order.rend(); ++it) {
        const auto w = *it;
        const double coeff = (1.0 + delta(static_cast<Eigen::Index>(w))) / dag.sigma[w];
        for (auto v : dag.preds[w]) delta(static_cast<Eigen::Index>(v)) += dag.sigma[v] * coeff;
    }
    delta(static_cast<Eigen::Index>(dag.source)) = 0.0;
}

// Component labels via BFS; returns the members of the largest component
// (ties go to the component holding the smallest node index).
std::vector<std::size_t> largest_component(const CollabNetwork& net) {
    std::vector<int> comp(net.size(), -1);
    std::vector<std::size_t> best;
    int next = 0;
    for (std::size_t s = 0; s < net.size(); ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> members{s};
        comp[s] = next;
        for (std::size_t k = 0; k < members.size(); ++k)
            for (const auto& nb : net.neighbors(members[k]))
                if (comp[nb.node] < 0) {
                    comp[nb.node] = next;
                    members.push_back(nb.node);
                }
        if (members.size() > best.size()) best = std::move(members);
        ++next;
    }
    std::sort(best.begin(), best.end());
    return best;
}

} // namespace

double CentralityVector::value(const std::string& label) const {
    auto it = std::find(nodes.begin(), nodes.end(), label);
    if (it == nodes.end()) throw DataError("no score for " + label);
    return scores(it - nodes.begin());
}

CentralityVector betweenness(const CollabNetwork& net, bool weighted) {
    const auto n = net.size();
    if (n < 2) throw DataError("betweenness needs at least 2 nodes");
    auto out = make_vector(net, weighted ? "bcw" : "bc");

    DistanceGraph distances;
    if (weighted) distances = to_distance(net);

    // Per-source dependencies land in separate rows and are summed in
    // source order, so the result does not depend on the thread count.
    const auto nn = static_cast<Eigen::Index>(n);
    for (std::size_t begin = 0; begin < n; begin += kSourceBlock) {
        const std::size_t count = std::min(kSourceBlock, n - begin);
        Eigen::MatrixXd rows(nn, static_cast<Eigen::Index>(count));
        parallel_for(count, [&](std::size_t k) {
            const auto s = begin + k;
            const auto dag = weighted ? single_source_paths(distances, s)
                                      : single_source_paths(net, s, PathMetric::hops);
            accumulate_dependency(dag, rows.col(static_cast<Eigen::Index>(k)));
        });
        for (Eigen::Index k = 0; k < rows.cols(); ++k) out.scores += rows.col(k);
    }
    out.scores /= 2.0;
    return out;
}

CentralityVector normalize_bc(const CentralityVector& raw, std::size_t n) {
    if (n < 3) throw DataError("normalized betweenness needs at least 3 nodes");
    CentralityVector out = raw;
    out.metric = raw.metric + "_norm";
    const double divisor = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    out.scores = raw.scores / divisor;
    return out;
}

CentralityVector eigenvector_centrality(const CollabNetwork& net, const EigenvectorOptions& options) {
    if (net.size() == 0) throw DataError("eigenvector centrality of an empty network");
    auto out = make_vector(net, "ev");

    auto members = largest_component(net);
    const bool partial = members.size() < net.size();
    const CollabNetwork sub = partial ? net.induced(members) : net;
    if (partial)
        out.warnings.push_back("network is disconnected; scored the largest component (" +
                               std::to_string(members.size()) + " of " + std::to_string(net.size()) + " nodes)");

    const auto n = static_cast<Eigen::Index>(sub.size());
    if (sub.edge_count() == 0) {
        // A single isolated node: the trivial eigenpair.
        out.scores(static_cast<Eigen::Index>(members.front())) = 1.0;
        out.eigenvalue = 0.0;
        out.residual = 0.0;
        return out;
    }

    double max_weight = 0.0;
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t i = 0; i < sub.size(); ++i)
        for (const auto& nb : sub.neighbors(i)) {
            const double w = options.weighted ? nb.weight : 1.0;
            max_weight = std::max(max_weight, w);
            triplets.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nb.node), w);
        }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a /= max_weight;

    // Power iteration on A + I: same eigenvectors, and the shift makes the
    // Perron root strictly dominant even on bipartite graphs.
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double lambda = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.max_iterations; ++it) {
        const Eigen::VectorXd ax = a * x;
        lambda = x.dot(ax);
        residual = (ax - lambda * x).lpNorm<Eigen::Infinity>();
        if (residual <= options.tolerance) break;
        x = ax + x;
        x /= x.norm();
    }
    if (!(residual <= options.tolerance))
        throw NumericError("eigenvector centrality did not converge in " + std::to_string(options.max_iterations) +
                               " iterations (residual " + format_double(residual) + ")",
                           residual);

    x = x.cwiseAbs();
    for (Eigen::Index k = 0; k < n; ++k) out.scores(static_cast<Eigen::Index>(members[static_cast<std::size_t>(k)])) = x(k);
    out.eigenvalue = lambda * max_weight;
    out.residual = residual;
    return out;
}

CentralityVector degree_centrality(const CollabNetwork& net) {
    if (net.size() < 2) throw DataError("degree centrality needs at least 2 nodes");
    auto out = make_vector(net, "deg");
    const double denom = static_cast<double>(net.size() - 1);
    for (std::size_t i = 0; i < net.size(); ++i)
        out.scores(static_cast<Eigen::Index>(i)) = static_cast<double>(net.degree(i)) / denom;
    return out;
}

double betweenness_centralization(const CollabNetwork& net, bool weighted) {
    if (net.size() < 3) throw DataError("betweenness centralization needs at least 3 nodes");
    return betweenness_centralization(normalize_bc(betweenness(net, weighted), net.size()));
}

double betweenness_centralization(const CentralityVector& normalized) {
    const auto n = normalized.size();
    if (n < 3) throw DataError("betweenness centralization needs at least 3 nodes");
    const double max = normalized.scores.maxCoeff();
    return (max - normalized.scores.array()).sum() / static_cast<double>(n - 1);
}

double average_betweenness(const CollabNetwork& net, bool weighted) {
    if (net.size() < 3) throw DataError("average betweenness needs at least 3 nodes");
    return normalize_bc(betweenness(net, weighted), net.size()).scores.mean();
}

} // namespace collabnet
