#include "collabnet/paths.hpp"

#include "collabnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace collabnet {

bool distances_tie(double a, double b) noexcept {
    return std::abs(a - b) <= kDistanceTieTolerance * std::max(std::abs(a), std::abs(b));
}

namespace {

ShortestPathDag init_dag(std::size_t n, std::size_t source) {
    if (source >= n) throw DataError("source index out of range");
    ShortestPathDag dag;
    dag.source = source;
    dag.dist.assign(n, ShortestPathDag::unreachable);
    dag.sigma.assign(n, 0.0);
    dag.preds.assign(n, {});
    dag.order.reserve(n);
    dag.dist[source] = 0.0;
    dag.sigma[source] = 1.0;
    return dag;
}

ShortestPathDag bfs(const CollabNetwork& net, std::size_t source) {
    auto dag = init_dag(net.size(), source);
    std::queue<std::size_t> frontier;
    frontier.push(source);
    while (!frontier.empty()) {
        const auto v = frontier.front();
        frontier.pop();
        dag.order.push_back(v);
        for (const auto& nb : net.neighbors(v)) {
            const auto w = nb.node;
            if (dag.dist[w] == ShortestPathDag::unreachable) {
                dag.dist[w] = dag.dist[v] + 1.0;
                frontier.push(w);
            }
            if (dag.dist[w] == dag.dist[v] + 1.0) {
                dag.sigma[w] += dag.sigma[v];
                dag.preds[w].push_back(v);
            }
        }
    }
    return dag;
}

} // namespace

ShortestPathDag single_source_paths(const DistanceGraph& graph, std::size_t source) {
    auto dag = init_dag(graph.size(), source);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::vector<char> settled(graph.size(), 0);
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (settled[v]) continue;
        settled[v] = 1;
        dag.order.push_back(v);
        for (const auto& arc : graph.arcs[v]) {
            const auto w = arc.node;
            if (settled[w]) continue;
            const double candidate = d + arc.length;
            const double current = dag.dist[w];
            if (current != ShortestPathDag::unreachable && distances_tie(candidate, current)) {
                dag.sigma[w] += dag.sigma[v];
                dag.preds[w].push_back(v);
            } else if (candidate < current) {
                dag.dist[w] = candidate;
                dag.sigma[w] = dag.sigma[v];
                dag.preds[w].assign(1, v);
                heap.push({candidate, w});
            }
        }
    }
    return dag;
}

ShortestPathDag single_source_paths(const CollabNetwork& net, std::size_t source, PathMetric metric) {
    if (metric == PathMetric::hops) return bfs(net, source);
    return single_source_paths(to_distance(net), source);
}

std::vector<std::vector<std::size_t>> all_shortest_paths(const ShortestPathDag& dag, std::size_t target) {
    std::vector<std::vector<std::size_t>> out;
    if (!dag.reachable(target)) return out;
    std::vector<std::size_t> stack{target};
    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        if (v == dag.source) {
            out.emplace_back(stack.rbegin(), stack.rend());
            return;
        }
        for (auto p : dag.preds[v]) {
            stack.push_back(p);
            walk(p);
            stack.pop_back();
        }
    };
    walk(target);
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(BridgingMode m) { return m == BridgingMode::any_path ? "any_path" : "sigma_share"; }

BridgingReport bridging_fraction(const CollabNetwork& net, const std::string& source, const std::string& intermediary,
                                 BridgingMode mode) {
    if (source == intermediary) throw DataError("source and intermediary are both " + source);
    const auto s = net.index_of(source);
    const auto via = net.index_of(intermediary);
    const auto dag = single_source_paths(net, s, PathMetric::inverse_weight);

    BridgingReport report{source, intermediary, net.slice().year, 0.0, 0.0, net.size() - 2};
    const auto n = net.size();
    if (mode == BridgingMode::any_path) {
        // through[v]: the intermediary precedes v on at least one shortest path.
        std::vector<char> through(n, 0);
        for (auto v : dag.order)
            for (auto p : dag.preds[v])
                if (p == via || through[p]) through[v] = 1;
        for (std::size_t t = 0; t < n; ++t)
            if (t != s && t != via && through[t]) report.bridged += 1.0;
    } else {
        // paths_from_via[v]: shortest-path DAG paths from the intermediary down to v.
        std::vector<double> paths_from_via(n, 0.0);
        if (dag.reachable(via)) paths_from_via[via] = 1.0;
        for (auto v : dag.order)
            for (auto p : dag.preds[v]) paths_from_via[v] += paths_from_via[p];
        for (std::size_t t = 0; t < n; ++t)
            if (t != s && t != via && dag.reachable(t))
                report.bridged += dag.sigma[via] * paths_from_via[t] / dag.sigma[t];
    }
    report.fraction = report.target_count == 0 ? 0.0 : report.bridged / static_cast<double>(report.target_count);
    return report;
}

MetricSeries bridging_series(const std::map<int, CollabNetwork>& by_year, const std::string& source,
                             const std::string& intermediary, BridgingMode mode) {
    MetricSeries out;
    out.name = "bridge:" + source + "/" + intermediary;
    out.unit = "fraction";
    for (const auto& [year, net] : by_year) {
        if (!net.find(source) || !net.find(intermediary)) {
            out.push(year, std::nullopt);
            continue;
        }
        out.push(year, bridging_fraction(net, source, intermediary, mode).fraction);
    }
    return out;
}

} // namespace collabnet
