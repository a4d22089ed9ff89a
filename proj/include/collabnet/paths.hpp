#pragma once

#include "collabnet/graph.hpp"
#include "collabnet/series.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace collabnet {

/// Two path lengths within this relative distance are co-minimal.
inline constexpr double kDistanceTieTolerance = 1e-12;

bool distances_tie(double a, double b) noexcept;

enum class PathMetric {
    hops,           // every edge has length 1
    inverse_weight  // edge length 1/w
};

/// Shortest-path DAG from one source: distance, number of co-minimal
/// paths, the predecessors on those paths, and settle order.
struct ShortestPathDag {
    static constexpr double unreachable = std::numeric_limits<double>::infinity();

    std::size_t source = 0;
    std::vector<double> dist;
    std::vector<double> sigma;
    std::vector<std::vector<std::size_t>> preds;
    std::vector<std::size_t> order; // reachable nodes, non-decreasing distance

    bool reachable(std::size_t v) const { return dist.at(v) != unreachable; }
};

ShortestPathDag single_source_paths(const CollabNetwork& net, std::size_t source, PathMetric metric);
ShortestPathDag single_source_paths(const DistanceGraph& graph, std::size_t source);

/// Every co-minimal path source..target, as node index sequences in
/// lexicographic order. Exponential in the worst case; intended for small
/// graphs and reporting.
std::vector<std::vector<std::size_t>> all_shortest_paths(const ShortestPathDag& dag, std::size_t target);

enum class BridgingMode {
    any_path,   // target counts if the intermediary is interior to at least one shortest path
    sigma_share // target counts by the share of shortest paths through the intermediary
};

std::string to_string(BridgingMode m);

struct BridgingReport {
    std::string source;
    std::string intermediary;
    int year = 0;
    double fraction = 0.0;
    double bridged = 0.0; // integral in any_path mode
    std::size_t target_count = 0;
};

/// Fraction of the source's weighted shortest paths to every other target
/// (n - 2 of them) that pass through the intermediary. Unreachable targets
/// count as not bridged.
BridgingReport bridging_fraction(const CollabNetwork& net, const std::string& source,
                                 const std::string& intermediary, BridgingMode mode = BridgingMode::any_path);

/// One point per network year; a year where either country is absent is missing.
MetricSeries bridging_series(const std::map<int, CollabNetwork>& by_year, const std::string& source,
                             const std::string& intermediary, BridgingMode mode = BridgingMode::any_path);

} // namespace collabnet
