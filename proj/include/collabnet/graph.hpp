#pragma once

#include "collabnet/ingest.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace collabnet {

enum class WeightScheme { raw, log, salton, jaccard };

std::string to_string(WeightScheme s);
WeightScheme parse_weight_scheme(const std::string& s);

/// Identifies which slice of the corpus a network was built from.
struct SliceTag {
    int year = 0; // last year of the window
    std::string field = kAllFields;
    std::string norm = "raw";
    int window = 1;

    bool operator==(const SliceTag&) const = default;
};

struct WeightedEdge {
    std::string a;
    std::string b;
    double weight = 0.0;

    bool operator==(const WeightedEdge&) const = default;
};

/// Weighted undirected country graph. Nodes are kept in label order, so node
/// indices are stable for a given node set. Immutable once built.
class CollabNetwork {
public:
    struct Neighbor {
        std::size_t node;
        double weight;
    };

    CollabNetwork() = default;

    /// `nodes` may omit edge endpoints (they are added) and may list
    /// isolated nodes. Repeated pairs are summed. Throws DataError on
    /// self-loops and on non-finite or non-positive weights.
    CollabNetwork(std::vector<std::string> nodes, const std::vector<WeightedEdge>& edges, SliceTag slice = {});

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    const std::vector<std::string>& nodes() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::optional<std::size_t> find(const std::string& label) const;
    /// Throws DataError for an unknown label.
    std::size_t index_of(const std::string& label) const;

    /// Neighbors in increasing node index.
    std::span<const Neighbor> neighbors(std::size_t i) const { return adjacency_.at(i); }
    std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
    double strength(std::size_t i) const;
    std::optional<double> weight(std::size_t i, std::size_t j) const;
    double total_weight() const;

    /// Edges with a < b, in label order.
    std::vector<WeightedEdge> edges() const;

    const SliceTag& slice() const noexcept { return slice_; }

    /// Subgraph induced by the given node indices, same slice tag.
    CollabNetwork induced(std::span<const std::size_t> keep) const;

    bool operator==(const CollabNetwork& other) const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::size_t edge_count_ = 0;
    SliceTag slice_;
};

CollabNetwork from_edge_list(const EdgeList& edges);

/// Sums consecutive yearly edge lists (usually 3) into the network for the
/// window ending at the last year. The slice's window length is the number
/// of lists.
CollabNetwork rolling_window(std::span<const EdgeList> years);

/// Productivity p_i per country for a window: total publications summed
/// over the same years as the edge weights.
std::map<std::string, double> window_productivity(std::span<const SliceStats> years);

/// log: ln(w+1); salton: w/sqrt(p_i p_j); jaccard: w/(p_i + p_j - w).
double normalized_weight(WeightScheme scheme, double w, double p_i, double p_j);

CollabNetwork normalize_weights(const CollabNetwork& net, const std::map<std::string, double>& productivity,
                                WeightScheme scheme);

/// Edge lengths d = 1/w, parallel to CollabNetwork::neighbors.
struct DistanceGraph {
    struct Arc {
        std::size_t node;
        double length;
    };
    std::vector<std::vector<Arc>> arcs;

    std::size_t size() const noexcept { return arcs.size(); }
    std::optional<double> length(std::size_t i, std::size_t j) const;
};

DistanceGraph to_distance(const CollabNetwork& net);

/// Dense adjacency matrix, weights or 0/1 entries.
Eigen::MatrixXd adjacency_matrix(const CollabNetwork& net, bool weighted = true);

/// Network file: {"nodes":[...], "edges":[[a,b,w],...], "slice":{...}}.
void write_network_json(std::ostream& out, const CollabNetwork& net);
CollabNetwork read_network_json(std::istream& in);

} // namespace collabnet
