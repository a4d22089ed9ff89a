#pragma once

#include "collabnet/graph.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace collabnet {

struct CorePartition {
    std::vector<std::string> nodes;
    std::vector<int> core_number; // aligned with nodes
    int max_k = 0;
    std::size_t kcore_nodes = 0; // size of the maximum k-core
    double kcore_ratio = 0.0;    // kcore_nodes / n

    /// Node indices whose core number is at least k.
    std::vector<std::size_t> members(int k) const;
};

/// Core numbers by iterative peeling; weights are ignored.
CorePartition k_core(const CollabNetwork& net);

/// Subgraph induced by the maximum k-core.
CollabNetwork max_core_subgraph(const CollabNetwork& net);

struct ClusteringResult {
    Eigen::VectorXd local; // 2 T_i / (k_i (k_i - 1)), 0 when k_i < 2
    double average = 0.0;
};

/// Unweighted local clustering coefficients and their mean over all nodes.
ClusteringResult clustering(const CollabNetwork& net);

/// Mean of 1/d over unordered pairs; unreachable pairs add 0. Hop distances
/// by default; `weighted` uses 1/w edge lengths (not bounded by 1).
double global_efficiency(const CollabNetwork& net, bool weighted = false);

using Partition = std::vector<std::vector<std::string>>;

struct CommunityPartition {
    Partition blocks; // each block sorted, blocks ordered by first label
    double modularity = 0.0;

    std::size_t count() const noexcept { return blocks.size(); }
};

/// Q = sum_c (e_c / m - (d_c / 2m)^2), with e_c the internal weight, d_c the
/// total degree (strength) of block c and m the total edge weight. 0 on an
/// edgeless network. Throws DataError unless `blocks` partitions the nodes.
double modularity_score(const CollabNetwork& net, const Partition& blocks, bool weighted = true);

/// Clauset-Newman-Moore greedy agglomeration: repeatedly merge the pair of
/// communities with the largest modularity gain while the gain is positive.
/// Gains within 1e-12 tie; ties go to the pair whose smallest member labels
/// compare lexicographically smallest.
CommunityPartition communities(const CollabNetwork& net, bool weighted = true);

struct EgoOptions {
    bool include_ego = true;
    bool weighted = true;
};

/// The country, its neighbors, and the edges among them.
CollabNetwork ego_network(const CollabNetwork& net, const std::string& country, bool include_ego = true);

/// Modularity of the CNM partition of the country's ego network.
double ego_modularity(const CollabNetwork& net, const std::string& country, const EgoOptions& options = {});

} // namespace collabnet
