#pragma once

#include "collabnet/graph.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace collabnet {

/// Per-node scores of one centrality metric, aligned with `nodes`.
struct CentralityVector {
    std::string metric;
    std::vector<std::string> nodes;
    Eigen::VectorXd scores;

    // Filled by eigenvector_centrality.
    std::optional<double> eigenvalue;
    std::optional<double> residual;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return nodes.size(); }
    /// Throws DataError for an unknown label.
    double value(const std::string& label) const;
};

/// Raw betweenness over unordered pairs {s, t}: sum of sigma_st(i) / sigma_st.
/// Weighted mode uses edge length 1/w and counts every co-minimal path.
/// Disconnected pairs contribute nothing. Requires n >= 2.
CentralityVector betweenness(const CollabNetwork& net, bool weighted = false);

/// Divides by (n-1)(n-2)/2. Requires n >= 3.
CentralityVector normalize_bc(const CentralityVector& raw, std::size_t n);

struct EigenvectorOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
    bool weighted = true;
};

/// Principal eigenvector of the adjacency matrix, L2-normalized and
/// non-negative. Convergence is judged by the fixed-point residual
/// ||A x - lambda x||_inf on the adjacency scaled to unit maximum weight;
/// the reported eigenvalue is in original units. On a disconnected network
/// only the largest component is scored and a warning is attached.
/// Throws NumericError (carrying the residual) on non-convergence.
CentralityVector eigenvector_centrality(const CollabNetwork& net, const EigenvectorOptions& options = {});

/// deg(i) / (n-1), weights ignored. Requires n >= 2.
CentralityVector degree_centrality(const CollabNetwork& net);

/// Freeman centralization of normalized betweenness:
/// sum_i (max - BC_i) / (n-1). 1 on a star, 0 when uniform. Requires n >= 3.
double betweenness_centralization(const CollabNetwork& net, bool weighted = false);
double betweenness_centralization(const CentralityVector& normalized);

/// Mean normalized betweenness over all nodes. Requires n >= 3.
double average_betweenness(const CollabNetwork& net, bool weighted = false);

} // namespace collabnet
