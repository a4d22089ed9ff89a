#include "collabnet/structure.hpp"

#include "collabnet/error.hpp"
#include "collabnet/paths.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace collabnet {

std::vector<std::size_t> CorePartition::members(int k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < core_number.size(); ++i)
        if (core_number[i] >= k) out.push_back(i);
    return out;
}

CorePartition k_core(const CollabNetwork& net) {
    // Batagelj-Zaversnik bucket peeling.
    const auto n = net.size();
    CorePartition out;
    out.nodes = net.nodes();
    out.core_number.assign(n, 0);
    if (n == 0) return out;

    std::size_t max_deg = 0;
    std::vector<std::size_t> deg(n);
    for (std::size_t i = 0; i < n; ++i) {
        deg[i] = net.degree(i);
        max_deg = std::max(max_deg, deg[i]);
    }
    std::vector<std::size_t> bin(max_deg + 1, 0), pos(n), vert(n);
    for (auto d : deg) ++bin[d];
    std::size_t start = 0;
    for (auto& b : bin) {
        const auto count = b;
        b = start;
        start += count;
    }
    for (std::size_t v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = v;
    }
    for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const auto v = vert[i];
        for (const auto& nb : net.neighbors(v)) {
            const auto u = nb.node;
            if (deg[u] > deg[v]) {
                const auto du = deg[u];
                const auto pu = pos[u];
                const auto pw = bin[du];
                const auto w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --deg[u];
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v) out.core_number[v] = static_cast<int>(deg[v]);
    out.max_k = *std::max_element(out.core_number.begin(), out.core_number.end());
    out.kcore_nodes = static_cast<std::size_t>(
        std::count_if(out.core_number.begin(), out.core_number.end(), [&](int c) { return c == out.max_k; }));
    out.kcore_ratio = static_cast<double>(out.kcore_nodes) / static_cast<double>(n);
    return out;
}

CollabNetwork max_core_subgraph(const CollabNetwork& net) {
    const auto cores = k_core(net);
    const auto keep = cores.members(cores.max_k);
    return net.induced(keep);
}

ClusteringResult clustering(const CollabNetwork& net) {
    const auto n = net.size();
    ClusteringResult out;
    out.local = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    std::vector<char> mark(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = net.degree(i);
        if (k < 2) continue;
        for (const auto& nb : net.neighbors(i)) mark[nb.node] = 1;
        std::size_t links = 0; // each neighbor-neighbor edge seen twice
        for (const auto& nb : net.neighbors(i))
            for (const auto& nb2 : net.neighbors(nb.node))
                if (mark[nb2.node]) ++links;
        for (const auto& nb : net.neighbors(i)) mark[nb.node] = 0;
        out.local(static_cast<Eigen::Index>(i)) =
            static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    out.average = n == 0 ? 0.0 : out.local.mean();
    return out;
}

double global_efficiency(const CollabNetwork& net, bool weighted) {
    const auto n = net.size();
    if (n < 2) return 0.0;
    DistanceGraph distances;
    if (weighted) distances = to_distance(net);
    double total = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto dag = weighted ? single_source_paths(distances, s) : single_source_paths(net, s, PathMetric::hops);
        for (std::size_t t = s + 1; t < n; ++t)
            if (dag.reachable(t)) total += 1.0 / dag.dist[t];
    }
    return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double modularity_score(const CollabNetwork& net, const Partition& blocks, bool weighted) {
    const auto n = net.size();
    std::vector<long> block_of(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (const auto& label : blocks[b]) {
            const auto i = net.index_of(label);
            if (block_of[i] >= 0) throw DataError("node " + label + " appears in more than one block");
            block_of[i] = static_cast<long>(b);
        }
    for (std::size_t i = 0; i < n; ++i)
        if (block_of[i] < 0) throw DataError("partition is missing node " + net.label(i));

    std::vector<double> internal(blocks.size(), 0.0), degree(blocks.size(), 0.0);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& nb : net.neighbors(i)) {
            const double w = weighted ? nb.weight : 1.0;
            degree[static_cast<std::size_t>(block_of[i])] += w;
            if (nb.node > i) {
                m += w;
                if (block_of[i] == block_of[nb.node]) internal[static_cast<std::size_t>(block_of[i])] += w;
            }
        }
    if (m == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const double share = degree[b] / (2.0 * m);
        q += internal[b] / m - share * share;
    }
    return q;
}

namespace {

constexpr double kGainTieTolerance = 1e-12;

// Greedy agglomeration over community ids. A community keeps the id of the
// member that founded it; `canon` is its smallest member index, which is
// also its smallest label because node indices follow label order.
class CnmMerger {
public:
    CnmMerger(const CollabNetwork& net, bool weighted)
        : n_(net.size()), links_(n_), degree_(n_, 0.0), canon_(n_), members_(n_), alive_(n_, 1) {
        for (std::size_t i = 0; i < n_; ++i) {
            canon_[i] = i;
            members_[i] = {i};
            for (const auto& nb : net.neighbors(i)) {
                const double w = weighted ? nb.weight : 1.0;
                degree_[i] += w;
                links_[i][nb.node] += w;
                if (nb.node > i) m_ += w;
            }
        }
        if (m_ == 0.0) return;
        for (std::size_t i = 0; i < n_; ++i)
            for (const auto& [j, w] : links_[i])
                if (j > i) queue_.insert(entry(i, j));
    }

    void run() {
        while (!queue_.empty()) {
            auto best = queue_.begin();
            if (!(best->gain > 0.0)) break;
            // Among gains tied with the top, the smallest canonical pair wins.
            for (auto it = std::next(best); it != queue_.end() && best->gain - it->gain <= kGainTieTolerance; ++it)
                if (std::tie(it->ca, it->cb) < std::tie(best->ca, best->cb)) best = it;
            merge(best->a, best->b);
        }
    }

    std::vector<std::vector<std::size_t>> blocks() const {
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t i = 0; i < n_; ++i)
            if (alive_[i]) {
                auto b = members_[i];
                std::sort(b.begin(), b.end());
                out.push_back(std::move(b));
            }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Entry {
        double gain;
        std::size_t ca, cb; // canonical labels, ca < cb
        std::size_t a, b;   // community ids

        bool operator<(const Entry& o) const {
            if (gain != o.gain) return gain > o.gain;
            return std::tie(ca, cb) < std::tie(o.ca, o.cb);
        }
    };

    Entry entry(std::size_t a, std::size_t b) const {
        const double w = links_[a].at(b);
        const double gain = w / m_ - degree_[a] * degree_[b] / (2.0 * m_ * m_);
        auto ca = canon_[a], cb = canon_[b];
        if (ca > cb) {
            std::swap(ca, cb);
            std::swap(a, b);
        }
        return {gain, ca, cb, a, b};
    }

    void merge(std::size_t a, std::size_t b) {
        // `a` has the smaller canonical label and survives.
        for (const auto& [k, w] : links_[a]) queue_.erase(entry(a, k));
        for (const auto& [k, w] : links_[b]) queue_.erase(entry(b, k));

        for (const auto& [k, w] : links_[b]) {
            if (k == a) continue;
            links_[a][k] += w;
            links_[k][a] += w;
            links_[k].erase(b);
        }
        links_[a].erase(b);
        links_[b].clear();
        degree_[a] += degree_[b];
        canon_[a] = std::min(canon_[a], canon_[b]);
        members_[a].insert(members_[a].end(), members_[b].begin(), members_[b].end());
        members_[b].clear();
        alive_[b] = 0;

        for (const auto& [k, w] : links_[a]) queue_.insert(entry(a, k));
    }

    std::size_t n_;
    double m_ = 0.0;
    std::vector<std::map<std::size_t, double>> links_;
    std::vector<double> degree_;
    std::vector<std::size_t> canon_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<char> alive_;
    std::set<Entry> queue_;
};

} // namespace

CommunityPartition communities(const CollabNetwork& net, bool weighted) {
    CnmMerger merger(net, weighted);
    merger.run();
    CommunityPartition out;
    for (const auto& block : merger.blocks()) {
        std::vector<std::string> labels;
        labels.reserve(block.size());
        for (auto i : block) labels.push_back(net.label(i));
        out.blocks.push_back(std::move(labels));
    }
    out.modularity = modularity_score(net, out.blocks, weighted);
    return out;
}

CollabNetwork ego_network(const CollabNetwork& net, const std::string& country, bool include_ego) {
    const auto ego = net.index_of(country);
    std::vector<std::size_t> keep;
    if (include_ego) keep.push_back(ego);
    for (const auto& nb : net.neighbors(ego)) keep.push_back(nb.node);
    std::sort(keep.begin(), keep.end());
    return net.induced(keep);
}

double ego_modularity(const CollabNetwork& net, const std::string& country, const EgoOptions& options) {
    return communities(ego_network(net, country, options.include_ego), options.weighted).modularity;
}

} // namespace collabnet
