#include "collabnet/graph.hpp"

#include "collabnet/error.hpp"
#include "collabnet/series.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace collabnet {

using nlohmann::json;

std::string to_string(WeightScheme s) {
    switch (s) {
    case WeightScheme::raw: return "raw";
    case WeightScheme::log: return "log";
    case WeightScheme::salton: return "salton";
    case WeightScheme::jaccard: return "jaccard";
    }
    return "raw";
}

WeightScheme parse_weight_scheme(const std::string& s) {
    if (s == "raw") return WeightScheme::raw;
    if (s == "log") return WeightScheme::log;
    if (s == "salton") return WeightScheme::salton;
    if (s == "jaccard") return WeightScheme::jaccard;
    throw DataError("unknown normalization '" + s + "' (raw|log|salton|jaccard)");
}

CollabNetwork::CollabNetwork(std::vector<std::string> nodes, const std::vector<WeightedEdge>& edges, SliceTag slice)
    : slice_(std::move(slice)) {
    for (const auto& e : edges) {
        if (e.a == e.b) throw DataError("self-loop on " + e.a);
        if (!std::isfinite(e.weight) || e.weight <= 0.0)
            throw DataError("edge " + e.a + "-" + e.b + " has non-positive weight " + format_double(e.weight));
        nodes.push_back(e.a);
        nodes.push_back(e.b);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    labels_ = std::move(nodes);
    adjacency_.resize(labels_.size());

    auto idx = [&](const std::string& s) {
        return static_cast<std::size_t>(std::lower_bound(labels_.begin(), labels_.end(), s) - labels_.begin());
    };
    for (const auto& e : edges) {
        const auto i = idx(e.a), j = idx(e.b);
        auto& row = adjacency_[i];
        auto it = std::find_if(row.begin(), row.end(), [&](const Neighbor& n) { return n.node == j; });
        if (it != row.end()) {
            it->weight += e.weight;
            auto back = std::find_if(adjacency_[j].begin(), adjacency_[j].end(),
                                     [&](const Neighbor& n) { return n.node == i; });
            back->weight += e.weight;
        } else {
            row.push_back({j, e.weight});
            adjacency_[j].push_back({i, e.weight});
            ++edge_count_;
        }
    }
    for (auto& row : adjacency_)
        std::sort(row.begin(), row.end(), [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
}

std::optional<std::size_t> CollabNetwork::find(const std::string& label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t CollabNetwork::index_of(const std::string& label) const {
    auto i = find(label);
    if (!i) throw DataError("country " + label + " is not in the network");
    return *i;
}

double CollabNetwork::strength(std::size_t i) const {
    double s = 0.0;
    for (const auto& n : neighbors(i)) s += n.weight;
    return s;
}

std::optional<double> CollabNetwork::weight(std::size_t i, std::size_t j) const {
    const auto& row = adjacency_.at(i);
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const Neighbor& n, std::size_t v) { return n.node < v; });
    if (it == row.end() || it->node != j) return std::nullopt;
    return it->weight;
}

double CollabNetwork::total_weight() const {
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (const auto& n : adjacency_[i])
            if (n.node > i) total += n.weight;
    return total;
}

std::vector<WeightedEdge> CollabNetwork::edges() const {
    std::vector<WeightedEdge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < size(); ++i)
        for (const auto& n : adjacency_[i])
            if (n.node > i) out.push_back({labels_[i], labels_[n.node], n.weight});
    return out;
}

CollabNetwork CollabNetwork::induced(std::span<const std::size_t> keep) const {
    std::vector<char> in(size(), 0);
    std::vector<std::string> nodes;
    for (auto k : keep) {
        in.at(k) = 1;
        nodes.push_back(labels_[k]);
    }
    std::vector<WeightedEdge> sub;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!in[i]) continue;
        for (const auto& n : adjacency_[i])
            if (n.node > i && in[n.node]) sub.push_back({labels_[i], labels_[n.node], n.weight});
    }
    return CollabNetwork(std::move(nodes), sub, slice_);
}

bool CollabNetwork::operator==(const CollabNetwork& other) const {
    return labels_ == other.labels_ && slice_ == other.slice_ && edges() == other.edges();
}

CollabNetwork from_edge_list(const EdgeList& edges) {
    std::vector<WeightedEdge> out;
    out.reserve(edges.edges.size());
    for (const auto& [pair, w] : edges.edges) out.push_back({pair.first, pair.second, static_cast<double>(w)});
    return CollabNetwork({}, out, SliceTag{edges.year, edges.field, "raw", 1});
}

CollabNetwork rolling_window(std::span<const EdgeList> years) {
    if (years.empty()) throw DataError("a rolling window needs at least one yearly edge list");
    for (std::size_t i = 1; i < years.size(); ++i) {
        if (years[i].year != years[i - 1].year + 1)
            throw DataError("window years are not consecutive: " + std::to_string(years[i - 1].year) + ", " +
                            std::to_string(years[i].year));
        if (years[i].field != years[0].field) throw DataError("window mixes fields");
    }
    std::map<CountryPair, std::int64_t> sum;
    for (const auto& y : years)
        for (const auto& [pair, w] : y.edges) sum[pair] += w;
    std::vector<WeightedEdge> edges;
    edges.reserve(sum.size());
    for (const auto& [pair, w] : sum) edges.push_back({pair.first, pair.second, static_cast<double>(w)});
    return CollabNetwork({}, edges,
                         SliceTag{years.back().year, years.back().field, "raw", static_cast<int>(years.size())});
}

std::map<std::string, double> window_productivity(std::span<const SliceStats> years) {
    std::map<std::string, double> out;
    for (const auto& y : years)
        for (const auto& [code, s] : y.countries) out[code] += static_cast<double>(s.total_pubs);
    return out;
}

double normalized_weight(WeightScheme scheme, double w, double p_i, double p_j) {
    switch (scheme) {
    case WeightScheme::raw: return w;
    case WeightScheme::log: return std::log(w + 1.0);
    case WeightScheme::salton: {
        const double denom = std::sqrt(p_i * p_j);
        if (!(denom > 0.0)) throw DataError("salton normalization: zero productivity");
        return w / denom;
    }
    case WeightScheme::jaccard: {
        const double denom = p_i + p_j - w;
        if (!(denom > 0.0)) throw DataError("jaccard normalization: zero denominator");
        return w / denom;
    }
    }
    return w;
}

CollabNetwork normalize_weights(const CollabNetwork& net, const std::map<std::string, double>& productivity,
                                WeightScheme scheme) {
    const bool needs_p = scheme == WeightScheme::salton || scheme == WeightScheme::jaccard;
    auto p = [&](const std::string& c) {
        if (!needs_p) return 0.0;
        auto it = productivity.find(c);
        if (it == productivity.end()) throw DataError("no productivity for " + c + " under " + to_string(scheme));
        return it->second;
    };
    std::vector<WeightedEdge> edges = net.edges();
    for (auto& e : edges) e.weight = normalized_weight(scheme, e.weight, p(e.a), p(e.b));
    SliceTag tag = net.slice();
    tag.norm = to_string(scheme);
    return CollabNetwork(net.nodes(), edges, tag);
}

std::optional<double> DistanceGraph::length(std::size_t i, std::size_t j) const {
    for (const auto& a : arcs.at(i))
        if (a.node == j) return a.length;
    return std::nullopt;
}

DistanceGraph to_distance(const CollabNetwork& net) {
    DistanceGraph out;
    out.arcs.resize(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        out.arcs[i].reserve(net.degree(i));
        for (const auto& n : net.neighbors(i)) {
            if (!(n.weight > 0.0) || !std::isfinite(n.weight))
                throw DataError("cannot invert non-positive weight on " + net.label(i) + "-" + net.label(n.node));
            out.arcs[i].push_back({n.node, 1.0 / n.weight});
        }
    }
    return out;
}

Eigen::MatrixXd adjacency_matrix(const CollabNetwork& net, bool weighted) {
    const auto n = static_cast<Eigen::Index>(net.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < net.size(); ++i)
        for (const auto& nb : net.neighbors(i))
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(nb.node)) = weighted ? nb.weight : 1.0;
    return a;
}

void write_network_json(std::ostream& out, const CollabNetwork& net) {
    json edges = json::array();
    for (const auto& e : net.edges()) edges.push_back(json::array({e.a, e.b, e.weight}));
    const auto& s = net.slice();
    json j{{"nodes", net.nodes()},
           {"edges", edges},
           {"slice", {{"year", s.year}, {"field", s.field}, {"norm", s.norm}, {"window", s.window}}}};
    out << j.dump(2) << '\n';
}

CollabNetwork read_network_json(std::istream& in) {
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataError("network file is not a JSON object");
    try {
        auto nodes = j.at("nodes").get<std::vector<std::string>>();
        std::vector<WeightedEdge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) throw DataError("network edge must be [a, b, w]");
            edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<double>()});
        }
        SliceTag tag;
        if (auto s = j.find("slice"); s != j.end()) {
            tag.year = s->value("year", 0);
            tag.field = s->value("field", std::string(kAllFields));
            tag.norm = s->value("norm", std::string("raw"));
            tag.window = s->value("window", 1);
        }
        return CollabNetwork(std::move(nodes), edges, tag);
    } catch (const json::exception& e) {
        throw DataError(std::string("network file: ") + e.what());
    }
}

} // namespace collabnet
