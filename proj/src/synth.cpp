#include "collabnet/synth.hpp"

#include "collabnet/centrality.hpp"
#include "collabnet/error.hpp"
#include "collabnet/structure.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace collabnet {

using nlohmann::json;

std::uint64_t SynthRng::splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SynthRng::SynthRng(std::uint64_t seed, Phase phase)
    : engine_(splitmix64(seed ^ static_cast<std::uint64_t>(phase))) {}

double SynthRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::string to_string(FitnessLaw law) { return law == FitnessLaw::constant ? "constant" : "uniform"; }

FitnessLaw parse_fitness_law(const std::string& s) {
    if (s == "constant") return FitnessLaw::constant;
    if (s == "uniform") return FitnessLaw::uniform;
    throw DataError("unknown fitness law '" + s + "' (constant|uniform)");
}

std::string to_string(DensifyRule rule) { return rule == DensifyRule::triadic ? "triadic" : "fitness_pair"; }

DensifyRule parse_densify_rule(const std::string& s) {
    if (s == "triadic") return DensifyRule::triadic;
    if (s == "fitness_pair") return DensifyRule::fitness_pair;
    throw DataError("unknown densify rule '" + s + "' (triadic|fitness_pair)");
}

void SynthConfig::validate() const {
    if (m < 1) throw DataError("synth: m must be at least 1");
    if (n_final <= m + 1) throw DataError("synth: n_final must exceed m + 1");
    if (!(eta > 0.0)) throw DataError("synth: eta must be positive");
    if (checkpoint_stride == 0) throw DataError("synth: checkpoint stride must be positive");
    if (entrant_arrival <= m || entrant_arrival >= n_final)
        throw DataError("synth: entrant arrival must lie in (m, n_final)");
}

std::string synth_label(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "N%05zu", i);
    return buf;
}

std::vector<std::size_t> GrowthTrajectory::degrees() const {
    std::vector<std::size_t> deg(nodes, 0);
    for (const auto& [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

CollabNetwork GrowthTrajectory::network(std::size_t node_count) const {
    if (node_count > nodes) throw DataError("trajectory has only " + std::to_string(nodes) + " nodes");
    const auto edge_count = node_count == nodes ? edges.size() : edges_before[node_count];
    std::vector<std::string> labels;
    labels.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) labels.push_back(synth_label(i));
    std::vector<WeightedEdge> out;
    out.reserve(edge_count);
    for (std::size_t e = 0; e < edge_count; ++e) out.push_back({labels[edges[e].first], labels[edges[e].second], 1.0});
    return CollabNetwork(std::move(labels), out);
}

namespace {

class Grower {
public:
    explicit Grower(std::size_t m) : m_(m) {
        // Seed clique on m + 1 nodes.
        for (std::size_t i = 0; i <= m; ++i) add_node(1.0);
        for (std::size_t i = 0; i <= m; ++i)
            for (std::size_t j = i + 1; j <= m; ++j) add_edge(i, j);
    }

    std::size_t add_node(double fitness) {
        traj_.edges_before.push_back(traj_.edges.size());
        traj_.fitness.push_back(fitness);
        adj_.emplace_back();
        return traj_.nodes++;
    }

    void add_edge(std::size_t a, std::size_t b) {
        traj_.edges.emplace_back(static_cast<std::uint32_t>(std::min(a, b)), static_cast<std::uint32_t>(std::max(a, b)));
        adj_[a].insert(std::upper_bound(adj_[a].begin(), adj_[a].end(), b), b);
        adj_[b].insert(std::upper_bound(adj_[b].begin(), adj_[b].end(), a), a);
    }

    bool adjacent(std::size_t a, std::size_t b) const { return std::binary_search(adj_[a].begin(), adj_[a].end(), b); }

    // New node attaching m edges, targets drawn without replacement with
    // probability proportional to degree (times fitness when enabled).
    std::size_t arrive(double fitness, bool use_fitness, SynthRng& rng) {
        const auto existing = traj_.nodes;
        std::vector<char> taken(existing, 0);
        std::vector<std::size_t> targets;
        for (std::size_t k = 0; k < m_; ++k) {
            auto weight = [&](std::size_t i) {
                if (taken[i]) return 0.0;
                const double deg = static_cast<double>(adj_[i].size());
                return use_fitness ? traj_.fitness[i] * deg : deg;
            };
            targets.push_back(draw(existing, weight, rng));
            taken[targets.back()] = 1;
        }
        const auto node = add_node(fitness);
        for (auto t : targets) add_edge(node, t);
        return node;
    }

    // i ~ fitness, then j ~ fitness among nodes not yet adjacent to i.
    bool close_pair(SynthRng& rng) {
        const auto n = traj_.nodes;
        const auto i = draw(n, [&](std::size_t v) { return traj_.fitness[v]; }, rng);
        if (adj_[i].size() + 1 >= n) return false;
        double total = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (v != i && !adjacent(i, v)) total += traj_.fitness[v];
        if (!(total > 0.0)) return false;
        const auto j = draw(n, [&](std::size_t v) { return v == i || adjacent(i, v) ? 0.0 : traj_.fitness[v]; }, rng);
        add_edge(i, j);
        return true;
    }

    // One hole-closing edge; returns false if no open triad was found.
    bool close_hole(SynthRng& rng) {
        constexpr int kAttempts = 32;
        const auto n = traj_.nodes;
        for (int attempt = 0; attempt < kAttempts; ++attempt) {
            const auto i = draw(n, [&](std::size_t v) { return adj_[v].empty() ? 0.0 : traj_.fitness[v]; }, rng);
            const auto& around = adj_[i];
            const auto b = around[std::min(around.size() - 1, static_cast<std::size_t>(rng.uniform() * around.size()))];
            std::vector<std::size_t> candidates;
            for (auto j : adj_[b])
                if (j != i && !adjacent(i, j)) candidates.push_back(j);
            if (candidates.empty()) continue;
            const auto pick = draw(candidates.size(), [&](std::size_t k) { return traj_.fitness[candidates[k]]; }, rng);
            add_edge(i, candidates[pick]);
            return true;
        }
        return false;
    }

    GrowthTrajectory& trajectory() { return traj_; }
    const GrowthTrajectory& trajectory() const { return traj_; }
    const std::vector<std::vector<std::size_t>>& adjacency() const { return adj_; }

private:
    template <class Weight>
    static std::size_t draw(std::size_t count, Weight weight, SynthRng& rng) {
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) total += weight(i);
        if (!(total > 0.0)) throw DataError("synth: no node can receive an edge");
        const double u = rng.uniform() * total;
        double acc = 0.0;
        std::size_t last = count;
        for (std::size_t i = 0; i < count; ++i) {
            const double w = weight(i);
            if (w <= 0.0) continue;
            acc += w;
            last = i;
            if (u < acc) return i;
        }
        return last; // rounding left u at the very top
    }

    std::size_t m_;
    GrowthTrajectory traj_;
    std::vector<std::vector<std::size_t>> adj_;
};

std::vector<double> base_fitness(const SynthConfig& config) {
    std::vector<double> out(config.n_final, 1.0);
    if (config.fitness_law == FitnessLaw::uniform) {
        SynthRng rng(config.seed, SynthRng::Phase::fitness);
        for (auto& f : out) f = 1.0 - rng.uniform(); // (0, 1]
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double entrant_fitness(const GrowthTrajectory& traj, double eta) { return eta * median(traj.fitness); }

SynthCheckpoint measure(const CollabNetwork& net, std::size_t step, std::size_t hub,
                        std::optional<std::size_t> entrant) {
    SynthCheckpoint cp;
    cp.step = step;
    cp.nodes = net.size();
    cp.edges = net.edge_count();
    if (hub < net.size())
        cp.hub_bc = normalize_bc(betweenness(net, false), net.size()).scores(static_cast<Eigen::Index>(hub));
    cp.avg_clustering = clustering(net).average;
    cp.efficiency = global_efficiency(net, false);
    cp.max_k = k_core(net).max_k;
    cp.communities = communities(net, false).count();
    if (entrant && *entrant < net.size()) cp.entrant_degree = net.degree(*entrant);
    return cp;
}

std::size_t max_degree_node(const GrowthTrajectory& traj, std::size_t node_count) {
    const auto net = traj.network(node_count);
    std::size_t best = 0;
    for (std::size_t i = 1; i < net.size(); ++i)
        if (net.degree(i) > net.degree(best)) best = i;
    return best;
}

} // namespace

GrowthTrajectory generate_pa(const SynthConfig& config) {
    config.validate();
    Grower grower(config.m);
    SynthRng rng(config.seed, SynthRng::Phase::growth);
    while (grower.trajectory().nodes < config.n_final) grower.arrive(1.0, false, rng);
    return std::move(grower.trajectory());
}

GrowthTrajectory generate_fitness(const SynthConfig& config) {
    config.validate();
    const auto fitness = base_fitness(config);
    Grower grower(config.m);
    for (std::size_t i = 0; i <= config.m; ++i) grower.trajectory().fitness[i] = fitness[i];
    SynthRng rng(config.seed, SynthRng::Phase::growth);
    while (grower.trajectory().nodes < config.n_final) {
        const auto i = grower.trajectory().nodes;
        double f = fitness[i];
        if (i == config.entrant_arrival) {
            f = entrant_fitness(grower.trajectory(), config.eta);
            grower.trajectory().entrant = i;
        }
        grower.arrive(f, true, rng);
    }
    return std::move(grower.trajectory());
}

SynthRun hole_closure_experiment(const SynthConfig& config) {
    config.validate();
    const auto fitness = base_fitness(config);
    Grower grower(config.m);
    auto& traj = grower.trajectory();
    for (std::size_t i = 0; i <= config.m; ++i) traj.fitness[i] = fitness[i];
    SynthRng growth(config.seed, SynthRng::Phase::growth);
    SynthRng densify(config.seed, SynthRng::Phase::densify);

    while (traj.nodes < config.entrant_arrival) grower.arrive(fitness[traj.nodes], false, growth);

    SynthRun run;
    run.config = config;
    const auto deg = traj.degrees();
    run.hub = static_cast<std::size_t>(std::max_element(deg.begin(), deg.end()) - deg.begin());
    run.entrant = grower.arrive(entrant_fitness(traj, config.eta), true, growth);
    traj.entrant = run.entrant;

    run.checkpoints.push_back(measure(traj.network(), 0, run.hub, run.entrant));
    const std::size_t steps = config.n_final - config.entrant_arrival - 1;
    for (std::size_t step = 1; step <= steps; ++step) {
        if (config.grow_after_arrival) grower.arrive(fitness[traj.nodes], true, growth);
        for (std::size_t k = 0; k < config.densify_edges; ++k) {
            if (config.densify_rule == DensifyRule::triadic)
                grower.close_hole(densify);
            else
                grower.close_pair(densify);
        }
        if (step % config.checkpoint_stride == 0 || step == steps)
            run.checkpoints.push_back(measure(traj.network(), step, run.hub, run.entrant));
    }
    run.trajectory = std::move(traj);
    return run;
}

SynthRun growth_run(const SynthConfig& config, GrowthModel model) {
    SynthRun run;
    run.model = model == GrowthModel::pa ? "pa" : "fitness";
    run.config = config;
    run.trajectory = model == GrowthModel::pa ? generate_pa(config) : generate_fitness(config);
    const auto& traj = run.trajectory;
    run.entrant = traj.entrant;
    run.hub = max_degree_node(traj, config.entrant_arrival);
    const auto clique = config.m + 1;
    for (std::size_t n = config.checkpoint_stride;; n += config.checkpoint_stride) {
        const auto nodes = std::min(n, config.n_final);
        if (nodes >= std::max<std::size_t>(clique, 3))
            run.checkpoints.push_back(measure(traj.network(nodes), nodes - clique, run.hub, run.entrant));
        if (nodes == config.n_final) break;
    }
    return run;
}

void write_synth_run_json(std::ostream& out, const SynthRun& run) {
    const auto& c = run.config;
    json checkpoints = json::array();
    for (const auto& cp : run.checkpoints)
        checkpoints.push_back({{"step", cp.step},
                               {"nodes", cp.nodes},
                               {"edges", cp.edges},
                               {"hub_bc", cp.hub_bc},
                               {"avg_clustering", cp.avg_clustering},
                               {"efficiency", cp.efficiency},
                               {"max_k", cp.max_k},
                               {"communities", cp.communities},
                               {"entrant_degree", cp.entrant_degree}});
    json j{{"config",
            {{"seed", c.seed},
             {"n_final", c.n_final},
             {"m", c.m},
             {"fitness_law", to_string(c.fitness_law)},
             {"eta", c.eta},
             {"entrant_arrival", c.entrant_arrival},
             {"checkpoint_stride", c.checkpoint_stride},
             {"densify_edges", c.densify_edges},
             {"densify_rule", to_string(c.densify_rule)},
             {"grow_after_arrival", c.grow_after_arrival}}},
           {"kernel", "attachment probability proportional to fitness * degree"},
           {"densify",
            c.densify_rule == DensifyRule::triadic
                ? "i ~ fitness, b uniform in N(i), j ~ fitness in N(b) \\ N[i]"
                : "i ~ fitness, j ~ fitness among nodes not adjacent to i"},
           {"rng", "mt19937_64 per phase, seeded splitmix64(seed ^ phase)"},
           {"model", run.model},
           {"hub", synth_label(run.hub)},
           {"entrant", run.entrant ? json(synth_label(*run.entrant)) : json(nullptr)},
           {"checkpoints", checkpoints}};
    out << j.dump(2) << '\n';
}

std::vector<PublicationRecord> synthetic_publications(const GrowthTrajectory& trajectory, int first_year, int years) {
    if (trajectory.nodes > 26 * 26) throw DataError("synthetic corpus export supports at most 676 nodes");
    if (years < 1) throw DataError("synthetic corpus needs at least one year");
    auto code = [](std::size_t i) {
        return std::string{static_cast<char>('A' + i / 26), static_cast<char>('A' + i % 26)};
    };
    std::vector<PublicationRecord> out;
    for (int y = 0; y < years; ++y) {
        const auto present = (trajectory.nodes * static_cast<std::size_t>(y + 1) + static_cast<std::size_t>(years) - 1) /
                             static_cast<std::size_t>(years);
        const auto edge_count = present >= trajectory.nodes ? trajectory.edges.size() : trajectory.edges_before[present];
        for (std::size_t e = 0; e < edge_count; ++e) {
            PublicationRecord r;
            r.id = "syn-" + std::to_string(first_year + y) + "-" + std::to_string(e);
            r.year = first_year + y;
            r.field = "synthetic";
            r.countries = {code(trajectory.edges[e].first), code(trajectory.edges[e].second)};
            out.push_back(std::move(r));
        }
    }
    return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw DataError("spearman needs two equal-length samples of size >= 2");
    const auto ra = average_ranks(a), rb = average_ranks(b);
    const Eigen::Map<const Eigen::VectorXd> x(ra.data(), static_cast<Eigen::Index>(ra.size()));
    const Eigen::Map<const Eigen::VectorXd> y(rb.data(), static_cast<Eigen::Index>(rb.size()));
    const Eigen::VectorXd dx = x.array() - x.mean();
    const Eigen::VectorXd dy = y.array() - y.mean();
    const double denom = std::sqrt(dx.squaredNorm() * dy.squaredNorm());
    return denom > 0.0 ? dx.dot(dy) / denom : 0.0;
}

} // namespace collabnet
