#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

std::string label(int i) { return "n" + std::to_string(i); }

collabnet::CollabNetwork SmallGraph::network() const {
    std::vector<std::string> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(label(i));
    std::vector<collabnet::WeightedEdge> list;
    for (const auto& e : edges) list.push_back({label(e.a), label(e.b), e.w});
    return collabnet::CollabNetwork(nodes, list);
}

std::vector<std::vector<double>> SmallGraph::matrix() const {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto& e : edges) a[e.a][e.b] = a[e.b][e.a] = e.w;
    return a;
}

SmallGraph random_connected(std::mt19937_64& rng, int n, double extra, Weights weights) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto weight = [&] {
        switch (weights) {
        case Weights::unit: return 1.0;
        case Weights::integer: return static_cast<double>(1 + rng() % 4);
        case Weights::real: return 0.5 + 9.5 * u(rng);
        }
        return 1.0;
    };
    SmallGraph g;
    g.n = n;
    std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
    for (int v = 1; v < n; ++v) {
        int p = static_cast<int>(rng() % static_cast<unsigned>(v));
        g.edges.push_back({p, v, weight()});
        has[p][v] = has[v][p] = true;
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!has[a][b] && u(rng) < extra) {
                g.edges.push_back({a, b, weight()});
                has[a][b] = has[b][a] = true;
            }
    return g;
}

std::vector<std::vector<int>> simple_paths(const SmallGraph& g, int s, int t) {
    const auto a = g.matrix();
    std::vector<std::vector<int>> out;
    std::vector<int> path{s};
    std::vector<bool> used(g.n, false);
    used[s] = true;
    std::function<void(int)> walk = [&](int v) {
        if (v == t) {
            out.push_back(path);
            return;
        }
        for (int w = 0; w < g.n; ++w) {
            if (a[v][w] == 0.0 || used[w]) continue;
            used[w] = true;
            path.push_back(w);
            walk(w);
            path.pop_back();
            used[w] = false;
        }
    };
    walk(s);
    return out;
}

double path_length(const SmallGraph& g, const std::vector<int>& path, bool weighted) {
    if (!weighted) return static_cast<double>(path.size() - 1);
    const auto a = g.matrix();
    double len = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) len += 1.0 / a[path[k - 1]][path[k]];
    return len;
}

std::vector<std::vector<int>> minimal_paths(const SmallGraph& g, int s, int t, bool weighted) {
    auto all = simple_paths(g, s, t);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : all) best = std::min(best, path_length(g, p, weighted));
    std::vector<std::vector<int>> out;
    for (const auto& p : all)
        if (path_length(g, p, weighted) <= best * (1.0 + 1e-9)) out.push_back(p);
    return out;
}

std::vector<double> betweenness(const SmallGraph& g, bool weighted) {
    std::vector<double> bc(g.n, 0.0);
    for (int s = 0; s < g.n; ++s)
        for (int t = s + 1; t < g.n; ++t) {
            auto paths = minimal_paths(g, s, t, weighted);
            if (paths.empty()) continue;
            for (int v = 0; v < g.n; ++v) {
                if (v == s || v == t) continue;
                int through = 0;
                for (const auto& p : paths)
                    if (std::find(p.begin(), p.end(), v) != p.end()) ++through;
                bc[v] += static_cast<double>(through) / static_cast<double>(paths.size());
            }
        }
    return bc;
}

double efficiency(const SmallGraph& g, bool weighted) {
    if (g.n < 2) return 0.0;
    double sum = 0.0;
    for (int s = 0; s < g.n; ++s)
        for (int t = s + 1; t < g.n; ++t) {
            auto paths = minimal_paths(g, s, t, weighted);
            if (!paths.empty()) sum += 1.0 / path_length(g, paths.front(), weighted);
        }
    return sum / (g.n * (g.n - 1) / 2.0);
}

std::vector<int> core_numbers(const SmallGraph& g) {
    const auto a = g.matrix();
    std::vector<int> core(g.n, 0);
    for (unsigned mask = 1; mask < (1u << g.n); ++mask) {
        int min_deg = std::numeric_limits<int>::max();
        for (int v = 0; v < g.n; ++v) {
            if (!(mask >> v & 1u)) continue;
            int d = 0;
            for (int w = 0; w < g.n; ++w)
                if ((mask >> w & 1u) && a[v][w] != 0.0) ++d;
            min_deg = std::min(min_deg, d);
        }
        for (int v = 0; v < g.n; ++v)
            if (mask >> v & 1u) core[v] = std::max(core[v], min_deg);
    }
    return core;
}

double modularity(const SmallGraph& g, const std::vector<int>& block_of) {
    const auto a = g.matrix();
    std::vector<double> k(g.n, 0.0);
    double two_m = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            k[i] += a[i][j];
            two_m += a[i][j];
        }
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (block_of[i] == block_of[j]) q += a[i][j] - k[i] * k[j] / two_m;
    return q / two_m;
}

double best_modularity(const SmallGraph& g, std::vector<int>* argmax) {
    std::vector<int> rgs(g.n, 0);
    double best = -std::numeric_limits<double>::infinity();
    std::function<void(int, int)> rec = [&](int i, int blocks) {
        if (i == g.n) {
            double q = modularity(g, rgs);
            if (q > best + 1e-12) {
                best = q;
                if (argmax) *argmax = rgs;
            }
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            rgs[i] = b;
            rec(i + 1, std::max(blocks, b + 1));
        }
    };
    if (g.n == 0) return 0.0;
    rgs[0] = 0;
    rec(1, 1);
    return best;
}

double local_clustering(const SmallGraph& g, int v) {
    const auto a = g.matrix();
    std::vector<int> nb;
    for (int w = 0; w < g.n; ++w)
        if (a[v][w] != 0.0) nb.push_back(w);
    if (nb.size() < 2) return 0.0;
    int links = 0;
    for (std::size_t x = 0; x < nb.size(); ++x)
        for (std::size_t y = x + 1; y < nb.size(); ++y)
            if (a[nb[x]][nb[y]] != 0.0) ++links;
    return 2.0 * links / (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
}

} // namespace oracle
