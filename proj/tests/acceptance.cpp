// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include "collabnet/centrality.hpp"
#include "collabnet/error.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/paths.hpp"
#include "collabnet/pipeline.hpp"
#include "collabnet/structure.hpp"
#include "collabnet/synth.hpp"
#include "collabnet/timeseries.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace collabnet;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0 && secs > limit_seconds) {
        out.pass = false;
        out.detail += " [over time limit " + std::to_string(static_cast<int>(limit_seconds)) + " s]";
    }
    if (!out.pass) ++failures;
    std::printf("%s %2d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

Outcome appendix_example() {
    auto net = fixture::appendix();
    auto dag = single_source_paths(to_distance(net), net.index_of("D"));
    const double expected[] = {0.5, 0.51, 0.52};
    const char* targets[] = {"A", "B", "C"};
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(dag.dist[net.index_of(targets[k])] - expected[k]));
    auto paths = all_shortest_paths(dag, net.index_of("C"));
    std::string route;
    for (auto v : paths.front()) route += net.label(v);
    const double frac = bridging_fraction(net, "D", "A").fraction;
    const bool ok = worst <= 1e-12 && paths.size() == 1 && route == "DABC" && frac == 1.0;
    return {ok, fmt("max |d error| %.2e, bridging(D,A) %.3f", worst, frac) + ", route " + route};
}

Outcome weighted_bc_example() {
    CollabNetwork net({}, {{"A", "B", 100.0}, {"B", "C", 100.0}, {"A", "C", 1.0}});
    auto dag = single_source_paths(to_distance(net), net.index_of("A"));
    auto paths = all_shortest_paths(dag, net.index_of("C"));
    const double bc = betweenness(net, true).value("B");
    const bool ok = paths.size() == 1 && paths[0].size() == 3 && net.label(paths[0][1]) == "B" && bc == 1.0;
    return {ok, "A->C via " + net.label(paths[0][1]) + fmt(", weighted raw BC(B) = %.3f", bc)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(20240601);
    int graphs = 0, mismatches = 0;
    double worst_weighted = 0.0, worst_exact = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const auto kind = static_cast<oracle::Weights>(trial % 3);
        auto g = oracle::random_connected(rng, n, 0.4, kind);
        auto net = g.network();
        const bool exact = kind != oracle::Weights::real;
        // Exact means equal up to summation order: fractional sums may differ in the last bits.
        auto check = [&](double got, double want, bool exact_here) {
            if (exact_here) {
                worst_exact = std::max(worst_exact, std::abs(got - want) / std::max(1.0, std::abs(want)));
                if (!close_rel(got, want, 1e-15)) ++mismatches;
            } else {
                worst_weighted = std::max(worst_weighted, std::abs(got - want) / std::max(1.0, std::abs(want)));
                if (!close_rel(got, want, 1e-9)) ++mismatches;
            }
        };
        auto bc = betweenness(net, false);
        auto bcw = betweenness(net, true);
        auto o_bc = oracle::betweenness(g, false);
        auto o_bcw = oracle::betweenness(g, true);
        for (int v = 0; v < n; ++v) {
            check(bc.scores(v), o_bc[v], true);
            check(bcw.scores(v), o_bcw[v], exact);
        }
        check(global_efficiency(net), oracle::efficiency(g, false), true);
        check(global_efficiency(net, true), oracle::efficiency(g, true), false);
        auto core = k_core(net);
        auto o_core = oracle::core_numbers(g);
        for (int v = 0; v < n; ++v)
            if (core.core_number[v] != o_core[v]) ++mismatches;
        std::vector<int> ids(static_cast<std::size_t>(n));
        std::map<int, std::vector<std::string>> grouped;
        for (int v = 0; v < n; ++v) {
            ids[v] = static_cast<int>(rng() % 3);
            grouped[ids[v]].push_back(net.label(v));
        }
        Partition blocks;
        for (auto& [id, members] : grouped) blocks.push_back(members);
        check(modularity_score(net, blocks), oracle::modularity(g, ids), false);
        ++graphs;
    }
    return {mismatches == 0, std::to_string(graphs) + " graphs, " + std::to_string(mismatches) + " mismatches" +
                                 fmt(", worst rel. error %.1e exact (tol 1e-15), %.1e weighted (tol 1e-9)", worst_exact, worst_weighted)};
}

Outcome community_fixture() {
    auto net = fixture::two_triangles();
    auto r = communities(net);
    oracle::SmallGraph g;
    g.n = 6;
    for (const auto& e : net.edges())
        g.edges.push_back({static_cast<int>(net.index_of(e.a)), static_cast<int>(net.index_of(e.b)), e.weight});
    const double best = oracle::best_modularity(g);
    const bool ok = r.blocks == Partition{{"A", "B", "C"}, {"D", "E", "F"}} && std::abs(r.modularity - 5.0 / 14.0) <= 1e-9 &&
                    std::abs(best - r.modularity) <= 1e-9;
    return {ok, fmt("Q = %.12f, brute-force optimum %.12f, %g blocks", r.modularity, best, static_cast<double>(r.count()))};
}

Outcome eigenvector_fixture() {
    auto ev = eigenvector_centrality(fixture::star(3));
    const double c = ev.value("C");
    double leaf_err = 0.0;
    for (const char* l : {"L1", "L2", "L3"}) leaf_err = std::max(leaf_err, std::abs(ev.value(l) - 0.40825));
    const bool ok = std::abs(c - 0.70711) <= 1e-5 && leaf_err <= 1e-5 && *ev.residual <= 1e-10;
    return {ok, fmt("center %.6f, leaves %.6f, residual %.1e", c, ev.value("L1"), *ev.residual)};
}

Outcome normalization_formulas() {
    const double l = normalized_weight(WeightScheme::log, 99.0, 1.0, 1.0);
    const double s = normalized_weight(WeightScheme::salton, 10.0, 100.0, 25.0);
    const double j = normalized_weight(WeightScheme::jaccard, 10.0, 100.0, 25.0);
    bool ok = std::abs(l - std::log(100.0)) <= 1e-9 && std::abs(l - 4.60517) <= 1e-5 && std::abs(s - 0.2) <= 1e-9 &&
              std::abs(j - 10.0 / 115.0) <= 1e-9;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
        const double w = 1.0 + 999.0 * u(rng);
        const double pi = w * (1.0 + 20.0 * u(rng)), pj = w * (1.0 + 20.0 * u(rng));
        if (normalized_weight(WeightScheme::jaccard, w, pi, pj) > normalized_weight(WeightScheme::salton, w, pi, pj)) ++violations;
    }
    ok = ok && violations == 0;
    return {ok, fmt("log %.6f, salton %.6f, jaccard %.6f", l, s, j) + ", jaccard > salton in " + std::to_string(violations) +
                    "/1000"};
}

Eigen::VectorXd gaussian_ar1(std::mt19937_64& rng, int n, double phi) {
    std::normal_distribution<double> e(0.0, 1.0);
    Eigen::VectorXd v(n);
    double prev = e(rng) / std::sqrt(1.0 - phi * phi);
    for (int i = 0; i < n; ++i) v(i) = prev = phi * prev + e(rng);
    return v;
}

Outcome granger_calibration() {
    std::mt19937_64 rng(777);
    const double alpha = 0.05;
    int size_rejects = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = gaussian_ar1(rng, 24, 0.5), y = gaussian_ar1(rng, 24, 0.5);
        if (granger_test(x, y, {1, true}).at_lag(1).p_raw < alpha) ++size_rejects;
    }
    const double size = size_rejects / 1000.0;
    int power_rejects = 0;
    std::normal_distribution<double> e(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        Eigen::VectorXd x(100), y(100);
        for (int t = 0; t < 100; ++t) x(t) = e(rng);
        y(0) = 0.1 * e(rng);
        for (int t = 1; t < 100; ++t) y(t) = 0.8 * x(t - 1) + 0.1 * e(rng);
        if (granger_test(x, y, {1, true}).at_lag(1).p_raw < alpha) ++power_rejects;
    }
    const double power = power_rejects / 500.0;
    return {size >= 0.02 && size <= 0.09 && power >= 0.95, fmt("size %.3f in [0.02, 0.09], power %.3f >= 0.95", size, power)};
}

Outcome bh_fixtures() {
    const std::vector<double> a{0.005, 0.05}, b{0.01, 0.02, 0.03, 0.04};
    auto ra = bh_fdr(a), rb = bh_fdr(b);
    bool ok = std::abs(ra[0] - 0.01) <= 1e-15 && std::abs(ra[1] - 0.05) <= 1e-15;
    for (double v : rb) ok = ok && std::abs(v - 0.04) <= 1e-15;
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
        std::vector<double> p(1 + rng() % 50);
        for (auto& v : p) v = u(rng) * (k % 2 ? u(rng) : 1.0);
        auto adj = bh_fdr(p);
        for (std::size_t i = 0; i < p.size(); ++i)
            if (adj[i] < p[i]) ++violations;
    }
    ok = ok && violations == 0;
    return {ok, fmt("[%.3f, %.3f], [%.3f x4]", ra[0], ra[1], rb[0]) + ", adjusted < raw in " + std::to_string(violations) +
                    " entries over 1000 vectors"};
}

std::vector<double> ranks(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = static_cast<double>(k);
    return v;
}

Outcome hole_closure() {
    SynthConfig c; // 200-node hub phase, eta 5, growth and densification to 1000 nodes
    std::vector<std::vector<SynthCheckpoint>> runs;
    for (std::uint64_t seed = 1001; seed <= 1020; ++seed) {
        c.seed = seed;
        runs.push_back(hole_closure_experiment(c).checkpoints);
    }
    const auto k = runs.front().size();
    std::vector<double> bc(k, 0.0), cl(k, 0.0), ef(k, 0.0);
    for (const auto& r : runs)
        for (std::size_t i = 0; i < k; ++i) {
            bc[i] += r[i].hub_bc / 20.0;
            cl[i] += r[i].avg_clustering / 20.0;
            ef[i] += r[i].efficiency / 20.0;
        }
    const double drop = 1.0 - bc.back() / bc.front();
    const double rho_cl = spearman(cl, ranks(k)), rho_ef = spearman(ef, ranks(k));
    return {drop >= 0.5 && rho_cl > 0.8 && rho_ef > 0.8,
            fmt("hub BC drop %.1f%%, Spearman clustering %.3f, efficiency %.3f", 100.0 * drop, rho_cl, rho_ef) + " over " +
                std::to_string(k) + " checkpoints, 20 seeds"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome determinism() {
    fixture::TempDir tmp("acceptance");
    SynthConfig sc;
    sc.seed = 5;
    sc.n_final = 150;
    sc.m = 2;
    sc.entrant_arrival = 40;
    ParseReport report;
    report.records = synthetic_publications(generate_pa(sc), 2001, 24);
    write_corpus(tmp / "corpus", report, {1, {}});

    auto pipeline = [&](const std::string& out) {
        PipelineConfig cfg;
        cfg.corpus = tmp / "corpus";
        cfg.output = tmp / out;
        cfg.threshold = 1;
        cfg.bridges = {{"AA", "AB"}};
        cfg.iv_country = "AA";
        cfg.forecast_series = {"bc:AA", "clustering"};
        return run_pipeline(cfg);
    };
    auto first = pipeline("a");
    pipeline("b");
    std::size_t compared = 0, differing = 0;
    for (const auto& f : first.files) {
        ++compared;
        if (slurp(tmp / "a" / f.string()) != slurp(tmp / "b" / f.string())) ++differing;
    }
    for (int rep = 0; rep < 2; ++rep) {
        SynthConfig hc;
        hc.seed = 11;
        hc.n_final = 400;
        hc.entrant_arrival = 100;
        std::ostringstream a, b;
        write_synth_run_json(a, hole_closure_experiment(hc));
        write_synth_run_json(b, hole_closure_experiment(hc));
        ++compared;
        if (a.str() != b.str()) ++differing;
    }
    return {differing == 0 && compared > 2, std::to_string(compared) + " outputs compared, " + std::to_string(differing) + " differ"};
}

} // namespace

int main() {
    criterion(1, "appendix worked example", 1.0, appendix_example);
    criterion(2, "weighted betweenness example", 0.0, weighted_bc_example);
    criterion(3, "oracle equivalence", 30.0, oracle_equivalence);
    criterion(4, "community fixture", 0.0, community_fixture);
    criterion(5, "eigenvector fixture", 0.0, eigenvector_fixture);
    criterion(6, "normalization formulas", 0.0, normalization_formulas);
    criterion(7, "granger calibration", 120.0, granger_calibration);
    criterion(8, "bh-fdr", 0.0, bh_fixtures);
    criterion(9, "hole-closure simulation", 300.0, hole_closure);
    criterion(10, "determinism", 0.0, determinism);
    std::printf("SKIP 11 published country-pair aggregates: dataset not available offline\n");
    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
