#pragma once

#include "collabnet/graph.hpp"
#include "collabnet/ingest.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace collabnet {

/// Portable uniform draws: mt19937_64 output is fixed by the standard, and
/// doubles are built from the top 53 bits rather than through
/// std::uniform_real_distribution, whose output is implementation-defined.
/// Each phase gets its own engine seeded with splitmix64(seed ^ phase).
class SynthRng {
public:
    enum class Phase : std::uint64_t { fitness = 0x66697400, growth = 0x67726f77, densify = 0x64656e73 };

    SynthRng(std::uint64_t seed, Phase phase);

    double uniform(); // [0, 1)
    std::uint64_t next() { return engine_(); }

    static std::uint64_t splitmix64(std::uint64_t x);

private:
    std::mt19937_64 engine_;
};

enum class FitnessLaw {
    constant, // every node has fitness 1
    uniform   // fitness ~ U(0, 1]
};

enum class DensifyRule {
    fitness_pair, // i, j non-adjacent, drawn with probability proportional to fitness_i * fitness_j
    triadic       // close an open triad i - b - j, i and j drawn by fitness
};

std::string to_string(DensifyRule rule);
DensifyRule parse_densify_rule(const std::string& s);

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_final = 1000;
    std::size_t m = 3;                 // edges per arriving node
    FitnessLaw fitness_law = FitnessLaw::constant;
    double eta = 5.0;                  // entrant fitness = eta * median fitness at arrival
    std::size_t entrant_arrival = 200; // index of the entrant; nodes before it form the hub phase
    std::size_t checkpoint_stride = 50;
    std::size_t densify_edges = 6;     // hole-closing edges per step after the entrant arrives
    DensifyRule densify_rule = DensifyRule::triadic;
    bool grow_after_arrival = true;

    /// Throws DataError when m < 1, n_final <= m + 1, eta <= 0,
    /// stride == 0 or the entrant index lies outside (m, n_final).
    void validate() const;
};

std::string to_string(FitnessLaw law);
FitnessLaw parse_fitness_law(const std::string& s);

/// A growing simple graph, edges kept in creation order.
struct GrowthTrajectory {
    std::size_t nodes = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<double> fitness;
    std::vector<std::size_t> edges_before; // edges.size() when node i arrived
    std::optional<std::size_t> entrant;

    std::vector<std::size_t> degrees() const;
    /// Graph on the first `node_count` nodes with the edges created up to
    /// that node's arrival step. Labels come from synth_label.
    CollabNetwork network(std::size_t node_count) const;
    CollabNetwork network() const { return network(nodes); }
};

/// "N0000"-style labels that sort in index order.
std::string synth_label(std::size_t i);

/// Preferential attachment: seed clique on m + 1 nodes, then each new node
/// links to m distinct existing nodes drawn with probability proportional
/// to degree.
GrowthTrajectory generate_pa(const SynthConfig& config);

/// Fitness model: attachment probability proportional to fitness * degree.
/// The node at `entrant_arrival` gets eta times the median fitness of the
/// nodes present when it arrives. With constant fitness and eta = 1 the
/// draws, and so the graph, equal generate_pa's.
GrowthTrajectory generate_fitness(const SynthConfig& config);

struct SynthCheckpoint {
    std::size_t step = 0; // steps after the entrant's arrival
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double hub_bc = 0.0; // normalized topological betweenness of the incumbent hub
    double avg_clustering = 0.0;
    double efficiency = 0.0;
    int max_k = 0;
    std::size_t communities = 0;
    std::size_t entrant_degree = 0;

    bool operator==(const SynthCheckpoint&) const = default;
};

struct SynthRun {
    std::string model = "hole-closure";
    SynthConfig config;
    std::size_t hub = 0;
    std::optional<std::size_t> entrant;
    std::vector<SynthCheckpoint> checkpoints;
    GrowthTrajectory trajectory;
};

/// Hub phase of pure preferential attachment up to `entrant_arrival`
/// nodes, then the fitness entrant arrives and each later step adds one
/// node (unless growth is off) plus `densify_edges` hole-closing edges.
/// A hole-closing edge joins i and j that share a neighbor b but are not
/// adjacent: i is drawn with probability proportional to fitness, b
/// uniformly among i's neighbors, and j among b's other neighbors
/// proportional to fitness. Checkpoints are taken at arrival, every
/// `checkpoint_stride` steps, and at the last step.
SynthRun hole_closure_experiment(const SynthConfig& config);

enum class GrowthModel { pa, fitness };

/// Plain growth (generate_pa or generate_fitness) measured every
/// `checkpoint_stride` nodes and at n_final. The hub is the highest-degree
/// node when `entrant_arrival` nodes are present; step counts arrivals
/// after the seed clique. The pa model has no entrant.
SynthRun growth_run(const SynthConfig& config, GrowthModel model);

/// JSON document with config, kernel description and checkpoints.
void write_synth_run_json(std::ostream& out, const SynthRun& run);

/// Publication records replaying a trajectory over `years` years: node
/// arrivals are split into equal yearly batches and every edge present in a
/// year yields one two-country record that year. Countries are two-letter
/// codes AA..ZZ, so at most 676 nodes.
std::vector<PublicationRecord> synthetic_publications(const GrowthTrajectory& trajectory, int first_year,
                                                      int years);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace collabnet
