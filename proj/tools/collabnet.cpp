#include "collabnet/centrality.hpp"
#include "collabnet/chart.hpp"
#include "collabnet/error.hpp"
#include "collabnet/graph.hpp"
#include "collabnet/ingest.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/paths.hpp"
#include "collabnet/pipeline.hpp"
#include "collabnet/series.hpp"
#include "collabnet/structure.hpp"
#include "collabnet/synth.hpp"
#include "collabnet/timeseries.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace collabnet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    return in;
}

std::string hash_of(const json& settings) { return fnv1a_hex(settings.dump()); }

void write_csv_hash(std::ostream& out, const std::string& hash) { out << "# config_hash=" << hash << '\n'; }

std::string na(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

struct IngestArgs {
    std::string pubs, edges, out;
    std::int64_t threshold = 10;
};

void run_ingest(const IngestArgs& a) {
    if (a.pubs.empty() == a.edges.empty()) throw CLI::ValidationError("ingest", "give exactly one of --pubs or --edges");
    if (!a.pubs.empty()) {
        const auto hash = hash_of({{"command", "ingest"}, {"pubs", a.pubs}, {"threshold", a.threshold}});
        auto parsed = parse_publications_file(a.pubs);
        write_corpus(a.out, parsed, {a.threshold, hash});
        std::cerr << "ingested " << parsed.records.size() << " records, skipped " << parsed.skipped << " of "
                  << parsed.lines << " lines\n";
        for (const auto& w : parsed.warnings) std::cerr << "  " << w << '\n';
    } else {
        const auto hash = hash_of({{"command", "ingest"}, {"edges", a.edges}});
        auto in = open_in(a.edges);
        auto lists = read_edge_csv(in);
        write_corpus_from_edges(a.out, lists, hash);
        std::cerr << "ingested " << lists.size() << " pre-aggregated slices (no threshold applied)\n";
    }
}

struct NetArgs {
    std::string corpus;
    std::string field = kAllFields;
    int window = 3;
    std::string normalize = "raw";
    std::int64_t threshold = 10;

    NetworkRequest request() const { return {field, window, parse_weight_scheme(normalize), threshold}; }
    json settings() const {
        return {{"corpus", corpus}, {"field", field}, {"window", window}, {"normalize", normalize}, {"threshold", threshold}};
    }
};

void add_net_options(CLI::App* sub, NetArgs& a) {
    sub->add_option("--corpus", a.corpus, "Corpus directory written by ingest")->envname("COLLABNET_CORPUS")->required();
    sub->add_option("--field", a.field, "Field label, or 'all' for the pooled slice")->capture_default_str();
    sub->add_option("--window", a.window, "Rolling window in years")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--normalize", a.normalize, "Edge weights")
        ->check(CLI::IsMember({"raw", "log", "salton", "jaccard"}))
        ->capture_default_str();
    sub->add_option("--threshold", a.threshold, "Minimum international publications per country")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

struct BuildArgs {
    NetArgs net;
    int year = 0;
    std::string out;
};

void run_build(const BuildArgs& a) {
    auto settings = a.net.settings();
    settings["command"] = "build";
    settings["year"] = a.year;
    const auto corpus = Corpus::open(a.net.corpus);
    const auto net = build_network(corpus, a.year, a.net.request());
    if (net.slice().window < a.net.window)
        std::cerr << "note: window truncated to " << net.slice().window << " year(s) at " << a.year << '\n';
    std::ostringstream buf;
    write_network_json(buf, net);
    auto doc = json::parse(buf.str());
    doc["config_hash"] = hash_of(settings);
    open_out(a.out) << doc.dump(2) << '\n';
    std::cerr << net.size() << " nodes, " << net.edge_count() << " edges\n";
}

struct MetricsArgs {
    std::string net, out, communities_out;
    std::vector<std::string> metrics{"bc", "bcw", "ev", "deg", "centralization"};
};

void run_metrics(const MetricsArgs& a) {
    const auto hash = hash_of({{"command", "metrics"}, {"net", a.net}, {"metrics", a.metrics}});
    auto in = open_in(a.net);
    const auto net = read_network_json(in);
    const auto n = net.size();

    struct Row {
        std::string metric, node;
        double value;
    };
    std::vector<Row> rows, global;
    auto per_node = [&](const std::string& metric, const CentralityVector& v) {
        for (std::size_t i = 0; i < v.size(); ++i) rows.push_back({metric, v.nodes[i], v.scores(static_cast<Eigen::Index>(i))});
    };
    std::optional<CommunityPartition> parts;

    for (const auto& m : a.metrics) {
        if (m == "bc" || m == "bcw") {
            per_node(m, normalize_bc(betweenness(net, m == "bcw"), n));
        } else if (m == "deg") {
            per_node(m, degree_centrality(net));
        } else if (m == "ev") {
            auto ev = eigenvector_centrality(net);
            for (const auto& w : ev.warnings) std::cerr << "warning: " << w << '\n';
            per_node(m, ev);
            global.push_back({"ev_lambda", "", *ev.eigenvalue});
            global.push_back({"ev_residual", "", *ev.residual});
        } else if (m == "core_bc") {
            auto core = max_core_subgraph(net);
            per_node(m, normalize_bc(betweenness(core), core.size()));
        } else if (m == "centralization") {
            global.push_back({"centralization", "", betweenness_centralization(net)});
        } else if (m == "avg_bc") {
            global.push_back({"avg_bc", "", average_betweenness(net)});
        } else if (m == "kcore") {
            auto core = k_core(net);
            for (std::size_t i = 0; i < core.nodes.size(); ++i) rows.push_back({"core", core.nodes[i], double(core.core_number[i])});
            global.push_back({"max_k", "", double(core.max_k)});
            global.push_back({"kcore_nodes", "", double(core.kcore_nodes)});
            global.push_back({"kcore_ratio", "", core.kcore_ratio});
        } else if (m == "clustering") {
            auto c = clustering(net);
            for (std::size_t i = 0; i < n; ++i) rows.push_back({"clustering", net.label(i), c.local(static_cast<Eigen::Index>(i))});
            global.push_back({"avg_clustering", "", c.average});
        } else if (m == "efficiency") {
            global.push_back({"efficiency", "", global_efficiency(net)});
        } else if (m == "efficiency_w") {
            global.push_back({"efficiency_w", "", global_efficiency(net, true)});
        } else if (m == "communities") {
            parts = communities(net);
            for (std::size_t b = 0; b < parts->blocks.size(); ++b)
                for (const auto& node : parts->blocks[b]) rows.push_back({"community", node, double(b)});
            global.push_back({"communities", "", double(parts->count())});
            global.push_back({"modularity", "", parts->modularity});
        } else if (m.rfind("ego:", 0) == 0) {
            const auto country = m.substr(4);
            rows.push_back({"ego_q", country, ego_modularity(net, country)});
        } else {
            throw CLI::ValidationError("--metric", "unknown metric '" + m + "'");
        }
    }

    auto out = open_out(a.out);
    write_csv_hash(out, hash);
    out << "metric,node,value\n";
    for (const auto& r : rows) out << r.metric << ',' << r.node << ',' << format_double(r.value) << '\n';
    for (const auto& r : global) out << r.metric << ",," << format_double(r.value) << '\n';

    if (parts) {
        fs::path path = a.communities_out.empty() ? fs::path(a.out).replace_extension(".communities.json") : fs::path(a.communities_out);
        json doc{{"blocks", parts->blocks}, {"Q", parts->modularity}, {"config_hash", hash}};
        open_out(path) << doc.dump(2) << '\n';
    }
}

struct SeriesArgs {
    NetArgs net;
    std::string years, out;
    std::vector<std::string> fields{kAllFields}, countries, bridges{"CN/US"}, forecast_series{"bc:US", "bc:CN"};
    std::string iv = "CN";
    int max_lag = 6;
    int horizon = 6;
};

std::pair<std::string, std::string> parse_bridge(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
        throw CLI::ValidationError("--bridges", "expected SOURCE/VIA, got '" + s + "'");
    return {s.substr(0, slash), s.substr(slash + 1)};
}

void run_series(const SeriesArgs& a, std::uint64_t seed) {
    PipelineConfig c;
    c.corpus = a.net.corpus;
    if (!a.years.empty()) c.years = parse_year_range(a.years);
    c.fields = a.fields;
    c.window = a.net.window;
    c.scheme = parse_weight_scheme(a.net.normalize);
    c.threshold = a.net.threshold;
    c.output = a.out;
    c.seed = seed;
    c.countries = a.countries;
    c.bridges.clear();
    for (const auto& b : a.bridges) c.bridges.push_back(parse_bridge(b));
    c.iv_country = a.iv;
    c.max_lag = a.max_lag;
    c.forecast_horizon = a.horizon;
    c.forecast_series = a.forecast_series;
    const auto summary = run_pipeline(c);

    for (const auto& [field, count] : summary.series_per_field) std::cerr << field << ": " << count << " series\n";
    if (!summary.missing_years.empty()) {
        std::cerr << "missing years:";
        for (int y : summary.missing_years) std::cerr << ' ' << y;
        std::cerr << '\n';
    }
    if (c.window > 1) std::cerr << "note: the first " << c.window - 1 << " year(s) use truncated windows (see window_years)\n";
    if (!summary.granger_done) std::cerr << "granger: not run (" << summary.granger_note << ")\n";
    for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
}

struct BridgeArgs {
    NetArgs net;
    std::string source, via, years, out, mode = "any_path";
};

void run_bridge(const BridgeArgs& a) {
    auto settings = a.net.settings();
    settings.update({{"command", "bridge"}, {"source", a.source}, {"via", a.via}, {"years", a.years}, {"mode", a.mode}});
    const auto corpus = Corpus::open(a.net.corpus);
    const auto range = a.years.empty() ? YearRange{corpus.years().front(), corpus.years().back()} : parse_year_range(a.years);
    const auto mode = a.mode == "sigma_share" ? BridgingMode::sigma_share : BridgingMode::any_path;
    const auto request = a.net.request();

    std::vector<std::optional<BridgingReport>> reports;
    for (int y : range.years()) {
        std::optional<BridgingReport> r;
        if (corpus.has(y, request.field)) {
            auto net = build_network(corpus, y, request);
            if (net.size() >= 3 && net.find(a.source) && net.find(a.via)) r = bridging_fraction(net, a.source, a.via, mode);
        }
        reports.push_back(r);
    }
    auto out = open_out(a.out);
    write_csv_hash(out, hash_of(settings));
    out << "year,source,via,fraction,targets\n";
    int y = range.first;
    for (const auto& r : reports) {
        out << y++ << ',' << a.source << ',' << a.via << ',';
        if (r)
            out << format_double(r->fraction) << ',' << r->target_count << '\n';
        else
            out << "NA,NA\n";
    }
}

struct GrangerArgs {
    std::string corpus, iv = "CN", years, out, base = "total";
    std::vector<std::string> metrics{"clustering", "kcore_nodes", "modularity", "betw_centralization", "avg_bc", "efficiency"};
    std::vector<std::string> fields{kAllFields};
    int max_lag = 6;
    std::int64_t threshold = 10;
};

void run_granger(const GrangerArgs& a) {
    const auto corpus = Corpus::open(a.corpus);
    GrangerPanelRequest r;
    r.iv_country = a.iv;
    r.metrics = a.metrics;
    r.fields = a.fields;
    if (a.fields.size() == 1 && a.fields[0] == "*") r.fields = corpus.fields();
    if (!a.years.empty()) r.years = parse_year_range(a.years);
    r.max_lag = a.max_lag;
    r.threshold = a.threshold;
    r.base = a.base == "international" ? ParticipationBase::international : ParticipationBase::total;
    const auto hash = hash_of({{"command", "granger"},
                               {"corpus", a.corpus},
                               {"iv", a.iv},
                               {"metrics", r.metrics},
                               {"fields", r.fields},
                               {"years", a.years},
                               {"max_lag", a.max_lag},
                               {"threshold", a.threshold},
                               {"base", a.base}});
    const auto grid = granger_panel(corpus, r);
    auto out = open_out(a.out);
    write_csv_hash(out, hash);
    write_granger_csv(out, grid);

    bool any = false;
    for (const auto& cell : grid) any = any || cell.test.has_value();
    if (!any) {
        std::cerr << "no cell could be tested: " << grid.front().note << '\n';
        return;
    }
    for (const auto& row : report_min_adjusted(grid))
        std::cout << row.field << '\t' << row.metric << '\t' << na(row.min_p_adjusted) << (row.flagged ? "\t*" : "") << '\n';
    for (const auto& cell : grid)
        if (cell.y_trend_tstat && *cell.y_trend_tstat > kTrendStationarityCritical)
            std::cerr << "note: d(" << cell.metric << ") in " << cell.field << " may be non-stationary (t = "
                      << format_double(*cell.y_trend_tstat) << ")\n";
}

struct ForecastArgs {
    std::string series, out;
    std::vector<std::string> names;
    int horizon = 6;
    double level = 0.95;
};

void run_forecast(const ForecastArgs& a) {
    const auto hash = hash_of({{"command", "forecast"}, {"series", a.series}, {"names", a.names}, {"horizon", a.horizon}, {"level", a.level}});
    auto in = open_in(a.series);
    const auto all = read_series_csv(in);
    std::vector<Forecast> out_fc;
    for (const auto& s : all) {
        if (!a.names.empty() && std::find(a.names.begin(), a.names.end(), s.name) == a.names.end()) continue;
        try {
            out_fc.push_back(forecast(trailing_run(s), a.horizon, a.level));
            std::cerr << s.name << ": " << out_fc.back().model << '\n';
        } catch (const DataError& e) {
            if (!a.names.empty()) throw;
            std::cerr << "skipped " << s.name << ": " << e.what() << '\n';
        }
    }
    if (out_fc.empty()) throw DataError("no series could be forecast");
    auto out = open_out(a.out);
    write_csv_hash(out, hash);
    write_forecast_csv(out, out_fc);
}

struct SynthArgs {
    std::string model = "fitness", out, fitness = "constant", densify_rule = "triadic";
    SynthConfig config;
    bool static_graph = false;
};

void run_synth(SynthArgs a, std::uint64_t seed) {
    a.config.seed = seed;
    a.config.fitness_law = parse_fitness_law(a.fitness);
    a.config.densify_rule = parse_densify_rule(a.densify_rule);
    a.config.grow_after_arrival = !a.static_graph;
    SynthRun run = a.model == "pa"        ? growth_run(a.config, GrowthModel::pa)
                   : a.model == "fitness" ? growth_run(a.config, GrowthModel::fitness)
                                          : hole_closure_experiment(a.config);
    std::ostringstream buf;
    write_synth_run_json(buf, run);
    auto doc = json::parse(buf.str());
    doc["config_hash"] = hash_of({{"command", "synth"}, {"model", a.model}, {"config", doc["config"]}});
    open_out(a.out) << doc.dump(2) << '\n';
    const auto& last = run.checkpoints.back();
    std::cerr << run.checkpoints.size() << " checkpoints; final: " << last.nodes << " nodes, hub bc "
              << format_double(last.hub_bc) << '\n';
}

struct ChartArgs {
    std::vector<std::string> series, names;
    std::string forecast, out, title, y_label;
    int width = 800, height = 480;
};

void run_chart(const ChartArgs& a) {
    std::vector<MetricSeries> picked;
    for (const auto& file : a.series) {
        auto in = open_in(file);
        for (auto& s : read_series_csv(in))
            if (a.names.empty() || std::find(a.names.begin(), a.names.end(), s.name) != a.names.end()) picked.push_back(std::move(s));
    }
    std::vector<Forecast> fcs;
    if (!a.forecast.empty()) {
        auto in = open_in(a.forecast);
        for (auto& f : read_forecast_csv(in))
            if (a.names.empty() || std::find(a.names.begin(), a.names.end(), f.series) != a.names.end()) fcs.push_back(std::move(f));
    }
    if (picked.empty() && fcs.empty()) throw DataError("no series selected for the chart");
    ChartLayout layout;
    layout.width = a.width;
    layout.height = a.height;
    layout.title = a.title;
    layout.y_label = a.y_label;
    layout.config_hash = hash_of({{"command", "chart"}, {"series", a.series}, {"names", a.names}, {"forecast", a.forecast},
                                  {"title", a.title}, {"y_label", a.y_label}, {"width", a.width}, {"height", a.height}});
    open_out(a.out) << emit_chart(picked, fcs, layout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Country collaboration network analysis"};
    app.set_config("--config", "", "TOML/INI file with option defaults");
    app.require_subcommand(1);
    int threads = 0;
    std::uint64_t seed = 1;
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Seed for stochastic steps")->capture_default_str();

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Publication records or edge CSV to a corpus directory");
    auto* pubs = c_ingest->add_option("--pubs", ingest.pubs, "JSON-lines publications")->check(CLI::ExistingFile);
    auto* edges = c_ingest->add_option("--edges", ingest.edges, "Pre-aggregated year,field,country_a,country_b,weight CSV")->check(CLI::ExistingFile);
    pubs->excludes(edges);
    c_ingest->add_option("--out", ingest.out, "Corpus directory")->required();
    c_ingest->add_option("--threshold", ingest.threshold, "Minimum international publications")->check(CLI::NonNegativeNumber)->capture_default_str();

    BuildArgs build;
    auto* c_build = app.add_subcommand("build", "Windowed network for one year");
    add_net_options(c_build, build.net);
    c_build->add_option("--year", build.year, "Last year of the window")->required();
    c_build->add_option("--out", build.out, "Network JSON")->required();

    MetricsArgs metrics;
    auto* c_metrics = app.add_subcommand("metrics", "Centrality and structure metrics of a network file");
    c_metrics->add_option("--net", metrics.net, "Network JSON")->required()->check(CLI::ExistingFile);
    c_metrics->add_option("--metric", metrics.metrics,
                          "bc,bcw,ev,deg,core_bc,centralization,avg_bc,kcore,clustering,efficiency,efficiency_w,communities,ego:XX")
        ->delimiter(',')
        ->capture_default_str();
    c_metrics->add_option("--out", metrics.out, "CSV metric,node,value")->required();
    c_metrics->add_option("--communities-out", metrics.communities_out, "Communities JSON (default: next to --out)");

    SeriesArgs series;
    auto* c_series = app.add_subcommand("series", "Full pipeline: metric series, forecasts, Granger panel and summary");
    add_net_options(c_series, series.net);
    c_series->add_option("--years", series.years, "FIRST:LAST (default: whole corpus)");
    c_series->add_option("--fields", series.fields, "Fields")->delimiter(',')->capture_default_str();
    c_series->add_option("--countries", series.countries, "Countries for per-country series (default: all)")->delimiter(',');
    c_series->add_option("--bridges", series.bridges, "SOURCE/VIA pairs")->delimiter(',')->capture_default_str();
    c_series->add_option("--iv", series.iv, "Country whose participation drives the Granger panel")->capture_default_str();
    c_series->add_option("--max-lag", series.max_lag, "Largest Granger lag")->check(CLI::PositiveNumber)->capture_default_str();
    c_series->add_option("--horizon", series.horizon, "Forecast horizon")->check(CLI::PositiveNumber)->capture_default_str();
    c_series->add_option("--forecast", series.forecast_series, "Series to forecast")->delimiter(',')->capture_default_str();
    c_series->add_option("--out", series.out, "Output directory")->required();

    BridgeArgs bridge;
    auto* c_bridge = app.add_subcommand("bridge", "Share of a country's shortest paths passing through another");
    add_net_options(c_bridge, bridge.net);
    c_bridge->add_option("--source", bridge.source, "Source country")->required();
    c_bridge->add_option("--via", bridge.via, "Intermediary country")->required();
    c_bridge->add_option("--years", bridge.years, "FIRST:LAST (default: whole corpus)");
    c_bridge->add_option("--mode", bridge.mode, "Counting rule")->check(CLI::IsMember({"any_path", "sigma_share"}))->capture_default_str();
    c_bridge->add_option("--out", bridge.out, "CSV year,source,via,fraction,targets")->required();

    GrangerArgs granger;
    auto* c_granger = app.add_subcommand("granger", "Granger panel of participation against network metrics");
    c_granger->add_option("--corpus", granger.corpus, "Corpus directory")->envname("COLLABNET_CORPUS")->required();
    c_granger->add_option("--iv", granger.iv, "Country")->capture_default_str();
    c_granger->add_option("--metrics", granger.metrics, "Response metrics")->delimiter(',')->capture_default_str();
    c_granger->add_option("--fields", granger.fields, "Fields ('all' = pooled slice, '*' = every field)")->delimiter(',')->capture_default_str();
    c_granger->add_option("--years", granger.years, "FIRST:LAST (default: whole corpus)");
    c_granger->add_option("--max-lag", granger.max_lag, "Largest lag")->check(CLI::PositiveNumber)->capture_default_str();
    c_granger->add_option("--threshold", granger.threshold, "Minimum international publications")->check(CLI::NonNegativeNumber)->capture_default_str();
    c_granger->add_option("--base", granger.base, "Participation denominator")->check(CLI::IsMember({"total", "international"}))->capture_default_str();
    c_granger->add_option("--out", granger.out, "CSV")->required();

    ForecastArgs fc;
    auto* c_forecast = app.add_subcommand("forecast", "AR forecasts with bands for series in a CSV file");
    c_forecast->add_option("--series", fc.series, "Series CSV")->required()->check(CLI::ExistingFile);
    c_forecast->add_option("--name", fc.names, "Series names to forecast (default: every series that fits)")->delimiter(',');
    c_forecast->add_option("--horizon", fc.horizon, "Years ahead")->check(CLI::PositiveNumber)->capture_default_str();
    c_forecast->add_option("--level", fc.level, "Band coverage")->check(CLI::Range(0.5, 0.999))->capture_default_str();
    c_forecast->add_option("--out", fc.out, "CSV")->required();

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Synthetic growth runs and the hole-closure experiment");
    c_synth->add_option("--model", synth.model, "Growth model")->check(CLI::IsMember({"pa", "fitness", "hole-closure"}))->capture_default_str();
    c_synth->add_option("--n", synth.config.n_final, "Final node count")->capture_default_str();
    c_synth->add_option("--m", synth.config.m, "Edges per arriving node")->capture_default_str();
    c_synth->add_option("--eta", synth.config.eta, "Entrant fitness multiplier")->capture_default_str();
    c_synth->add_option("--arrival", synth.config.entrant_arrival, "Entrant node index")->capture_default_str();
    c_synth->add_option("--fitness", synth.fitness, "Fitness law")->check(CLI::IsMember({"constant", "uniform"}))->capture_default_str();
    c_synth->add_option("--checkpoints", synth.config.checkpoint_stride, "Nodes (or steps) between checkpoints")->capture_default_str();
    c_synth->add_option("--densify", synth.config.densify_edges, "Hole-closing edges per step (hole-closure)")->capture_default_str();
    c_synth->add_option("--densify-rule", synth.densify_rule, "Hole-closing rule")->check(CLI::IsMember({"triadic", "fitness_pair"}))->capture_default_str();
    c_synth->add_flag("--static", synth.static_graph, "No node growth after the entrant (hole-closure)");
    c_synth->add_option("--seed", seed, "Seed");
    c_synth->add_option("--out", synth.out, "Run JSON")->required();

    ChartArgs chart;
    auto* c_chart = app.add_subcommand("chart", "SVG line chart of series and forecast files");
    c_chart->add_option("--series", chart.series, "Series CSV files")->delimiter(',')->check(CLI::ExistingFile);
    c_chart->add_option("--name", chart.names, "Series to draw (default: all)")->delimiter(',');
    c_chart->add_option("--forecast", chart.forecast, "Forecast CSV")->check(CLI::ExistingFile);
    c_chart->add_option("--title", chart.title, "Title");
    c_chart->add_option("--y-label", chart.y_label, "Y axis label");
    c_chart->add_option("--width", chart.width, "Pixels")->capture_default_str();
    c_chart->add_option("--height", chart.height, "Pixels")->capture_default_str();
    c_chart->add_option("--out", chart.out, "SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        set_thread_count(static_cast<unsigned>(threads));
        if (*c_ingest) run_ingest(ingest);
        else if (*c_build) run_build(build);
        else if (*c_metrics) run_metrics(metrics);
        else if (*c_series) run_series(series, seed);
        else if (*c_bridge) run_bridge(bridge);
        else if (*c_granger) run_granger(granger);
        else if (*c_forecast) run_forecast(fc);
        else if (*c_synth) run_synth(synth, seed);
        else if (*c_chart) run_chart(chart);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
