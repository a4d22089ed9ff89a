#include "collabnet/pipeline.hpp"

#include "collabnet/centrality.hpp"
#include "collabnet/error.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/paths.hpp"
#include "collabnet/structure.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace collabnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool contains(std::span<const std::string> names, const std::string& name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

bool any_of(std::span<const std::string> names, std::initializer_list<const char*> wanted) {
    for (const char* w : wanted)
        if (contains(names, w)) return true;
    return false;
}

std::map<std::string, double> by_label(const CentralityVector& v) {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out[v.nodes[i]] = v.scores(static_cast<Eigen::Index>(i));
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    int v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw DataError("bad " + what + ": '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw DataError("bad " + what + ": '" + s + "'");
    }
}

std::string na_or(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

// Splits "bc:US" into metric and country; a global metric has no country.
std::pair<std::string, std::string> split_metric(const std::string& metric) {
    auto colon = metric.find(':');
    if (colon == std::string::npos) return {metric, {}};
    return {metric.substr(0, colon), metric.substr(colon + 1)};
}

std::string sanitize(const std::string& field) {
    std::string out;
    for (char c : field) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

struct YearResult {
    bool present = false;
    int window = 0;
    std::map<std::string, double> global;
    std::map<std::string, std::map<std::string, double>> country;
    std::map<std::pair<std::string, std::string>, std::optional<double>> bridges;
    std::vector<std::string> warnings;
};

} // namespace

CollabNetwork build_network(const Corpus& corpus, int year, const NetworkRequest& request) {
    if (request.window < 1) throw DataError("window must be at least 1");
    if (!corpus.has(year, request.field))
        throw DataError("no data for year " + std::to_string(year) + ", field '" + request.field + "'");
    const bool refilter = corpus.source() != "edges" && request.threshold > corpus.threshold();
    std::vector<EdgeList> lists;
    std::vector<SliceStats> stats;
    for (int y = year; y > year - request.window && corpus.has(y, request.field); --y) {
        auto s = corpus.stats(y, request.field);
        auto e = corpus.edges(y, request.field);
        if (refilter) e = filter_countries(e, s, request.threshold);
        lists.insert(lists.begin(), std::move(e));
        stats.insert(stats.begin(), std::move(s));
    }
    auto net = rolling_window(lists);
    if (request.scheme != WeightScheme::raw) net = normalize_weights(net, window_productivity(stats), request.scheme);
    return net;
}

const std::vector<std::string>& global_metric_names() {
    static const std::vector<std::string> names{"nodes",      "edges",       "max_k",      "kcore_nodes",
                                                "kcore_ratio", "clustering",  "efficiency", "communities",
                                                "modularity", "betw_centralization", "avg_bc"};
    return names;
}

std::map<std::string, double> global_metrics(const CollabNetwork& net, std::span<const std::string> names,
                                             bool weighted_communities) {
    for (const auto& name : names)
        if (!contains(global_metric_names(), name)) throw DataError("unknown global metric '" + name + "'");
    std::map<std::string, double> out;
    const auto n = net.size();
    auto want = [&](const char* name) { return contains(names, name); };
    if (want("nodes")) out["nodes"] = static_cast<double>(n);
    if (want("edges")) out["edges"] = static_cast<double>(net.edge_count());
    if (n == 0) return out;

    if (any_of(names, {"max_k", "kcore_nodes", "kcore_ratio"})) {
        auto core = k_core(net);
        if (want("max_k")) out["max_k"] = core.max_k;
        if (want("kcore_nodes")) out["kcore_nodes"] = static_cast<double>(core.kcore_nodes);
        if (want("kcore_ratio")) out["kcore_ratio"] = core.kcore_ratio;
    }
    if (want("clustering")) out["clustering"] = clustering(net).average;
    if (want("efficiency") && n >= 2) out["efficiency"] = global_efficiency(net);
    if (any_of(names, {"communities", "modularity"})) {
        auto part = communities(net, weighted_communities);
        if (want("communities")) out["communities"] = static_cast<double>(part.count());
        if (want("modularity")) out["modularity"] = part.modularity;
    }
    if (any_of(names, {"betw_centralization", "avg_bc"}) && n >= 3) {
        auto bc = normalize_bc(betweenness(net), n);
        if (want("betw_centralization")) out["betw_centralization"] = betweenness_centralization(bc);
        if (want("avg_bc")) out["avg_bc"] = bc.scores.mean();
    }
    return out;
}

const std::vector<std::string>& country_metric_names() {
    static const std::vector<std::string> names{"bc", "bcw", "deg", "ev", "core_bc", "ego_q"};
    return names;
}

std::map<std::string, std::map<std::string, double>> country_metrics(const CollabNetwork& net,
                                                                     std::span<const std::string> names) {
    for (const auto& name : names)
        if (!contains(country_metric_names(), name)) throw DataError("unknown country metric '" + name + "'");
    std::map<std::string, std::map<std::string, double>> out;
    const auto n = net.size();
    if (contains(names, "bc") && n >= 3) out["bc"] = by_label(normalize_bc(betweenness(net, false), n));
    if (contains(names, "bcw") && n >= 3) out["bcw"] = by_label(normalize_bc(betweenness(net, true), n));
    if (contains(names, "deg") && n >= 2) out["deg"] = by_label(degree_centrality(net));
    if (contains(names, "ev") && net.edge_count() > 0) out["ev"] = by_label(eigenvector_centrality(net));
    if (contains(names, "core_bc") && n > 0) {
        auto core = max_core_subgraph(net);
        if (core.size() >= 3) out["core_bc"] = by_label(normalize_bc(betweenness(core), core.size()));
    }
    if (contains(names, "ego_q")) {
        auto& q = out["ego_q"];
        for (std::size_t i = 0; i < n; ++i)
            if (net.degree(i) > 0) q[net.label(i)] = ego_modularity(net, net.label(i));
    }
    return out;
}

std::vector<int> YearRange::years() const {
    std::vector<int> out;
    for (int y = first; y <= last; ++y) out.push_back(y);
    return out;
}

YearRange parse_year_range(const std::string& s) {
    auto colon = s.find(':');
    YearRange r;
    if (colon == std::string::npos) {
        r.first = r.last = parse_int(s, "year");
    } else {
        r.first = parse_int(s.substr(0, colon), "first year");
        r.last = parse_int(s.substr(colon + 1), "last year");
    }
    if (r.first > r.last) throw DataError("empty year range '" + s + "'");
    return r;
}

MetricSeries metric_series(const Corpus& corpus, const std::string& metric, const YearRange& years,
                           const NetworkRequest& request) {
    auto [name, country] = split_metric(metric);
    const bool per_country = !country.empty();
    if (per_country ? !contains(country_metric_names(), name) : !contains(global_metric_names(), name))
        throw DataError("unknown metric '" + metric + "'");
    const std::vector<std::string> wanted{name};
    MetricSeries out{metric, {}, {}};
    for (int year : years.years()) {
        if (!corpus.has(year, request.field)) {
            out.push(year, std::nullopt);
            continue;
        }
        auto net = build_network(corpus, year, request);
        std::optional<double> value;
        if (per_country) {
            auto all = country_metrics(net, wanted);
            if (auto m = all.find(name); m != all.end())
                if (auto c = m->second.find(country); c != m->second.end()) value = c->second;
        } else {
            auto all = global_metrics(net, wanted);
            if (auto m = all.find(name); m != all.end()) value = m->second;
        }
        out.push(year, value);
    }
    return out;
}

std::vector<GrangerResult> granger_panel(const Corpus& corpus, const GrangerPanelRequest& request) {
    if (request.metrics.empty() || request.fields.empty()) throw DataError("granger panel needs metrics and fields");
    for (const auto& m : request.metrics)
        if (!contains(global_metric_names(), m)) throw DataError("unknown Granger response '" + m + "'");
    std::vector<int> years;
    if (request.years) {
        years = request.years->years();
    } else {
        if (corpus.years().empty()) throw DataError("corpus has no years");
        years = YearRange{corpus.years().front(), corpus.years().back()}.years();
    }

    std::vector<GrangerResult> grid;
    for (const auto& field : request.fields) {
        std::vector<SliceStats> stats;
        for (int y : years)
            if (corpus.has(y, field)) stats.push_back(corpus.stats(y, field));
        const auto iv = participation_series(stats, request.iv_country, request.base);

        std::vector<std::optional<std::map<std::string, double>>> per_year(years.size());
        parallel_for(years.size(), [&](std::size_t k) {
            if (!corpus.has(years[k], field)) return;
            auto net = build_network(corpus, years[k], {field, 1, WeightScheme::raw, request.threshold});
            per_year[k] = global_metrics(net, request.metrics);
        });

        for (const auto& metric : request.metrics) {
            GrangerResult cell;
            cell.field = field;
            cell.metric = metric;
            MetricSeries y{metric, {}, {}};
            for (std::size_t k = 0; k < years.size(); ++k) {
                std::optional<double> v;
                if (per_year[k])
                    if (auto it = per_year[k]->find(metric); it != per_year[k]->end()) v = it->second;
                y.push(years[k], v);
            }
            try {
                cell.test = granger_test(iv, y, {request.max_lag, true});
                auto dy = first_difference(y);
                std::vector<double> vals;
                for (const auto& p : dy.points)
                    if (p.value) vals.push_back(*p.value);
                if (vals.size() >= 5) {
                    double t = trend_stationarity_tstat(
                        Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
                    if (std::isfinite(t)) cell.y_trend_tstat = t;
                }
            } catch (const DataError& e) {
                cell.note = e.what();
            } catch (const NumericError& e) {
                cell.note = e.what();
            }
            grid.push_back(std::move(cell));
        }
    }
    bool any_usable = false;
    for (const auto& c : grid)
        if (c.test) any_usable = true;
    if (any_usable) apply_bh_fdr(grid);
    return grid;
}

void write_granger_csv(std::ostream& out, const std::vector<GrangerResult>& grid) {
    out << "field,metric,lag,p_raw,aic,p_adj,min_p_adj,flag\n";
    for (const auto& cell : grid) {
        const auto min_adj = na_or(cell.min_p_adjusted);
        const char* flag = cell.flagged ? "1" : "0";
        if (!cell.test) {
            out << detail::csv_cell(cell.field) << ',' << detail::csv_cell(cell.metric) << ",NA,NA,NA,NA," << min_adj
                << ',' << flag << '\n';
            continue;
        }
        for (const auto& lag : cell.test->lags) {
            out << detail::csv_cell(cell.field) << ',' << detail::csv_cell(cell.metric) << ',' << lag.lag << ',';
            if (lag.usable)
                out << format_double(lag.p_raw) << ',' << format_double(lag.aic) << ',';
            else
                out << "NA,NA,";
            out << na_or(lag.p_adjusted) << ',' << min_adj << ',' << flag << '\n';
        }
    }
}

std::vector<MetricSeries> forecast_to_series(const Forecast& fc) {
    const std::string unit = fc.model + " level=" + format_double(fc.level);
    std::vector<MetricSeries> out;
    for (const char* part : {"point", "lower", "upper"}) {
        const auto& v = std::string(part) == "point" ? fc.point : std::string(part) == "lower" ? fc.lower : fc.upper;
        MetricSeries s{fc.series + "|" + part, unit, {}};
        for (int h = 0; h < fc.horizon(); ++h) s.push(fc.years[static_cast<std::size_t>(h)], v(h));
        out.push_back(std::move(s));
    }
    return out;
}

void write_forecast_csv(std::ostream& out, std::span<const Forecast> forecasts) {
    std::vector<MetricSeries> all;
    for (const auto& fc : forecasts)
        for (auto& s : forecast_to_series(fc)) all.push_back(std::move(s));
    write_series_csv(out, all);
}

std::vector<Forecast> read_forecast_csv(std::istream& in) {
    std::vector<Forecast> out;
    std::map<std::string, std::size_t> index;
    for (const auto& s : read_series_csv(in)) {
        auto bar = s.name.rfind('|');
        if (bar == std::string::npos) throw DataError("'" + s.name + "' is not a forecast series");
        const auto name = s.name.substr(0, bar);
        const auto part = s.name.substr(bar + 1);
        auto [it, fresh] = index.try_emplace(name, out.size());
        if (fresh) {
            Forecast fc;
            fc.series = name;
            auto space = s.unit.find(" level=");
            if (space == std::string::npos) throw DataError("forecast unit '" + s.unit + "' lacks a level");
            fc.model = s.unit.substr(0, space);
            fc.level = parse_double(s.unit.substr(space + 7), "level");
            if (fc.model.rfind("ar", 0) == 0) {
                auto plus = fc.model.find('+');
                fc.order = parse_int(fc.model.substr(2, plus == std::string::npos ? std::string::npos : plus - 2),
                                     "model order");
            }
            fc.years = s.years();
            out.push_back(std::move(fc));
        }
        auto& fc = out[it->second];
        if (s.years() != fc.years) throw DataError("forecast parts of '" + name + "' disagree on years");
        auto values = s.values();
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
        if (part == "point")
            fc.point = v;
        else if (part == "lower")
            fc.lower = v;
        else if (part == "upper")
            fc.upper = v;
        else
            throw DataError("unknown forecast part '" + part + "'");
    }
    for (const auto& fc : out)
        if (fc.point.size() != fc.horizon() || fc.lower.size() != fc.horizon() || fc.upper.size() != fc.horizon())
            throw DataError("forecast '" + fc.series + "' is missing a part");
    return out;
}

void PipelineConfig::validate() const {
    if (years && years->first > years->last) throw DataError("empty year range");
    if (window < 1) throw DataError("window must be at least 1");
    if (threshold < 0) throw DataError("threshold must be non-negative");
    if (fields.empty()) throw DataError("no fields requested");
    if (max_lag < 1) throw DataError("max lag must be at least 1");
    if (forecast_horizon < 1) throw DataError("forecast horizon must be at least 1");
    for (const auto& [s, v] : bridges)
        if (s == v) throw DataError("bridge source and intermediary are both " + s);
}

json PipelineConfig::to_json() const {
    json j{{"corpus", corpus.generic_string()},
           {"fields", fields},
           {"window", window},
           {"normalize", to_string(scheme)},
           {"threshold", threshold},
           {"seed", seed},
           {"countries", countries},
           {"iv_country", iv_country},
           {"max_lag", max_lag},
           {"forecast_horizon", forecast_horizon},
           {"forecast_series", forecast_series}};
    j["years"] = years ? json{years->first, years->last} : json(nullptr);
    json b = json::array();
    for (const auto& [s, v] : bridges) b.push_back({s, v});
    j["bridges"] = b;
    return j;
}

std::string PipelineConfig::hash() const { return fnv1a_hex(to_json().dump()); }

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PipelineSummary run_pipeline(const PipelineConfig& config) {
    config.validate();
    const auto corpus = Corpus::open(config.corpus);
    if (corpus.years().empty()) throw DataError("corpus has no years");
    const YearRange range = config.years.value_or(YearRange{corpus.years().front(), corpus.years().back()});
    const auto years = range.years();
    const auto hash = config.hash();

    std::error_code ec;
    fs::create_directories(config.output, ec);
    if (ec || !fs::is_directory(config.output)) throw DataError("cannot create output directory " + config.output.string());

    PipelineSummary summary;
    std::set<int> missing;
    std::vector<Forecast> all_forecasts;
    const auto& gnames = global_metric_names();
    const auto& cnames = country_metric_names();

    for (const auto& field : config.fields) {
        const NetworkRequest request{field, config.window, config.scheme, config.threshold};
        std::vector<YearResult> results(years.size());
        parallel_for(years.size(), [&](std::size_t k) {
            auto& r = results[k];
            if (!corpus.has(years[k], field)) return;
            r.present = true;
            auto net = build_network(corpus, years[k], request);
            r.window = net.slice().window;
            r.global = global_metrics(net, gnames);
            std::vector<std::string> names(cnames.begin(), cnames.end());
            try {
                r.country = country_metrics(net, names);
            } catch (const NumericError& e) {
                r.warnings.push_back(std::to_string(years[k]) + ": " + e.what());
                names.erase(std::find(names.begin(), names.end(), "ev"));
                r.country = country_metrics(net, names);
            }
            if (net.edge_count() > 0 && net.size() >= 3 && !r.country.contains("ev"))
                r.warnings.push_back(std::to_string(years[k]) + ": eigenvector centrality unavailable");
            for (const auto& [s, v] : config.bridges) {
                std::optional<double> value;
                if (net.size() >= 3 && net.find(s) && net.find(v)) value = bridging_fraction(net, s, v).fraction;
                r.bridges[{s, v}] = value;
            }
        });

        std::vector<MetricSeries> series;
        MetricSeries window{"window_years", "years", {}};
        for (std::size_t k = 0; k < years.size(); ++k) {
            if (!results[k].present) missing.insert(years[k]);
            window.push(years[k], results[k].present ? std::optional<double>(results[k].window) : std::nullopt);
            for (const auto& w : results[k].warnings) summary.warnings.push_back(field + " " + w);
        }
        series.push_back(std::move(window));
        for (const auto& name : gnames) {
            MetricSeries s{name, {}, {}};
            for (std::size_t k = 0; k < years.size(); ++k) {
                std::optional<double> v;
                if (auto it = results[k].global.find(name); it != results[k].global.end()) v = it->second;
                s.push(years[k], v);
            }
            series.push_back(std::move(s));
        }

        std::set<std::string> countries(config.countries.begin(), config.countries.end());
        if (countries.empty())
            for (const auto& r : results)
                for (const auto& [metric, values] : r.country)
                    for (const auto& [c, v] : values) countries.insert(c);
        for (const auto& name : cnames) {
            for (const auto& c : countries) {
                MetricSeries s{name + ":" + c, {}, {}};
                for (std::size_t k = 0; k < years.size(); ++k) {
                    std::optional<double> v;
                    if (auto m = results[k].country.find(name); m != results[k].country.end())
                        if (auto it = m->second.find(c); it != m->second.end()) v = it->second;
                    s.push(years[k], v);
                }
                series.push_back(std::move(s));
            }
        }
        for (const auto& [s, v] : config.bridges) {
            MetricSeries b{"bridge:" + s + "/" + v, "fraction", {}};
            for (std::size_t k = 0; k < years.size(); ++k) {
                std::optional<double> value;
                if (auto it = results[k].bridges.find({s, v}); it != results[k].bridges.end()) value = it->second;
                b.push(years[k], value);
            }
            series.push_back(std::move(b));
        }
        {
            std::vector<SliceStats> stats;
            for (int y : years)
                if (corpus.has(y, field)) stats.push_back(corpus.stats(y, field));
            if (!stats.empty()) {
                // Re-key onto the full range so absent years stay explicit.
                const auto share = participation_series(stats, config.iv_country);
                MetricSeries iv{share.name, share.unit, {}};
                for (int y : years) iv.push(y, share.at_year(y));
                series.push_back(std::move(iv));
            }
        }

        const auto series_file = "series_" + sanitize(field) + ".csv";
        {
            auto out = open_out(config.output / series_file);
            out << "# config_hash=" << hash << '\n';
            write_series_csv(out, series);
        }
        summary.series_per_field[field] = series.size();
        summary.files.emplace_back(series_file);

        std::vector<Forecast> forecasts;
        for (const auto& name : config.forecast_series) {
            auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.name == name; });
            if (it == series.end()) {
                summary.warnings.push_back(field + " forecast " + name + ": no such series");
                continue;
            }
            try {
                forecasts.push_back(forecast(trailing_run(*it), config.forecast_horizon));
            } catch (const DataError& e) {
                summary.warnings.push_back(field + " forecast " + name + ": " + e.what());
            } catch (const NumericError& e) {
                summary.warnings.push_back(field + " forecast " + name + ": " + e.what());
            }
        }
        const auto forecast_file = "forecast_" + sanitize(field) + ".csv";
        {
            auto out = open_out(config.output / forecast_file);
            out << "# config_hash=" << hash << '\n';
            write_forecast_csv(out, forecasts);
        }
        summary.files.emplace_back(forecast_file);
        for (auto& f : forecasts) all_forecasts.push_back(std::move(f));
    }
    summary.missing_years.assign(missing.begin(), missing.end());

    GrangerPanelRequest granger;
    granger.iv_country = config.iv_country;
    granger.fields = config.fields;
    granger.years = range;
    granger.max_lag = config.max_lag;
    granger.threshold = config.threshold;
    try {
        auto grid = granger_panel(corpus, granger);
        bool any = false;
        for (const auto& c : grid)
            if (c.test) any = true;
        if (any) {
            auto out = open_out(config.output / "granger.csv");
            out << "# config_hash=" << hash << '\n';
            write_granger_csv(out, grid);
            summary.files.emplace_back("granger.csv");
            summary.granger_done = true;
        } else {
            summary.granger_note = "no cell had enough years: " + grid.front().note;
        }
    } catch (const DataError& e) {
        summary.granger_note = e.what();
    }

    json files = json::array();
    for (const auto& f : summary.files) files.push_back(f.generic_string());
    json warnings = summary.warnings;
    json doc{{"config_hash", hash},
             {"config", config.to_json()},
             {"years", {range.first, range.last}},
             {"missing_years", summary.missing_years},
             {"series_per_field", summary.series_per_field},
             {"granger", {{"done", summary.granger_done}, {"note", summary.granger_note}}},
             {"files", files},
             {"warnings", warnings},
             {"conventions",
              {{"edge_counting", "full"},
               {"window", "trailing, truncated at the start of the data"},
               {"distance", "1/w"},
               {"distance_tie_tolerance", kDistanceTieTolerance},
               {"betweenness", "unordered pairs, normalized by (n-1)(n-2)/2"},
               {"avg_bc", "mean normalized betweenness over all nodes"},
               {"communities", "greedy modularity, weighted"},
               {"bridging", to_string(BridgingMode::any_path)},
               {"participation_base", "total publications"},
               {"log_base", "natural"},
               {"granger", "F test on first differences, BH over all cells and lags"},
               {"forecast", "AR(p<=3) with intercept by AIC"}}}};
    {
        auto out = open_out(config.output / "summary.json");
        out << doc.dump(2) << '\n';
    }
    summary.files.emplace_back("summary.json");
    return summary;
}

} // namespace collabnet
