#pragma once

#include "collabnet/graph.hpp"
#include "collabnet/ingest.hpp"
#include "collabnet/paths.hpp"
#include "collabnet/series.hpp"
#include "collabnet/timeseries.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace collabnet {

/// How to turn corpus slices into one network.
struct NetworkRequest {
    std::string field = kAllFields;
    int window = 3;
    WeightScheme scheme = WeightScheme::raw;
    std::int64_t threshold = 10; // re-applied per year; no-op when the corpus used the same value
};

/// Network for the window ending at `year`. Near the start of the corpus
/// (or after a gap) the window is truncated to the consecutive years that
/// exist; the slice tag records the window actually used. Throws DataError
/// when `year` itself is absent.
CollabNetwork build_network(const Corpus& corpus, int year, const NetworkRequest& request);

/// Global metrics available as series and Granger responses.
const std::vector<std::string>& global_metric_names();

/// nodes, edges, max_k, kcore_nodes, kcore_ratio, clustering, efficiency,
/// communities, modularity, betw_centralization, avg_bc. Networks too small
/// for a metric yield no entry for it.
std::map<std::string, double> global_metrics(const CollabNetwork& net, std::span<const std::string> names,
                                             bool weighted_communities = true);

/// Per-country metrics: bc and bcw (normalized topological / weighted
/// betweenness), deg, ev, core_bc (normalized betweenness inside the
/// maximum k-core, missing outside it) and ego_q (ego-network modularity).
const std::vector<std::string>& country_metric_names();

std::map<std::string, std::map<std::string, double>> country_metrics(const CollabNetwork& net,
                                                                     std::span<const std::string> names);

struct YearRange {
    int first = 0;
    int last = 0;

    std::vector<int> years() const;
};

/// "2001:2024" or "2010".
YearRange parse_year_range(const std::string& s);

/// Series of one global metric ("clustering") or one country metric
/// ("bc:US") over the given years. Years missing from the corpus are missing
/// points.
MetricSeries metric_series(const Corpus& corpus, const std::string& metric, const YearRange& years,
                           const NetworkRequest& request);

struct GrangerPanelRequest {
    std::string iv_country = "CN";
    std::vector<std::string> metrics{"clustering",          "kcore_nodes", "kcore_ratio", "communities",
                                     "modularity",          "betw_centralization", "avg_bc", "efficiency"};
    std::vector<std::string> fields{kAllFields};
    std::optional<YearRange> years;
    int max_lag = 6;
    std::int64_t threshold = 10;
    ParticipationBase base = ParticipationBase::total;
};

/// Raw annual series (window 1, raw weights): the country's participation
/// share against every (field, metric) response, then one joint BH
/// correction over all fields, metrics and lags.
std::vector<GrangerResult> granger_panel(const Corpus& corpus, const GrangerPanelRequest& request);

/// field,metric,lag,p_raw,aic,p_adj,min_p_adj,flag; NA where undefined.
void write_granger_csv(std::ostream& out, const std::vector<GrangerResult>& grid);

/// Forecasts in the series CSV layout: series "<name>|point", "|lower" and
/// "|upper", unit "<model> level=<level>".
std::vector<MetricSeries> forecast_to_series(const Forecast& fc);
void write_forecast_csv(std::ostream& out, std::span<const Forecast> forecasts);
std::vector<Forecast> read_forecast_csv(std::istream& in);

struct PipelineConfig {
    std::filesystem::path corpus;
    std::optional<YearRange> years; // default: every corpus year
    std::vector<std::string> fields{kAllFields};
    int window = 3;
    WeightScheme scheme = WeightScheme::raw;
    std::int64_t threshold = 10;
    std::filesystem::path output;
    std::uint64_t seed = 1;
    std::vector<std::string> countries; // per-country series; empty means all
    std::vector<std::pair<std::string, std::string>> bridges{{"CN", "US"}};
    std::string iv_country = "CN";
    int max_lag = 6;
    int forecast_horizon = 6;
    std::vector<std::string> forecast_series{"bc:US", "bc:CN"};

    /// Throws DataError on an empty year range, window < 1 or threshold < 0.
    void validate() const;
    /// Canonical JSON, independent of the output directory.
    nlohmann::json to_json() const;
    /// 16 hex digits of FNV-1a over to_json().dump().
    std::string hash() const;
};

struct PipelineSummary {
    std::vector<int> missing_years;
    std::map<std::string, std::size_t> series_per_field;
    bool granger_done = false;
    std::string granger_note;
    std::vector<std::string> warnings;
    std::vector<std::filesystem::path> files;
};

/// Builds every windowed network, computes the metric suite, and writes
/// series_<field>.csv, forecast_<field>.csv, granger.csv (when the span
/// allows) and summary.json to `output`. Every file carries the config hash.
PipelineSummary run_pipeline(const PipelineConfig& config);

/// FNV-1a 64 of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

} // namespace collabnet
