#pragma once

#include "collabnet/series.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace collabnet {

/// Label of the slice that pools every field.
inline constexpr const char* kAllFields = "all";

struct PublicationRecord {
    std::string id;
    int year = 0;
    std::string field;
    std::set<std::string> countries; // ISO-3166 alpha-2, uppercase

    bool international() const noexcept { return countries.size() >= 2; }
};

struct ParseReport {
    std::vector<PublicationRecord> records;
    std::size_t lines = 0;
    std::size_t skipped = 0;
    std::vector<std::string> warnings; // first few skip reasons, "line N: reason"
};

/// Reads JSON lines with keys id, year, field, countries. Malformed lines and
/// records without any country are skipped and counted.
ParseReport parse_publications(std::istream& in);
ParseReport parse_publications_file(const std::filesystem::path& path);

using CountryPair = std::pair<std::string, std::string>; // first < second

CountryPair make_pair_key(const std::string& a, const std::string& b);

struct EdgeList {
    int year = 0;
    std::string field;
    std::map<CountryPair, std::int64_t> edges;

    std::int64_t total_weight() const;
    std::set<std::string> countries() const;
};

struct CountryYearStats {
    std::string country;
    int year = 0;
    std::string field;
    std::int64_t intl_pubs = 0;
    std::int64_t total_pubs = 0;
};

/// Per-country counts plus the global totals of one (year, field) slice.
struct SliceStats {
    int year = 0;
    std::string field;
    std::int64_t publications = 0;
    std::int64_t international = 0;
    std::map<std::string, CountryYearStats> countries;

    const CountryYearStats* find(const std::string& country) const;
};

/// Records of one (year, field) slice; field "all" keeps every field.
std::vector<PublicationRecord> select_slice(std::span<const PublicationRecord> records, int year,
                                            const std::string& field);

/// Full counting: each record adds 1 to every unordered pair of its countries.
EdgeList build_annual_edges(std::span<const PublicationRecord> records, int year, const std::string& field);

SliceStats compute_stats(std::span<const PublicationRecord> records, int year, const std::string& field);

/// Drops every edge touching a country with fewer than `threshold`
/// international publications in the slice.
EdgeList filter_countries(const EdgeList& edges, const SliceStats& stats, std::int64_t threshold = 10);

enum class ParticipationBase {
    total,        // all publications that year
    international // internationally co-authored publications only
};

/// Share of the year's global output that is international work involving
/// `country`. Years without any publication are omitted.
MetricSeries participation_series(std::span<const PublicationRecord> records, const std::string& country,
                                  ParticipationBase base = ParticipationBase::total);
MetricSeries participation_series(std::span<const SliceStats> stats_by_year, const std::string& country,
                                  ParticipationBase base = ParticipationBase::total);

/// Pre-aggregated `year,field,country_a,country_b,weight` rows, one EdgeList
/// per (year, field) in key order.
std::vector<EdgeList> read_edge_csv(std::istream& in);

struct IngestOptions {
    std::int64_t threshold = 10;
    std::string config_hash; // embedded in every written file when set
};

/// Writes edges_<year>_<field>.csv, stats_<year>_<field>.csv and manifest.json.
void write_corpus(const std::filesystem::path& dir, const ParseReport& parsed, const IngestOptions& options);

/// Corpus from pre-aggregated edges. No publication-level data exists, so
/// the threshold is not applied and each country's productivity is its
/// collaboration strength.
void write_corpus_from_edges(const std::filesystem::path& dir, const std::vector<EdgeList>& edges,
                             const std::string& config_hash = {});

/// Read side of the ingest store.
class Corpus {
public:
    static Corpus open(const std::filesystem::path& dir);

    const std::vector<int>& years() const noexcept { return years_; }
    const std::vector<std::string>& fields() const noexcept { return fields_; }
    std::int64_t threshold() const noexcept { return threshold_; }
    /// "publications" or "edges" (pre-aggregated input).
    const std::string& source() const noexcept { return source_; }
    const std::filesystem::path& directory() const noexcept { return dir_; }

    bool has(int year, const std::string& field) const;
    EdgeList edges(int year, const std::string& field) const;
    SliceStats stats(int year, const std::string& field) const;

private:
    struct SliceFiles {
        std::string edges;
        std::string stats;
        std::int64_t publications = 0;
        std::int64_t international = 0;
    };

    const SliceFiles& slice(int year, const std::string& field) const;

    std::filesystem::path dir_;
    std::vector<int> years_;
    std::vector<std::string> fields_;
    std::int64_t threshold_ = 0;
    std::string source_;
    std::map<std::pair<int, std::string>, SliceFiles> slices_;
};

} // namespace collabnet
