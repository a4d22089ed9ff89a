#include "collabnet/ingest.hpp"

#include "collabnet/error.hpp"
#include "csv_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>

namespace collabnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxWarnings = 20;

bool normalize_code(std::string& code) {
    if (code.size() != 2) return false;
    for (char& c : code) {
        if (!std::isalpha(static_cast<unsigned char>(c))) return false;
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return true;
}

// Returns an empty string on success, otherwise the reason the line was rejected.
std::string parse_record(const std::string& line, std::size_t line_no, PublicationRecord& rec) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return "not a JSON object";

    auto year = j.find("year");
    if (year == j.end() || !year->is_number_integer()) return "missing or non-integer year";
    rec.year = year->get<int>();

    auto field = j.find("field");
    if (field == j.end() || !field->is_string() || field->get<std::string>().empty())
        return "missing field";
    rec.field = field->get<std::string>();

    auto id = j.find("id");
    if (id == j.end() || id->is_null())
        rec.id = "line:" + std::to_string(line_no);
    else if (id->is_string())
        rec.id = id->get<std::string>();
    else if (id->is_number_integer())
        rec.id = std::to_string(id->get<long long>());
    else
        return "id is neither string nor integer";

    auto countries = j.find("countries");
    if (countries == j.end() || !countries->is_array()) return "countries is not an array";
    rec.countries.clear();
    for (const auto& c : *countries) {
        if (!c.is_string()) return "country code is not a string";
        auto code = c.get<std::string>();
        if (!normalize_code(code)) return "invalid country code '" + c.get<std::string>() + "'";
        rec.countries.insert(std::move(code));
    }
    if (rec.countries.empty()) return "no countries";
    return {};
}

std::string sanitize(const std::string& field) {
    std::string out;
    for (char c : field) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

std::string edges_name(int year, const std::string& field) {
    return "edges_" + std::to_string(year) + "_" + sanitize(field) + ".csv";
}

std::string stats_name(int year, const std::string& field) {
    return "stats_" + std::to_string(year) + "_" + sanitize(field) + ".csv";
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void write_hash(std::ostream& out, const std::string& hash) {
    if (!hash.empty()) out << "# config_hash=" << hash << '\n';
}

void write_edges_file(const fs::path& path, const EdgeList& edges, const std::string& hash) {
    auto out = open_out(path);
    write_hash(out, hash);
    out << "country_a,country_b,weight\n";
    for (const auto& [pair, w] : edges.edges) out << pair.first << ',' << pair.second << ',' << w << '\n';
}

void write_stats_file(const fs::path& path, const SliceStats& stats, const std::string& hash) {
    auto out = open_out(path);
    write_hash(out, hash);
    out << "country,intl_pubs,total_pubs\n";
    for (const auto& [code, s] : stats.countries) out << code << ',' << s.intl_pubs << ',' << s.total_pubs << '\n';
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
    std::int64_t v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw DataError("bad integer for " + what + ": '" + s + "'");
    return v;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    std::string line;
    while (std::getline(in, line) && !line.empty() && line[0] == '#') {}
    if (!in || (line != header && line != header + "\r"))
        throw DataError(path.string() + ": expected header '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(detail::split_csv_line(line));
    }
    return rows;
}

json manifest_slice(int year, const std::string& field, const SliceStats& stats, const EdgeList& edges,
                    std::size_t filtered) {
    return json{{"year", year},
                {"field", field},
                {"edges_file", edges_name(year, field)},
                {"stats_file", stats_name(year, field)},
                {"publications", stats.publications},
                {"international", stats.international},
                {"countries", edges.countries().size()},
                {"edges", edges.edges.size()},
                {"filtered_countries", filtered}};
}

void write_manifest(const fs::path& dir, const json& manifest) {
    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

} // namespace

ParseReport parse_publications(std::istream& in) {
    ParseReport report;
    std::string line;
    while (std::getline(in, line)) {
        ++report.lines;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            --report.lines;
            continue;
        }
        PublicationRecord rec;
        auto reason = parse_record(line, report.lines, rec);
        if (!reason.empty()) {
            ++report.skipped;
            if (report.warnings.size() < kMaxWarnings)
                report.warnings.push_back("line " + std::to_string(report.lines) + ": " + reason);
            continue;
        }
        report.records.push_back(std::move(rec));
    }
    return report;
}

ParseReport parse_publications_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read publication file " + path.string());
    return parse_publications(in);
}

CountryPair make_pair_key(const std::string& a, const std::string& b) {
    return a < b ? CountryPair{a, b} : CountryPair{b, a};
}

std::int64_t EdgeList::total_weight() const {
    std::int64_t total = 0;
    for (const auto& [pair, w] : edges) total += w;
    return total;
}

std::set<std::string> EdgeList::countries() const {
    std::set<std::string> out;
    for (const auto& [pair, w] : edges) {
        out.insert(pair.first);
        out.insert(pair.second);
    }
    return out;
}

const CountryYearStats* SliceStats::find(const std::string& country) const {
    auto it = countries.find(country);
    return it == countries.end() ? nullptr : &it->second;
}

std::vector<PublicationRecord> select_slice(std::span<const PublicationRecord> records, int year,
                                            const std::string& field) {
    std::vector<PublicationRecord> out;
    for (const auto& r : records)
        if (r.year == year && (field == kAllFields || r.field == field)) out.push_back(r);
    return out;
}

EdgeList build_annual_edges(std::span<const PublicationRecord> records, int year, const std::string& field) {
    EdgeList out{year, field, {}};
    for (const auto& r : records) {
        for (auto a = r.countries.begin(); a != r.countries.end(); ++a)
            for (auto b = std::next(a); b != r.countries.end(); ++b) ++out.edges[{*a, *b}];
    }
    return out;
}

SliceStats compute_stats(std::span<const PublicationRecord> records, int year, const std::string& field) {
    SliceStats out;
    out.year = year;
    out.field = field;
    for (const auto& r : records) {
        ++out.publications;
        const bool intl = r.international();
        if (intl) ++out.international;
        for (const auto& c : r.countries) {
            auto& s = out.countries[c];
            s.country = c;
            s.year = year;
            s.field = field;
            ++s.total_pubs;
            if (intl) ++s.intl_pubs;
        }
    }
    return out;
}

EdgeList filter_countries(const EdgeList& edges, const SliceStats& stats, std::int64_t threshold) {
    if (threshold < 0) throw DataError("threshold must be non-negative");
    auto qualifies = [&](const std::string& c) {
        const auto* s = stats.find(c);
        if (!s) throw DataError("no statistics for country " + c + " in " + std::to_string(edges.year));
        return s->intl_pubs >= threshold;
    };
    EdgeList out{edges.year, edges.field, {}};
    for (const auto& [pair, w] : edges.edges) {
        // Evaluate both so a missing country is reported even when the other endpoint fails.
        const bool a = qualifies(pair.first);
        const bool b = qualifies(pair.second);
        if (a && b) out.edges.emplace(pair, w);
    }
    return out;
}

MetricSeries participation_series(std::span<const SliceStats> stats_by_year, const std::string& country,
                                  ParticipationBase base) {
    MetricSeries out;
    out.name = "participation:" + country;
    out.unit = base == ParticipationBase::total ? "share_of_all_pubs" : "share_of_intl_pubs";
    std::vector<const SliceStats*> sorted;
    for (const auto& s : stats_by_year) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->year < b->year; });
    for (const auto* s : sorted) {
        const auto denom = base == ParticipationBase::total ? s->publications : s->international;
        if (denom == 0) continue;
        const auto* c = s->find(country);
        const double num = c ? static_cast<double>(c->intl_pubs) : 0.0;
        out.push(s->year, num / static_cast<double>(denom));
    }
    return out;
}

MetricSeries participation_series(std::span<const PublicationRecord> records, const std::string& country,
                                  ParticipationBase base) {
    std::set<int> years;
    for (const auto& r : records) years.insert(r.year);
    if (years.size() < 2) throw DataError("participation series needs records from at least two years");
    std::vector<SliceStats> stats;
    for (int y = *years.begin(); y <= *years.rbegin(); ++y) {
        auto slice = select_slice(records, y, kAllFields);
        stats.push_back(compute_stats(slice, y, kAllFields));
    }
    return participation_series(stats, country, base);
}

std::vector<EdgeList> read_edge_csv(std::istream& in) {
    std::map<std::pair<int, std::string>, EdgeList> slices;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto cells = detail::split_csv_line(line);
        if (!header) {
            if (cells != std::vector<std::string>{"year", "field", "country_a", "country_b", "weight"})
                throw DataError("edge csv: expected header year,field,country_a,country_b,weight");
            header = true;
            continue;
        }
        const auto where = "edge csv line " + std::to_string(line_no);
        if (cells.size() != 5) throw DataError(where + ": expected 5 columns");
        const int year = static_cast<int>(parse_int(cells[0], where + " year"));
        auto a = cells[2], b = cells[3];
        if (!normalize_code(a) || !normalize_code(b)) throw DataError(where + ": invalid country code");
        if (a == b) throw DataError(where + ": self pair " + a);
        const auto w = parse_int(cells[4], where + " weight");
        if (w < 1) throw DataError(where + ": weight must be >= 1");
        auto& slice = slices[{year, cells[1]}];
        slice.year = year;
        slice.field = cells[1];
        slice.edges[make_pair_key(a, b)] += w;
    }
    if (!header) throw DataError("edge csv: empty input");
    std::vector<EdgeList> out;
    for (auto& [key, e] : slices) out.push_back(std::move(e));
    return out;
}

void write_corpus(const fs::path& dir, const ParseReport& parsed, const IngestOptions& options) {
    if (options.threshold < 0) throw DataError("threshold must be non-negative");
    fs::create_directories(dir);

    std::set<int> years;
    std::set<std::string> fields{kAllFields};
    for (const auto& r : parsed.records) {
        years.insert(r.year);
        fields.insert(r.field);
    }

    json slices = json::array();
    for (int y : years) {
        for (const auto& f : fields) {
            auto records = select_slice(parsed.records, y, f);
            if (records.empty()) continue;
            auto stats = compute_stats(records, y, f);
            auto raw = build_annual_edges(records, y, f);
            auto kept = filter_countries(raw, stats, options.threshold);
            const auto before = raw.countries().size();
            const auto after = kept.countries().size();
            write_edges_file(dir / edges_name(y, f), kept, options.config_hash);
            write_stats_file(dir / stats_name(y, f), stats, options.config_hash);
            slices.push_back(manifest_slice(y, f, stats, kept, before - after));
        }
    }

    json manifest{{"format", 1},
                  {"source", "publications"},
                  {"threshold", options.threshold},
                  {"productivity", "total_pubs"},
                  {"years", years},
                  {"fields", fields},
                  {"parse", {{"lines", parsed.lines}, {"records", parsed.records.size()}, {"skipped", parsed.skipped}}},
                  {"slices", slices}};
    if (!options.config_hash.empty()) manifest["config_hash"] = options.config_hash;
    write_manifest(dir, manifest);
}

void write_corpus_from_edges(const fs::path& dir, const std::vector<EdgeList>& edges, const std::string& config_hash) {
    fs::create_directories(dir);
    std::map<std::pair<int, std::string>, EdgeList> slices;
    for (const auto& e : edges) {
        auto& s = slices[{e.year, e.field}];
        s.year = e.year;
        s.field = e.field;
        for (const auto& [pair, w] : e.edges) s.edges[pair] += w;
    }
    // Pool the fields when the input does not carry an "all" slice.
    std::set<int> years;
    std::set<std::string> fields;
    for (const auto& [key, e] : slices) {
        years.insert(key.first);
        fields.insert(key.second);
    }
    if (!fields.contains(kAllFields)) {
        for (int y : years) {
            EdgeList pooled{y, kAllFields, {}};
            for (const auto& [key, e] : slices)
                if (key.first == y)
                    for (const auto& [pair, w] : e.edges) pooled.edges[pair] += w;
            slices[{y, kAllFields}] = std::move(pooled);
        }
        fields.insert(kAllFields);
    }

    json out_slices = json::array();
    for (const auto& [key, e] : slices) {
        SliceStats stats;
        stats.year = e.year;
        stats.field = e.field;
        for (const auto& [pair, w] : e.edges) {
            for (const auto* c : {&pair.first, &pair.second}) {
                auto& s = stats.countries[*c];
                s.country = *c;
                s.year = e.year;
                s.field = e.field;
                s.intl_pubs += w;
                s.total_pubs += w;
            }
        }
        stats.publications = e.total_weight();
        stats.international = stats.publications;
        write_edges_file(dir / edges_name(e.year, e.field), e, config_hash);
        write_stats_file(dir / stats_name(e.year, e.field), stats, config_hash);
        out_slices.push_back(manifest_slice(e.year, e.field, stats, e, 0));
    }
    json manifest{{"format", 1},      {"source", "edges"},  {"threshold", 0},     {"productivity", "strength"},
                  {"years", years},   {"fields", fields},   {"slices", out_slices}};
    if (!config_hash.empty()) manifest["config_hash"] = config_hash;
    write_manifest(dir, manifest);
}

Corpus Corpus::open(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw DataError("no manifest.json in " + dir.string());
    json m = json::parse(in, nullptr, false);
    if (m.is_discarded() || !m.is_object()) throw DataError("manifest.json is not valid JSON");
    Corpus c;
    c.dir_ = dir;
    try {
        c.threshold_ = m.at("threshold").get<std::int64_t>();
        c.source_ = m.value("source", std::string("publications"));
        c.years_ = m.at("years").get<std::vector<int>>();
        c.fields_ = m.at("fields").get<std::vector<std::string>>();
        for (const auto& s : m.at("slices")) {
            SliceFiles f{s.at("edges_file").get<std::string>(), s.at("stats_file").get<std::string>(),
                         s.at("publications").get<std::int64_t>(), s.at("international").get<std::int64_t>()};
            c.slices_[{s.at("year").get<int>(), s.at("field").get<std::string>()}] = std::move(f);
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("manifest.json: ") + e.what());
    }
    return c;
}

bool Corpus::has(int year, const std::string& field) const { return slices_.contains({year, field}); }

const Corpus::SliceFiles& Corpus::slice(int year, const std::string& field) const {
    auto it = slices_.find({year, field});
    if (it == slices_.end()) throw DataError("corpus has no slice for " + std::to_string(year) + "/" + field);
    return it->second;
}

EdgeList Corpus::edges(int year, const std::string& field) const {
    const auto& files = slice(year, field);
    EdgeList out{year, field, {}};
    for (const auto& row : read_csv_rows(dir_ / files.edges, "country_a,country_b,weight")) {
        if (row.size() != 3) throw DataError(files.edges + ": expected 3 columns");
        out.edges[make_pair_key(row[0], row[1])] += parse_int(row[2], files.edges + " weight");
    }
    return out;
}

SliceStats Corpus::stats(int year, const std::string& field) const {
    const auto& files = slice(year, field);
    SliceStats out;
    out.year = year;
    out.field = field;
    out.publications = files.publications;
    out.international = files.international;
    for (const auto& row : read_csv_rows(dir_ / files.stats, "country,intl_pubs,total_pubs")) {
        if (row.size() != 3) throw DataError(files.stats + ": expected 3 columns");
        out.countries[row[0]] = {row[0], year, field, parse_int(row[1], files.stats), parse_int(row[2], files.stats)};
    }
    return out;
}

} // namespace collabnet
