#include "collabnet/series.hpp"

#include "collabnet/error.hpp"
#include "csv_util.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace collabnet {

void MetricSeries::push(int year, std::optional<double> value) {
    if (!points.empty() && year <= points.back().year)
        throw DataError("series '" + name + "': year " + std::to_string(year) +
                        " does not follow " + std::to_string(points.back().year));
    points.push_back({year, value});
}

std::optional<double> MetricSeries::at_year(int year) const {
    for (const auto& p : points)
        if (p.year == year) return p.value;
    return std::nullopt;
}

std::vector<double> MetricSeries::values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (!p.value) throw DataError("series '" + name + "' has a missing value at " + std::to_string(p.year));
        out.push_back(*p.value);
    }
    return out;
}

std::vector<int> MetricSeries::years() const {
    std::vector<int> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.year);
    return out;
}

void MetricSeries::validate() const {
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].year <= points[i - 1].year)
            throw DataError("series '" + name + "': years not strictly increasing");
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_series_csv(std::ostream& out, const std::vector<MetricSeries>& series) {
    out << "series,unit,year,value\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            out << detail::csv_cell(s.name) << ',' << detail::csv_cell(s.unit) << ',' << p.year << ','
                << (p.value ? format_double(*p.value) : std::string("NA")) << '\n';
}

std::vector<MetricSeries> read_series_csv(std::istream& in) {
    std::vector<MetricSeries> out;
    std::map<std::string, std::size_t> index;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto cells = detail::split_csv_line(line);
        if (!header_seen) {
            if (cells.size() != 4 || cells[0] != "series")
                throw DataError("series csv: unexpected header '" + line + "'");
            header_seen = true;
            continue;
        }
        if (cells.size() != 4) throw DataError("series csv line " + std::to_string(line_no) + ": expected 4 columns");
        auto [it, inserted] = index.try_emplace(cells[0], out.size());
        if (inserted) out.push_back({cells[0], cells[1], {}});
        auto& s = out[it->second];
        int year = 0;
        auto yr = std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), year);
        if (yr.ec != std::errc{} || yr.ptr != cells[2].data() + cells[2].size()) throw DataError("series csv line " + std::to_string(line_no) + ": bad year");
        std::optional<double> value;
        if (cells[3] != "NA") {
            double v = 0.0;
            auto vr = std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(), v);
            if (vr.ec != std::errc{} || vr.ptr != cells[3].data() + cells[3].size()) throw DataError("series csv line " + std::to_string(line_no) + ": bad value");
            value = v;
        }
        s.push(year, value);
    }
    if (!header_seen) throw DataError("series csv: empty input");
    return out;
}

MetricSeries trailing_run(const MetricSeries& series) {
    MetricSeries out{series.name, series.unit, {}};
    std::size_t start = series.points.size();
    while (start > 0 && series.points[start - 1].value &&
           (start == series.points.size() || series.points[start - 1].year + 1 == series.points[start].year))
        --start;
    for (auto k = start; k < series.points.size(); ++k) out.points.push_back(series.points[k]);
    return out;
}

} // namespace collabnet
