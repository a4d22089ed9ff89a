#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace collabnet {

/// A named annual series. Missing years are explicit (`value` empty) so a
/// gap in the data never silently becomes zero.
struct MetricSeries {
    struct Point {
        int year = 0;
        std::optional<double> value;

        bool operator==(const Point&) const = default;
    };

    std::string name;
    std::string unit;
    std::vector<Point> points;

    /// Appends a point; years must be strictly increasing.
    void push(int year, std::optional<double> value);

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    std::optional<double> at_year(int year) const;

    /// Values in order; throws DataError if any point is missing.
    std::vector<double> values() const;
    std::vector<int> years() const;

    /// Throws DataError if years are not strictly increasing.
    void validate() const;

    bool operator==(const MetricSeries&) const = default;
};

/// The longest run of present values on consecutive years that ends at the
/// last point; empty when the last point is missing.
MetricSeries trailing_run(const MetricSeries& series);

/// CSV layout: `series,unit,year,value` with `NA` for missing values.
/// Values use the shortest decimal form, so a read returns the exact
/// doubles that were written. Lines starting with '#' are comments.
void write_series_csv(std::ostream& out, const std::vector<MetricSeries>& series);
std::vector<MetricSeries> read_series_csv(std::istream& in);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

} // namespace collabnet
