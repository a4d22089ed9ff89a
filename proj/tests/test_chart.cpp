#include "collabnet/chart.hpp"
#include "collabnet/error.hpp"

#include <doctest.h>

#include <regex>
#include <sstream>

using namespace collabnet;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// points="x,y x,y ..." of every element with the given class, in document order.
std::vector<std::vector<std::pair<double, double>>> points_of(const std::string& svg, const std::string& cls) {
    std::vector<std::vector<std::pair<double, double>>> out;
    const std::regex element("<(polyline|polygon) class=\"" + cls + "\"[^>]*points=\"([^\"]*)\"");
    for (std::sregex_iterator it(svg.begin(), svg.end(), element), end; it != end; ++it) {
        std::vector<std::pair<double, double>> pts;
        std::istringstream in((*it)[2].str());
        std::string pair;
        while (in >> pair) {
            const auto comma = pair.find(',');
            pts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
        }
        out.push_back(pts);
    }
    return out;
}

MetricSeries ramp(const std::string& name, int first, int len, double slope) {
    MetricSeries s{name, "", {}};
    for (int k = 0; k < len; ++k) s.push(first + k, slope * k);
    return s;
}

Forecast simple_forecast() {
    Forecast fc;
    fc.series = "bc:US";
    fc.model = "ar1+drift";
    fc.years = {2010, 2011, 2012};
    fc.point = Eigen::Vector3d(1.0, 1.2, 1.3);
    fc.lower = Eigen::Vector3d(0.8, 0.7, 0.6);
    fc.upper = Eigen::Vector3d(1.2, 1.7, 2.0);
    return fc;
}

} // namespace

TEST_SUITE("chart") {

TEST_CASE("document structure") {
    std::vector<MetricSeries> series{ramp("bc:US", 2000, 10, 0.1), ramp("bc:CN", 2000, 10, 0.05)};
    std::vector<Forecast> fcs{simple_forecast()};
    ChartLayout layout;
    layout.title = "US & CN";
    layout.config_hash = "00ff00ff00ff00ff";
    auto svg = emit_chart(series, fcs, layout);

    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<!-- config_hash=00ff00ff00ff00ff -->") != std::string::npos);
    CHECK(svg.find("US &amp; CN") != std::string::npos);
    CHECK(count(svg, "<g") == count(svg, "</g>"));
    CHECK(count(svg, "class=\"series\"") == 2);
    CHECK(count(svg, "class=\"forecast\"") == 1);
    CHECK(count(svg, "class=\"band\"") == 1);
    CHECK(count(svg, "class=\"legend-entry\"") == 3);
    // Bands are drawn before axes and lines.
    CHECK(svg.find("class=\"band\"") < svg.find("class=\"axes\""));
    CHECK(svg.find("class=\"band\"") < svg.find("class=\"series\""));
    CHECK(svg.find("stroke-dasharray") != std::string::npos);

    auto lines = points_of(svg, "series");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].size() == 10);
    // Larger values sit higher (smaller y).
    CHECK(lines[0].back().second < lines[0].front().second);
    for (std::size_t k = 1; k < lines[0].size(); ++k) CHECK(lines[0][k].first > lines[0][k - 1].first);

    auto band = points_of(svg, "band");
    REQUIRE(band.size() == 1);
    CHECK(band[0].size() == 6);
}

TEST_CASE("everything stays inside the canvas") {
    std::vector<MetricSeries> series{ramp("a", 1990, 30, -3.0)};
    std::vector<Forecast> fcs{simple_forecast()};
    ChartLayout layout;
    layout.width = 640;
    layout.height = 360;
    auto svg = emit_chart(series, fcs, layout);
    for (const auto& cls : {"series", "band", "forecast"})
        for (const auto& line : points_of(svg, cls))
            for (auto [x, y] : line) {
                CHECK(x >= 0.0);
                CHECK(x <= 640.0);
                CHECK(y >= 0.0);
                CHECK(y <= 360.0);
            }
}

TEST_CASE("missing values split the line") {
    MetricSeries s{"m", "", {}};
    for (int k = 0; k < 8; ++k) s.push(2000 + k, k == 3 || k == 5 ? std::nullopt : std::optional<double>(k));
    std::vector<MetricSeries> series{s};
    auto svg = emit_chart(series, {}, {});
    auto lines = points_of(svg, "series");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].size() == 3);
    CHECK(lines[1].size() == 2);
    CHECK(count(svg, "class=\"point\"") == 1);
}

TEST_CASE("constant series is a horizontal line") {
    for (double level : {0.0, 4.2, -7.0}) {
        MetricSeries s{"flat", "", {}};
        for (int k = 0; k < 5; ++k) s.push(2000 + k, level);
        std::vector<MetricSeries> series{s};
        auto lines = points_of(emit_chart(series, {}, {}), "series");
        REQUIRE(lines.size() == 1);
        for (auto [x, y] : lines[0]) CHECK(y == lines[0].front().second);
    }
}

TEST_CASE("nothing to plot") {
    std::vector<MetricSeries> none;
    CHECK_THROWS_AS(emit_chart(none, {}, {}), DataError);
    std::vector<MetricSeries> missing{{"m", "", {{2000, std::nullopt}}}};
    CHECK_THROWS_AS(emit_chart(missing, {}, {}), DataError);
    ChartLayout tiny;
    tiny.width = 100;
    std::vector<MetricSeries> one{ramp("a", 2000, 3, 1.0)};
    CHECK_THROWS_AS(emit_chart(one, {}, tiny), DataError);
}

TEST_CASE("output is deterministic") {
    std::vector<MetricSeries> series{ramp("a", 2000, 12, 0.3)};
    std::vector<Forecast> fcs{simple_forecast()};
    CHECK(emit_chart(series, fcs, {}) == emit_chart(series, fcs, {}));
}

} // TEST_SUITE
