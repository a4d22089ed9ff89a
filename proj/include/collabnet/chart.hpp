#pragma once

#include "collabnet/series.hpp"
#include "collabnet/timeseries.hpp"

#include <span>
#include <string>

namespace collabnet {

struct ChartLayout {
    int width = 800;
    int height = 480;
    std::string title;
    std::string x_label = "year";
    std::string y_label;
    std::string config_hash; // written as a comment when set
};

/// SVG line chart: one polyline per run of present values (class "series"),
/// forecast bands (class "band") drawn before everything else, forecast
/// point paths (class "forecast") and one legend entry per series and
/// forecast. Throws DataError when there is nothing to plot.
std::string emit_chart(std::span<const MetricSeries> series, std::span<const Forecast> forecasts,
                       const ChartLayout& layout);

} // namespace collabnet
