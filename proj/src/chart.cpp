#include "collabnet/chart.hpp"

#include "collabnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace collabnet {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kLeft = 70, kRight = 170, kTop = 40, kBottom = 50;

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Step from {1, 2, 5} x 10^k giving at most `max_ticks` intervals.
double nice_step(double span, int max_ticks) {
    const double raw = span / max_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool empty() const { return lo > hi; }
};

} // namespace

std::string emit_chart(std::span<const MetricSeries> series, std::span<const Forecast> forecasts,
                       const ChartLayout& layout) {
    if (layout.width <= kLeft + kRight || layout.height <= kTop + kBottom)
        throw DataError("chart is too small");
    Range xr, yr;
    for (const auto& s : series) {
        s.validate();
        for (const auto& p : s.points)
            if (p.value) {
                xr.add(p.year);
                yr.add(*p.value);
            }
    }
    for (const auto& fc : forecasts)
        for (int h = 0; h < fc.horizon(); ++h) {
            xr.add(fc.years[static_cast<std::size_t>(h)]);
            yr.add(fc.point(h));
            yr.add(fc.lower(h));
            yr.add(fc.upper(h));
        }
    if (xr.empty()) throw DataError("nothing to chart: every series is empty");
    if (!std::isfinite(yr.lo) || !std::isfinite(yr.hi)) throw DataError("chart values must be finite");

    if (xr.lo == xr.hi) {
        xr.lo -= 0.5;
        xr.hi += 0.5;
    }
    if (yr.lo == yr.hi) {
        const double pad = yr.lo == 0.0 ? 1.0 : std::abs(yr.lo) * 0.1;
        yr.lo -= pad;
        yr.hi += pad;
    } else {
        const double pad = (yr.hi - yr.lo) * 0.05;
        yr.lo -= pad;
        yr.hi += pad;
    }

    const double plot_w = layout.width - kLeft - kRight;
    const double plot_h = layout.height - kTop - kBottom;
    auto px = [&](double year) { return kLeft + (year - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double v) { return kTop + (yr.hi - v) / (yr.hi - yr.lo) * plot_h; };
    auto point = [&](double year, double v) { return fixed(px(year)) + "," + fixed(py(v)); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!layout.config_hash.empty()) svg << "<!-- config_hash=" << escape(layout.config_hash) << " -->\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << layout.width << "\" height=\"" << layout.height
        << "\" viewBox=\"0 0 " << layout.width << ' ' << layout.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << layout.width << "\" height=\"" << layout.height << "\" fill=\"white\"/>\n";
    if (!layout.title.empty())
        svg << "<text class=\"title\" x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
            << escape(layout.title) << "</text>\n";

    std::size_t color = 0;
    auto next_color = [&] { return kPalette[color++ % std::size(kPalette)]; };
    std::vector<std::pair<std::string, std::string>> legend;

    // Bands first so every line sits on top of them.
    std::vector<std::string> forecast_colors;
    for (const auto& fc : forecasts) {
        forecast_colors.push_back(next_color());
        if (fc.horizon() == 0) continue;
        svg << "<polygon class=\"band\" fill=\"" << forecast_colors.back() << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (int h = 0; h < fc.horizon(); ++h)
            svg << (h ? " " : "") << point(fc.years[static_cast<std::size_t>(h)], fc.upper(h));
        for (int h = fc.horizon() - 1; h >= 0; --h) svg << ' ' << point(fc.years[static_cast<std::size_t>(h)], fc.lower(h));
        svg << "\"/>\n";
    }

    svg << "<g class=\"axes\" stroke=\"black\">\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\"" << fixed(kLeft + plot_w) << "\" y2=\""
        << fixed(kTop + plot_h) << "\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n";
    svg << "</g>\n<g class=\"ticks\">\n";
    const double xstep = std::max(1.0, nice_step(xr.hi - xr.lo, 10));
    for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + 1e-9; x += xstep)
        svg << "<text x=\"" << fixed(px(x)) << "\" y=\"" << fixed(kTop + plot_h + 16) << "\" text-anchor=\"middle\">"
            << tick_label(x) << "</text>\n";
    const double ystep = nice_step(yr.hi - yr.lo, 6);
    for (double y = std::ceil(yr.lo / ystep) * ystep; y <= yr.hi + ystep * 1e-9; y += ystep) {
        const double shown = std::abs(y) < ystep * 1e-9 ? 0.0 : y;
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(shown) + 4) << "\" text-anchor=\"end\">" << tick_label(shown)
            << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text class=\"x-label\" x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << layout.height - 12
        << "\" text-anchor=\"middle\">" << escape(layout.x_label) << "</text>\n";
    svg << "<text class=\"y-label\" x=\"16\" y=\"" << fixed(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fixed(kTop + plot_h / 2) << ")\">" << escape(layout.y_label) << "</text>\n";

    for (const auto& s : series) {
        const auto* c = next_color();
        legend.emplace_back(s.name, c);
        // A missing value breaks the line; isolated points become dots.
        std::vector<std::pair<int, double>> run;
        auto flush = [&] {
            if (run.size() == 1) {
                svg << "<circle class=\"point\" data-series=\"" << escape(s.name) << "\" cx=\"" << fixed(px(run[0].first))
                    << "\" cy=\"" << fixed(py(run[0].second)) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
            } else if (run.size() > 1) {
                svg << "<polyline class=\"series\" data-series=\"" << escape(s.name) << "\" fill=\"none\" stroke=\"" << c
                    << "\" stroke-width=\"2\" points=\"";
                for (std::size_t k = 0; k < run.size(); ++k) svg << (k ? " " : "") << point(run[k].first, run[k].second);
                svg << "\"/>\n";
            }
            run.clear();
        };
        for (const auto& p : s.points) {
            if (p.value)
                run.emplace_back(p.year, *p.value);
            else
                flush();
        }
        flush();
    }
    for (std::size_t f = 0; f < forecasts.size(); ++f) {
        const auto& fc = forecasts[f];
        const auto* c = forecast_colors[f].c_str();
        legend.emplace_back(fc.series.empty() ? "forecast" : fc.series + " (" + fc.model + ")", c);
        svg << "<polyline class=\"forecast\" data-series=\"" << escape(fc.series) << "\" fill=\"none\" stroke=\"" << c
            << "\" stroke-width=\"2\" stroke-dasharray=\"6 3\" points=\"";
        for (int h = 0; h < fc.horizon(); ++h)
            svg << (h ? " " : "") << point(fc.years[static_cast<std::size_t>(h)], fc.point(h));
        svg << "\"/>\n";
    }

    svg << "<g class=\"legend\">\n";
    const double lx = kLeft + plot_w + 16;
    for (std::size_t k = 0; k < legend.size(); ++k) {
        const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
        svg << "<g class=\"legend-entry\"><rect x=\"" << fixed(lx) << "\" y=\"" << fixed(ly - 9) << "\" width=\"12\" height=\"12\" fill=\""
            << legend[k].second << "\"/><text x=\"" << fixed(lx + 18) << "\" y=\"" << fixed(ly + 2) << "\">"
            << escape(legend[k].first) << "</text></g>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace collabnet
