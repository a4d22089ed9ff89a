#include "collabnet/timeseries.hpp"

#include "collabnet/error.hpp"
#include "collabnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace collabnet {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kRssFloor = std::numeric_limits<double>::min();

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd tstat; // beta_j / se_j, NaN when the variance is undefined
    double rss = 0.0;
    Eigen::Index rank = 0;
};

// Least squares with every column scaled to unit max-abs first, so rank
// decisions do not depend on the units of the regressors.
OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    const auto k = design.cols();
    Eigen::VectorXd scale(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double s = design.col(j).cwiseAbs().maxCoeff();
        scale(j) = s > 0.0 ? s : 1.0;
    }
    const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled.rows(), scaled.cols());
    qr.setThreshold(kRankThreshold);
    qr.compute(scaled);

    OlsFit fit;
    fit.rank = qr.rank();
    if (fit.rank < k) return fit;
    const Eigen::VectorXd beta_scaled = qr.solve(y);
    const Eigen::VectorXd resid = y - scaled * beta_scaled;
    fit.rss = resid.squaredNorm();
    fit.beta = beta_scaled.cwiseQuotient(scale);

    fit.tstat = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::quiet_NaN());
    const auto dof = design.rows() - k;
    if (dof > 0) {
        const double sigma2 = fit.rss / static_cast<double>(dof);
        const Eigen::MatrixXd cov = (scaled.transpose() * scaled).inverse() * sigma2;
        for (Eigen::Index j = 0; j < k; ++j) {
            const double se = std::sqrt(cov(j, j));
            if (se > 0.0) fit.tstat(j) = beta_scaled(j) / se;
        }
    }
    return fit;
}

double aic(double rss, std::size_t t_eff, Eigen::Index k) {
    const double n = static_cast<double>(t_eff);
    return n * std::log(std::max(rss, kRssFloor) / n) + 2.0 * static_cast<double>(k);
}

Eigen::VectorXd differenced(Eigen::Ref<const Eigen::VectorXd> v) {
    if (v.size() < 2) throw DataError("cannot difference fewer than 2 values");
    return v.tail(v.size() - 1) - v.head(v.size() - 1);
}

bool has_no_variation(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const double lo = v.minCoeff(), hi = v.maxCoeff();
    return hi - lo <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

} // namespace

MetricSeries first_difference(const MetricSeries& series) {
    if (series.size() < 2) throw DataError("first difference needs at least 2 points");
    MetricSeries out;
    out.name = "d(" + series.name + ")";
    out.unit = series.unit;
    for (std::size_t i = 1; i < series.points.size(); ++i) {
        const auto& prev = series.points[i - 1];
        const auto& cur = series.points[i];
        std::optional<double> v;
        if (prev.value && cur.value && cur.year == prev.year + 1) v = *cur.value - *prev.value;
        out.push(cur.year, v);
    }
    return out;
}

double LagRegression::f_statistic() const {
    if (x_degenerate) return 0.0;
    const double gain = rss_restricted - rss_unrestricted;
    if (!(gain > 0.0)) return 0.0;
    if (rss_unrestricted <= 0.0) return std::numeric_limits<double>::infinity();
    return (gain / df1) / (rss_unrestricted / df2);
}

double LagRegression::p_value() const { return stats::f_sf(f_statistic(), df1, df2); }

LagRegression fit_restricted_unrestricted(Eigen::Ref<const Eigen::VectorXd> y, Eigen::Ref<const Eigen::VectorXd> x,
                                          int lag) {
    if (lag < 1) throw DataError("lag must be at least 1");
    if (y.size() != x.size()) throw DataError("x and y are not aligned");
    const auto t = static_cast<std::size_t>(y.size());
    const auto p = static_cast<std::size_t>(lag);
    if (t < p || t - p < 2 * p + 2)
        throw DataError("lag " + std::to_string(lag) + ": insufficient sample (" + std::to_string(t) + " points)");

    LagRegression out;
    out.lag = lag;
    out.t_eff = t - p;
    out.df1 = lag;
    out.df2 = static_cast<int>(out.t_eff) - 2 * lag - 1;

    const auto rows = static_cast<Eigen::Index>(out.t_eff);
    const Eigen::VectorXd target = y.tail(rows);
    Eigen::MatrixXd unrestricted(rows, 1 + 2 * lag);
    unrestricted.col(0).setOnes();
    for (int j = 1; j <= lag; ++j) {
        unrestricted.col(j) = y.segment(lag - j, rows);
        unrestricted.col(lag + j) = x.segment(lag - j, rows);
    }
    const Eigen::MatrixXd restricted = unrestricted.leftCols(1 + lag);

    const auto fit_r = ols(restricted, target);
    if (fit_r.rank < restricted.cols())
        throw NumericError("lag " + std::to_string(lag) + ": restricted design matrix is rank deficient");
    out.rss_restricted = fit_r.rss;
    out.aic_restricted = aic(fit_r.rss, out.t_eff, restricted.cols());

    out.x_degenerate = has_no_variation(x.head(static_cast<Eigen::Index>(t - 1)));
    if (out.x_degenerate) {
        out.rss_unrestricted = fit_r.rss;
        out.aic_unrestricted = out.aic_restricted;
        out.coefficients = Eigen::VectorXd::Zero(1 + 2 * lag);
        out.coefficients.head(1 + lag) = fit_r.beta;
        out.gamma_pvalues.assign(p, 1.0);
        return out;
    }

    const auto fit_u = ols(unrestricted, target);
    if (fit_u.rank < unrestricted.cols())
        throw NumericError("lag " + std::to_string(lag) + ": unrestricted design matrix is rank deficient");
    out.rss_unrestricted = std::min(fit_u.rss, fit_r.rss);
    out.aic_unrestricted = aic(fit_u.rss, out.t_eff, unrestricted.cols());
    out.coefficients = fit_u.beta;
    for (int j = 1; j <= lag; ++j) {
        const double tj = fit_u.tstat(lag + j);
        out.gamma_pvalues.push_back(std::isnan(tj) ? 0.0 : stats::t_sf_two_sided(tj, out.df2));
    }
    return out;
}

GrangerTest granger_test(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<const Eigen::VectorXd> y,
                         const GrangerOptions& options) {
    if (x.size() != y.size()) throw DataError("granger: x and y have different lengths");
    if (options.max_lag < 1) throw DataError("granger: max lag must be at least 1");
    const Eigen::VectorXd xs = options.difference ? differenced(x) : Eigen::VectorXd(x);
    const Eigen::VectorXd ys = options.difference ? differenced(y) : Eigen::VectorXd(y);
    const auto t = static_cast<std::size_t>(xs.size());

    GrangerTest out;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int lag = 1; lag <= options.max_lag; ++lag) {
        LagTest lt;
        lt.lag = lag;
        const auto p = static_cast<std::size_t>(lag);
        if (t < p + 8 || t - p < 2 * p + 2) {
            lt.note = "insufficient sample";
            out.lags.push_back(std::move(lt));
            continue;
        }
        try {
            const auto fit = fit_restricted_unrestricted(ys, xs, lag);
            lt.usable = true;
            lt.f_statistic = fit.f_statistic();
            lt.p_raw = fit.p_value();
            lt.aic = fit.aic_unrestricted;
            lt.df1 = fit.df1;
            lt.df2 = fit.df2;
            lt.gamma_pvalues = fit.gamma_pvalues;
            if (lt.aic < best_aic) {
                best_aic = lt.aic;
                out.optimal_lag = lag;
            }
        } catch (const NumericError& e) {
            lt.note = e.what();
        }
        out.lags.push_back(std::move(lt));
    }
    if (out.optimal_lag == 0) throw DataError("granger: no usable lag");
    return out;
}

GrangerTest granger_test(const MetricSeries& x, const MetricSeries& y, const GrangerOptions& options) {
    std::vector<double> xv, yv;
    int prev_year = 0;
    for (const auto& p : y.points) {
        if (!p.value) continue;
        const auto xval = x.at_year(p.year);
        if (!xval) continue;
        if (!xv.empty() && p.year != prev_year + 1)
            throw DataError("granger: common years of '" + x.name + "' and '" + y.name + "' are not consecutive");
        prev_year = p.year;
        xv.push_back(*xval);
        yv.push_back(*p.value);
    }
    if (xv.size() < 2) throw DataError("granger: '" + x.name + "' and '" + y.name + "' share fewer than 2 years");
    return granger_test(Eigen::Map<const Eigen::VectorXd>(xv.data(), static_cast<Eigen::Index>(xv.size())),
                        Eigen::Map<const Eigen::VectorXd>(yv.data(), static_cast<Eigen::Index>(yv.size())), options);
}

std::vector<double> bh_fdr(std::span<const double> pvalues) {
    const auto m = pvalues.size();
    if (m == 0) throw DataError("bh_fdr: no p-values");
    for (double p : pvalues)
        if (!(p >= 0.0 && p <= 1.0)) throw DataError("bh_fdr: p-value outside [0, 1]");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t rank = m; rank-- > 0;) {
        const auto i = order[rank];
        running = std::min(running, pvalues[i] * static_cast<double>(m) / static_cast<double>(rank + 1));
        // p * m / m can round below p.
        adjusted[i] = std::max(running, pvalues[i]);
    }
    return adjusted;
}

double trend_stationarity_tstat(Eigen::Ref<const Eigen::VectorXd> z) {
    const auto n = z.size();
    if (n < 6) return std::numeric_limits<double>::quiet_NaN();
    const auto rows = n - 1;
    Eigen::MatrixXd design(rows, 3);
    design.col(0).setOnes();
    design.col(1) = Eigen::VectorXd::LinSpaced(rows, 1.0, static_cast<double>(rows));
    design.col(2) = z.head(rows);
    const Eigen::VectorXd dz = z.tail(rows) - z.head(rows);
    const auto fit = ols(design, dz);
    if (fit.rank < 3) return std::numeric_limits<double>::quiet_NaN();
    return fit.tstat(2);
}

void apply_bh_fdr(std::vector<GrangerResult>& grid, double alpha) {
    std::vector<double> raw;
    for (const auto& cell : grid)
        if (cell.test)
            for (const auto& lt : cell.test->lags)
                if (lt.usable) raw.push_back(lt.p_raw);
    if (raw.empty()) return;
    const auto adjusted = bh_fdr(raw);
    std::size_t k = 0;
    for (auto& cell : grid) {
        cell.min_p_adjusted.reset();
        cell.flagged = false;
        if (!cell.test) continue;
        for (auto& lt : cell.test->lags) {
            if (!lt.usable) continue;
            lt.p_adjusted = adjusted[k++];
            if (!cell.min_p_adjusted || *lt.p_adjusted < *cell.min_p_adjusted) cell.min_p_adjusted = lt.p_adjusted;
        }
        cell.flagged = cell.min_p_adjusted && *cell.min_p_adjusted <= alpha;
    }
}

std::vector<MinAdjustedRow> report_min_adjusted(const std::vector<GrangerResult>& grid, double alpha) {
    if (grid.empty()) throw DataError("report_min_adjusted: empty grid");
    std::vector<MinAdjustedRow> out;
    out.reserve(grid.size());
    for (const auto& cell : grid) {
        MinAdjustedRow row{cell.field, cell.metric, std::nullopt, false};
        if (cell.test)
            for (const auto& lt : cell.test->lags)
                if (lt.p_adjusted && (!row.min_p_adjusted || *lt.p_adjusted < *row.min_p_adjusted))
                    row.min_p_adjusted = lt.p_adjusted;
        row.flagged = row.min_p_adjusted && *row.min_p_adjusted <= alpha;
        out.push_back(std::move(row));
    }
    return out;
}

Forecast forecast(Eigen::Ref<const Eigen::VectorXd> values, int last_year, int horizon, double level) {
    const auto t = values.size();
    if (t < 10) throw DataError("forecast needs at least 10 values, got " + std::to_string(t));
    if (horizon < 1) throw DataError("forecast horizon must be positive");
    if (!(level > 0.0 && level < 1.0)) throw DataError("forecast level must lie in (0, 1)");

    int best_order = -1;
    double best_aic = std::numeric_limits<double>::infinity();
    OlsFit best;
    std::size_t best_t_eff = 0;
    for (int p = 0; p <= 3; ++p) {
        const auto rows = t - p;
        Eigen::MatrixXd design(rows, 1 + p);
        design.col(0).setOnes();
        for (int j = 1; j <= p; ++j) design.col(j) = values.segment(p - j, rows);
        const auto fit = ols(design, values.tail(rows));
        if (fit.rank < design.cols()) continue;
        const double a = aic(fit.rss, static_cast<std::size_t>(rows), design.cols());
        if (a < best_aic) {
            best_aic = a;
            best_order = p;
            best = fit;
            best_t_eff = static_cast<std::size_t>(rows);
        }
    }
    if (best_order < 0) throw NumericError("forecast: no autoregressive order could be fitted");

    Forecast out;
    out.order = best_order;
    out.model = "ar" + std::to_string(best_order) + "+drift";
    out.level = level;
    const auto k = static_cast<std::size_t>(best_order + 1);
    const double dof = static_cast<double>(best_t_eff > k ? best_t_eff - k : best_t_eff);
    out.sigma = std::sqrt(best.rss / dof);

    const Eigen::VectorXd phi = best.beta.tail(best_order);
    std::vector<double> history(values.data(), values.data() + t);
    std::vector<double> psi{1.0};
    const double z = stats::normal_quantile(0.5 + level / 2.0);
    out.point.resize(horizon);
    out.lower.resize(horizon);
    out.upper.resize(horizon);
    double variance_sum = 0.0;
    for (int h = 0; h < horizon; ++h) {
        double next = best.beta(0);
        for (int i = 1; i <= best_order; ++i) next += phi(i - 1) * history[history.size() - static_cast<std::size_t>(i)];
        history.push_back(next);

        if (h > 0) {
            double psi_h = 0.0;
            for (int i = 1; i <= std::min(h, best_order); ++i) psi_h += phi(i - 1) * psi[static_cast<std::size_t>(h - i)];
            psi.push_back(psi_h);
        }
        variance_sum += psi.back() * psi.back();
        const double half = z * out.sigma * std::sqrt(variance_sum);
        out.years.push_back(last_year + h + 1);
        out.point(h) = next;
        out.lower(h) = next - half;
        out.upper(h) = next + half;
    }
    return out;
}

Forecast forecast(const MetricSeries& series, int horizon, double level) {
    const auto values = series.values();
    const auto years = series.years();
    for (std::size_t i = 1; i < years.size(); ++i)
        if (years[i] != years[i - 1] + 1) throw DataError("forecast: series '" + series.name + "' skips years");
    if (years.empty()) throw DataError("forecast: empty series");
    auto out = forecast(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())),
                        years.back(), horizon, level);
    out.series = series.name;
    return out;
}

} // namespace collabnet
