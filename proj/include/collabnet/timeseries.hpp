#pragma once

#include "collabnet/series.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace collabnet {

/// x_t - x_{t-1}. A difference is missing when either side is missing or
/// the two years are not adjacent. Requires at least 2 points.
MetricSeries first_difference(const MetricSeries& series);

/// OLS of y_t on an intercept and `lag` own lags (restricted), and on those
/// plus `lag` lags of x (unrestricted).
struct LagRegression {
    int lag = 0;
    std::size_t t_eff = 0; // observations used: T - lag
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
    double aic_restricted = 0.0;
    double aic_unrestricted = 0.0;
    int df1 = 0; // lag
    int df2 = 0; // t_eff - 2 lag - 1
    bool x_degenerate = false; // x lags have no variation; unrestricted fit = restricted
    Eigen::VectorXd coefficients; // unrestricted: [alpha, beta_1..beta_p, gamma_1..gamma_p]
    std::vector<double> gamma_pvalues; // two-sided t-test per gamma_j

    double f_statistic() const;
    double p_value() const;
};

/// `y` and `x` must be aligned and of equal length T with
/// T - lag >= 2 lag + 2. Throws DataError on short samples and NumericError
/// naming the lag when a design matrix is rank deficient.
LagRegression fit_restricted_unrestricted(Eigen::Ref<const Eigen::VectorXd> y, Eigen::Ref<const Eigen::VectorXd> x,
                                          int lag);

struct GrangerOptions {
    int max_lag = 6;
    bool difference = true; // first-difference both series before testing
};

struct LagTest {
    int lag = 0;
    bool usable = false;
    std::string note; // reason a lag was skipped
    double f_statistic = 0.0;
    double p_raw = 1.0;
    double aic = 0.0;
    int df1 = 0;
    int df2 = 0;
    std::vector<double> gamma_pvalues;
    std::optional<double> p_adjusted;
};

struct GrangerTest {
    std::vector<LagTest> lags; // lags 1..max_lag
    int optimal_lag = 0;       // argmin AIC over usable lags

    const LagTest& at_lag(int lag) const { return lags.at(static_cast<std::size_t>(lag - 1)); }
};

/// Does x help predict y? F-test per lag, lags lacking the sample
/// (T >= lag + 8 and T - lag >= 2 lag + 2 after differencing) or with a
/// singular restricted design are skipped. Throws DataError when no lag is
/// usable.
GrangerTest granger_test(Eigen::Ref<const Eigen::VectorXd> x, Eigen::Ref<const Eigen::VectorXd> y,
                         const GrangerOptions& options = {});

/// Aligns the two series on their common years (which must be consecutive
/// and complete) before testing.
GrangerTest granger_test(const MetricSeries& x, const MetricSeries& y, const GrangerOptions& options = {});

/// Benjamini-Hochberg step-up adjustment in input order. Throws DataError
/// on p-values outside [0, 1] or an empty input.
std::vector<double> bh_fdr(std::span<const double> pvalues);

/// Dickey-Fuller style t statistic of rho in dz_t = a + b t + rho z_{t-1} + e.
/// Values above about -3.6 suggest z is still non-stationary.
double trend_stationarity_tstat(Eigen::Ref<const Eigen::VectorXd> z);

inline constexpr double kTrendStationarityCritical = -3.6;

/// One (field, metric) cell of a Granger panel.
struct GrangerResult {
    std::string field;
    std::string metric;
    std::optional<GrangerTest> test; // empty when the cell could not be tested
    std::string note;
    std::optional<double> min_p_adjusted;
    bool flagged = false;
    std::optional<double> y_trend_tstat; // on the differenced response
};

/// BH over every usable lag of every cell jointly; fills p_adjusted,
/// min_p_adjusted and the flag (min adjusted p <= alpha).
void apply_bh_fdr(std::vector<GrangerResult>& grid, double alpha = 0.05);

struct MinAdjustedRow {
    std::string field;
    std::string metric;
    std::optional<double> min_p_adjusted; // missing when no lag was testable
    bool flagged = false;
};

/// Per-cell minimum adjusted p-value. Throws DataError on an empty grid.
std::vector<MinAdjustedRow> report_min_adjusted(const std::vector<GrangerResult>& grid, double alpha = 0.05);

struct Forecast {
    std::string series;
    std::string model; // e.g. "ar2+drift"
    int order = 0;
    double level = 0.95;
    double sigma = 0.0; // innovation standard deviation
    std::vector<int> years;
    Eigen::VectorXd point;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int horizon() const noexcept { return static_cast<int>(years.size()); }
};

/// AR(p) with intercept, p in 0..3 chosen by AIC (orders with a singular
/// design are skipped), iterated to the horizon with Gaussian bands from
/// the propagated innovation variance. Requires at least 10 values.
Forecast forecast(Eigen::Ref<const Eigen::VectorXd> values, int last_year, int horizon, double level = 0.95);

/// Series must be complete and on consecutive years.
Forecast forecast(const MetricSeries& series, int horizon, double level = 0.95);

} // namespace collabnet
