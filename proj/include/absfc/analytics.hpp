#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace absfc {
namespace analytics {

/// Per-replicate collection of equally long per-period series.
struct TimeSeriesFrame {
    int replicate = 0;
    std::vector<std::string> names;                 // column order for export
    std::map<std::string, std::vector<double>> columns;

    std::vector<double>& col(const std::string& name);
    const std::vector<double>& col(const std::string& name) const;
    bool has(const std::string& name) const;
    std::size_t rows() const;
};

struct Ensemble {
    std::vector<TimeSeriesFrame> frames;
};

struct HpResult {
    std::vector<double> trend;
    std::vector<double> cycle;
};

/// Hodrick-Prescott de-trending via the pentadiagonal normal equations
/// (I + lambda D''^T D'') tau = y. Requires at least 4 observations.
HpResult hp_filter(std::span<const double> series, double lambda);

/// Trailing mean over min(window, history) points.
std::vector<double> moving_average(std::span<const double> series, int window);

/// Trailing mean over the post-burn-in tail only (burn-in treatment of plots).
std::vector<double> drop_burn_in(std::span<const double> series, int burn_in);

double mean(std::span<const double> v);
double stdev(std::span<const double> v);
/// Spearman rank correlation; ties get average ranks.
double rank_correlation(std::span<const double> a, std::span<const double> b);

/// Long format: replicate,period,variable,value for every frame and column.
void export_long_csv(const Ensemble& ensemble, const std::string& path);
/// Wide format: one period per row, one column per variable.
void export_wide_csv(const TimeSeriesFrame& frame, const std::string& path);
/// Cross-replicate mean and quartile band per period and variable.
void export_summary_csv(const Ensemble& ensemble, const std::string& path);

Ensemble read_long_csv(const std::string& path);
TimeSeriesFrame read_wide_csv(const std::string& path);

/// Ensemble mean of one column, per period.
std::vector<double> ensemble_mean(const Ensemble& ensemble, const std::string& column);
/// Mean of a column's post-burn-in values across all frames.
double ensemble_stat(const Ensemble& ensemble, const std::string& column, int burn_in);

} // namespace analytics
} // namespace absfc
