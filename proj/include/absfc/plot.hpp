#pragma once

#include <string>
#include <vector>

#include "absfc/analytics.hpp"

namespace absfc {
namespace plot {

struct Series {
    std::string label;
    std::vector<double> values;
    std::vector<double> band_lo;  // optional inter-quantile band
    std::vector<double> band_hi;
};

struct ChartSpec {
    std::string title;
    std::string x_label = "period";
    std::string y_label;
    int x_offset = 0;  // first period of the series (burn-in trim)
    int width = 860;
    int height = 420;
};

/// Minimal static line chart writer.
void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<Series>& series);

/// The standard figure set of one ensemble: volumes, rates, rationing,
/// stability decomposition, payment flows, demand and real-sector levels.
void make_run_figures(const analytics::Ensemble& ensemble, const std::string& out_dir,
                      int burn_in, const std::string& tag);

/// Overlays the ensemble means of one variable across labelled runs
/// (e.g. the four policy shocks).
void make_overlay_figure(const std::vector<std::pair<std::string, analytics::Ensemble>>& runs,
                         const std::string& variable, const std::string& out_path,
                         int burn_in);

} // namespace plot
} // namespace absfc
