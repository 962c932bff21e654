#include "absfc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace absfc {
namespace plot {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string nice_number(double v) {
    if (v == 0.0) return "0";
    const double a = std::abs(v);
    if (a >= 1000.0 || a < 0.01) return fmt::format("{:.2e}", v);
    return fmt::format("{:.4g}", v);
}

} // namespace

void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<Series>& series) {
    const int margin_l = 70, margin_r = 20, margin_t = 40, margin_b = 50;
    const double plot_w = spec.width - margin_l - margin_r;
    const double plot_h = spec.height - margin_t - margin_b;

    std::size_t n = 0;
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            if (!std::isfinite(v)) continue;
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
        for (double v : s.band_lo) if (std::isfinite(v)) y_min = std::min(y_min, v);
        for (double v : s.band_hi) if (std::isfinite(v)) y_max = std::max(y_max, v);
    }
    if (!std::isfinite(y_min) || n == 0) { y_min = 0.0; y_max = 1.0; }
    if (y_max == y_min) { y_max += 0.5; y_min -= 0.5; }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    const auto sx = [&](std::size_t i) {
        return margin_l + plot_w * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.5);
    };
    const auto sy = [&](double v) {
        return margin_t + plot_h * (1.0 - (v - y_min) / (y_max - y_min));
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("plot: cannot open " + path);
    out << fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        spec.width, spec.height);
    out << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                       spec.width, spec.height);
    out << fmt::format(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
        spec.width / 2, spec.title);

    for (int k = 0; k <= 4; ++k) {
        const double v = y_min + (y_max - y_min) * k / 4.0;
        const double y = sy(v);
        out << fmt::format(
            "<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#dddddd\"/>\n",
            margin_l, y, spec.width - margin_r, y);
        out << fmt::format(
            "<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n",
            margin_l - 6, y + 4, nice_number(v));
    }
    for (int k = 0; k <= 4; ++k) {
        const std::size_t i = n > 0 ? (n - 1) * k / 4 : 0;
        const double x = sx(i);
        out << fmt::format(
            "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            x, spec.height - margin_b + 18, i + 1 + spec.x_offset);
    }
    out << fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        margin_l + plot_w / 2, spec.height - 12, spec.x_label);
    out << fmt::format(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}"
        "</text>\n",
        margin_t + plot_h / 2, margin_t + plot_h / 2, spec.y_label);
    out << fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
        "stroke=\"#333333\"/>\n",
        margin_l, margin_t, plot_w, plot_h);

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % 8];
        if (!s.band_lo.empty() && s.band_lo.size() == s.band_hi.size()) {
            std::string pts;
            for (std::size_t i = 0; i < s.band_lo.size(); ++i)
                pts += fmt::format("{:.1f},{:.1f} ", sx(i), sy(s.band_lo[i]));
            for (std::size_t i = s.band_hi.size(); i-- > 0;)
                pts += fmt::format("{:.1f},{:.1f} ", sx(i), sy(s.band_hi[i]));
            out << fmt::format(
                "<polygon points=\"{}\" fill=\"{}\" opacity=\"0.15\" stroke=\"none\"/>\n",
                pts, color);
        }
        std::string pts;
        for (std::size_t i = 0; i < s.values.size(); ++i)
            pts += fmt::format("{:.1f},{:.1f} ", sx(i), sy(s.values[i]));
        out << fmt::format(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.4\"/>\n",
            pts, color);
        const int lx = margin_l + 10 + static_cast<int>(si) * 150;
        out << fmt::format(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"3\"/>\n",
            lx, margin_t + 8, lx + 18, margin_t + 8, color);
        out << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", lx + 24, margin_t + 12,
                           s.label);
    }
    out << "</svg>\n";
}

namespace {

Series mean_series(const analytics::Ensemble& ens, const std::string& column,
                   const std::string& label, int burn_in, bool with_band) {
    Series s;
    s.label = label;
    const auto m = analytics::ensemble_mean(ens, column);
    s.values = analytics::drop_burn_in(m, burn_in);
    if (with_band && ens.frames.size() > 3) {
        const std::size_t rows = ens.frames.front().rows();
        std::vector<double> lo(rows), hi(rows);
        std::vector<double> tmp(ens.frames.size());
        for (std::size_t t = 0; t < rows; ++t) {
            for (std::size_t r = 0; r < ens.frames.size(); ++r)
                tmp[r] = ens.frames[r].columns.at(column)[t];
            std::sort(tmp.begin(), tmp.end());
            lo[t] = tmp[static_cast<std::size_t>(0.25 * (tmp.size() - 1))];
            hi[t] = tmp[static_cast<std::size_t>(0.75 * (tmp.size() - 1))];
        }
        s.band_lo = analytics::drop_burn_in(lo, burn_in);
        s.band_hi = analytics::drop_burn_in(hi, burn_in);
    }
    return s;
}

} // namespace

void make_run_figures(const analytics::Ensemble& ens, const std::string& out_dir,
                      int burn_in, const std::string& tag) {
    if (ens.frames.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto path = [&](const char* name) {
        return fmt::format("{}/{}_{}.svg", out_dir, name, tag);
    };
    ChartSpec spec;
    spec.x_offset = burn_in;

    spec.title = "Interbank volumes in levels";
    spec.y_label = "settled funds";
    write_line_chart(path("volumes"), spec,
                     {mean_series(ens, "settled_on", "overnight", burn_in, true),
                      mean_series(ens, "settled_term", "term", burn_in, true)});

    spec.title = "Standing facilities";
    spec.y_label = "stocks";
    write_line_chart(path("facilities"), spec,
                     {mean_series(ens, "facility_loans", "lending facility", burn_in, true),
                      mean_series(ens, "facility_deps", "deposit facility", burn_in, true)});

    spec.title = "Interbank rates";
    spec.y_label = "rate";
    write_line_chart(path("rates"), spec,
                     {mean_series(ens, "rate_on", "overnight", burn_in, false),
                      mean_series(ens, "rate_term", "term", burn_in, false),
                      mean_series(ens, "icb_d", "floor", burn_in, false),
                      mean_series(ens, "icb_l", "ceiling", burn_in, false)});

    spec.title = "Margin of stability and NSFR components";
    spec.y_label = "level";
    write_line_chart(path("stability"), spec,
                     {mean_series(ens, "ms_mean", "MS", burn_in, false),
                      mean_series(ens, "asf_mean", "ASF", burn_in, false),
                      mean_series(ens, "rsf_mean", "RSF", burn_in, false),
                      mean_series(ens, "pref_b_mean", "Pi_b", burn_in, false),
                      mean_series(ens, "pref_l_mean", "Pi_l", burn_in, false)});

    spec.title = "Margin of stability by interbank status";
    write_line_chart(path("stability_status"), spec,
                     {mean_series(ens, "ms_deficit", "deficit banks", burn_in, false),
                      mean_series(ens, "ms_surplus", "surplus banks", burn_in, false)});

    spec.title = "Interbank rationing";
    spec.y_label = "Gamma";
    write_line_chart(path("rationing"), spec,
                     {mean_series(ens, "gamma_on", "overnight", burn_in, true),
                      mean_series(ens, "gamma_term", "term", burn_in, true)});

    spec.title = "Interbank demand in levels";
    spec.y_label = "funds";
    write_line_chart(path("demand"), spec,
                     {mean_series(ens, "demand_on", "overnight", burn_in, true),
                      mean_series(ens, "demand_term", "term", burn_in, true)});

    spec.title = "Payment flows balances";
    spec.y_label = "flows";
    write_line_chart(path("flows"), spec,
                     {mean_series(ens, "flows_abs", "sum |f|", burn_in, false),
                      mean_series(ens, "flows_sum", "sum f", burn_in, false)});

    spec.title = "Real sector loans by bank status";
    spec.y_label = "loans";
    write_line_chart(path("loans_status"), spec,
                     {mean_series(ens, "loans_deficit", "deficit banks", burn_in, false),
                      mean_series(ens, "loans_surplus", "surplus banks", burn_in, false)});

    spec.title = "Output and consumption";
    spec.y_label = "level";
    write_line_chart(path("real"), spec,
                     {mean_series(ens, "output", "output", burn_in, false),
                      mean_series(ens, "consumption", "consumption", burn_in, false),
                      mean_series(ens, "gdp", "nominal gdp", burn_in, false)});
}

void make_overlay_figure(const std::vector<std::pair<std::string, analytics::Ensemble>>& runs,
                         const std::string& variable, const std::string& out_path,
                         int burn_in) {
    ChartSpec spec;
    spec.title = variable;
    spec.y_label = variable;
    spec.x_offset = burn_in;
    std::vector<Series> series;
    for (const auto& [label, ens] : runs)
        series.push_back(mean_series(ens, variable, label, burn_in, false));
    write_line_chart(out_path, spec, series);
}

} // namespace plot
} // namespace absfc
