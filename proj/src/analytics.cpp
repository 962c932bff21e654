#include "absfc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace absfc {
namespace analytics {

std::vector<double>& TimeSeriesFrame::col(const std::string& name) {
    auto it = columns.find(name);
    if (it == columns.end()) {
        names.push_back(name);
        it = columns.emplace(name, std::vector<double>{}).first;
    }
    return it->second;
}

const std::vector<double>& TimeSeriesFrame::col(const std::string& name) const {
    auto it = columns.find(name);
    if (it == columns.end())
        throw std::runtime_error("analytics: no column " + name);
    return it->second;
}

bool TimeSeriesFrame::has(const std::string& name) const {
    return columns.count(name) > 0;
}

std::size_t TimeSeriesFrame::rows() const {
    return columns.empty() ? 0 : columns.begin()->second.size();
}

HpResult hp_filter(std::span<const double> y, double lambda) {
    const std::size_t n = y.size();
    if (n < 4) throw std::runtime_error("hp_filter: need at least 4 observations");
    if (lambda <= 0.0) throw std::runtime_error("hp_filter: lambda must be positive");

    // A = I + lambda * D''^T D'' is symmetric pentadiagonal positive definite;
    // d0/d1/d2 hold the main, first and second diagonals.
    std::vector<double> d0(n), d1(n > 1 ? n - 1 : 0), d2(n > 2 ? n - 2 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        double c = 1.0;
        if (i == 0 || i == n - 1) c += lambda;
        else if (i == 1 || i == n - 2) c += 5.0 * lambda;
        else c += 6.0 * lambda;
        d0[i] = c;
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        d1[i] = (i == 0 || i == n - 2) ? -2.0 * lambda : -4.0 * lambda;
    for (std::size_t i = 0; i + 2 < n; ++i) d2[i] = lambda;

    // banded LDL^T factorization, bandwidth 2
    std::vector<double> diag(n), e1(n, 0.0), e2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double di = d0[i];
        if (i >= 1) di -= e1[i - 1] * e1[i - 1] * diag[i - 1];
        if (i >= 2) di -= e2[i - 2] * e2[i - 2] * diag[i - 2];
        diag[i] = di;
        if (i + 1 < n) {
            double v = d1[i];
            if (i >= 1) v -= e1[i - 1] * diag[i - 1] * e2[i - 1];
            e1[i] = v / di;
        }
        if (i + 2 < n) e2[i] = d2[i] / di;
    }

    HpResult out;
    out.trend.assign(y.begin(), y.end());
    auto& x = out.trend;
    for (std::size_t i = 0; i < n; ++i) {  // forward solve L z = y
        if (i >= 1) x[i] -= e1[i - 1] * x[i - 1];
        if (i >= 2) x[i] -= e2[i - 2] * x[i - 2];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] /= diag[i];  // D
    for (std::size_t k = n; k-- > 0;) {  // back solve L^T tau = z
        if (k + 1 < n) x[k] -= e1[k] * x[k + 1];
        if (k + 2 < n) x[k] -= e2[k] * x[k + 2];
    }

    out.cycle.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.cycle[i] = y[i] - out.trend[i];
    return out;
}

std::vector<double> moving_average(std::span<const double> series, int window) {
    if (window < 1) throw std::runtime_error("moving_average: window must be >= 1");
    std::vector<double> out(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        if (i >= static_cast<std::size_t>(window)) acc -= series[i - window];
        const std::size_t span = std::min<std::size_t>(i + 1, window);
        out[i] = acc / static_cast<double>(span);
    }
    return out;
}

std::vector<double> drop_burn_in(std::span<const double> series, int burn_in) {
    if (burn_in < 0 || static_cast<std::size_t>(burn_in) >= series.size())
        return std::vector<double>(series.begin(), series.end());
    return std::vector<double>(series.begin() + burn_in, series.end());
}

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stdev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * (i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double rank_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::runtime_error("rank_correlation: need two equal series");
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double ma = mean(ra), mb = mean(rb);
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    if (da == 0.0 || db == 0.0) return 0.0;
    return num / std::sqrt(da * db);
}

void export_long_csv(const Ensemble& ensemble, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("analytics: cannot open " + path);
    out << "replicate,period,variable,value\n";
    for (const auto& frame : ensemble.frames) {
        for (const auto& name : frame.names) {
            const auto& v = frame.columns.at(name);
            for (std::size_t t = 0; t < v.size(); ++t)
                out << fmt::format("{},{},{},{:.17g}\n", frame.replicate, t + 1, name, v[t]);
        }
    }
}

void export_wide_csv(const TimeSeriesFrame& frame, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("analytics: cannot open " + path);
    out << "period";
    for (const auto& name : frame.names) out << "," << name;
    out << "\n";
    for (std::size_t t = 0; t < frame.rows(); ++t) {
        out << (t + 1);
        for (const auto& name : frame.names)
            out << fmt::format(",{:.17g}", frame.columns.at(name)[t]);
        out << "\n";
    }
}

void export_summary_csv(const Ensemble& ensemble, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("analytics: cannot open " + path);
    out << "period,variable,mean,q25,q75\n";
    if (ensemble.frames.empty()) return;
    const auto& first = ensemble.frames.front();
    for (const auto& name : first.names) {
        const std::size_t rows = first.rows();
        std::vector<double> values(ensemble.frames.size());
        for (std::size_t t = 0; t < rows; ++t) {
            for (std::size_t r = 0; r < ensemble.frames.size(); ++r)
                values[r] = ensemble.frames[r].columns.at(name)[t];
            std::vector<double> sorted = values;
            std::sort(sorted.begin(), sorted.end());
            const auto quantile = [&](double q) {
                const double pos = q * (sorted.size() - 1);
                const std::size_t lo = static_cast<std::size_t>(pos);
                const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
                return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
            };
            out << fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", t + 1, name,
                               mean(values), quantile(0.25), quantile(0.75));
        }
    }
}

Ensemble read_long_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("analytics: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    Ensemble ens;
    std::map<int, std::size_t> frame_of;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string rep_s, period_s, name, value_s;
        std::getline(ss, rep_s, ',');
        std::getline(ss, period_s, ',');
        std::getline(ss, name, ',');
        std::getline(ss, value_s, ',');
        const int rep = std::stoi(rep_s);
        auto it = frame_of.find(rep);
        if (it == frame_of.end()) {
            ens.frames.emplace_back();
            ens.frames.back().replicate = rep;
            it = frame_of.emplace(rep, ens.frames.size() - 1).first;
        }
        ens.frames[it->second].col(name).push_back(std::stod(value_s));
    }
    return ens;
}

TimeSeriesFrame read_wide_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("analytics: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("analytics: empty file " + path);
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');  // period column
        while (std::getline(ss, tok, ',')) names.push_back(tok);
    }
    TimeSeriesFrame frame;
    for (const auto& n : names) frame.col(n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        for (const auto& n : names) {
            std::getline(ss, tok, ',');
            frame.col(n).push_back(std::stod(tok));
        }
    }
    return frame;
}

std::vector<double> ensemble_mean(const Ensemble& ensemble, const std::string& column) {
    if (ensemble.frames.empty()) return {};
    const std::size_t rows = ensemble.frames.front().rows();
    std::vector<double> out(rows, 0.0);
    for (const auto& f : ensemble.frames) {
        const auto& v = f.columns.at(column);
        for (std::size_t t = 0; t < rows; ++t) out[t] += v[t];
    }
    for (auto& x : out) x /= static_cast<double>(ensemble.frames.size());
    return out;
}

double ensemble_stat(const Ensemble& ensemble, const std::string& column, int burn_in) {
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& f : ensemble.frames) {
        const auto& v = f.columns.at(column);
        for (std::size_t t = burn_in; t < v.size(); ++t) {
            acc += v[t];
            ++n;
        }
    }
    return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

} // namespace analytics
} // namespace absfc
