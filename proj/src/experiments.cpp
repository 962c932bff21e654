#include "absfc/experiments.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "absfc/engine.hpp"

namespace absfc {
namespace experiments {

namespace {
constexpr double kRateIncrement = 0.005;  // 50 basis points
constexpr double kPduIncrement = 0.2;
constexpr int kShockInterval = 300;
constexpr int kShockLast = 1200;
} // namespace

bool is_shock_step(int t) {
    return t >= kShockInterval && t <= kShockLast && t % kShockInterval == 0;
}

void apply_shocks(ShockKind kind, int t, PolicyRates& rates, MarketParams& market) {
    if (kind == ShockKind::missing || !is_shock_step(t)) return;
    switch (kind) {
        case ShockKind::corridor:
            rates.icb_l += kRateIncrement;
            rates.icb_d += kRateIncrement;
            break;
        case ShockKind::width:
            rates.icb_l += kRateIncrement;  // floor stays put, the target drifts up
            break;
        case ShockKind::uncertainty:
            market.pdu += kPduIncrement;
            break;
        default:
            break;
    }
}

bool is_sweep_parameter(const std::string& name) {
    return name == "m1" || name == "m2" || name == "m3" || name == "m4" ||
           name == "m5" || name == "r" || name == "delta" || name == "l" ||
           name == "gamma" || name == "g_d";
}

RunConfig configure_point(const RunConfig& base, const std::string& parameter, double value) {
    RunConfig cfg = base;
    if (parameter == "m1") cfg.interbank.weights.m1 = value;
    else if (parameter == "m2") cfg.interbank.weights.m2 = value;
    else if (parameter == "m3") cfg.interbank.weights.m3 = value;
    else if (parameter == "m4") cfg.interbank.weights.m4 = value;
    else if (parameter == "m5") cfg.interbank.weights.m5 = value;
    else if (parameter == "r") cfg.government.debt_to_gdp = value;
    else if (parameter == "delta") cfg.real_sector.depreciation = value;
    else if (parameter == "l") cfg.real_sector.npl_share = value;
    else if (parameter == "gamma") cfg.real_sector.leverage_cap = value;
    else if (parameter == "g_d") cfg.real_sector.deposit_buffer = value;
    else throw std::runtime_error("experiments: unknown sweep parameter " + parameter);

    if (parameter[0] == 'm' && (value < 0.0 || value > 1.0))
        throw std::runtime_error("experiments: NSFR weight outside [0,1]");
    cfg.validate();
    return cfg;
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const RunConfig& base) {
    if (!is_sweep_parameter(spec.parameter))
        throw std::runtime_error("experiments: unknown sweep parameter " + spec.parameter);
    std::vector<SweepPoint> points;
    for (double value : spec.grid) {
        RunConfig cfg = configure_point(base, spec.parameter, value);
        cfg.replicates = spec.replicates;
        SweepPoint point;
        point.value = value;
        point.ensemble = engine::run_ensemble(cfg).ensemble;
        points.push_back(std::move(point));
    }
    return points;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(text);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw std::runtime_error("experiments: bad grid spec " + text);
        for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(std::round(v * 1e9) / 1e9);
        return grid;
    }
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) grid.push_back(std::stod(tok));
    }
    if (grid.empty()) throw std::runtime_error("experiments: empty grid " + text);
    return grid;
}

} // namespace experiments
} // namespace absfc
