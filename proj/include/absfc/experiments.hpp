#pragma once

#include <string>
#include <vector>

#include "absfc/analytics.hpp"
#include "absfc/config.hpp"
#include "absfc/types.hpp"

namespace absfc {
namespace experiments {

/// Shock events fire every 300 steps from 300 through 1200. Corridor lifts
/// both policy rates by 50 bp, width lifts only the ceiling, uncertainty adds
/// 0.2 to the perceived uncertainty level. Idempotent per step.
bool is_shock_step(int t);
void apply_shocks(ShockKind kind, int t, PolicyRates& rates, MarketParams& market);

struct SweepPoint {
    double value = 0.0;
    analytics::Ensemble ensemble;
};

struct SweepSpec {
    std::string parameter;       // one of m1..m5, r, delta, l, gamma, g_d
    std::vector<double> grid;
    int replicates = 1;          // the NSFR sweeps follow the single-run protocol
};

/// Valid sweep targets and whether `spec` names one of them.
bool is_sweep_parameter(const std::string& name);

/// Applies one grid value onto a copy of the base configuration.
RunConfig configure_point(const RunConfig& base, const std::string& parameter, double value);

/// One ensemble per grid point, all points sharing the base seed so
/// differences are attributable to the swept parameter alone.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec, const RunConfig& base);

/// Parses "a:b:step" or a comma list into a grid.
std::vector<double> parse_grid(const std::string& text);

} // namespace experiments
} // namespace absfc
