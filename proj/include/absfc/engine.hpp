#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "absfc/analytics.hpp"
#include "absfc/config.hpp"
#include "absfc/ledger.hpp"
#include "absfc/state.hpp"

namespace absfc {
namespace engine {

struct AuditFailure : std::runtime_error {
    AuditFailure(int period, double residual, const std::string& msg)
        : std::runtime_error(msg), period(period), residual(residual) {}
    int period;
    double residual;
};

/// Economy at t0: equal small endowments, random partner links, buffers and
/// reserves already allocated so the opening matrix audits clean.
EconomyState init_economy(const RunConfig& cfg, std::uint64_t seed);

/// Advances the economy one period through the six events (pricing,
/// production, goods market, credit market, interbank market, securities
/// market) preceded by the interest/profit settlement on previous-period
/// stocks, and audits the closing matrix. Throws AuditFailure when the audit
/// fails and halting is enabled.
ledger::AuditReport step(EconomyState& state, const RunConfig& cfg);

struct RunResult {
    analytics::TimeSeriesFrame frame;
    bool audit_ok = true;
    int failed_period = -1;
};

/// One replicate: seed = cfg.seed + replicate. When `audit_csv` is set the
/// per-period audit lines stream there.
RunResult run_single(const RunConfig& cfg, int replicate,
                     const std::string& audit_csv = "");

struct EnsembleResult {
    analytics::Ensemble ensemble;
    std::vector<int> failed_replicates;
};

/// Replicates run in parallel, each with an independent seeded RNG; frames
/// come back in replicate order so outputs are reproducible bytewise.
EnsembleResult run_ensemble(const RunConfig& cfg);

/// Serializes the full economy state of one period for debugging.
void dump_state(const EconomyState& state, const std::string& path);

} // namespace engine
} // namespace absfc
