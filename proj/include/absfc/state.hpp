#pragma once

#include <deque>
#include <vector>

#include "absfc/config.hpp"
#include "absfc/rng.hpp"
#include "absfc/types.hpp"

namespace absfc {

/// Previous-period stocks and rates needed by the t-1 dated equations
/// (profits, NSFR components, rate histories). Captured before any event
/// of the period mutates the live state.
struct PrevSnapshot {
    std::vector<BankState> banks;
    std::vector<double> household_deposits;
    std::vector<double> household_loans;
    std::vector<double> firm_deposits;
    std::vector<double> firm_loans;
    PolicyRates rates;
    double rate_on = 0.0;
    double rate_term = 0.0;
    double bills_outstanding = 0.0;
    double bonds_outstanding = 0.0;
    double gdp_ma = 0.0;
    double taxes = 0.0;
};

/// Full state of the simulated economy. One instance per run; the engine
/// advances it period by period.
struct EconomyState {
    int period = 0;
    std::vector<Household> households;
    std::vector<Firm> firms;
    std::vector<BankState> banks;
    Government government;
    CentralBank central_bank;
    PolicyRates rates;
    MarketParams market;
    double rate_on = 0.0;    // last cleared overnight rate
    double rate_term = 0.0;  // last cleared term rate
    SegmentBook book;        // interbank session of the current period

    // tracked net worth, accumulated through flows (audit cross-checks these)
    std::vector<double> household_nw;
    std::vector<double> firm_nw;

    // workforce mapping: firm -> households (fixed over the run)
    std::vector<std::vector<int>> workers;

    std::deque<double> gdp_history;
    double gdp_ma = 0.0;
    double gdp = 0.0;

    Rng rng{0};

    int n_commercial = 0;
    int n_business = 0;

    double theta = 0.0;  // current-period money-market parameters
    double lbw = 0.0;

    bool is_commercial(int bank_id) const { return bank_id < n_commercial; }
};

} // namespace absfc
