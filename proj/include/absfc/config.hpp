#pragma once

#include <cstdint>
#include <string>

#include "absfc/types.hpp"

namespace absfc {

struct PopulationConfig {
    int households = 500;
    int firms = 100;
    int banks_commercial = 10;
    int banks_business = 10;

    int banks_total() const { return banks_commercial + banks_business; }
};

struct RealSectorConfig {
    double markup = 0.2;
    double inventory_target_share = 0.1;
    double expectation_gain = 0.25;       // adaptive-expectations weight
    double propensity_income = 0.8;       // alpha1
    double propensity_income_spread = 0.25;  // half-width of per-household dispersion
    double propensity_wealth = 0.1;       // alpha2
    double spending_cap_income_multiple = 10.0;  // per-period spending limit vs expected income
    double tax_rate = 0.2;
    double leverage_cap = 0.5;            // gamma, household debt ceiling vs expected income
    double repay_rate_households = 0.05;
    double repay_rate_firms = 0.15;
    double deposit_buffer = 0.1;          // g_d, firms' propensity to hold deposits
    double dividend_payout = 1.0;         // distributed share of positive profits
    double npl_share = 0.01;              // l
    double depreciation = 0.02;           // delta
    double capital_init = 15.0;           // K0 per firm
    double productivity_spread = 0.0;     // firm productivity ~ U(1-s, 1+s)
    double wage = 1.0;
    int subset_size = 3;                  // observed suppliers per market
    double intensity_of_choice = 1.0;     // epsilon of the switching rule
    double deposits_init_household = 0.6;
    double deposits_init_firm = 0.6;
    double expected_sales_init = 4.0;     // units per firm
};

struct BankingConfig {
    double loan_markup = 0.5;      // markup_l on funding costs
    double deposit_markdown = 0.5; // markdown_d
};

struct InterbankConfig {
    Scenario scenario = Scenario::baseline;
    NsfrWeights weights;
    double sigma_ib = 2.5;
    double pdu0 = 0.0;
    double icb_d0 = 0.005;
    double icb_l0 = 0.015;
    double bills_rate = 0.010;
    double bonds_rate = 0.012;
    double reserve_mu = 0.002;
    double reserve_v = 0.002;
    double a0_lo = 0.0;
    double a0_hi = 1.0;
};

struct GovernmentConfig {
    double debt_to_gdp = 0.6;       // r, steers the bills target
    double debt_adjust_gain = 0.1;  // speed of reversion of B to target
    int gdp_ma_window = 20;
    double gdp_init_guess = 600.0;
};

struct AuditConfig {
    double tolerance = 1e-8;  // relative to the largest stock in the matrix
    bool halt_on_fail = true;
};

struct RunConfig {
    PopulationConfig population;
    RealSectorConfig real_sector;
    BankingConfig banking;
    InterbankConfig interbank;
    GovernmentConfig government;
    AuditConfig audit;

    int steps = 1200;
    int replicates = 100;
    int burn_in = 100;
    std::uint64_t seed = 42;
    ShockKind shock = ShockKind::missing;
    std::string out_dir = "out";
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;  // throws on inconsistent values
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::string& path);

} // namespace absfc
