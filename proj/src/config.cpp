#include "absfc/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace absfc {

using nlohmann::json;

std::string to_string(BankKind k) {
    return k == BankKind::commercial ? "commercial" : "business";
}

std::string to_string(BankStatus s) {
    switch (s) {
        case BankStatus::deficit: return "deficit";
        case BankStatus::surplus: return "surplus";
        default: return "neutral";
    }
}

std::string to_string(Scenario s) {
    return s == Scenario::baseline ? "baseline" : "maturity";
}

std::string to_string(ShockKind k) {
    switch (k) {
        case ShockKind::missing: return "missing";
        case ShockKind::corridor: return "corridor";
        case ShockKind::width: return "width";
        default: return "uncertainty";
    }
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "baseline") return Scenario::baseline;
    if (s == "maturity") return Scenario::maturity;
    throw std::runtime_error("unknown scenario: " + s);
}

ShockKind shock_from_string(const std::string& s) {
    if (s == "missing") return ShockKind::missing;
    if (s == "corridor") return ShockKind::corridor;
    if (s == "width") return ShockKind::width;
    if (s == "uncertainty") return ShockKind::uncertainty;
    throw std::runtime_error("unknown shock: " + s);
}

void RunConfig::validate() const {
    if (population.households < 1 || population.firms < 1)
        throw std::runtime_error("config: need at least one household and firm");
    if (population.banks_commercial < 1 || population.banks_business < 1)
        throw std::runtime_error("config: need at least one bank of each kind");
    if (burn_in >= steps)
        throw std::runtime_error("config: burn_in must be below steps");
    if (replicates < 1) throw std::runtime_error("config: replicates must be >= 1");
    if (interbank.icb_d0 > interbank.icb_l0)
        throw std::runtime_error("config: corridor floor above ceiling");
    if (interbank.sigma_ib <= 0)
        throw std::runtime_error("config: sigma_ib must be positive");
    if (real_sector.subset_size < 1)
        throw std::runtime_error("config: subset_size must be >= 1");
    auto weight_ok = [](double w) { return w >= 0.0 && w <= 1.0; };
    const auto& m = interbank.weights;
    if (!weight_ok(m.m1) || !weight_ok(m.m2) || !weight_ok(m.m3) ||
        !weight_ok(m.m4) || !weight_ok(m.m5))
        throw std::runtime_error("config: NSFR weights must lie in [0,1]");
    if (interbank.reserve_mu < 0 || interbank.reserve_mu >= 1 ||
        interbank.reserve_v < 0 || interbank.reserve_v >= 1)
        throw std::runtime_error("config: reserve ratios must lie in [0,1)");
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_population(const json& j, PopulationConfig& c) {
    read(j, "households", c.households);
    read(j, "firms", c.firms);
    read(j, "banks_commercial", c.banks_commercial);
    read(j, "banks_business", c.banks_business);
}

void read_real_sector(const json& j, RealSectorConfig& c) {
    read(j, "markup", c.markup);
    read(j, "inventory_target_share", c.inventory_target_share);
    read(j, "expectation_gain", c.expectation_gain);
    read(j, "propensity_income", c.propensity_income);
    read(j, "propensity_income_spread", c.propensity_income_spread);
    read(j, "propensity_wealth", c.propensity_wealth);
    read(j, "spending_cap_income_multiple", c.spending_cap_income_multiple);
    read(j, "tax_rate", c.tax_rate);
    read(j, "leverage_cap", c.leverage_cap);
    read(j, "repay_rate_households", c.repay_rate_households);
    read(j, "repay_rate_firms", c.repay_rate_firms);
    read(j, "deposit_buffer", c.deposit_buffer);
    read(j, "dividend_payout", c.dividend_payout);
    read(j, "npl_share", c.npl_share);
    read(j, "depreciation", c.depreciation);
    read(j, "capital_init", c.capital_init);
    read(j, "productivity_spread", c.productivity_spread);
    read(j, "wage", c.wage);
    read(j, "subset_size", c.subset_size);
    read(j, "intensity_of_choice", c.intensity_of_choice);
    read(j, "deposits_init_household", c.deposits_init_household);
    read(j, "deposits_init_firm", c.deposits_init_firm);
    read(j, "expected_sales_init", c.expected_sales_init);
}

void read_banking(const json& j, BankingConfig& c) {
    read(j, "loan_markup", c.loan_markup);
    read(j, "deposit_markdown", c.deposit_markdown);
}

void read_interbank(const json& j, InterbankConfig& c) {
    if (j.contains("scenario"))
        c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        read(w, "m1", c.weights.m1);
        read(w, "m2", c.weights.m2);
        read(w, "m3", c.weights.m3);
        read(w, "m4", c.weights.m4);
        read(w, "m5", c.weights.m5);
    }
    read(j, "sigma_ib", c.sigma_ib);
    read(j, "pdu0", c.pdu0);
    read(j, "icb_d0", c.icb_d0);
    read(j, "icb_l0", c.icb_l0);
    read(j, "bills_rate", c.bills_rate);
    read(j, "bonds_rate", c.bonds_rate);
    read(j, "reserve_mu", c.reserve_mu);
    read(j, "reserve_v", c.reserve_v);
    read(j, "a0_lo", c.a0_lo);
    read(j, "a0_hi", c.a0_hi);
}

void read_government(const json& j, GovernmentConfig& c) {
    read(j, "debt_to_gdp", c.debt_to_gdp);
    read(j, "debt_adjust_gain", c.debt_adjust_gain);
    read(j, "gdp_ma_window", c.gdp_ma_window);
    read(j, "gdp_init_guess", c.gdp_init_guess);
}

void read_audit(const json& j, AuditConfig& c) {
    read(j, "tolerance", c.tolerance);
    read(j, "halt_on_fail", c.halt_on_fail);
}

} // namespace

RunConfig config_from_json_text(const std::string& text) {
    json j = json::parse(text);
    RunConfig cfg;
    if (j.contains("population")) read_population(j.at("population"), cfg.population);
    if (j.contains("real_sector")) read_real_sector(j.at("real_sector"), cfg.real_sector);
    if (j.contains("banking")) read_banking(j.at("banking"), cfg.banking);
    if (j.contains("interbank")) read_interbank(j.at("interbank"), cfg.interbank);
    if (j.contains("government")) read_government(j.at("government"), cfg.government);
    if (j.contains("audit")) read_audit(j.at("audit"), cfg.audit);
    read(j, "steps", cfg.steps);
    read(j, "replicates", cfg.replicates);
    read(j, "burn_in", cfg.burn_in);
    read(j, "seed", cfg.seed);
    if (j.contains("shock")) cfg.shock = shock_from_string(j.at("shock").get<std::string>());
    read(j, "out_dir", cfg.out_dir);
    read(j, "threads", cfg.threads);
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const RunConfig& cfg) {
    json j;
    j["population"] = {
        {"households", cfg.population.households},
        {"firms", cfg.population.firms},
        {"banks_commercial", cfg.population.banks_commercial},
        {"banks_business", cfg.population.banks_business},
    };
    const auto& rs = cfg.real_sector;
    j["real_sector"] = {
        {"markup", rs.markup},
        {"inventory_target_share", rs.inventory_target_share},
        {"expectation_gain", rs.expectation_gain},
        {"propensity_income", rs.propensity_income},
        {"propensity_income_spread", rs.propensity_income_spread},
        {"propensity_wealth", rs.propensity_wealth},
        {"spending_cap_income_multiple", rs.spending_cap_income_multiple},
        {"tax_rate", rs.tax_rate},
        {"leverage_cap", rs.leverage_cap},
        {"repay_rate_households", rs.repay_rate_households},
        {"repay_rate_firms", rs.repay_rate_firms},
        {"deposit_buffer", rs.deposit_buffer},
        {"dividend_payout", rs.dividend_payout},
        {"npl_share", rs.npl_share},
        {"depreciation", rs.depreciation},
        {"capital_init", rs.capital_init},
        {"productivity_spread", rs.productivity_spread},
        {"wage", rs.wage},
        {"subset_size", rs.subset_size},
        {"intensity_of_choice", rs.intensity_of_choice},
        {"deposits_init_household", rs.deposits_init_household},
        {"deposits_init_firm", rs.deposits_init_firm},
        {"expected_sales_init", rs.expected_sales_init},
    };
    j["banking"] = {
        {"loan_markup", cfg.banking.loan_markup},
        {"deposit_markdown", cfg.banking.deposit_markdown},
    };
    const auto& ib = cfg.interbank;
    j["interbank"] = {
        {"scenario", to_string(ib.scenario)},
        {"weights", {{"m1", ib.weights.m1}, {"m2", ib.weights.m2}, {"m3", ib.weights.m3},
                     {"m4", ib.weights.m4}, {"m5", ib.weights.m5}}},
        {"sigma_ib", ib.sigma_ib},
        {"pdu0", ib.pdu0},
        {"icb_d0", ib.icb_d0},
        {"icb_l0", ib.icb_l0},
        {"bills_rate", ib.bills_rate},
        {"bonds_rate", ib.bonds_rate},
        {"reserve_mu", ib.reserve_mu},
        {"reserve_v", ib.reserve_v},
        {"a0_lo", ib.a0_lo},
        {"a0_hi", ib.a0_hi},
    };
    j["government"] = {
        {"debt_to_gdp", cfg.government.debt_to_gdp},
        {"debt_adjust_gain", cfg.government.debt_adjust_gain},
        {"gdp_ma_window", cfg.government.gdp_ma_window},
        {"gdp_init_guess", cfg.government.gdp_init_guess},
    };
    j["audit"] = {
        {"tolerance", cfg.audit.tolerance},
        {"halt_on_fail", cfg.audit.halt_on_fail},
    };
    j["steps"] = cfg.steps;
    j["replicates"] = cfg.replicates;
    j["burn_in"] = cfg.burn_in;
    j["seed"] = cfg.seed;
    j["shock"] = to_string(cfg.shock);
    j["out_dir"] = cfg.out_dir;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << config_to_json_text(cfg) << "\n";
}

} // namespace absfc
