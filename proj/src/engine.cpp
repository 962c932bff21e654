#include "absfc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <numeric>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "absfc/banking.hpp"
#include "absfc/experiments.hpp"
#include "absfc/interbank.hpp"
#include "absfc/real_sector.hpp"

namespace absfc {
namespace engine {

namespace {

// ---- double-entry helpers: every deposit or loan move touches the agent
// account and the bank's book together ----

void hh_deposit(EconomyState& s, int h, double amount) {
    s.households[h].deposits += amount;
    s.banks[s.households[h].bank].deposits += amount;
}

void firm_deposit(EconomyState& s, int f, double amount) {
    s.firms[f].deposits += amount;
    s.banks[s.firms[f].bank].deposits += amount;
}

void hh_loan(EconomyState& s, int h, double amount) {
    s.households[h].loans += amount;
    s.banks[s.households[h].bank].loans += amount;
}

void firm_loan(EconomyState& s, int f, double amount) {
    s.firms[f].loans += amount;
    s.banks[s.firms[f].bank].loans += amount;
}

void move_customer_stocks(EconomyState& s, int old_bank, int new_bank,
                          double deposits, double loans) {
    s.banks[old_bank].deposits -= deposits;
    s.banks[old_bank].loans -= loans;
    s.banks[new_bank].deposits += deposits;
    s.banks[new_bank].loans += loans;
}

PrevSnapshot snapshot(const EconomyState& s) {
    PrevSnapshot p;
    p.banks = s.banks;
    p.household_deposits.reserve(s.households.size());
    p.household_loans.reserve(s.households.size());
    for (const auto& h : s.households) {
        p.household_deposits.push_back(h.deposits);
        p.household_loans.push_back(h.loans);
    }
    p.firm_deposits.reserve(s.firms.size());
    p.firm_loans.reserve(s.firms.size());
    for (const auto& f : s.firms) {
        p.firm_deposits.push_back(f.deposits);
        p.firm_loans.push_back(f.loans);
    }
    p.rates = s.rates;
    p.rate_on = s.rate_on;
    p.rate_term = s.rate_term;
    p.bills_outstanding = s.government.bills_outstanding;
    p.bonds_outstanding = s.government.bonds_outstanding;
    p.gdp_ma = s.gdp_ma;
    p.taxes = s.government.taxes_prev;
    return p;
}

void begin_period(EconomyState& s) {
    for (auto& h : s.households) {
        h.wage = 0.0;
        h.consumption = 0.0;
        h.taxes = 0.0;
        h.income = 0.0;
    }
    for (auto& f : s.firms) {
        f.output = 0.0;
        f.wage_bill = 0.0;
        f.revenue = 0.0;
        f.credit_demand = 0.0;
        f.interest_paid = 0.0;
        f.interest_received = 0.0;
        f.bank_dividend = 0.0;
        // sales reset happens after the expectation update in event 2
    }
    for (auto& b : s.banks) {
        b.npl = 0.0;
        b.flow = 0.0;
        b.status = BankStatus::neutral;
        b.demand = b.supply = 0.0;
        b.demand_on = b.demand_term = 0.0;
        b.supply_on = b.supply_term = 0.0;
        b.matched = false;
        b.split = MaturitySplit{};
    }
    s.government.taxes = 0.0;
    s.government.transfers = 0.0;
    s.government.interest_paid = 0.0;
    s.government.redemption_paid = 0.0;
    s.government.cb_remittance = 0.0;
}

// Interest on previous-period stocks, bond redemption, central-bank
// remittance, government transfers and bank profit distribution. All the
// t-1 dated terms read the snapshot.
void settle_carryover(EconomyState& s, const RunConfig& cfg, const PrevSnapshot& prev) {
    auto& gov = s.government;

    // deposit interest credits first, then loan interest collects up to the
    // available balance; the uncollected remainder is non-performing and is
    // absorbed by the government through the bond channel at event 6
    for (std::size_t h = 0; h < s.households.size(); ++h) {
        auto& hh = s.households[h];
        const auto& bank_prev = prev.banks[hh.bank];
        const double earned = bank_prev.deposit_rate * prev.household_deposits[h];
        hh_deposit(s, static_cast<int>(h), earned);
        s.household_nw[h] += earned;
        const double due = bank_prev.loan_rate * prev.household_loans[h];
        const double paid = std::min(std::max(0.0, hh.deposits), due);
        hh_deposit(s, static_cast<int>(h), -paid);
        s.household_nw[h] -= paid;
        s.banks[hh.bank].npl += due - paid;
        hh.income += earned - due;
    }
    for (std::size_t f = 0; f < s.firms.size(); ++f) {
        auto& firm = s.firms[f];
        const auto& bank_prev = prev.banks[firm.bank];
        const double earned = bank_prev.deposit_rate * prev.firm_deposits[f];
        firm_deposit(s, static_cast<int>(f), earned);
        s.firm_nw[f] += earned;
        const double due = bank_prev.loan_rate * prev.firm_loans[f];
        const double paid = std::min(std::max(0.0, firm.deposits), due);
        firm_deposit(s, static_cast<int>(f), -paid);
        s.firm_nw[f] -= paid;
        s.banks[firm.bank].npl += due - paid;
        firm.interest_paid = paid;
        firm.interest_received = earned;
    }

    // government debt service on bills and bonds, and bond redemption; the
    // banks' side of these flows arrives through the profit distribution
    // and the bills buffer
    double bond_interest = 0.0, bond_redemption = 0.0, bill_interest = 0.0;
    for (std::size_t b = 0; b < s.banks.size(); ++b) {
        bill_interest += prev.rates.bills_rate * prev.banks[b].bills;
        bond_interest += prev.rates.bonds_rate * prev.banks[b].bonds;
        bond_redemption += prev.banks[b].bonds;
        s.banks[b].bonds = 0.0;  // redeemed; re-issued against this period's NPL
    }
    const double cb_bills_prev =
        prev.bills_outstanding -
        std::accumulate(prev.banks.begin(), prev.banks.end(), 0.0,
                        [](double acc, const BankState& b) { return acc + b.bills; });
    bill_interest += prev.rates.bills_rate * cb_bills_prev;
    gov.interest_paid = bill_interest + bond_interest;
    gov.redemption_paid = bond_redemption;
    gov.net_worth -= bill_interest + bond_interest;

    // central-bank income on previous stocks, remitted in full
    double cb_profit = prev.rates.bills_rate * cb_bills_prev;
    for (const auto& b : prev.banks) {
        cb_profit += prev.rates.icb_t() * b.advances + prev.rates.icb_l * b.facility_loan -
                     prev.rates.icb_t() * b.reserves - prev.rates.icb_d * b.facility_dep;
    }
    gov.cb_remittance = cb_profit;
    gov.net_worth += cb_profit;

    // transfers recycle last period's receipts and steer the bills stock
    // toward the debt-to-GDP target
    const double target = cfg.government.debt_to_gdp * prev.gdp_ma;
    const double planned = prev.taxes + cb_profit - gov.interest_paid -
                           gov.redemption_paid +
                           cfg.government.debt_adjust_gain * (target - prev.bills_outstanding);
    const double transfers = std::max(0.0, planned);
    if (transfers > 0.0) {
        const double share = transfers / static_cast<double>(s.households.size());
        for (std::size_t h = 0; h < s.households.size(); ++h) {
            hh_deposit(s, static_cast<int>(h), share);
            s.household_nw[h] += share;
            s.households[h].income += share;
        }
    }
    gov.transfers = transfers;
    gov.net_worth -= transfers;

    // bank profits on previous stocks and rates, distributed per capita over
    // the current customer set
    for (std::size_t b = 0; b < s.banks.size(); ++b) {
        const auto& pb = prev.banks[b];
        banking::ProfitInputs in;
        in.loans = pb.loans;
        in.reserves = pb.reserves;
        in.bills = pb.bills;
        in.bonds = pb.bonds;
        in.facility_dep = pb.facility_dep;
        in.deposits = pb.deposits;
        in.advances = pb.advances;
        in.facility_loan = pb.facility_loan;
        in.loan_rate = pb.loan_rate;
        in.deposit_rate = pb.deposit_rate;
        const double profit = banking::profits(in, prev.rates);
        if (profit == 0.0) continue;
        if (s.banks[b].kind == BankKind::commercial) {
            std::vector<int> customers;
            for (std::size_t h = 0; h < s.households.size(); ++h)
                if (s.households[h].bank == static_cast<int>(b))
                    customers.push_back(static_cast<int>(h));
            if (customers.empty())
                for (std::size_t h = 0; h < s.households.size(); ++h)
                    customers.push_back(static_cast<int>(h));
            const double share = profit / static_cast<double>(customers.size());
            for (int h : customers) {
                hh_deposit(s, h, share);
                s.household_nw[h] += share;
                s.households[h].income += share;
            }
        } else {
            std::vector<int> customers;
            for (std::size_t f = 0; f < s.firms.size(); ++f)
                if (s.firms[f].bank == static_cast<int>(b))
                    customers.push_back(static_cast<int>(f));
            if (customers.empty())
                for (std::size_t f = 0; f < s.firms.size(); ++f)
                    customers.push_back(static_cast<int>(f));
            const double share = profit / static_cast<double>(customers.size());
            for (int f : customers) {
                firm_deposit(s, f, share);
                s.firm_nw[f] += share;
                s.firms[f].bank_dividend += share;
            }
        }
    }
}

// Event 1: markup pricing and credit-rate updates from last funding costs.
void event_pricing(EconomyState& s, const RunConfig& cfg) {
    for (auto& f : s.firms) f.price = real_sector::update_price(f.unit_cost, cfg.real_sector.markup);
    for (auto& b : s.banks) {
        const auto [loan_rate, deposit_rate] = banking::update_credit_rates(
            b.funding_cost, cfg.banking.loan_markup, cfg.banking.deposit_markdown);
        b.loan_rate = loan_rate;
        b.deposit_rate = deposit_rate;
    }
}

// Event 2: production plans, wage payments, output into inventories,
// own-account replacement investment. Each worker supplies one unit of
// labor per period, so the crew pins the firm's capacity.
void event_production(EconomyState& s, const RunConfig& cfg) {
    const auto& rs = cfg.real_sector;
    for (std::size_t fi = 0; fi < s.firms.size(); ++fi) {
        auto& f = s.firms[fi];
        // expectations track the demand customers expressed, so rationing
        // episodes feed back into next period's production plan
        f.expected_sales = real_sector::update_expectation(f.expected_sales, f.demand_units,
                                                           rs.expectation_gain);
        f.sales = 0.0;

        double investment = rs.depreciation * f.capital;
        auto plan = real_sector::plan_production(
            f.expected_sales, f.inventory, rs.inventory_target_share, f.unit_cost,
            investment, f.deposits, rs.deposit_buffer);
        const double capacity = f.productivity * static_cast<double>(s.workers[fi].size());
        const double investment_units = investment / f.unit_cost;
        if (plan.output + investment_units > capacity) {
            // replacement investment takes priority; market output yields
            plan.output = std::max(0.0, capacity - investment_units);
            investment = std::min(investment, capacity * f.unit_cost);
            plan.wage_bill = plan.output * f.unit_cost;
            plan.credit_demand = std::max(
                0.0, plan.wage_bill + investment -
                         std::max(0.0, f.deposits) * (1.0 - rs.deposit_buffer));
        }
        f.output = plan.output;
        f.credit_demand = plan.credit_demand;
        f.inventory += f.output;
        s.firm_nw[fi] += f.output * f.unit_cost;  // inventories at cost
        // replacement investment is produced in house; when capacity crowds it
        // out the capital stock absorbs the shortfall
        const double capital_change = investment - rs.depreciation * f.capital;
        f.capital += capital_change;
        s.firm_nw[fi] += capital_change;

        const double wage_bill = plan.wage_bill + investment;
        f.wage_bill = wage_bill;
        if (wage_bill > 0.0) {
            firm_deposit(s, static_cast<int>(fi), -wage_bill);
            s.firm_nw[fi] -= wage_bill;
            const auto& crew = s.workers[fi];
            const double w = wage_bill / static_cast<double>(crew.size());
            for (int h : crew) {
                hh_deposit(s, h, w);
                s.household_nw[h] += w;
                s.households[h].wage += w;
                s.households[h].income += w;
            }
        }
    }
}

// Event 3: goods market with partner switching, consumption out of expected
// income and wealth, wage taxes, pro-rata rationing on short inventories.
void event_goods_market(EconomyState& s, const RunConfig& cfg) {
    const auto& rs = cfg.real_sector;
    const int n_firms = static_cast<int>(s.firms.size());
    const auto price_of = [&](int i) { return s.firms[i].price; };

    std::vector<double> spend_plan(s.households.size(), 0.0);
    std::vector<double> units_plan(s.households.size(), 0.0);
    std::vector<double> units_demanded(s.firms.size(), 0.0);

    for (std::size_t h = 0; h < s.households.size(); ++h) {
        auto& hh = s.households[h];
        hh.expected_income = real_sector::update_expectation(
            hh.expected_income, hh.income_prev(), rs.expectation_gain);
        hh.supplier = real_sector::choose_partner(hh.supplier, n_firms, price_of,
                                                  rs.subset_size, rs.intensity_of_choice,
                                                  s.rng);
        auto plan = real_sector::consume_and_tax(
            hh.expected_income, hh.deposits, hh.wage, rs.tax_rate, hh.propensity_income,
            rs.propensity_wealth, hh.loans, rs.leverage_cap);
        // wealthy households spread large purchases over several periods,
        // which keeps single-period payment lumps bounded
        plan.spending = std::min(plan.spending,
                                 rs.spending_cap_income_multiple *
                                     std::max(hh.expected_income, rs.wage));
        hh.taxes = plan.taxes;
        hh_deposit(s, static_cast<int>(h), -plan.taxes);
        s.household_nw[h] -= plan.taxes;
        hh.income -= plan.taxes;
        s.government.taxes += plan.taxes;
        s.government.net_worth += plan.taxes;

        spend_plan[h] = plan.spending;
        const double price = s.firms[hh.supplier].price;
        units_plan[h] = plan.spending / price;
        units_demanded[hh.supplier] += units_plan[h];
    }

    std::vector<double> scale(s.firms.size(), 1.0);
    for (std::size_t f = 0; f < s.firms.size(); ++f) {
        s.firms[f].demand_units = units_demanded[f];
        if (units_demanded[f] > s.firms[f].inventory && units_demanded[f] > 0.0)
            scale[f] = s.firms[f].inventory / units_demanded[f];
    }

    for (std::size_t h = 0; h < s.households.size(); ++h) {
        auto& hh = s.households[h];
        const int fi = hh.supplier;
        const double units = units_plan[h] * scale[fi];
        if (units <= 0.0) continue;
        auto& f = s.firms[fi];
        const double spend = units * f.price;
        hh_deposit(s, static_cast<int>(h), -spend);  // may overdraw until event 4 books the loan
        s.household_nw[h] -= spend;
        hh.consumption = spend;
        firm_deposit(s, fi, spend);
        s.firm_nw[fi] += spend - units * f.unit_cost;
        f.revenue += spend;
        f.sales += units;
        f.inventory = std::max(0.0, f.inventory - units);
    }
}

// Event 4: bank switching, loan applications, amortization, the NPL draw
// with the bond transfer, and firm dividends.
void event_credit_market(EconomyState& s, const RunConfig& cfg) {
    const auto& rs = cfg.real_sector;

    const auto commercial_rate = [&](int i) { return s.banks[i].loan_rate; };
    const auto business_rate = [&](int i) { return s.banks[s.n_commercial + i].loan_rate; };

    for (std::size_t h = 0; h < s.households.size(); ++h) {
        auto& hh = s.households[h];
        const int chosen = real_sector::choose_partner(
            hh.bank, s.n_commercial, commercial_rate, rs.subset_size,
            rs.intensity_of_choice, s.rng);
        if (chosen != hh.bank) {
            move_customer_stocks(s, hh.bank, chosen, hh.deposits, hh.loans);
            hh.bank = chosen;
        }
        // consumer credit committed on the goods market
        if (hh.deposits < 0.0) {
            const double pending = -hh.deposits;
            hh_loan(s, static_cast<int>(h), pending);
            hh_deposit(s, static_cast<int>(h), pending);
        }
        const double repay = std::min(std::max(0.0, hh.deposits),
                                      rs.repay_rate_households * hh.loans);
        if (repay > 0.0) {
            hh_deposit(s, static_cast<int>(h), -repay);
            hh_loan(s, static_cast<int>(h), -repay);
        }
    }

    for (std::size_t fi = 0; fi < s.firms.size(); ++fi) {
        auto& f = s.firms[fi];
        const int local = f.bank - s.n_commercial;
        const int chosen = real_sector::choose_partner(
            local, s.n_business, business_rate, rs.subset_size, rs.intensity_of_choice,
            s.rng);
        if (chosen != local) {
            move_customer_stocks(s, f.bank, s.n_commercial + chosen, f.deposits, f.loans);
            f.bank = s.n_commercial + chosen;
        }
        if (f.credit_demand > 0.0) {
            firm_loan(s, static_cast<int>(fi), f.credit_demand);
            firm_deposit(s, static_cast<int>(fi), f.credit_demand);
        }
        const double repay = std::min(std::max(0.0, f.deposits),
                                      rs.repay_rate_firms * f.loans);
        if (repay > 0.0) {
            firm_deposit(s, static_cast<int>(fi), -repay);
            firm_loan(s, static_cast<int>(fi), -repay);
        }
        if (f.deposits < 0.0) {  // consolidate any leftover overdraft
            const double overdraft = -f.deposits;
            firm_loan(s, static_cast<int>(fi), overdraft);
            firm_deposit(s, static_cast<int>(fi), overdraft);
        }
    }

    // the non-performing share of the post-credit-market loan book moves to
    // the government against long-term bonds
    for (std::size_t h = 0; h < s.households.size(); ++h) {
        auto& hh = s.households[h];
        const auto t = banking::transfer_npl(hh.loans, rs.npl_share);
        if (t.npl <= 0.0) continue;
        hh_loan(s, static_cast<int>(h), -t.npl);
        s.household_nw[h] += t.npl;
        s.banks[hh.bank].npl += t.npl;
    }
    for (std::size_t fi = 0; fi < s.firms.size(); ++fi) {
        auto& f = s.firms[fi];
        const auto t = banking::transfer_npl(f.loans, rs.npl_share);
        if (t.npl <= 0.0) continue;
        firm_loan(s, static_cast<int>(fi), -t.npl);
        s.firm_nw[fi] += t.npl;
        s.banks[f.bank].npl += t.npl;
    }
    double absorbed = 0.0;
    for (auto& b : s.banks) {
        b.bonds = b.npl;
        absorbed += b.npl;
    }
    s.government.bonds_outstanding = absorbed;
    s.government.net_worth -= absorbed;

    // dividends: firms run a lean till, distributing the cash in excess of
    // a working-capital buffer proportional to the period's outlays
    for (std::size_t fi = 0; fi < s.firms.size(); ++fi) {
        auto& f = s.firms[fi];
        const double buffer = cfg.real_sector.deposit_buffer * f.wage_bill;
        const double dividend = cfg.real_sector.dividend_payout *
                                std::max(0.0, f.deposits - buffer);
        if (dividend <= 0.0) continue;
        firm_deposit(s, static_cast<int>(fi), -dividend);
        s.firm_nw[fi] -= dividend;
        const auto& crew = s.workers[fi];
        const double share = dividend / static_cast<double>(crew.size());
        for (int h : crew) {
            hh_deposit(s, h, share);
            s.household_nw[h] += share;
            s.households[h].income += share;
        }
    }
}

// Event 5: payment flows, interbank statuses, maturity splits, matching per
// scenario, standing facilities, rate clearing and funding costs.
void event_interbank(EconomyState& s, const RunConfig& cfg, const PrevSnapshot& prev) {
    const bool maturity = cfg.interbank.scenario == Scenario::maturity;

    for (const auto& hh : s.households)
        s.banks[hh.bank].flow += hh.consumption - hh.wage;
    for (const auto& f : s.firms)
        s.banks[f.bank].flow += f.wage_bill - f.revenue;

    const double a0 = s.rng.uniform(cfg.interbank.a0_lo, cfg.interbank.a0_hi);
    s.theta = interbank::theta(a0, prev.rate_on, prev.rate_term, s.rates, s.market.pdu);
    s.lbw = interbank::lbw(a0, prev.rate_on, prev.rate_term, s.rates, s.market.pdu);

    std::vector<interbank::Side> borrowers, lenders;
    for (std::size_t bi = 0; bi < s.banks.size(); ++bi) {
        auto& b = s.banks[bi];
        const double required = banking::required_reserves(b.deposits, s.rates);
        const double delta = required - b.reserves;
        b.reserves = required;

        const auto pos = banking::interbank_position(b.flow, delta);
        b.status = pos.status;
        b.demand = pos.demand;
        b.supply = pos.supply;

        b.profile = interbank::nsfr_components(interbank::nsfr_stocks_of(prev.banks[bi]),
                                               b.kind, cfg.interbank.weights);

        b.ib_lent_on = b.ib_lent_term = 0.0;
        b.ib_borrowed_on = b.ib_borrowed_term = 0.0;
        b.facility_loan = b.facility_dep = 0.0;

        if (b.status == BankStatus::deficit && b.demand > 0.0) {
            if (maturity) {
                b.split = interbank::borrower_split(b.demand, b.profile, s.theta, s.rng);
            } else {
                b.split.preference = 1.0;
                b.split.target_ratio = 0.0;
                b.split.on = b.demand * std::clamp(s.theta, 0.0, 1.0);
                b.split.term = b.demand - b.split.on;
            }
            b.demand_on = b.split.on;
            b.demand_term = b.split.term;
            interbank::Side side;
            side.bank = static_cast<int>(bi);
            side.total = b.demand;
            side.on = b.demand_on;
            side.term = b.demand_term;
            side.stability_score = b.profile.asf;
            borrowers.push_back(side);
        } else if (b.status == BankStatus::surplus && b.supply > 0.0) {
            if (maturity) {
                b.split = interbank::lender_split(b.supply, b.profile, s.lbw, s.rng);
            } else {
                b.split.preference = 1.0;
                b.split.target_ratio = 0.0;
                b.split.on = b.supply * std::clamp(s.lbw, 0.0, 1.0);
                b.split.term = b.supply - b.split.on;
            }
            b.supply_on = b.split.on;
            b.supply_term = b.split.term;
            interbank::Side side;
            side.bank = static_cast<int>(bi);
            side.total = b.supply;
            side.on = b.supply_on;
            side.term = b.supply_term;
            side.stability_score = b.profile.margin;
            lenders.push_back(side);
        }
    }

    s.book = maturity ? interbank::match_maturity(borrowers, lenders, s.rng)
                      : interbank::match_baseline(borrowers, lenders, s.rng);

    for (const auto& m : s.book.matches) {
        s.banks[m.lender].ib_lent_on = m.amount_on;
        s.banks[m.lender].ib_lent_term = m.amount_term;
        s.banks[m.lender].matched = true;
        s.banks[m.borrower].ib_borrowed_on = m.amount_on;
        s.banks[m.borrower].ib_borrowed_term = m.amount_term;
        s.banks[m.borrower].matched = true;
    }

    // unmatched positions fall back on the central bank
    for (auto& b : s.banks) {
        if (b.matched) continue;
        if (b.status == BankStatus::deficit && b.demand > 0.0) {
            b.facility_loan = b.demand;
            s.book.facility_loans += b.demand;
        } else if (b.status == BankStatus::surplus && b.supply > 0.0) {
            b.facility_dep = b.supply;
            s.book.facility_deps += b.supply;
        }
    }

    s.rate_on = interbank::clear_rate(s.book.excess_on, s.rates, cfg.interbank.sigma_ib);
    s.rate_term = interbank::clear_rate(s.book.excess_term, s.rates, cfg.interbank.sigma_ib);
    s.book.rate_on = s.rate_on;
    s.book.rate_term = s.rate_term;

    for (auto& b : s.banks)
        b.funding_cost = interbank::funding_cost(
            b.ib_borrowed_on > 0.0, b.ib_borrowed_term > 0.0, b.facility_loan > 0.0,
            s.rate_on, s.rate_term, s.rates);
}

// Event 6: government budget, bills issuance, bank buffers and the residual
// central-bank absorption, then the stock-flow audit.
void event_securities(EconomyState& s) {
    auto& gov = s.government;
    const double deficit = gov.interest_paid + gov.redemption_paid + gov.transfers -
                           gov.taxes - gov.cb_remittance;
    double bills = gov.bills_outstanding + deficit;
    if (bills < 0.0) {
        // fully retired debt: return the leftover surplus to households
        const double extra = -bills;
        const double share = extra / static_cast<double>(s.households.size());
        for (std::size_t h = 0; h < s.households.size(); ++h) {
            hh_deposit(s, static_cast<int>(h), share);
            s.household_nw[h] += share;
            s.households[h].income += share;
        }
        gov.transfers += extra;
        gov.net_worth -= extra;
        bills = 0.0;
    }
    gov.bills_outstanding = bills;

    const double per_bank = bills / static_cast<double>(s.banks.size());
    double bank_bills = 0.0;
    for (auto& b : s.banks) {
        const auto buffer = banking::bills_and_advances(
            b.deposits, b.npl, b.facility_loan, b.loans + b.npl, b.bonds,
            b.facility_dep, per_bank, s.rates);
        b.bills = buffer.bills;
        b.advances = buffer.advances;
        b.excess_reserves = buffer.excess_reserves;
        bank_bills += b.bills;
    }

    auto& cb = s.central_bank;
    cb.bills = bills - bank_bills;
    cb.reserves_liab = 0.0;
    cb.advances = 0.0;
    cb.facility_loans = 0.0;
    cb.facility_deps = 0.0;
    for (const auto& b : s.banks) {
        cb.reserves_liab += b.reserves + b.excess_reserves;
        cb.advances += b.advances;
        cb.facility_loans += b.facility_loan;
        cb.facility_deps += b.facility_dep;
    }
}

void update_gdp(EconomyState& s, const RunConfig& cfg) {
    double consumption = 0.0;
    for (const auto& f : s.firms) consumption += f.revenue;
    double investment = 0.0;
    for (const auto& f : s.firms) investment += cfg.real_sector.depreciation * f.capital;
    s.gdp = consumption + investment;
    s.gdp_history.push_back(s.gdp);
    while (static_cast<int>(s.gdp_history.size()) > cfg.government.gdp_ma_window)
        s.gdp_history.pop_front();
    s.gdp_ma = std::accumulate(s.gdp_history.begin(), s.gdp_history.end(), 0.0) /
               static_cast<double>(s.gdp_history.size());
}

} // namespace

EconomyState init_economy(const RunConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    EconomyState s;
    s.rng = Rng(seed);
    s.n_commercial = cfg.population.banks_commercial;
    s.n_business = cfg.population.banks_business;

    const auto& rs = cfg.real_sector;
    s.rates.icb_d = cfg.interbank.icb_d0;
    s.rates.icb_l = cfg.interbank.icb_l0;
    s.rates.bills_rate = cfg.interbank.bills_rate;
    s.rates.bonds_rate = cfg.interbank.bonds_rate;
    s.rates.mu = cfg.interbank.reserve_mu;
    s.rates.v = cfg.interbank.reserve_v;
    s.market.pdu = cfg.interbank.pdu0;
    s.market.sigma_ib = cfg.interbank.sigma_ib;
    s.market.a0_lo = cfg.interbank.a0_lo;
    s.market.a0_hi = cfg.interbank.a0_hi;
    s.rate_on = s.rate_term = s.rates.icb_t();

    s.banks.resize(cfg.population.banks_total());
    for (int b = 0; b < cfg.population.banks_total(); ++b) {
        s.banks[b].kind =
            b < s.n_commercial ? BankKind::commercial : BankKind::business;
        s.banks[b].funding_cost = s.rates.icb_t();
        s.banks[b].loan_rate = s.rates.icb_t() * (1.0 + cfg.banking.loan_markup);
        s.banks[b].deposit_rate = s.rates.icb_t() * (1.0 - cfg.banking.deposit_markdown);
    }

    s.firms.resize(cfg.population.firms);
    s.firm_nw.resize(cfg.population.firms);
    s.workers.assign(cfg.population.firms, {});
    for (int fi = 0; fi < cfg.population.firms; ++fi) {
        auto& f = s.firms[fi];
        f.productivity = s.rng.uniform(1.0 - rs.productivity_spread,
                                       1.0 + rs.productivity_spread);
        f.unit_cost = rs.wage / f.productivity;
        f.price = (1.0 + rs.markup) * f.unit_cost;
        f.capital = rs.capital_init;
        f.expected_sales = rs.expected_sales_init;
        f.demand_units = rs.expected_sales_init;
        f.deposits = rs.deposits_init_firm;
        f.bank = s.n_commercial + static_cast<int>(s.rng.index(s.n_business));
        s.banks[f.bank].deposits += f.deposits;
        s.firm_nw[fi] = f.deposits + f.capital;
    }

    s.households.resize(cfg.population.households);
    s.household_nw.resize(cfg.population.households);
    for (int h = 0; h < cfg.population.households; ++h) {
        auto& hh = s.households[h];
        hh.deposits = rs.deposits_init_household;
        hh.expected_income = rs.wage;
        hh.propensity_income =
            std::max(0.0, s.rng.uniform(rs.propensity_income - rs.propensity_income_spread,
                                        rs.propensity_income + rs.propensity_income_spread));
        hh.employer = h % cfg.population.firms;
        s.workers[hh.employer].push_back(h);
        hh.bank = static_cast<int>(s.rng.index(s.n_commercial));
        s.banks[hh.bank].deposits += hh.deposits;
        hh.supplier = static_cast<int>(s.rng.index(cfg.population.firms));
        s.household_nw[h] = hh.deposits;
    }

    // with no loans outstanding, zero-net-worth banks and central bank force
    // the opening bills stock to back the private deposits one for one
    auto& gov = s.government;
    double deposits_total = 0.0;
    for (const auto& b : s.banks) deposits_total += b.deposits;
    gov.bills_outstanding = deposits_total;
    gov.net_worth = -gov.bills_outstanding;
    gov.taxes_prev = rs.tax_rate * rs.wage * cfg.population.households;
    s.gdp_ma = cfg.government.gdp_init_guess;

    for (auto& b : s.banks) b.reserves = banking::required_reserves(b.deposits, s.rates);
    event_securities(s);
    return s;
}

ledger::AuditReport step(EconomyState& s, const RunConfig& cfg) {
    s.period += 1;
    const PrevSnapshot prev = snapshot(s);
    experiments::apply_shocks(cfg.shock, s.period, s.rates, s.market);

    for (auto& hh : s.households) hh.stash_income();
    begin_period(s);
    settle_carryover(s, cfg, prev);
    event_pricing(s, cfg);
    event_production(s, cfg);
    event_goods_market(s, cfg);
    event_credit_market(s, cfg);
    event_interbank(s, cfg, prev);
    event_securities(s);
    update_gdp(s, cfg);
    s.government.taxes_prev = s.government.taxes;

    const auto matrix = ledger::assemble_matrix(s);
    auto report = ledger::audit(matrix, cfg.audit.tolerance);
    if (!report.pass && cfg.audit.halt_on_fail) {
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            ledger::dump_matrix(matrix, report,
                                fmt::format("{}/audit_failure_t{}.csv", cfg.out_dir, s.period));
        }
        throw AuditFailure(s.period, report.max_residual,
                           fmt::format("audit failed at period {} with residual {:.3e}",
                                       s.period, report.max_residual));
    }
    return report;
}

namespace {

void record(analytics::TimeSeriesFrame& frame, const EconomyState& s,
            const ledger::AuditReport& audit_rep) {
    const auto& book = s.book;
    auto push = [&](const std::string& name, double v) { frame.col(name).push_back(v); };

    push("demand_on", book.demand_on);
    push("demand_term", book.demand_term);
    push("supply_on", book.supply_on);
    push("supply_term", book.supply_term);
    push("settled_on", book.settled_on);
    push("settled_term", book.settled_term);
    push("rate_on", book.rate_on);
    push("rate_term", book.rate_term);
    push("gamma_on", book.rationing_on);
    push("gamma_term", book.rationing_term);
    push("gamma_matched_on", book.rationing_matched_on);
    push("gamma_matched_term", book.rationing_matched_term);
    push("facility_loans", book.facility_loans);
    push("facility_deps", book.facility_deps);

    double flows_abs = 0.0, flows_sum = 0.0;
    double ms_sum = 0.0, asf_sum = 0.0, rsf_sum = 0.0;
    double ms_deficit = 0.0, ms_surplus = 0.0;
    int n_deficit = 0, n_surplus = 0, n_below = 0;
    double pref_b = 0.0, pref_l = 0.0;
    double loans_deficit = 0.0, loans_surplus = 0.0;
    double bank_loans = 0.0, bank_deposits = 0.0, bank_advances = 0.0, bank_bills = 0.0;
    for (const auto& b : s.banks) {
        flows_abs += std::abs(b.flow);
        flows_sum += b.flow;
        // stats cap: degenerate books make the raw ratio explode
        const double ms = std::clamp(std::isfinite(b.profile.margin) ? b.profile.margin : 10.0,
                                     0.0, 10.0);
        ms_sum += ms;
        asf_sum += b.profile.asf;
        rsf_sum += b.profile.rsf;
        if (b.profile.margin < 1.0) ++n_below;
        if (b.status == BankStatus::deficit) {
            ms_deficit += ms;
            loans_deficit += b.loans;
            pref_b += b.split.preference;
            ++n_deficit;
        } else if (b.status == BankStatus::surplus) {
            ms_surplus += ms;
            loans_surplus += b.loans;
            pref_l += b.split.preference;
            ++n_surplus;
        }
        bank_loans += b.loans;
        bank_deposits += b.deposits;
        bank_advances += b.advances;
        bank_bills += b.bills;
    }
    const int n_banks = static_cast<int>(s.banks.size());
    push("flows_abs", flows_abs);
    push("flows_sum", flows_sum);
    push("ms_mean", ms_sum / n_banks);
    push("ms_deficit", n_deficit > 0 ? ms_deficit / n_deficit : 0.0);
    push("ms_surplus", n_surplus > 0 ? ms_surplus / n_surplus : 0.0);
    push("ms_below_one_share", static_cast<double>(n_below) / n_banks);
    push("asf_mean", asf_sum / n_banks);
    push("rsf_mean", rsf_sum / n_banks);
    push("pref_b_mean", n_deficit > 0 ? pref_b / n_deficit : 0.0);
    push("pref_l_mean", n_surplus > 0 ? pref_l / n_surplus : 0.0);
    push("loans_deficit", loans_deficit);
    push("loans_surplus", loans_surplus);
    push("n_borrowers", book.n_borrowers);
    push("n_lenders", book.n_lenders);
    push("n_matched", book.n_matched);

    double output_units = 0.0, consumption = 0.0, wages = 0.0;
    for (const auto& f : s.firms) {
        output_units += f.output;
        consumption += f.revenue;
        wages += f.wage_bill;
    }
    push("output", output_units);
    push("consumption", consumption);
    push("wage_bill", wages);
    push("gdp", s.gdp);
    push("bank_loans", bank_loans);
    push("bank_deposits", bank_deposits);
    push("bank_advances", bank_advances);
    push("bank_bills", bank_bills);
    double hh_loans = 0.0, hh_deposits = 0.0, hh_income = 0.0;
    for (const auto& h : s.households) {
        hh_loans += h.loans;
        hh_deposits += h.deposits;
        hh_income += h.income;
    }
    double firm_loans = 0.0, firm_deposits = 0.0, inventories = 0.0;
    for (const auto& f : s.firms) {
        firm_loans += f.loans;
        firm_deposits += f.deposits;
        inventories += f.inventory;
    }
    double ms_comm = 0.0, ms_bus = 0.0, loans_comm = 0.0, loans_bus = 0.0;
    double deps_comm = 0.0, deps_bus = 0.0, flow_comm = 0.0;
    int below_comm = 0, below_bus = 0;
    for (const auto& b : s.banks) {
        const double ms = std::clamp(std::isfinite(b.profile.margin) ? b.profile.margin : 10.0,
                                     0.0, 10.0);
        if (b.kind == BankKind::commercial) {
            ms_comm += ms;
            loans_comm += b.loans;
            deps_comm += b.deposits;
            flow_comm += b.flow;
            if (b.profile.margin < 1.0) ++below_comm;
        } else {
            ms_bus += ms;
            loans_bus += b.loans;
            deps_bus += b.deposits;
            if (b.profile.margin < 1.0) ++below_bus;
        }
    }
    push("ms_commercial", ms_comm / s.n_commercial);
    push("ms_business", ms_bus / s.n_business);
    push("loans_commercial", loans_comm);
    push("loans_business", loans_bus);
    push("deposits_commercial", deps_comm);
    push("deposits_business", deps_bus);
    push("flow_commercial", flow_comm);
    push("below_commercial", below_comm);
    push("below_business", below_bus);
    push("hh_loans", hh_loans);
    push("hh_deposits", hh_deposits);
    push("hh_income", hh_income);
    push("firm_loans", firm_loans);
    push("firm_deposits", firm_deposits);
    push("inventories", inventories);
    push("transfers", s.government.transfers);
    push("taxes", s.government.taxes);
    push("gov_bills", s.government.bills_outstanding);
    push("theta", s.theta);
    push("lbw", s.lbw);
    push("pdu", s.market.pdu);
    push("icb_d", s.rates.icb_d);
    push("icb_l", s.rates.icb_l);
    push("audit_residual", audit_rep.max_residual);
}

} // namespace

RunResult run_single(const RunConfig& cfg, int replicate, const std::string& audit_csv) {
    RunResult result;
    result.frame.replicate = replicate;
    EconomyState state = init_economy(cfg, cfg.seed + static_cast<std::uint64_t>(replicate));
    for (int t = 1; t <= cfg.steps; ++t) {
        ledger::AuditReport rep;
        try {
            rep = step(state, cfg);
        } catch (const AuditFailure& e) {
            result.audit_ok = false;
            result.failed_period = e.period;
            break;
        }
        if (!rep.pass) {
            result.audit_ok = false;
            result.failed_period = state.period;
        }
        record(result.frame, state, rep);
        if (!audit_csv.empty()) ledger::append_audit_csv(audit_csv, rep, t == 1);
    }
    return result;
}

EnsembleResult run_ensemble(const RunConfig& cfg) {
    cfg.validate();
    EnsembleResult out;
    out.ensemble.frames.resize(cfg.replicates);
    std::vector<char> failed(cfg.replicates, 0);

    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, cfg.replicates));

    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int r = next.fetch_add(1);
            if (r >= cfg.replicates) break;
            try {
                auto res = run_single(cfg, r);
                out.ensemble.frames[r] = std::move(res.frame);
                failed[r] = res.audit_ok ? 0 : 1;
            } catch (const std::exception&) {
                failed[r] = 1;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (int r = 0; r < cfg.replicates; ++r)
        if (failed[r]) out.failed_replicates.push_back(r);
    return out;
}

void dump_state(const EconomyState& s, const std::string& path) {
    nlohmann::json j;
    j["period"] = s.period;
    j["rates"] = {{"icb_d", s.rates.icb_d}, {"icb_l", s.rates.icb_l},
                  {"icb_t", s.rates.icb_t()}};
    j["pdu"] = s.market.pdu;
    j["rate_on"] = s.rate_on;
    j["rate_term"] = s.rate_term;
    j["gdp"] = s.gdp;
    j["government"] = {{"bills", s.government.bills_outstanding},
                       {"bonds", s.government.bonds_outstanding},
                       {"net_worth", s.government.net_worth}};
    j["central_bank"] = {{"bills", s.central_bank.bills},
                         {"reserves", s.central_bank.reserves_liab},
                         {"advances", s.central_bank.advances}};
    auto& banks = j["banks"] = nlohmann::json::array();
    for (const auto& b : s.banks) {
        banks.push_back({{"kind", to_string(b.kind)},
                         {"loans", b.loans},
                         {"deposits", b.deposits},
                         {"reserves", b.reserves},
                         {"excess_reserves", b.excess_reserves},
                         {"bills", b.bills},
                         {"bonds", b.bonds},
                         {"advances", b.advances},
                         {"facility_loan", b.facility_loan},
                         {"facility_dep", b.facility_dep},
                         {"flow", b.flow},
                         {"status", to_string(b.status)},
                         {"margin", b.profile.margin},
                         {"funding_cost", b.funding_cost}});
    }
    auto& hh = j["household_totals"];
    double d = 0.0, l = 0.0;
    for (const auto& h : s.households) {
        d += h.deposits;
        l += h.loans;
    }
    hh = {{"deposits", d}, {"loans", l}};
    double fd = 0.0, fl = 0.0, inv = 0.0, k = 0.0;
    for (const auto& f : s.firms) {
        fd += f.deposits;
        fl += f.loans;
        inv += f.inventory * f.unit_cost;
        k += f.capital;
    }
    j["firm_totals"] = {{"deposits", fd}, {"loans", fl}, {"inventories", inv}, {"capital", k}};

    std::ofstream outfile(path);
    if (!outfile) throw std::runtime_error("engine: cannot open " + path);
    outfile << j.dump(2) << "\n";
}

} // namespace engine
} // namespace absfc
