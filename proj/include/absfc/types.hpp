#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace absfc {

enum class BankKind { commercial, business };
enum class BankStatus { deficit, surplus, neutral };
enum class Scenario { baseline, maturity };
enum class ShockKind { missing, corridor, width, uncertainty };

std::string to_string(BankKind k);
std::string to_string(BankStatus s);
std::string to_string(Scenario s);
std::string to_string(ShockKind k);
Scenario scenario_from_string(const std::string& s);
ShockKind shock_from_string(const std::string& s);

/// Central-bank corridor and securities rates, plus the reserve-requirement
/// ratio split (mu on deposits held as vault reserves, v matched by advances).
struct PolicyRates {
    double icb_d = 0.005;  // deposit facility (floor)
    double icb_l = 0.015;  // lending facility (ceiling)
    double bills_rate = 0.010;
    double bonds_rate = 0.012;
    double mu = 0.002;
    double v = 0.002;

    /// Corridor midpoint; the corridor is symmetric around the target.
    double icb_t() const { return 0.5 * (icb_l + icb_d); }
    double half_width() const { return 0.5 * (icb_l - icb_d); }
    double reserve_ratio() const { return mu + v; }
};

/// NSFR maturity weights. m1..m3 grade assets by residual maturity,
/// m4..m5 grade liabilities by stability.
struct NsfrWeights {
    double m1 = 0.10;  // short assets: firm loans, overnight interbank claims
    double m2 = 0.50;  // medium assets: household loans, bills, term interbank claims
    double m3 = 0.05;  // long assets: government bonds
    double m4 = 0.90;  // deposits
    double m5 = 0.50;  // term interbank liabilities
};

/// Money-market environment shared by all banks within a period.
struct MarketParams {
    double pdu = 0.0;       // perceived degree of uncertainty
    double sigma_ib = 2.5;  // slope of the logistic rate-clearing map
    double a0_lo = 0.0;     // support of the per-period uniform draw a0
    double a0_hi = 1.0;
};

/// Per-bank stable-funding profile, evaluated on previous-period stocks.
struct StabilityProfile {
    double assets_total = 0.0;  // AM: unweighted stable-funding-relevant assets
    double liabs_total = 0.0;   // LM: unweighted liabilities
    double rsf = 0.0;           // b_m: required stable funding share of AM
    double asf = 0.0;           // a_m: available stable funding share of LM
    double margin = 1.0;        // MS = asf*LM / (rsf*AM)

    double borrowing_ratio() const { return 1.0 - asf; }  // BOR
    double lending_ratio() const { return 1.0 - rsf; }    // LOR
};

/// Outcome of a maturity split on one side of the market.
struct MaturitySplit {
    double on = 0.0;
    double term = 0.0;
    double target_ratio = 0.0;  // BOR^T or LOR^T
    double preference = 0.0;    // Pi^b or Pi^l
};

struct Household {
    double deposits = 0.0;
    double loans = 0.0;
    double expected_income = 0.0;
    double propensity_income = 0.8;  // alpha1, possibly dispersed per agent
    int employer = -1;
    int bank = -1;
    int supplier = -1;
    // per-period flow records
    double wage = 0.0;
    double consumption = 0.0;  // actual spend, the C of the payment flow
    double taxes = 0.0;
    double income = 0.0;       // realized disposable income, accumulating
    double income_last = 0.0;  // previous period's realized income

    void stash_income() { income_last = income; }
    double income_prev() const { return income_last; }
};

struct Firm {
    double deposits = 0.0;
    double loans = 0.0;
    double capital = 0.0;
    double inventory = 0.0;      // units, valued at unit_cost
    double productivity = 1.0;   // output per worker
    double unit_cost = 1.0;      // wage / productivity, carried forward
    double price = 1.2;
    double expected_sales = 0.0;  // units
    int bank = -1;
    // per-period flow records
    double output = 0.0;        // units produced for the market
    double wage_bill = 0.0;     // the W of the payment flow
    double sales = 0.0;         // units sold
    double demand_units = 0.0;  // units customers asked for, before rationing
    double revenue = 0.0;       // the C of the payment flow
    double credit_demand = 0.0;
    double debt_service = 0.0;  // interest plus amortization due this period
    double interest_paid = 0.0;
    double interest_received = 0.0;
    double bank_dividend = 0.0;
};

/// One bank's balance sheet and per-period interbank position.
/// The bills/advances pair is the buffer that keeps net worth at zero.
struct BankState {
    BankKind kind = BankKind::commercial;
    double loans = 0.0;
    double deposits = 0.0;
    double reserves = 0.0;         // required high-powered money, (mu+v)*D
    double excess_reserves = 0.0;  // holdings above requirement when the bills cap binds
    double bills = 0.0;
    double bonds = 0.0;            // long-term bonds received against written-off loans
    double advances = 0.0;
    double facility_loan = 0.0;    // R^l, lending-facility borrowings
    double facility_dep = 0.0;     // R^d, deposit-facility placements
    double npl = 0.0;              // this period's written-off loans
    double ib_lent_on = 0.0;       // IBA stocks from this period's matches
    double ib_lent_term = 0.0;
    double ib_borrowed_on = 0.0;   // IBL stocks
    double ib_borrowed_term = 0.0;
    double loan_rate = 0.0;
    double deposit_rate = 0.0;
    double funding_cost = 0.0;     // zeta
    // per-period interbank state
    double flow = 0.0;  // f, net payment flow of the customer set
    BankStatus status = BankStatus::neutral;
    double demand = 0.0;  // DF
    double supply = 0.0;  // LF
    double demand_on = 0.0, demand_term = 0.0;
    double supply_on = 0.0, supply_term = 0.0;
    StabilityProfile profile;
    MaturitySplit split;
    bool matched = false;
};

struct Government {
    double bills_outstanding = 0.0;  // B
    double bonds_outstanding = 0.0;  // B^lr, equals the period's absorbed NPL
    double net_worth = 0.0;          // -GD, tracked through budget flows
    double taxes = 0.0;              // current-period receipts
    double taxes_prev = 0.0;
    double transfers = 0.0;
    double interest_paid = 0.0;
    double redemption_paid = 0.0;
    double cb_remittance = 0.0;
};

struct CentralBank {
    double reserves_liab = 0.0;  // required + excess reserves of all banks
    double advances = 0.0;
    double bills = 0.0;          // Bcb, residual bills absorption
    double facility_loans = 0.0;
    double facility_deps = 0.0;
};

/// One settled lender-borrower pair, amounts per segment.
struct Match {
    int lender = -1;
    int borrower = -1;
    double amount_on = 0.0;
    double amount_term = 0.0;
};

/// Per-period record of the interbank session.
struct SegmentBook {
    std::vector<Match> matches;
    double demand_on = 0.0, demand_term = 0.0;  // pre-settlement totals
    double supply_on = 0.0, supply_term = 0.0;
    double settled_on = 0.0, settled_term = 0.0;
    double excess_on = 0.0, excess_term = 0.0;  // epsilon per segment
    double rate_on = 0.0, rate_term = 0.0;
    double rationing_on = 0.0, rationing_term = 0.0;  // Gamma per segment
    double rationing_matched_on = 0.0, rationing_matched_term = 0.0;
    double facility_loans = 0.0, facility_deps = 0.0;
    int n_borrowers = 0, n_lenders = 0, n_matched = 0;
};

} // namespace absfc
