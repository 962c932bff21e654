#pragma once

#include <functional>
#include <span>

#include "absfc/rng.hpp"
#include "absfc/types.hpp"

namespace absfc {
namespace real_sector {

/// Markup pricing over last period's unit direct cost.
double update_price(double unit_cost_prev, double markup);

struct ProductionPlan {
    double output = 0.0;       // units for the market
    double wage_bill = 0.0;    // cost of market output
    double credit_demand = 0.0;
};

/// Output targets expected sales plus an inventory buffer; credit covers the
/// outlays, including the period's debt service, not backed by the deposit
/// share the firm is willing to run down.
ProductionPlan plan_production(double expected_sales, double inventory,
                               double inventory_target_share, double unit_cost,
                               double desired_investment, double deposits,
                               double deposit_buffer, double debt_service = 0.0);

/// Adaptive expectation update.
double update_expectation(double expected, double realized, double gain);

/// Probability of switching to a cheaper supplier under intensity of
/// choice `epsilon`; zero when the candidate is not strictly cheaper.
double switch_probability(double x_current, double x_candidate, double epsilon);

/// Common matching protocol of the goods and credit markets: observe the
/// price/rate of a random subset of suppliers and possibly adopt the
/// cheapest. `price_of(i)` must be valid for i in [0, n_suppliers).
int choose_partner(int current, int n_suppliers,
                   const std::function<double(int)>& price_of, int subset_size,
                   double epsilon, Rng& rng);

struct ConsumptionPlan {
    double desired = 0.0;   // spending target before affordability
    double budget = 0.0;    // deposits plus available new credit
    double spending = 0.0;  // min of the two
    double taxes = 0.0;
};

/// Consumption out of expected income and deposit wealth, taxed wages, and
/// the leverage-capped credit line.
ConsumptionPlan consume_and_tax(double expected_income, double deposits,
                                double wage, double tax_rate,
                                double propensity_income, double propensity_wealth,
                                double loans, double leverage_cap);

} // namespace real_sector
} // namespace absfc
