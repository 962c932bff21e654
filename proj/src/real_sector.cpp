#include "absfc/real_sector.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace absfc {
namespace real_sector {

double update_price(double unit_cost_prev, double markup) {
    return (1.0 + markup) * unit_cost_prev;
}

ProductionPlan plan_production(double expected_sales, double inventory,
                               double inventory_target_share, double unit_cost,
                               double desired_investment, double deposits,
                               double deposit_buffer, double debt_service) {
    ProductionPlan p;
    p.output = std::max(0.0, expected_sales * (1.0 + inventory_target_share) - inventory);
    p.wage_bill = p.output * unit_cost;
    // only a positive balance cushions the outlays; an overdraft does not
    // count as spendable funds
    p.credit_demand = std::max(0.0, p.wage_bill + desired_investment + debt_service -
                                        std::max(0.0, deposits) * (1.0 - deposit_buffer));
    return p;
}

double update_expectation(double expected, double realized, double gain) {
    return expected + gain * (realized - expected);
}

double switch_probability(double x_current, double x_candidate, double epsilon) {
    if (!(x_candidate < x_current) || x_current <= 0.0) return 0.0;
    return 1.0 - std::exp(epsilon * (x_candidate - x_current) / x_current);
}

int choose_partner(int current, int n_suppliers,
                   const std::function<double(int)>& price_of, int subset_size,
                   double epsilon, Rng& rng) {
    if (n_suppliers <= 0) return current;
    if (current < 0) return static_cast<int>(rng.index(n_suppliers));

    // uniform random subset of observed suppliers, current excluded,
    // sampled without replacement
    int cheapest = -1;
    double cheapest_x = 0.0;
    const int pool = n_suppliers - 1;
    const int draws = std::min(subset_size, pool);
    std::vector<int> seen;
    seen.reserve(draws);
    while (static_cast<int>(seen.size()) < draws) {
        const int i = static_cast<int>(rng.index(n_suppliers));
        if (i == current) continue;
        if (std::find(seen.begin(), seen.end(), i) != seen.end()) continue;
        seen.push_back(i);
        const double x = price_of(i);
        if (cheapest < 0 || x < cheapest_x) {
            cheapest = i;
            cheapest_x = x;
        }
    }
    if (cheapest < 0) return current;

    const double p = switch_probability(price_of(current), cheapest_x, epsilon);
    if (p > 0.0 && rng.uniform() < p) return cheapest;
    return current;
}

ConsumptionPlan consume_and_tax(double expected_income, double deposits,
                                double wage, double tax_rate,
                                double propensity_income, double propensity_wealth,
                                double loans, double leverage_cap) {
    ConsumptionPlan plan;
    plan.taxes = tax_rate * wage;
    const double after_tax_deposits = std::max(0.0, deposits - plan.taxes);
    plan.desired = propensity_income * expected_income +
                   propensity_wealth * after_tax_deposits;
    plan.desired = std::max(0.0, plan.desired);
    const double credit_room = std::max(0.0, leverage_cap * expected_income - loans);
    plan.budget = after_tax_deposits + credit_room;
    plan.spending = std::min(plan.desired, plan.budget);
    return plan;
}

} // namespace real_sector
} // namespace absfc
