#include "absfc/banking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace absfc {
namespace banking {

double required_reserves(double deposits, const PolicyRates& rates) {
    return rates.reserve_ratio() * deposits;
}

BufferResult bills_and_advances(double deposits, double npl, double facility_loan,
                                double loans_pre_writedown, double bonds,
                                double facility_dep, double issued_bills_per_bank,
                                const PolicyRates& rates) {
    BufferResult out;
    const double resources = deposits + npl + facility_loan - loans_pre_writedown -
                             rates.mu * deposits - bonds - facility_dep;
    const double bills = std::min(resources, issued_bills_per_bank);
    if (bills < 0.0) {
        out.bills = 0.0;
        const double reserves = required_reserves(deposits, rates);
        out.advances = loans_pre_writedown + facility_dep + reserves + bonds -
                       deposits - npl - facility_loan;
        if (out.advances < -1e-9)
            throw std::runtime_error(fmt::format(
                "banking: negative advances {} from the takeover branch", out.advances));
        out.advances = std::max(0.0, out.advances);
    } else {
        out.bills = bills;
        out.advances = rates.v * deposits;
        out.excess_reserves = std::max(0.0, resources - issued_bills_per_bank);
    }
    return out;
}

NplTransfer transfer_npl(double loans, double npl_share) {
    NplTransfer t;
    t.npl = npl_share * loans;
    t.loans_after = loans - t.npl;
    t.bonds = t.npl;
    return t;
}

double profits(const ProfitInputs& in, const PolicyRates& rates) {
    return in.loan_rate * in.loans + rates.icb_t() * in.reserves +
           rates.bills_rate * in.bills + rates.bonds_rate * in.bonds +
           rates.icb_d * in.facility_dep - in.deposit_rate * in.deposits -
           rates.icb_t() * in.advances - rates.icb_l * in.facility_loan;
}

double payment_flow(BankKind kind, std::span<const std::pair<double, double>> customer_cw) {
    double f = 0.0;
    for (const auto& [c, w] : customer_cw)
        f += (kind == BankKind::commercial) ? (c - w) : (w - c);
    return f;
}

Position interbank_position(double flow, double delta_reserves) {
    Position p;
    if (flow < 0.0) {
        p.status = BankStatus::deficit;
        p.demand = std::max(0.0, std::abs(flow) - delta_reserves);
    } else if (flow > 0.0) {
        p.status = BankStatus::surplus;
        p.supply = std::max(0.0, flow - delta_reserves);
    }
    return p;
}

std::pair<double, double> update_credit_rates(double funding_cost_prev,
                                              double loan_markup,
                                              double deposit_markdown) {
    const double loan_rate = std::max(0.0, funding_cost_prev * (1.0 + loan_markup));
    const double deposit_rate = std::max(0.0, funding_cost_prev * (1.0 - deposit_markdown));
    return {loan_rate, deposit_rate};
}

} // namespace banking
} // namespace absfc
