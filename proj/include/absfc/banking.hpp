#pragma once

#include <span>
#include <utility>

#include "absfc/types.hpp"

namespace absfc {
namespace banking {

/// Required reserves on current deposits: (mu + v) * D.
double required_reserves(double deposits, const PolicyRates& rates);

struct BufferResult {
    double bills = 0.0;
    double advances = 0.0;
    double excess_reserves = 0.0;
};

/// Bills-and-advances buffer closing the bank's books at zero net worth.
/// `loans_pre_writedown` is the loan book before this period's write-off,
/// i.e. current loans plus the transferred NPL. When the residual resources
/// are negative, bills are zero and advances take over; when the issuance
/// cap binds, the surplus parks as excess reserves.
BufferResult bills_and_advances(double deposits, double npl, double facility_loan,
                                double loans_pre_writedown, double bonds,
                                double facility_dep, double issued_bills_per_bank,
                                const PolicyRates& rates);

struct NplTransfer {
    double npl = 0.0;
    double loans_after = 0.0;
    double bonds = 0.0;
};

/// Writes off the non-performing share l of the loan stock and books the
/// matching long-term bond received from the government.
NplTransfer transfer_npl(double loans, double npl_share);

/// Inputs of the profit equation, all previous-period stocks and rates.
struct ProfitInputs {
    double loans = 0.0;
    double reserves = 0.0;
    double bills = 0.0;
    double bonds = 0.0;
    double facility_dep = 0.0;
    double deposits = 0.0;
    double advances = 0.0;
    double facility_loan = 0.0;
    double loan_rate = 0.0;
    double deposit_rate = 0.0;
};

/// Interest received on loans, reserves, bills, bonds and facility deposits
/// minus interest paid on deposits, advances and facility borrowings.
double profits(const ProfitInputs& in, const PolicyRates& rates);

/// Net payment flow of a customer set given (consumption, wage) pairs.
/// Commercial banks book C - W per customer, business banks W - C.
double payment_flow(BankKind kind, std::span<const std::pair<double, double>> customer_cw);

struct Position {
    BankStatus status = BankStatus::neutral;
    double demand = 0.0;  // DF
    double supply = 0.0;  // LF
};

/// Interbank role from the payment flow and the change in required reserves.
/// Deficit banks demand |f| - dHPM, surplus banks can place f - dHPM; both
/// clamp at zero.
Position interbank_position(double flow, double delta_reserves);

/// Mark-up / mark-down rule on previous-period funding costs.
std::pair<double, double> update_credit_rates(double funding_cost_prev,
                                              double loan_markup,
                                              double deposit_markdown);

} // namespace banking
} // namespace absfc
