#pragma once

#include <span>
#include <vector>

#include "absfc/rng.hpp"
#include "absfc/types.hpp"

namespace absfc {
namespace interbank {

/// Previous-period stocks entering the stable-funding computation.
struct NsfrStocks {
    double loans = 0.0;
    double reserves = 0.0;
    double bills = 0.0;
    double bonds = 0.0;
    double ib_lent_on = 0.0;
    double ib_lent_term = 0.0;
    double facility_dep = 0.0;
    double deposits = 0.0;
    double ib_borrowed_on = 0.0;
    double ib_borrowed_term = 0.0;
    double facility_loan = 0.0;
    double npl = 0.0;
    double advances = 0.0;
};

NsfrStocks nsfr_stocks_of(const BankState& prev);

/// NSFR components and the margin of stability. Household loans count as
/// medium-maturity assets for commercial banks while firm credit is short
/// for business banks; the weights grade the rest by residual maturity.
/// Degenerate books: no required stable funding with positive available
/// funding is treated as maximal stability, an entirely empty comparison
/// as exactly neutral.
StabilityProfile nsfr_components(const NsfrStocks& stocks, BankKind kind,
                                 const NsfrWeights& weights);

/// Borrowers' money-market conditions parameter.
double theta(double a0, double rate_on_prev, double rate_term_prev,
             const PolicyRates& rates, double pdu);

/// Lenders' counterpart, rewarding overnight placements under stress.
double lbw(double a0, double rate_on_prev, double rate_term_prev,
           const PolicyRates& rates, double pdu);

/// Maturity split of a deficit bank's demand. Unstable banks are shut out
/// of the overnight segment; stable ones draw a uniform target below their
/// actual overnight borrowing ratio.
MaturitySplit borrower_split(double demand, const StabilityProfile& profile,
                             double theta_t, Rng& rng);

/// Mirror image for a surplus bank's loanable funds.
MaturitySplit lender_split(double supply, const StabilityProfile& profile,
                           double lbw_t, Rng& rng);

/// Per-bank view handed to the matching protocols.
struct Side {
    int bank = -1;
    double total = 0.0;  // DF or LF
    double on = 0.0;
    double term = 0.0;
    double stability_score = 0.0;  // asf for borrowers, margin for lenders
};

/// Accommodating protocol: borrowers processed in random order pick the
/// largest-supply free lender able to cover their full demand, which is then
/// served at the borrower's own maturity split. Borrowers no lender can
/// cover stay unmatched and fall back to the central bank.
SegmentBook match_baseline(std::vector<Side> borrowers, std::vector<Side> lenders,
                           Rng& rng);

/// Maturity-driven protocol: borrowers pick the free lender with the closest
/// stability distance |(1 - MS_lender) - (1 - asf_borrower)| and each segment
/// settles on the short side of the pair. Residual demand is not re-queued.
SegmentBook match_maturity(std::vector<Side> borrowers, std::vector<Side> lenders,
                           Rng& rng);

/// Logistic map of a segment's excess demand into the open corridor.
double clear_rate(double excess, const PolicyRates& rates, double sigma_ib);

/// Average funding cost over the rates actually borne this period: the
/// target rate always, segment rates when borrowed there, the ceiling when
/// the lending facility was tapped.
double funding_cost(bool borrowed_on, bool borrowed_term, bool used_lending_facility,
                    double rate_on, double rate_term, const PolicyRates& rates);

/// Gamma: unmet share of a segment's demand; zero on an empty segment.
double rationing(double settled_liabilities, double demand);

} // namespace interbank
} // namespace absfc
