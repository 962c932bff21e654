#include "absfc/interbank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace absfc {
namespace interbank {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

NsfrStocks nsfr_stocks_of(const BankState& b) {
    NsfrStocks s;
    s.loans = b.loans;
    s.reserves = b.reserves;
    s.bills = b.bills;
    s.bonds = b.bonds;
    s.ib_lent_on = b.ib_lent_on;
    s.ib_lent_term = b.ib_lent_term;
    s.facility_dep = b.facility_dep;
    s.deposits = b.deposits;
    s.ib_borrowed_on = b.ib_borrowed_on;
    s.ib_borrowed_term = b.ib_borrowed_term;
    s.facility_loan = b.facility_loan;
    s.npl = b.npl;
    s.advances = b.advances;
    return s;
}

StabilityProfile nsfr_components(const NsfrStocks& s, BankKind kind,
                                 const NsfrWeights& w) {
    StabilityProfile p;
    p.assets_total = s.loans + s.reserves + s.bills + s.bonds + s.ib_lent_on +
                     s.ib_lent_term + s.facility_dep;
    p.liabs_total = s.deposits + s.ib_borrowed_on + s.ib_borrowed_term +
                    s.facility_loan + s.npl + s.advances;

    double rsf_weighted;
    if (kind == BankKind::commercial) {
        rsf_weighted = w.m1 * s.ib_lent_on +
                       w.m2 * (s.loans + s.bills + s.ib_lent_term) + w.m3 * s.bonds;
    } else {
        rsf_weighted = w.m1 * (s.loans + s.ib_lent_on) +
                       w.m2 * (s.bills + s.ib_lent_term) + w.m3 * s.bonds;
    }
    const double asf_weighted = w.m4 * s.deposits + w.m5 * s.ib_borrowed_term;

    p.rsf = p.assets_total > 0.0 ? rsf_weighted / p.assets_total : 0.0;
    p.asf = p.liabs_total > 0.0 ? asf_weighted / p.liabs_total : 0.0;

    if (rsf_weighted > 0.0) {
        p.margin = asf_weighted / rsf_weighted;
    } else {
        // a bank with no required stable funding is maximally stable; an
        // entirely empty comparison counts as exactly meeting the requirement
        p.margin = asf_weighted > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    return p;
}

double theta(double a0, double rate_on_prev, double rate_term_prev,
             const PolicyRates& rates, double pdu) {
    return a0 + (rates.icb_l - rate_on_prev) + (rate_term_prev - rate_on_prev) - pdu;
}

double lbw(double a0, double rate_on_prev, double rate_term_prev,
           const PolicyRates& rates, double pdu) {
    return a0 + pdu + (rate_on_prev - rates.icb_d) - (rate_term_prev - rate_on_prev);
}

MaturitySplit borrower_split(double demand, const StabilityProfile& profile,
                             double theta_t, Rng& rng) {
    MaturitySplit out;
    const double bor = profile.borrowing_ratio();
    if (profile.margin < 1.0) {
        out.target_ratio = bor;  // target met by construction: no overnight entry
    } else {
        out.target_ratio = rng.uniform(0.0, std::max(0.0, bor));
    }
    out.preference = bor - out.target_ratio;
    out.on = demand * clamp01(theta_t * out.preference);
    out.term = demand - out.on;
    return out;
}

MaturitySplit lender_split(double supply, const StabilityProfile& profile,
                           double lbw_t, Rng& rng) {
    MaturitySplit out;
    const double lor = profile.lending_ratio();
    if (profile.margin >= 1.0) {
        out.target_ratio = lor;  // stable banks lengthen their asset side
    } else {
        out.target_ratio = rng.uniform(0.0, std::max(0.0, lor));
    }
    out.preference = lor - out.target_ratio;
    out.on = supply * clamp01(lbw_t * out.preference);
    out.term = supply - out.on;
    return out;
}

namespace {

void shuffle_order(std::vector<int>& order, Rng& rng) {
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.index(i)]);
}

void fill_totals(SegmentBook& book, const std::vector<Side>& borrowers,
                 const std::vector<Side>& lenders) {
    for (const auto& b : borrowers) {
        book.demand_on += b.on;
        book.demand_term += b.term;
    }
    for (const auto& l : lenders) {
        book.supply_on += l.on;
        book.supply_term += l.term;
    }
    book.n_borrowers = static_cast<int>(borrowers.size());
    book.n_lenders = static_cast<int>(lenders.size());
}

} // namespace

SegmentBook match_baseline(std::vector<Side> borrowers, std::vector<Side> lenders,
                           Rng& rng) {
    SegmentBook book;
    fill_totals(book, borrowers, lenders);

    std::vector<int> order(borrowers.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle_order(order, rng);

    std::vector<bool> lender_used(lenders.size(), false);
    double matched_demand_on = 0.0, matched_demand_term = 0.0;

    for (int bi : order) {
        const Side& b = borrowers[bi];
        if (b.total <= 0.0) continue;
        int pick = -1;
        double best = -1.0;
        for (std::size_t li = 0; li < lenders.size(); ++li) {
            if (lender_used[li]) continue;
            if (lenders[li].total >= b.total && lenders[li].total > best) {
                best = lenders[li].total;
                pick = static_cast<int>(li);
            }
        }
        if (pick < 0) continue;  // nobody can accommodate in full
        lender_used[pick] = true;
        Match m;
        m.lender = lenders[pick].bank;
        m.borrower = b.bank;
        m.amount_on = b.on;  // the lender serves the borrower's own split
        m.amount_term = b.term;
        book.matches.push_back(m);
        book.settled_on += m.amount_on;
        book.settled_term += m.amount_term;
        matched_demand_on += b.on;
        matched_demand_term += b.term;
        ++book.n_matched;
    }

    // accommodating lenders leave no disequilibrium to price; unserved
    // borrowers are refinanced by the central bank instead
    book.excess_on = book.settled_on - matched_demand_on;
    book.excess_term = book.settled_term - matched_demand_term;
    book.rationing_matched_on =
        rationing(book.settled_on, matched_demand_on);
    book.rationing_matched_term =
        rationing(book.settled_term, matched_demand_term);
    book.rationing_on = rationing(book.settled_on, book.demand_on);
    book.rationing_term = rationing(book.settled_term, book.demand_term);
    return book;
}

SegmentBook match_maturity(std::vector<Side> borrowers, std::vector<Side> lenders,
                           Rng& rng) {
    SegmentBook book;
    fill_totals(book, borrowers, lenders);

    std::vector<int> order(borrowers.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle_order(order, rng);

    std::vector<bool> lender_used(lenders.size(), false);
    double matched_demand_on = 0.0, matched_demand_term = 0.0;

    for (int bi : order) {
        const Side& b = borrowers[bi];
        if (b.total <= 0.0) continue;
        // borrower's maturity need vs lender's mismatch: closest wins
        int pick = -1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t li = 0; li < lenders.size(); ++li) {
            if (lender_used[li] || lenders[li].total <= 0.0) continue;
            const double d = std::abs((1.0 - lenders[li].stability_score) -
                                      (1.0 - b.stability_score));
            if (d < best) {
                best = d;
                pick = static_cast<int>(li);
            }
        }
        if (pick < 0) continue;
        lender_used[pick] = true;
        const Side& l = lenders[pick];
        Match m;
        m.lender = l.bank;
        m.borrower = b.bank;
        m.amount_on = std::min(b.on, l.on);
        m.amount_term = std::min(b.term, l.term);
        book.matches.push_back(m);
        book.settled_on += m.amount_on;
        book.settled_term += m.amount_term;
        matched_demand_on += b.on;
        matched_demand_term += b.term;
        ++book.n_matched;
    }

    // disequilibrium measured on the sides as sized, before settlement
    book.excess_on = book.demand_on - book.supply_on;
    book.excess_term = book.demand_term - book.supply_term;
    book.rationing_matched_on = rationing(book.settled_on, matched_demand_on);
    book.rationing_matched_term = rationing(book.settled_term, matched_demand_term);
    book.rationing_on = rationing(book.settled_on, book.demand_on);
    book.rationing_term = rationing(book.settled_term, book.demand_term);
    return book;
}

double clear_rate(double excess, const PolicyRates& rates, double sigma_ib) {
    return rates.icb_d +
           (rates.icb_l - rates.icb_d) / (1.0 + std::exp(-sigma_ib * excess));
}

double funding_cost(bool borrowed_on, bool borrowed_term, bool used_lending_facility,
                    double rate_on, double rate_term, const PolicyRates& rates) {
    double sum = rates.icb_t();
    int count = 1;
    if (borrowed_on) {
        sum += rate_on;
        ++count;
    }
    if (borrowed_term) {
        sum += rate_term;
        ++count;
    }
    if (used_lending_facility) {
        sum += rates.icb_l;
        ++count;
    }
    return sum / count;
}

double rationing(double settled_liabilities, double demand) {
    if (demand <= 0.0) return 0.0;
    return std::clamp(1.0 - settled_liabilities / demand, 0.0, 1.0);
}

} // namespace interbank
} // namespace absfc
