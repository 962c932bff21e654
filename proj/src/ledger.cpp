#include "absfc/ledger.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace absfc {
namespace ledger {

const char* instrument_name(int row) {
    static const char* names[kInstrumentCount] = {
        "capital", "inventories", "loans", "deposits", "bills",
        "bonds", "reserves", "advances", "lending_facility", "deposit_facility"};
    return names[row];
}

const char* sector_name(int col) {
    static const char* names[kSectorCount] = {
        "firms", "households", "banks", "government", "central_bank"};
    return names[col];
}

double BalanceMatrix::row_sum(int row) const {
    double s = 0.0;
    for (int c = 0; c < kSectorCount; ++c) s += cell[row][c];
    return s;
}

double BalanceMatrix::column_sum(int col) const {
    double s = balance[col];
    for (int r = 0; r < kInstrumentCount; ++r) s += cell[r][col];
    return s;
}

double BalanceMatrix::largest_abs_stock() const {
    double m = 0.0;
    for (int r = 0; r < kInstrumentCount; ++r)
        for (int c = 0; c < kSectorCount; ++c) m = std::max(m, std::abs(cell[r][c]));
    for (int c = 0; c < kSectorCount; ++c) m = std::max(m, std::abs(balance[c]));
    return m;
}

namespace {

void require_finite(double v, const std::string& agent, const char* instrument) {
    if (!std::isfinite(v))
        throw std::runtime_error(fmt::format(
            "ledger: non-finite stock '{}' of {}", instrument, agent));
}

} // namespace

BalanceMatrix assemble_matrix(const EconomyState& state) {
    BalanceMatrix m;
    m.period = state.period;

    for (std::size_t i = 0; i < state.firms.size(); ++i) {
        const Firm& f = state.firms[i];
        const std::string id = fmt::format("firm #{}", i);
        require_finite(f.capital, id, "capital");
        require_finite(f.inventory, id, "inventories");
        require_finite(f.loans, id, "loans");
        require_finite(f.deposits, id, "deposits");
        m.cell[kCapital][kFirms] += f.capital;
        m.cell[kInventories][kFirms] += f.inventory * f.unit_cost;
        m.cell[kLoans][kFirms] -= f.loans;
        m.cell[kDeposits][kFirms] += f.deposits;
        m.balance[kFirms] -= state.firm_nw[i];
    }

    for (std::size_t i = 0; i < state.households.size(); ++i) {
        const Household& h = state.households[i];
        const std::string id = fmt::format("household #{}", i);
        require_finite(h.loans, id, "loans");
        require_finite(h.deposits, id, "deposits");
        m.cell[kLoans][kHouseholds] -= h.loans;
        m.cell[kDeposits][kHouseholds] += h.deposits;
        m.balance[kHouseholds] -= state.household_nw[i];
    }

    double bank_nw = 0.0;
    for (std::size_t i = 0; i < state.banks.size(); ++i) {
        const BankState& b = state.banks[i];
        const std::string id = fmt::format("bank #{}", i);
        require_finite(b.loans, id, "loans");
        require_finite(b.deposits, id, "deposits");
        require_finite(b.bills, id, "bills");
        require_finite(b.bonds, id, "bonds");
        require_finite(b.reserves, id, "reserves");
        require_finite(b.excess_reserves, id, "reserves");
        require_finite(b.advances, id, "advances");
        require_finite(b.facility_loan, id, "lending_facility");
        require_finite(b.facility_dep, id, "deposit_facility");
        m.cell[kLoans][kBanks] += b.loans;
        m.cell[kDeposits][kBanks] -= b.deposits;
        m.cell[kBills][kBanks] += b.bills;
        m.cell[kBonds][kBanks] += b.bonds;
        m.cell[kReserves][kBanks] += b.reserves + b.excess_reserves;
        m.cell[kAdvances][kBanks] -= b.advances;
        m.cell[kLendingFacility][kBanks] -= b.facility_loan;
        m.cell[kDepositFacility][kBanks] += b.facility_dep;
        // banks run at zero net worth: the bills/advances buffer absorbs
        // every residual, so the balancing item is identically zero and the
        // column residual measures any bookkeeping leak
        bank_nw += 0.0;
    }
    m.balance[kBanks] = -bank_nw;

    const Government& g = state.government;
    require_finite(g.bills_outstanding, "government", "bills");
    require_finite(g.bonds_outstanding, "government", "bonds");
    require_finite(g.net_worth, "government", "balance");
    m.cell[kBills][kGovernment] -= g.bills_outstanding;
    m.cell[kBonds][kGovernment] -= g.bonds_outstanding;
    m.balance[kGovernment] = -g.net_worth;  // +GD

    const CentralBank& cb = state.central_bank;
    require_finite(cb.bills, "central bank", "bills");
    require_finite(cb.reserves_liab, "central bank", "reserves");
    require_finite(cb.advances, "central bank", "advances");
    require_finite(cb.facility_loans, "central bank", "lending_facility");
    require_finite(cb.facility_deps, "central bank", "deposit_facility");
    m.cell[kBills][kCentralBank] += cb.bills;
    m.cell[kReserves][kCentralBank] -= cb.reserves_liab;
    m.cell[kAdvances][kCentralBank] += cb.advances;
    m.cell[kLendingFacility][kCentralBank] += cb.facility_loans;
    m.cell[kDepositFacility][kCentralBank] -= cb.facility_deps;
    m.balance[kCentralBank] = 0.0;

    return m;
}

AuditReport audit(const BalanceMatrix& m, double tolerance) {
    AuditReport rep;
    rep.period = m.period;
    const double scale = std::max(1.0, m.largest_abs_stock());

    double worst = 0.0;
    for (int r = 0; r < kInstrumentCount; ++r) {
        double expected = 0.0;
        if (r == kCapital) expected = m.cell[kCapital][kFirms];
        if (r == kInventories) expected = m.cell[kInventories][kFirms];
        rep.row_residual[r] = m.row_sum(r) - expected;
        worst = std::max(worst, std::abs(rep.row_residual[r]));
    }
    for (int c = 0; c < kSectorCount; ++c) {
        rep.column_residual[c] = m.column_sum(c);
        worst = std::max(worst, std::abs(rep.column_residual[c]));
    }
    // bottom row: the balancing items sum to -(K + INV)
    double balance_sum = 0.0;
    for (int c = 0; c < kSectorCount; ++c) balance_sum += m.balance[c];
    rep.sigma_residual =
        balance_sum + m.cell[kCapital][kFirms] + m.cell[kInventories][kFirms];
    worst = std::max(worst, std::abs(rep.sigma_residual));

    rep.max_residual = worst / scale;
    rep.pass = rep.max_residual <= tolerance;
    return rep;
}

void append_audit_csv(const std::string& path, const AuditReport& rep, bool write_header) {
    std::ofstream out(path, write_header ? std::ios::trunc : std::ios::app);
    if (!out) throw std::runtime_error("ledger: cannot open " + path);
    if (write_header) out << "period,max_residual,pass\n";
    out << fmt::format("{},{:.17g},{}\n", rep.period, rep.max_residual, rep.pass ? 1 : 0);
}

void dump_matrix(const BalanceMatrix& m, const AuditReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("ledger: cannot open " + path);
    out << "instrument";
    for (int c = 0; c < kSectorCount; ++c) out << "," << sector_name(c);
    out << ",row_residual\n";
    for (int r = 0; r < kInstrumentCount; ++r) {
        out << instrument_name(r);
        for (int c = 0; c < kSectorCount; ++c) out << fmt::format(",{:.17g}", m.cell[r][c]);
        out << fmt::format(",{:.17g}\n", rep.row_residual[r]);
    }
    out << "balance";
    for (int c = 0; c < kSectorCount; ++c) out << fmt::format(",{:.17g}", m.balance[c]);
    out << fmt::format(",{:.17g}\n", rep.sigma_residual);
    out << "column_residual";
    for (int c = 0; c < kSectorCount; ++c)
        out << fmt::format(",{:.17g}", rep.column_residual[c]);
    out << "\n";
}

} // namespace ledger
} // namespace absfc
