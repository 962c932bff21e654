#pragma once

#include <array>
#include <string>
#include <vector>

#include "absfc/state.hpp"

namespace absfc {
namespace ledger {

/// Instrument rows of the balance-sheet matrix.
enum Instrument {
    kCapital = 0,
    kInventories,
    kLoans,
    kDeposits,
    kBills,
    kBonds,
    kReserves,         // high-powered money, required plus excess
    kAdvances,
    kLendingFacility,
    kDepositFacility,
    kInstrumentCount
};

/// Sector columns.
enum Sector {
    kFirms = 0,
    kHouseholds,
    kBanks,
    kGovernment,
    kCentralBank,
    kSectorCount
};

const char* instrument_name(int row);
const char* sector_name(int col);

/// Economy-wide balance-sheet matrix. Cells carry the signed stocks of
/// the matrix; `balance` holds each sector's balancing item (-NW, or +GD
/// for the government).
struct BalanceMatrix {
    std::array<std::array<double, kSectorCount>, kInstrumentCount> cell{};
    std::array<double, kSectorCount> balance{};
    int period = 0;

    double row_sum(int row) const;
    double column_sum(int col) const;  // stocks plus balancing item
    double largest_abs_stock() const;
};

struct AuditReport {
    int period = 0;
    std::array<double, kInstrumentCount> row_residual{};
    std::array<double, kSectorCount> column_residual{};
    double sigma_residual = 0.0;  // bottom-row identity vs -(K+INV)
    double max_residual = 0.0;    // relative to the largest stock
    bool pass = false;
};

/// Builds the matrix from the current state. The capital and inventory rows
/// net to +K and +INV; every financial row nets to zero. Throws if any stock
/// is non-finite, naming the agent and instrument.
BalanceMatrix assemble_matrix(const EconomyState& state);

/// Checks all row and column identities against `tolerance`, relative to the
/// largest absolute stock in the matrix.
AuditReport audit(const BalanceMatrix& matrix, double tolerance);

/// One-line-per-period log: period, max_residual, pass.
void append_audit_csv(const std::string& path, const AuditReport& report, bool write_header);

/// Dumps the matrix with residuals for post-mortem inspection.
void dump_matrix(const BalanceMatrix& matrix, const AuditReport& report, const std::string& path);

} // namespace ledger
} // namespace absfc
