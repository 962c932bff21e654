#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "absfc/engine.hpp"
#include "absfc/ledger.hpp"

using namespace absfc;

namespace {

// minimal empty economy: one agent per class, all stocks zero
EconomyState empty_economy() {
    EconomyState s;
    s.n_commercial = 1;
    s.n_business = 1;
    s.banks.resize(2);
    s.banks[0].kind = BankKind::commercial;
    s.banks[1].kind = BankKind::business;
    s.households.resize(1);
    s.households[0].bank = 0;
    s.household_nw.assign(1, 0.0);
    s.firms.resize(1);
    s.firms[0].bank = 1;
    s.firms[0].capital = 0.0;
    s.firm_nw.assign(1, 0.0);
    return s;
}

RunConfig small_config() {
    RunConfig cfg;
    cfg.population.households = 40;
    cfg.population.firms = 8;
    cfg.population.banks_commercial = 3;
    cfg.population.banks_business = 3;
    cfg.steps = 30;
    cfg.burn_in = 5;
    cfg.replicates = 1;
    cfg.government.gdp_init_guess = 50.0;
    cfg.real_sector.expected_sales_init = 4.0;
    cfg.out_dir = "";
    return cfg;
}

} // namespace

TEST_CASE("all-zero economy assembles an all-zero matrix") {
    const auto s = empty_economy();
    const auto m = ledger::assemble_matrix(s);
    for (int r = 0; r < ledger::kInstrumentCount; ++r)
        for (int c = 0; c < ledger::kSectorCount; ++c) CHECK(m.cell[r][c] == 0.0);
    const auto rep = ledger::audit(m, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
}

TEST_CASE("pairwise loan shows up on both sides of the loans row") {
    auto s = empty_economy();
    s.firms[0].loans = 100.0;
    s.firm_nw[0] = -100.0;
    s.banks[1].loans = 100.0;
    s.banks[1].bills = -100.0;  // crude counter-stock to keep the bank column closed
    const auto m = ledger::assemble_matrix(s);
    CHECK(m.cell[ledger::kLoans][ledger::kFirms] == doctest::Approx(-100.0));
    CHECK(m.cell[ledger::kLoans][ledger::kBanks] == doctest::Approx(100.0));
    CHECK(m.row_sum(ledger::kLoans) == doctest::Approx(0.0));
}

TEST_CASE("non-finite stock raises a structural error naming the agent") {
    auto s = empty_economy();
    s.firms[0].deposits = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(ledger::assemble_matrix(s),
                         doctest::Contains("firm #0"), std::runtime_error);
}

TEST_CASE("initial state audits clean and matches the bottom-row identity") {
    const auto cfg = small_config();
    const auto s = engine::init_economy(cfg, 7);
    const auto m = ledger::assemble_matrix(s);
    const auto rep = ledger::audit(m, cfg.audit.tolerance);
    CHECK(rep.pass);
    // financial rows net to zero
    for (int r = ledger::kLoans; r < ledger::kInstrumentCount; ++r)
        CHECK(std::abs(m.row_sum(r)) < 1e-9);
    // the sigma column of the balance row is -(K + INV)
    double balances = 0.0;
    for (int c = 0; c < ledger::kSectorCount; ++c) balances += m.balance[c];
    CHECK(balances == doctest::Approx(-(m.cell[ledger::kCapital][ledger::kFirms] +
                                        m.cell[ledger::kInventories][ledger::kFirms])));
}

TEST_CASE("single-entry perturbations are detected") {
    const auto cfg = small_config();
    auto s = engine::init_economy(cfg, 11);
    auto m = ledger::assemble_matrix(s);
    const double tol = 1e-8;
    const double scale = std::max(1.0, m.largest_abs_stock());
    const double bump = 20.0 * tol * scale;

    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto perturbed = m;
        const int r = static_cast<int>(gen() % ledger::kInstrumentCount);
        const int c = static_cast<int>(gen() % ledger::kSectorCount);
        perturbed.cell[r][c] += bump;
        const auto rep = ledger::audit(perturbed, tol);
        CHECK_FALSE(rep.pass);
        // the residual lands on the perturbed instrument's row or its column
        const bool located = std::abs(rep.row_residual[r]) >= bump / 2.0 ||
                             std::abs(rep.column_residual[c]) >= bump / 2.0;
        CHECK(located);
    }
}

TEST_CASE("audit report serialization round") {
    const auto cfg = small_config();
    const auto s = engine::init_economy(cfg, 3);
    const auto rep = ledger::audit(ledger::assemble_matrix(s), 1e-8);
    const std::string path = "test_audit_tmp.csv";
    ledger::append_audit_csv(path, rep, true);
    ledger::append_audit_csv(path, rep, false);
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);  // header + two reports
    std::remove(path.c_str());
}
