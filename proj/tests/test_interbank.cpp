#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "absfc/interbank.hpp"

using namespace absfc;
using namespace absfc::interbank;

namespace {

NsfrStocks random_stocks(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    NsfrStocks s;
    s.loans = 2000.0 * u(gen);
    s.reserves = 50.0 * u(gen);
    s.bills = 300.0 * u(gen);
    s.bonds = 50.0 * u(gen);
    s.ib_lent_on = 30.0 * u(gen);
    s.ib_lent_term = 60.0 * u(gen);
    s.facility_dep = 40.0 * u(gen);
    s.deposits = 2000.0 * u(gen);
    s.ib_borrowed_on = 30.0 * u(gen);
    s.ib_borrowed_term = 60.0 * u(gen);
    s.facility_loan = 40.0 * u(gen);
    s.npl = 20.0 * u(gen);
    s.advances = 500.0 * u(gen);
    return s;
}

NsfrWeights default_weights() { return NsfrWeights{}; }

PolicyRates default_rates() {
    PolicyRates r;
    r.icb_d = 0.005;
    r.icb_l = 0.015;
    return r;
}

} // namespace

TEST_CASE("nsfr single-instrument example") {
    NsfrStocks s;
    s.deposits = 100.0;
    s.bills = 100.0;
    auto p = nsfr_components(s, BankKind::commercial, default_weights());
    CHECK(p.asf == doctest::Approx(0.9));
    CHECK(p.rsf == doctest::Approx(0.5));
    CHECK(p.margin == doctest::Approx(1.8));
    CHECK(p.margin >= 1.0);
}

TEST_CASE("nsfr with unit weights and equal books is exactly neutral") {
    NsfrWeights w{1.0, 1.0, 1.0, 1.0, 1.0};
    NsfrStocks s;
    s.loans = 70.0;
    s.bills = 30.0;   // AM = 100, all weighted at 1
    s.deposits = 60.0;
    s.ib_borrowed_term = 40.0;  // LM = 100, weighted at 1
    auto p = nsfr_components(s, BankKind::commercial, w);
    CHECK(p.margin == doctest::Approx(1.0));
}

TEST_CASE("nsfr degenerate books") {
    NsfrStocks s;
    auto p = nsfr_components(s, BankKind::business, default_weights());
    CHECK(p.margin == doctest::Approx(1.0));  // empty comparison

    s.deposits = 10.0;  // positive stable funding, nothing required
    p = nsfr_components(s, BankKind::business, default_weights());
    CHECK(std::isinf(p.margin));
    CHECK(p.margin >= 1.0);
}

TEST_CASE("nsfr components match a term-by-term oracle on random books") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1500; ++i) {
        NsfrWeights w;
        w.m1 = u(gen);
        w.m2 = u(gen);
        w.m3 = u(gen);
        w.m4 = u(gen);
        w.m5 = u(gen);
        const auto s = random_stocks(gen);
        const BankKind kind = (i % 2 == 0) ? BankKind::commercial : BankKind::business;
        const auto p = nsfr_components(s, kind, w);

        const double am = s.loans + s.reserves + s.bills + s.bonds + s.ib_lent_on +
                          s.ib_lent_term + s.facility_dep;
        const double lm = s.deposits + s.ib_borrowed_on + s.ib_borrowed_term +
                          s.facility_loan + s.npl + s.advances;
        double rsf_w;
        if (kind == BankKind::commercial)
            rsf_w = w.m1 * s.ib_lent_on + w.m2 * (s.loans + s.bills + s.ib_lent_term) +
                    w.m3 * s.bonds;
        else
            rsf_w = w.m1 * (s.loans + s.ib_lent_on) + w.m2 * (s.bills + s.ib_lent_term) +
                    w.m3 * s.bonds;
        const double asf_w = w.m4 * s.deposits + w.m5 * s.ib_borrowed_term;

        REQUIRE(am > 0.0);
        REQUIRE(lm > 0.0);
        CHECK(p.assets_total == doctest::Approx(am).epsilon(1e-12));
        CHECK(p.liabs_total == doctest::Approx(lm).epsilon(1e-12));
        CHECK(p.rsf == doctest::Approx(rsf_w / am).epsilon(1e-12));
        CHECK(p.asf == doctest::Approx(asf_w / lm).epsilon(1e-12));
        if (rsf_w > 0.0)
            CHECK(p.margin ==
                  doctest::Approx((asf_w / lm) * lm / ((rsf_w / am) * am)).epsilon(1e-10));
        CHECK(p.rsf >= 0.0);
        CHECK(p.rsf <= 1.0 + 1e-12);
        CHECK(p.asf >= 0.0);
        CHECK(p.asf <= 1.0 + 1e-12);
    }
}

TEST_CASE("theta and lbw closed forms") {
    PolicyRates r = default_rates();
    // all rates at the target, no uncertainty
    const double t = theta(0.5, r.icb_t(), r.icb_t(), r, 0.0);
    CHECK(t == doctest::Approx(0.5 + (r.icb_l - r.icb_t())));

    // uncertainty shifts the two parameters in opposite directions
    const double t0 = theta(0.3, 0.01, 0.012, r, 0.0);
    const double t1 = theta(0.3, 0.01, 0.012, r, 0.8);
    CHECK(t0 - t1 == doctest::Approx(0.8));
    const double l0 = lbw(0.3, 0.01, 0.012, r, 0.0);
    const double l1 = lbw(0.3, 0.01, 0.012, r, 0.8);
    CHECK(l1 - l0 == doctest::Approx(0.8));
}

TEST_CASE("expected theta over the uniform draw matches the closed form") {
    PolicyRates r = default_rates();
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += theta(u(gen), 0.009, 0.013, r, 0.2);
    const double expected = 0.5 + (r.icb_l - 0.009) + (0.013 - 0.009) - 0.2;
    CHECK(acc / n == doctest::Approx(expected).epsilon(2e-3));
}

TEST_CASE("borrower split honours the stability branches") {
    Rng rng(5);
    StabilityProfile unstable;
    unstable.asf = 0.6;
    unstable.margin = 0.8;
    const auto s = borrower_split(100.0, unstable, 0.7, rng);
    CHECK(s.preference == 0.0);
    CHECK(s.on == 0.0);  // shut out of the overnight segment
    CHECK(s.term == doctest::Approx(100.0));

    StabilityProfile stable;
    stable.asf = 0.6;
    stable.margin = 1.2;
    bool positive_on = false;
    for (int i = 0; i < 50; ++i) {
        const auto sp = borrower_split(100.0, stable, 0.7, rng);
        CHECK(sp.on + sp.term == doctest::Approx(100.0));
        CHECK(sp.preference >= 0.0);
        CHECK(sp.preference <= stable.borrowing_ratio() + 1e-12);
        if (sp.on > 0.0) positive_on = true;
    }
    CHECK(positive_on);
}

TEST_CASE("lender split mirrors the borrower branches") {
    Rng rng(9);
    StabilityProfile stable;
    stable.rsf = 0.4;
    stable.margin = 1.2;
    const auto s = lender_split(50.0, stable, 0.7, rng);
    CHECK(s.preference == 0.0);
    CHECK(s.on == 0.0);  // stable banks lengthen the asset side
    CHECK(s.term == doctest::Approx(50.0));

    StabilityProfile unstable;
    unstable.rsf = 0.4;
    unstable.margin = 0.8;
    bool positive_on = false;
    for (int i = 0; i < 50; ++i) {
        const auto sp = lender_split(50.0, unstable, 0.7, rng);
        CHECK(sp.on + sp.term == doctest::Approx(50.0));
        if (sp.on > 0.0) positive_on = true;
    }
    CHECK(positive_on);
}

TEST_CASE("borrower split distribution: mean overnight share is theta*BOR/2") {
    Rng rng(41);
    StabilityProfile stable;
    stable.asf = 0.4;  // BOR = 0.6
    stable.margin = 1.5;
    const double th = 0.8;
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += borrower_split(1.0, stable, th, rng).on;
    const double bor = stable.borrowing_ratio();
    const double expected = th * bor / 2.0;  // no clamping active at these values
    const double se = th * bor / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(acc / n - expected) < 3.0 * se);
}

TEST_CASE("splits conserve the totals exactly") {
    Rng rng(12);
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        StabilityProfile p;
        p.asf = u(gen);
        p.rsf = u(gen);
        p.margin = 2.0 * u(gen);
        const double df = 100.0 * u(gen);
        const double th = 4.0 * u(gen) - 2.0;
        const auto b = borrower_split(df, p, th, rng);
        CHECK(b.on + b.term == doctest::Approx(df).epsilon(1e-12));
        CHECK(b.on >= 0.0);
        CHECK(b.on <= df * (1.0 + 1e-12));
        const auto l = lender_split(df, p, th, rng);
        CHECK(l.on + l.term == doctest::Approx(df).epsilon(1e-12));
        CHECK(l.on >= 0.0);
    }
}

TEST_CASE("baseline matching: single pair full accommodation") {
    Rng rng(2);
    Side b{0, 100.0, 60.0, 40.0, 0.9};
    Side l{1, 150.0, 10.0, 140.0, 1.1};
    auto book = match_baseline({b}, {l}, rng);
    REQUIRE(book.matches.size() == 1);
    CHECK(book.matches[0].amount_on == doctest::Approx(60.0));
    CHECK(book.matches[0].amount_term == doctest::Approx(40.0));
    CHECK(book.settled_on == doctest::Approx(60.0));
    CHECK(book.rationing_matched_on == 0.0);
    CHECK(book.rationing_matched_term == 0.0);
    CHECK(book.excess_on == 0.0);
    CHECK(book.excess_term == 0.0);
}

TEST_CASE("baseline matching: no lender leaves demand to the facility") {
    Rng rng(2);
    Side b{0, 100.0, 60.0, 40.0, 0.9};
    auto book = match_baseline({b}, {}, rng);
    CHECK(book.matches.empty());
    // the central bank refinances the unserved borrower; accommodation keeps
    // the market itself free of disequilibrium pressure
    CHECK(book.excess_on == 0.0);
    CHECK(book.excess_term == 0.0);
    CHECK(book.demand_on == doctest::Approx(60.0));
    CHECK(book.demand_term == doctest::Approx(40.0));
}

TEST_CASE("baseline matching: matched borrowers are never rationed") {
    Rng rng(77);
    std::mt19937_64 gen(78);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<Side> borrowers, lenders;
        const int nb = 1 + static_cast<int>(8 * u(gen));
        const int nl = 1 + static_cast<int>(8 * u(gen));
        for (int i = 0; i < nb; ++i) {
            const double df = 100.0 * u(gen);
            const double on = df * u(gen);
            borrowers.push_back({i, df, on, df - on, u(gen)});
        }
        for (int i = 0; i < nl; ++i) {
            const double lf = 100.0 * u(gen);
            const double on = lf * u(gen);
            lenders.push_back({100 + i, lf, on, lf - on, 2.0 * u(gen)});
        }
        auto book = match_baseline(borrowers, lenders, rng);
        CHECK(book.rationing_matched_on == 0.0);
        CHECK(book.rationing_matched_term == 0.0);
        for (const auto& m : book.matches) {
            // the matched lender always covers the borrower in full
            const auto& b = borrowers[m.borrower];
            CHECK(m.amount_on == doctest::Approx(b.on));
            CHECK(m.amount_term == doctest::Approx(b.term));
        }
    }
}

TEST_CASE("maturity matching: short side settles per segment") {
    Rng rng(3);
    Side b{0, 15.0, 10.0, 5.0, 0.7};
    Side l{1, 15.0, 6.0, 9.0, 0.9};
    auto book = match_maturity({b}, {l}, rng);
    REQUIRE(book.matches.size() == 1);
    CHECK(book.matches[0].amount_on == doctest::Approx(6.0));   // LF side shorter
    CHECK(book.matches[0].amount_term == doctest::Approx(5.0)); // DF side shorter
}

TEST_CASE("maturity matching picks the closest stability distance") {
    Rng rng(4);
    Side b{0, 10.0, 5.0, 5.0, 0.7};           // borrower asf = 0.7
    Side l1{1, 10.0, 5.0, 5.0, 0.9};          // |(1-0.9)-(1-0.7)| = 0.2
    Side l2{2, 10.0, 5.0, 5.0, 1.3};          // |(1-1.3)-(1-0.7)| = 0.6
    auto book = match_maturity({b}, {l2, l1}, rng);
    REQUIRE(book.matches.size() == 1);
    CHECK(book.matches[0].lender == 1);

    // exhaustive check against the argmin over all lenders
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<Side> lenders;
        for (int i = 0; i < 6; ++i)
            lenders.push_back({i + 1, 10.0, 5.0, 5.0, 2.0 * u(gen)});
        Side borrower{0, 10.0, 5.0, 5.0, u(gen)};
        auto bk = match_maturity({borrower}, lenders, rng);
        REQUIRE(bk.matches.size() == 1);
        double best = 1e9;
        int best_id = -1;
        for (const auto& l : lenders) {
            const double d = std::abs((1.0 - l.stability_score) -
                                      (1.0 - borrower.stability_score));
            if (d < best) {
                best = d;
                best_id = l.bank;
            }
        }
        CHECK(bk.matches[0].lender == best_id);
    }
}

TEST_CASE("maturity matching conserves totals and respects the short side") {
    Rng rng(31);
    std::mt19937_64 gen(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<Side> borrowers, lenders;
        const int nb = 1 + static_cast<int>(9 * u(gen));
        const int nl = 1 + static_cast<int>(9 * u(gen));
        double df_on = 0.0, df_term = 0.0, lf_on = 0.0, lf_term = 0.0;
        for (int i = 0; i < nb; ++i) {
            const double df = 50.0 * u(gen);
            const double on = df * u(gen);
            borrowers.push_back({i, df, on, df - on, u(gen)});
            df_on += on;
            df_term += df - on;
        }
        for (int i = 0; i < nl; ++i) {
            const double lf = 50.0 * u(gen);
            const double on = lf * u(gen);
            lenders.push_back({100 + i, lf, on, lf - on, 2.0 * u(gen)});
            lf_on += on;
            lf_term += lf - on;
        }
        auto book = match_maturity(borrowers, lenders, rng);
        CHECK(book.excess_on == doctest::Approx(df_on - lf_on).epsilon(1e-12));
        CHECK(book.excess_term == doctest::Approx(df_term - lf_term).epsilon(1e-12));
        for (const auto& m : book.matches) {
            const auto& b = *std::find_if(borrowers.begin(), borrowers.end(),
                                          [&](const Side& x) { return x.bank == m.borrower; });
            const auto& l = *std::find_if(lenders.begin(), lenders.end(),
                                          [&](const Side& x) { return x.bank == m.lender; });
            CHECK(m.amount_on == doctest::Approx(std::min(b.on, l.on)));
            CHECK(m.amount_term == doctest::Approx(std::min(b.term, l.term)));
        }
        CHECK(book.n_matched <= std::min(nb, nl));
    }
}

TEST_CASE("rate clearing: midpoint, limits and the scalar example") {
    PolicyRates r = default_rates();
    CHECK(clear_rate(0.0, r, 0.01) == doctest::Approx(r.icb_t()));
    CHECK(clear_rate(1e9, r, 0.01) == doctest::Approx(r.icb_l).epsilon(1e-9));
    CHECK(clear_rate(-1e9, r, 0.01) == doctest::Approx(r.icb_d).epsilon(1e-9));

    // icb_d=0.005, icb_l=0.015, sigma=0.01, excess=100
    const double expected = 0.005 + 0.01 / (1.0 + std::exp(-1.0));
    CHECK(clear_rate(100.0, r, 0.01) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(0.012310585786300049).epsilon(1e-9));

    // corridor containment for arbitrary excess
    std::mt19937_64 gen(55);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double rate = clear_rate(u(gen), r, 0.37);
        CHECK(rate >= r.icb_d);
        CHECK(rate <= r.icb_l);
    }
}

TEST_CASE("funding costs cover all inclusion patterns") {
    PolicyRates r = default_rates();
    const double on = 0.006, term = 0.014;
    for (int mask = 0; mask < 8; ++mask) {
        const bool b_on = mask & 1, b_term = mask & 2, b_fac = mask & 4;
        double sum = r.icb_t();
        int x = 1;
        if (b_on) { sum += on; ++x; }
        if (b_term) { sum += term; ++x; }
        if (b_fac) { sum += r.icb_l; ++x; }
        CHECK(funding_cost(b_on, b_term, b_fac, on, term, r) ==
              doctest::Approx(sum / x).epsilon(1e-12));
    }
    CHECK(funding_cost(false, false, false, on, term, r) == doctest::Approx(r.icb_t()));
    CHECK(funding_cost(true, true, false, on, term, r) ==
          doctest::Approx((r.icb_t() + on + term) / 3.0));
}

TEST_CASE("rationing measure") {
    CHECK(rationing(10.0, 10.0) == 0.0);
    CHECK(rationing(0.0, 10.0) == 1.0);
    CHECK(rationing(0.0, 0.0) == 0.0);
    CHECK(rationing(4.0, 10.0) == doctest::Approx(0.6));
    CHECK(rationing(11.0, 10.0) == 0.0);  // clamped
}

TEST_CASE("pdu monotonicity: higher uncertainty shifts overnight exposure") {
    PolicyRates r = default_rates();
    Rng rng1(99), rng2(99);  // identical draw sequences
    StabilityProfile stable;
    stable.asf = 0.5;
    stable.margin = 1.4;
    const double th_low = theta(0.5, 0.01, 0.01, r, 0.0);
    const double th_high = theta(0.5, 0.01, 0.01, r, 0.6);
    const auto lo = borrower_split(100.0, stable, th_low, rng1);
    const auto hi = borrower_split(100.0, stable, th_high, rng2);
    CHECK(hi.on <= lo.on + 1e-12);

    StabilityProfile weak;
    weak.rsf = 0.4;
    weak.margin = 0.8;
    Rng rng3(7), rng4(7);
    const double lw_low = lbw(0.5, 0.01, 0.01, r, 0.0);
    const double lw_high = lbw(0.5, 0.01, 0.01, r, 0.6);
    const auto slo = lender_split(100.0, weak, lw_low, rng3);
    const auto shi = lender_split(100.0, weak, lw_high, rng4);
    CHECK(shi.on >= slo.on - 1e-12);
}
