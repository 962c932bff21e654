#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "absfc/analytics.hpp"

using namespace absfc;
using namespace absfc::analytics;

namespace {

// dense reference solve of (I + lambda D''^T D'') tau = y via Gaussian
// elimination, independent of the banded path under test
std::vector<double> hp_dense_oracle(const std::vector<double>& y, double lambda) {
    const std::size_t n = y.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
    for (std::size_t r = 0; r + 2 < n; ++r) {
        // row r of D'' has entries (1, -2, 1) at columns r, r+1, r+2
        const double row[3] = {1.0, -2.0, 1.0};
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) a[r + p][r + q] += lambda * row[p] * row[q];
    }
    std::vector<double> b = y;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

} // namespace

TEST_CASE("hp filter: constant series has zero cycle") {
    std::vector<double> y(50, 3.5);
    const auto res = hp_filter(y, 1600.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(res.trend[i] == doctest::Approx(3.5).epsilon(1e-9));
        CHECK(std::abs(res.cycle[i]) < 1e-9);
    }
}

TEST_CASE("hp filter: linear trends pass through") {
    std::vector<double> y(80);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 + 0.3 * i;
    const auto res = hp_filter(y, 14400.0);
    for (double c : res.cycle) CHECK(std::abs(c) < 1e-9);
}

TEST_CASE("hp filter matches the dense oracle on random series") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> y(120);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = 10.0 + 0.05 * i + std::sin(0.3 * i) + noise(gen);
    const auto res = hp_filter(y, 14400.0);
    const auto ref = hp_dense_oracle(y, 14400.0);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(res.trend[i] == doctest::Approx(ref[i]).epsilon(1e-8));
}

TEST_CASE("hp filter: trend plus cycle reconstructs the series") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y(200);
    for (auto& v : y) v = u(gen);
    const auto res = hp_filter(y, 129600.0);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(res.trend[i] + res.cycle[i] == doctest::Approx(y[i]).epsilon(1e-12));
}

TEST_CASE("hp filter rejects short series") {
    std::vector<double> y{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(hp_filter(y, 1600.0), std::runtime_error);
}

TEST_CASE("moving average basics") {
    std::vector<double> y{1.0, 2.0, 3.0, 4.0};
    CHECK(moving_average(y, 1) == y);  // identity

    std::vector<double> c(10, 2.0);
    CHECK(moving_average(c, 4) == c);  // constant unchanged
}

TEST_CASE("moving average of a step is the closed-form ramp") {
    const int window = 200;
    std::vector<double> y(500, 0.0);
    for (std::size_t i = 250; i < y.size(); ++i) y[i] = 1.0;
    const auto ma = moving_average(y, window);
    for (std::size_t i = 0; i < 250; ++i) CHECK(ma[i] == 0.0);
    for (std::size_t i = 250; i < y.size(); ++i) {
        const double inside = std::min<double>(i - 249, window);
        CHECK(ma[i] == doctest::Approx(inside / window).epsilon(1e-12));
    }
}

TEST_CASE("rank correlation") {
    std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    std::vector<double> b{2.0, 4.0, 6.0, 8.0};
    CHECK(rank_correlation(a, b) == doctest::Approx(1.0));
    std::vector<double> r{4.0, 3.0, 2.0, 1.0};
    CHECK(rank_correlation(a, r) == doctest::Approx(-1.0));
}

TEST_CASE("long csv round trip reproduces the ensemble bit-exactly") {
    Ensemble ens;
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int r = 0; r < 3; ++r) {
        TimeSeriesFrame f;
        f.replicate = r;
        for (const char* name : {"alpha", "beta"}) {
            auto& col = f.col(name);
            for (int t = 0; t < 25; ++t) col.push_back(u(gen));
        }
        ens.frames.push_back(std::move(f));
    }
    const std::string path = "test_roundtrip_tmp.csv";
    export_long_csv(ens, path);
    const auto back = read_long_csv(path);
    REQUIRE(back.frames.size() == ens.frames.size());
    for (std::size_t r = 0; r < ens.frames.size(); ++r)
        for (const auto& name : ens.frames[r].names) {
            const auto& a = ens.frames[r].columns.at(name);
            const auto& b = back.frames[r].columns.at(name);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        }
    std::remove(path.c_str());
}

TEST_CASE("repeated export produces identical bytes") {
    Ensemble ens;
    TimeSeriesFrame f;
    f.replicate = 0;
    for (int t = 0; t < 10; ++t) f.col("x").push_back(0.1 * t);
    ens.frames.push_back(f);
    export_long_csv(ens, "test_export_a.csv");
    export_long_csv(ens, "test_export_b.csv");
    std::ifstream fa("test_export_a.csv"), fb("test_export_b.csv");
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK_FALSE(sa.empty());
    std::remove("test_export_a.csv");
    std::remove("test_export_b.csv");
}

TEST_CASE("empty ensemble exports a bare header") {
    Ensemble ens;
    export_long_csv(ens, "test_empty_tmp.csv");
    std::ifstream in("test_empty_tmp.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "replicate,period,variable,value");
    CHECK_FALSE(std::getline(in, line));
    std::remove("test_empty_tmp.csv");
}
