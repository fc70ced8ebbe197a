#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "etk/csv.hpp"
#include "etk/error.hpp"
#include "etk/et_core.hpp"
#include "etk/experiments.hpp"

using namespace etk;

namespace {

SweepOptions et_only() {
    SweepOptions o;
    o.run_oracle = false;
    o.threads = 1;
    return o;
}

SweepOptions small_oracle(int threads) {
    SweepOptions o;
    o.oracle.n_a = o.oracle.n_b = 6;
    o.oracle.a_min = 0.05;
    o.oracle.a_max = 50.0;
    o.oracle.max_refinements = 1;
    o.threads = threads;
    return o;
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("etk_test_" + name);
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an etk::Error");
    return ErrorKind::Undefined;
}

// N Q²/(m C) = C V'(ρ) ρ³ written out per family, independent of the solver.
double reduction_residual(Figure f, double param, const SweepRow& row) {
    const double N = 3.0, C = 3.0, m = 1.0;
    const double Q = row.et.Q_used;
    const double rho = row.rho0_et;
    const double lhs = N * Q * Q / (m * C);
    double rhs = 0.0;
    switch (f) {
        case Figure::CubicLinear:
            rhs = C * (3.0 * param * std::pow(rho, 5) + (1.0 - param) * std::pow(rho, 3));
            break;
        case Figure::CubicLog:
            rhs = C * (3.0 * param * std::pow(rho, 5) + (1.0 - param) * rho * rho);
            break;
        case Figure::CubicGauss:
            rhs = C * (3.0 * param * std::pow(rho, 5) + 2.0 * 10.0 * (1.0 - param) * std::pow(rho, 4) * std::exp(-rho * rho));
            break;
        default:
            break;
    }
    return std::abs(lhs - rhs) / lhs;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("default grids") {
    const auto npp = default_grid(Figure::NegativePower);
    CHECK(npp.size() == 29);
    CHECK(npp.front() == -1.5);
    CHECK(npp.back() == -0.1);
    CHECK(npp[10] == -1.0);
    const auto tc = default_grid(Figure::TruncCoulomb);
    CHECK(tc.size() == 50);
    CHECK(tc.front() == 0.1);
    CHECK(tc.back() == 5.0);
    const auto ex = default_grid(Figure::Exciton);
    CHECK(ex.size() == 51);
    CHECK(ex.front() == 0.0);
    for (auto f : {Figure::CubicLinear, Figure::CubicLog, Figure::CubicGauss}) {
        const auto g = default_grid(f);
        CHECK(g.size() == 51);
        CHECK(g[10] == 0.2);
        CHECK(g.back() == 1.0);
    }
    for (auto id : figure_ids()) CHECK(to_string(parse_figure(id)) == id);
    CHECK(kind_of([] { parse_figure("fig7"); }) == ErrorKind::Usage);
}

TEST_CASE("envelope columns of every figure") {
    for (auto id : figure_ids()) {
        const Figure f = parse_figure(id);
        const auto grid = default_grid(f);
        const auto table = run_sweep(f, grid, et_only());
        REQUIRE(table.rows.size() == grid.size());
        for (const auto& row : table.rows) {
            CAPTURE(id);
            CAPTURE(row.param);
            CHECK(compact_residuals(row.system, row.et).max() < 1e-9);
            CHECK(compact_residuals(row.system, row.improved).max() < 1e-9);
            CHECK(std::isnan(row.E_oracle));
            CHECK_FALSE(row.oracle_converged);
            if (f == Figure::CubicLinear || f == Figure::CubicLog || f == Figure::CubicGauss) {
                CHECK(reduction_residual(f, row.param, row) < 1e-9);
            }
        }
    }
}

TEST_CASE("figure-specific envelope checks") {
    const auto npp = sweep_npp(default_grid(Figure::NegativePower), et_only());
    for (const auto& row : npp.rows) {
        CHECK(row.phi == doctest::Approx(std::sqrt(2.0 + row.param)).epsilon(1e-8));
        CHECK(row.E_et == doctest::Approx(solve_power_law(row.system, 2.0).energy).epsilon(1e-10));
        CHECK(row.character == VariationalCharacter::UpperBound);
    }
    const auto tc = sweep_trunc_coulomb(default_grid(Figure::TruncCoulomb), et_only());
    for (const auto& row : tc.rows) {
        CHECK(row.E_et == doctest::Approx(solve_trunc_coulomb(row.system, 2.0).energy).epsilon(1e-10));
    }
    const auto ex = sweep_exciton(default_grid(Figure::Exciton), et_only());
    CHECK(ex.rows.front().rho0_et == doctest::Approx(3.0).epsilon(1e-12));
    for (const auto& row : ex.rows) {
        // (m c/N) (C)² / Q² ρ0⁴ = (ρ0² + d²)^{3/2}
        const double r = row.rho0_et;
        const double lhs = (1.0 / 3.0) * 9.0 / 9.0 * std::pow(r, 4);
        const double rhs = std::pow(r * r + row.param * row.param, 1.5);
        CHECK(std::abs(lhs - rhs) < 1e-9 * rhs);
    }
    for (auto f : {Figure::CubicLinear, Figure::CubicLog, Figure::CubicGauss}) {
        const auto t = run_sweep(f, default_grid(f), et_only());
        CHECK(t.rows.front().character == VariationalCharacter::UpperBound);
        CHECK(t.rows.back().character == VariationalCharacter::LowerBound);
        CHECK(t.rows[25].character == VariationalCharacter::Undefined);
    }
    const auto cl = sweep_mix("cubic-linear", std::vector<double>{0.0}, et_only());
    CHECK(cl.rows[0].E_et == doctest::Approx(4.5 * std::cbrt(3.0)).epsilon(1e-10));
    CHECK(kind_of([] { sweep_mix("cubic-exp", std::vector<double>{0.5}, et_only()); }) == ErrorKind::Usage);
}

TEST_CASE("sweep validation") {
    CHECK(kind_of([] { sweep_trunc_coulomb(std::vector<double>{0.0}, et_only()); }) == ErrorKind::Usage);
    CHECK(kind_of([] { sweep_npp(std::vector<double>{-2.0}, et_only()); }) == ErrorKind::Usage);
    CHECK(kind_of([] { sweep_npp(std::vector<double>{}, et_only()); }) == ErrorKind::Usage);
    CHECK(kind_of([] { sweep_mix("cubic-log", std::vector<double>{1.2}, et_only()); }) == ErrorKind::Parameter);
}

TEST_CASE("grid order and thread count do not change the output") {
    const std::vector<double> grid{0.9, 0.1, 0.5, 0.3};
    const auto a = format_csv(run_sweep(Figure::CubicLog, grid, small_oracle(1)));
    const auto b = format_csv(run_sweep(Figure::CubicLog, grid, small_oracle(3)));
    CHECK(a == b);
    const auto t = run_sweep(Figure::CubicLog, grid, small_oracle(2));
    CHECK(t.rows.front().param == 0.1);
    CHECK(t.rows.back().param == 0.9);
    for (const auto& row : t.rows) {
        CHECK(std::isfinite(row.E_oracle));
        CHECK(row.rel_err_et == doctest::Approx(std::abs(row.E_et - row.E_oracle) / std::abs(row.E_oracle)));
    }
}

TEST_CASE("crossings and summary") {
    SweepTable t;
    t.figure = "demo";
    for (double p : {0.0, 0.1, 0.2, 0.3}) {
        SweepRow r;
        r.param = p;
        r.E_oracle = 0.0;
        r.E_et = p < 0.15 ? 1.0 - 10.0 * p : -(p - 0.15);
        r.rel_err_et = p;
        r.rel_err_improved = p / 2;
        r.oracle_converged = p > 0.05;
        t.rows.push_back(r);
    }
    t.rows[1].E_et = 0.5;
    t.rows[2].E_et = -0.5;
    const auto x = crossing_points(t);
    REQUIRE(x.size() == 1);
    CHECK(x[0] == doctest::Approx(0.15));
    const auto s = summarize(t);
    CHECK(s.rows == 4);
    CHECK(s.oracle_converged == 3);
    CHECK(s.max_rel_err_et == doctest::Approx(0.3));
    CHECK(s.min_rel_err_improved == 0.0);
    const std::string json = summary_json(s);
    CHECK(json.rfind("{\n  \"figure\": \"demo\",\n  \"rows\": 4,", 0) == 0);
    CHECK(json.back() == '\n');
}

TEST_CASE("CSV writing") {
    SweepTable t = run_sweep(Figure::NegativePower, std::vector<double>{-1.0, -0.5, -0.25}, et_only());
    const auto path = scratch("three.csv");
    write_csv(t, path.string());
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    ++lines;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 4);
    std::stringstream whole;
    whole << std::ifstream(path, std::ios::binary).rdbuf();
    CHECK(whole.str() == format_csv(t));
    CHECK(whole.str().find('\r') == std::string::npos);
    CHECK(format_csv(t).find("\n-1,nan,false,-0.5,-1.125,1,3,UpperBound,nan,nan\n") != std::string::npos);

    const auto empty = scratch("empty.csv");
    std::filesystem::remove(empty);
    CHECK_THROWS_AS(write_csv(SweepTable{}, empty.string()), Error);
    CHECK_FALSE(std::filesystem::exists(empty));

    CHECK(kind_of([&] { write_csv(t, "/nonexistent-dir/out.csv"); }) == ErrorKind::Io);
}

TEST_CASE("CSV round trip") {
    const auto t = run_sweep(Figure::CubicLinear, std::vector<double>{0.0, 0.37, 1.0}, small_oracle(1));
    const auto path = scratch("round.csv");
    write_csv(t, path.string());
    const auto back = read_csv(path.string());
    REQUIRE(back.rows.size() == t.rows.size());
    // Twelve significant digits: values agree to the print resolution, and a
    // second pass through the format is a fixed point.
    auto same = [](double a, double b) { return std::abs(a - b) <= 5e-12 * std::abs(b) || (std::isnan(a) && std::isnan(b)); };
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& a = back.rows[i];
        const auto& b = t.rows[i];
        CHECK(same(a.param, b.param));
        CHECK(same(a.E_oracle, b.E_oracle));
        CHECK(a.oracle_converged == b.oracle_converged);
        CHECK(same(a.E_et, b.E_et));
        CHECK(same(a.E_improved, b.E_improved));
        CHECK(same(a.phi, b.phi));
        CHECK(same(a.rho0_et, b.rho0_et));
        CHECK(a.character == b.character);
        CHECK(same(a.rel_err_et, b.rel_err_et));
        CHECK(same(a.rel_err_improved, b.rel_err_improved));
    }
    SweepTable again = back;
    again.figure = t.figure;
    CHECK(format_csv(again) == format_csv(t));
}

TEST_CASE("CSV reader rejects foreign files") {
    const auto path = scratch("bad.csv");
    std::ofstream(path) << "a,b\n1,2\n";
    CHECK(kind_of([&] { read_csv(path.string()); }) == ErrorKind::Io);
    std::ofstream(path) << kCsvHeader << "\n1,2,3\n";
    CHECK(kind_of([&] { read_csv(path.string()); }) == ErrorKind::Io);
    CHECK(kind_of([] { read_csv("/nonexistent-dir/x.csv"); }) == ErrorKind::Io);
}

}
