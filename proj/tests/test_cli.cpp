#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "etk/cli.hpp"
#include "etk/csv.hpp"
#include "etk/error.hpp"

using namespace etk;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "etk");
    std::ostringstream out, err;
    const int code = parse_and_dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("etk_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::stringstream s;
    s << std::ifstream(path, std::ios::binary).rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve prints the Coulomb anchor") {
    const auto r = call({"solve", "--potential", "power", "--beta", "-1", "--G", "1", "--N", "3", "--m", "1", "--D", "3",
                         "--state", "bgs"});
    CHECK(r.code == 0);
    CHECK(r.out.find("E=-0.5\n") != std::string::npos);
    CHECK(r.out.find("rho0=3\n") != std::string::npos);
    CHECK(r.out.find("character=UpperBound\n") != std::string::npos);
}

TEST_CASE("phi and improve") {
    auto r = call({"phi", "--potential", "power", "--beta", "-1"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("phi=1\n", 0) == 0);
    r = call({"improve", "--potential", "power", "--beta", "-1"});
    CHECK(r.out.rfind("E=-1.125\n", 0) == 0);
    r = call({"improve", "--potential", "power", "--beta", "-1", "--phi", "2"});
    CHECK(r.out.rfind("E=-0.5\n", 0) == 0);
    r = call({"improve", "--potential", "power", "--beta", "-1", "--D", "1"});
    CHECK(r.code == 1);
    CHECK(r.err == "error: improvement unavailable at D=1\n");
}

TEST_CASE("classify and oracle") {
    auto r = call({"classify", "--potential", "cubic-linear", "--C", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("character=Undefined") != std::string::npos);
    r = call({"oracle", "--potential", "power", "--beta", "2", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"converged\": true") != std::string::npos);
    CHECK(r.out.find("\"E\": 7.3484692") != std::string::npos);
    r = call({"oracle", "--potential", "gauss", "--beta", "0.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("beta must exceed 1") != std::string::npos);
    r = call({"oracle", "--potential", "linear", "--N", "4"});
    CHECK(r.code == 1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(call({"solve", "--potential", "yukawa"}).code == 2);
    CHECK(call({"solve", "--potential", "power"}).code == 2);
    CHECK(call({"solve", "--potential", "power", "--beta", "-1", "--d", "2"}).code == 2);
    CHECK(call({"solve", "--beta", "-1"}).code == 2);
    CHECK(call({"solve", "--potential", "power", "--beta", "abc"}).code == 2);
    CHECK(call({"solve", "--potential", "power", "--beta", "-1", "--format", "xml"}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"sweep", "--figure", "npp", "--potential", "power"}).code == 2);
    CHECK(call({"sweep", "--figure", "npp", "--grid", "-1:-0.5"}).code == 2);
    CHECK(call({"sweep", "--figure", "npp", "--grid", "-1,x"}).code == 2);
    CHECK(call({"sweep", "--figure", "fig9", "--no-oracle"}).code == 2);
    CHECK(call({"sweep", "--no-oracle"}).code == 2);
    CHECK(call({"solve", "--potential", "power", "--beta", "-1", "--config", "/nonexistent/cfg.json"}).code == 2);
}

TEST_CASE("other failures exit with 1") {
    CHECK(call({"solve", "--potential", "power", "--beta", "-3"}).code == 1);
    CHECK(call({"solve", "--potential", "power", "--beta", "-1", "--N", "1"}).code == 1);
    const auto r = call({"sweep", "--figure", "npp", "--grid", "-1", "--no-oracle", "--out", "/nonexistent-dir/x.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("help") {
    const auto r = call({"solve", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--potential") != std::string::npos);
}

TEST_CASE("config file with flag override") {
    const std::string cfg = scratch("cfg.json");
    std::ofstream(cfg) << R"({"potential": "power", "beta": -0.5, "G": 1, "state": "bgs"})";
    auto r = call({"solve", "--config", cfg});
    CHECK(r.code == 0);
    CHECK(r.out.find("E=-1.23822271834") != std::string::npos);
    r = call({"solve", "--config", cfg, "--beta", "-1"});
    CHECK(r.out.find("E=-0.5\n") != std::string::npos);
    std::ofstream(cfg) << R"({"potential": "power", "beta": -1, "colour": "red"})";
    CHECK(call({"solve", "--config", cfg}).code == 2);
    std::ofstream(cfg) << "{not json";
    CHECK(call({"solve", "--config", cfg}).code == 2);

    const auto parsed = parse_run_config({"etk", "sweep", "--figure", "exciton", "--oracle-n", "5", "--threads", "2"});
    CHECK(parsed.command == "sweep");
    CHECK(parsed.oracle.n_a == 5);
    CHECK(parsed.oracle.n_b == 5);
    CHECK(parsed.threads == 2);
}

TEST_CASE("grid specs") {
    const auto g = parse_grid("-1.5:-0.1:0.05");
    CHECK(g.size() == 29);
    CHECK(g.back() == -0.1);
    CHECK(parse_grid("0.1,0.5,2") == std::vector<double>{0.1, 0.5, 2.0});
    CHECK(parse_grid("3") == std::vector<double>{3.0});
    CHECK_THROWS_AS(parse_grid(""), Error);
    CHECK_THROWS_AS(parse_grid("1:0:0.1"), Error);
    CHECK_THROWS_AS(parse_grid("0:1:0"), Error);
}

TEST_CASE("sweeps write identical CSV for identical inputs") {
    const std::string a = scratch("a.csv");
    const std::string b = scratch("b.csv");
    const std::vector<std::string> base{"sweep", "--figure", "cubic-linear", "--grid", "0:1:0.25", "--oracle-n", "5",
                                        "--oracle-refinements", "1"};
    auto args = base;
    args.insert(args.end(), {"--out", a});
    CHECK(call(args).code == 0);
    args = base;
    args.insert(args.end(), {"--out", b, "--threads", "3"});
    CHECK(call(args).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(read_csv(a).rows.size() == 5);

    const std::string summary = scratch("summary.json");
    const auto r = call({"sweep", "--figure", "tcoulomb", "--grid", "1,2", "--no-oracle", "--format", "json", "--summary",
                         summary});
    CHECK(r.code == 0);
    CHECK(r.out == slurp(summary));
    CHECK(r.out.find("\"figure\": \"tcoulomb\"") != std::string::npos);
}

}
