#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "doctest.h"

namespace {

constexpr double kGoldenValue = 0.0724907;
constexpr double kGoldenError = 2.46e-4;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "farey");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = farey::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("list") {
    const auto r = run({"list", "--q", "5"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == "index,numerator,denominator,value");
    CHECK(rows[10] == "10,4,5,0.80000000000000004");
    CHECK(rows[11] == "11,1,1,1");
    CHECK(r.out.find('\r') == std::string::npos);
    CHECK(r.err.empty());

    const auto bad = run({"list", "--q", "0"});
    CHECK(bad.code == 2);
    CHECK(bad.out.empty());
    CHECK_FALSE(bad.err.empty());
    CHECK(run({"list"}).code == 2);
    CHECK(run({"list", "--q", "5", "--interval", "2/3,1/3"}).code == 2);
    CHECK(run({"list", "--q", "5", "--format", "xml"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto js = run({"list", "--q", "5", "--interval", "1/3,2/3", "--format", "json"});
    REQUIRE(js.code == 0);
    const auto arr = nlohmann::json::parse(js.out);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 5);
    CHECK(arr[0]["numerator"] == 1);
    CHECK(arr[0]["denominator"] == 3);
    CHECK(arr[4]["denominator"] == 3);
    CHECK(arr[2]["value"] == 0.5);
}

TEST_CASE("gaps") {
    const auto one = run({"gaps", "--q", "5", "--h", "1"});
    REQUIRE(one.code == 0);
    const auto rows = lines(one.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "j,g1");
    CHECK(rows[1] == "1,2.75");

    const auto two = run({"gaps", "--q", "5", "--h", "2"});
    REQUIRE(two.code == 0);
    CHECK(lines(two.out).size() == 9);
    CHECK(lines(two.out)[0] == "j,g1,g2");

    CHECK(run({"gaps", "--q", "3", "--h", "5"}).code == 2);
    CHECK(run({"gaps", "--q", "5", "--h", "0"}).code == 2);

    const auto js = run({"gaps", "--q", "5", "--h", "2", "--format", "json"});
    REQUIRE(js.code == 0);
    const auto arr = nlohmann::json::parse(js.out);
    REQUIRE(arr.size() == 8);
    CHECK(arr[0]["j"] == 1);
    CHECK(arr[0]["gaps"][0] == 2.75);
}

TEST_CASE("measure") {
    const auto r = run({"measure", "--box", "0.7,1.2,0.7,1.2", "--method", "quad", "--tol", "1e-4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const double value = j["value"], bound = j["error_bound"];
    CHECK(std::abs(value - kGoldenValue) <= kGoldenError + bound);
    CHECK(j["method"] == "adaptive-subdivision");
    CHECK(j["cells_visited"].get<int>() > 0);
    CHECK(r.out.find("{\"value\"") == 0);

    const auto zero = run({"measure", "--box", "0,0.5,0,0.5"});
    REQUIRE(zero.code == 0);
    CHECK(nlohmann::json::parse(zero.out)["value"] == 0.0);

    CHECK(run({"measure", "--box", "1.2,0.7,0.7,1.2"}).code == 2);
    CHECK(run({"measure", "--box", "0.7,1.2,0.7"}).code == 2);
    CHECK(run({"measure", "--box", "0.7,1.2", "--h", "2"}).code == 2);
    CHECK(run({"measure", "--box", "0.7,1.2,0.7,1.2", "--method", "simpson"}).code == 2);
    CHECK(run({"measure", "--box", "0.7,1.2,0.7,1.2", "--tol", "0"}).code == 2);

    const auto mc = run({"measure", "--box", "0.7,1.2,0.7,1.2", "--method", "mc", "--samples", "200000"});
    REQUIRE(mc.code == 0);
    const auto m = nlohmann::json::parse(mc.out);
    CHECK(m["method"] == "monte-carlo");
    CHECK(std::abs(m["value"].get<double>() - kGoldenValue) <= kGoldenError + m["error_bound"].get<double>());
    CHECK(run({"measure", "--box", "0.7,1.2,0.7,1.2", "--method", "mc", "--samples", "200000"}).out == mc.out);

    const auto strip = run({"measure", "--box", "0,inf"});
    REQUIRE(strip.code == 0);
    CHECK(nlohmann::json::parse(strip.out)["value"].get<double>() == doctest::Approx(1).epsilon(1e-4));

    const auto stuck = run({"measure", "--box", "0.7,1.2,0.7,1.2", "--tol", "1e-9", "--max-depth", "2"});
    CHECK(stuck.code == 1);
    CHECK(nlohmann::json::parse(stuck.out).contains("value"));
    CHECK_FALSE(stuck.err.empty());
}

TEST_CASE("support") {
    const auto csv = run({"support", "--kmax", "6", "--samples", "20"});
    REQUIRE(csv.code == 0);
    const auto rows = lines(csv.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == "x,y");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto comma = rows[i].find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::stod(rows[i].substr(0, comma)) >= 6 / (M_PI * M_PI) - 1e-9);
        CHECK(std::stod(rows[i].substr(comma + 1)) >= 6 / (M_PI * M_PI) - 1e-9);
    }
    CHECK(lines(run({"support", "--kmax", "6", "--samples", "20", "--h", "1"}).out)[0] == "x");
    CHECK(run({"support", "--kmax", "1"}).code == 2);
    CHECK(run({"support", "--kmax", "6", "--h", "1", "--format", "svg"}).code == 2);

    const auto dir = std::filesystem::temp_directory_path() / "farey_cli_test";
    std::filesystem::create_directories(dir);
    const auto svg = dir / "swallow.svg";
    REQUIRE(run({"support", "--kmax", "10", "--samples", "50", "--out", svg.string()}).code == 0);
    const auto text = slurp(svg);
    CHECK(text.find("viewBox=\"0 0 5 5\"") != std::string::npos);
    CHECK(text.find("<circle") != std::string::npos);
    CHECK(text.rfind("</svg>\n") == text.size() - 7);
    CHECK(run({"support", "--kmax", "6", "--out", (dir / "missing" / "x.csv").string()}).code == 1);
}

TEST_CASE("curves") {
    const auto r = run({"curves", "--rows", "2,2", "--samples", "100"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 401);
    CHECK(rows[0] == "k,l,edge_index,t,X,Y");
    CHECK(rows[1].rfind("2,2,0,", 0) == 0);
    CHECK(rows[400].rfind("2,2,3,", 0) == 0);

    CHECK(run({"curves", "--rows", "9,9"}).code == 2);
    CHECK(run({"curves", "--rows", "1,1"}).code == 2);
    CHECK(run({"curves", "--rows", "x"}).code == 2);
    CHECK(run({"curves", "--rows", "2,2x"}).code == 2);

    const auto fam = run({"curves", "--rows", "1,20", "--samples", "10"});
    REQUIRE(fam.code == 0);
    CHECK(lines(fam.out).size() == 41);

    const auto all = run({"curves", "--samples", "10"});
    REQUIRE(all.code == 0);
    CHECK(lines(all.out).size() == 105 * 10 + 1);

    const auto svg = run({"curves", "--rows", "2,2", "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.find("<polyline") != std::string::npos);
}

TEST_CASE("verify") {
    for (const char* suite : {"recurrence", "cells", "table1", "symmetry"}) {
        INFO(suite);
        const auto r = run({"verify", "--suite", suite});
        CHECK(r.code == 0);
        CHECK(r.out.find("FAIL") == std::string::npos);
        CHECK(r.out.find("PASS") == 0);
    }
    const auto t = run({"verify", "--suite", "table1"});
    CHECK(t.out.find("max deviation") != std::string::npos);
    CHECK(run({"verify", "--suite", "cells", "--max", "50"}).code == 0);
    CHECK(run({"verify", "--suite", "recurrence", "--max", "300"}).code == 0);
    CHECK(run({"verify", "--suite", "nope"}).code == 2);
    CHECK(run({"verify"}).code == 2);
}

TEST_CASE("outputs are byte-deterministic across thread counts") {
    const std::vector<std::vector<std::string>> commands{
        {"support", "--kmax", "12", "--samples", "40"},
        {"support", "--kmax", "12", "--samples", "40", "--format", "svg"},
        {"curves", "--samples", "7"},
        {"gaps", "--q", "60", "--h", "3"},
        {"measure", "--box", "0.7,1.2,0.7,1.2", "--method", "mc", "--samples", "150000", "--seed", "9"},
    };
    std::vector<std::string> reference;
    for (const auto& c : commands) reference.push_back(run(c).out);
    for (const char* threads : {"1", "3"}) {
        ::setenv("FAREY_THREADS", threads, 1);
        for (std::size_t i = 0; i < commands.size(); ++i) CHECK(run(commands[i]).out == reference[i]);
    }
    ::unsetenv("FAREY_THREADS");
}
