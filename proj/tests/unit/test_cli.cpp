#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scpim/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = scpim::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> v;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) v.push_back(f);
    if (!line.empty() && line.back() == ',') v.emplace_back();
    return v;
}

std::size_t column(const std::string& header, const std::string& name) {
    const auto cols = split_csv(header);
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("scpim_test_" + name)).string();
}

std::string data_file(const std::string& name) {
    return (std::filesystem::path(__FILE__).parent_path().parent_path() / "data" / name).string();
}

}  // namespace

TEST_CASE("mul: large nbit product") {
    const Run r = run({"mul", "0.5", "0.5", "--nbit", "1048576", "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 3);
    CHECK(l[0].rfind("# tool=scpim version=0.1.0 command=mul seed=7 config_hash=", 0) == 0);
    const auto row = split_csv(l[2]);
    const double est = std::stod(row[column(l[1], "estimate")]);
    const double expected = std::stod(row[column(l[1], "expected_product")]);
    CHECK(expected == doctest::Approx(0.2446320583).epsilon(1e-9));
    CHECK(std::fabs(est - expected) < 0.0018);
    CHECK(row[column(l[1], "count")] != "");
    CHECK(std::stod(row[column(l[1], "cycles")]) == 8.0);
}

TEST_CASE("mul: zero operand and domain errors") {
    const Run z = run({"mul", "0", "0.9"});
    REQUIRE(z.code == 0);
    const auto l = lines(z.out);
    CHECK(std::stod(split_csv(l[2])[column(l[1], "estimate")]) <= 0.03);

    const Run bad = run({"mul", "1.5", "0.5"});
    CHECK(bad.code == scpim::cli::kDomain);
    CHECK(bad.err.rfind("error: ", 0) == 0);
    CHECK(lines(bad.err).size() == 1);
    CHECK(bad.out.empty());

    CHECK(run({"mul", "abc", "0.5"}).code == scpim::cli::kUsage);
    CHECK(run({"mul", "0.5"}).code == scpim::cli::kUsage);
    CHECK(run({"mul", "0.5", "0.5", "--nbit", "8"}).code == scpim::cli::kDomain);
    CHECK(run({"frobnicate"}).code == scpim::cli::kUsage);
    CHECK(run({}).code == scpim::cli::kUsage);
}

TEST_CASE("mul: raw integer operands with --width") {
    const Run r = run({"mul", "128", "255", "--width", "8", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["x"] == 0.5);
    CHECK(j["width"] == 8);
    CHECK(j["metadata"]["seed"] == 1);
    CHECK(run({"mul", "256", "1", "--width", "8"}).code == scpim::cli::kDomain);
}

TEST_CASE("mac") {
    const Run r = run({"mac", "--weights", "0.5,0.25,0.75", "--inputs", "0.5,0.5,0.5",
                       "--strategy", "csa", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    const auto row = split_csv(l[2]);
    CHECK(row[column(l[1], "m")] == "3");
    CHECK(std::stod(row[column(l[1], "popcount_cycles_per_mul")]) ==
          doctest::Approx(4.0 + 16.0 / 3));
    CHECK(std::fabs(std::stod(row[column(l[1], "estimate")]) - 0.75) < 0.1);
    CHECK(run({"mac", "--weights", "0.5", "--inputs", "0.5,0.5"}).code == scpim::cli::kDomain);
}

TEST_CASE("sweep: range arithmetic and columns") {
    const Run r = run({"sweep", "ic", "0:0.10:0.02", "--iters", "20", "--nbit", "64"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 2 + 6);
    CHECK(l[0].find("command=sweep-ic") != std::string::npos);
    CHECK(l[1].find("mean,sigma") != std::string::npos);
    CHECK(l[1].find("bias") != std::string::npos);
    CHECK(split_csv(l[7])[column(l[1], "param")] == "0.1");
    CHECK(split_csv(l[4])[column(l[1], "sigma_ic")] == "0.04");
    for (std::size_t i = 2; i < l.size(); ++i) REQUIRE(split_csv(l[i]).size() == split_csv(l[1]).size());
}

TEST_CASE("sweep: sigma falls with nbit") {
    const Run r = run({"sweep", "nbit", "250,1000,4000", "--iters", "400", "--seed", "5"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 5);
    const std::size_t c = column(l[1], "sigma");
    const double s0 = std::stod(split_csv(l[2])[c]);
    const double s1 = std::stod(split_csv(l[3])[c]);
    const double s2 = std::stod(split_csv(l[4])[c]);
    CHECK(s0 > s1);
    CHECK(s1 > s2);
}

TEST_CASE("sweep: reruns are byte-identical") {
    const std::vector<std::string> args = {"sweep", "tauy", "0.2,0.6", "--iters", "50",
                                           "--seed", "11", "--sigma-circuit", "0.05"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto other = args;
    other[6] = "12";
    CHECK(run(other).out != a.out);
}

TEST_CASE("sweep: circuit kind, histogram and file output") {
    const std::string out = temp_path("circuit.csv");
    const std::string hist = temp_path("hist.csv");
    const Run r = run({"sweep", "circuit", "0,0.1", "--iters", "100", "--out", out, "--hist", hist});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto l = lines(ss.str());
    REQUIRE(l.size() == 4);
    CHECK(split_csv(l[3])[column(l[1], "kind")] == "circuit");
    CHECK(!split_csv(l[3])[column(l[1], "baseline_sigma")].empty());
    std::ifstream h(hist);
    std::string first, header;
    std::getline(h, first);
    std::getline(h, header);
    CHECK(first.rfind("# tool=scpim", 0) == 0);
    CHECK(header == "param,bin_center,count");
    std::remove(out.c_str());
    std::remove(hist.c_str());
}

TEST_CASE("sweep: invalid ranges") {
    CHECK(run({"sweep", "ic", "0:0.1:0"}).code == scpim::cli::kUsage);
    CHECK(run({"sweep", "ic", "0.1:0:0.01"}).code == scpim::cli::kUsage);
    CHECK(run({"sweep", "ic", "0:1"}).code == scpim::cli::kUsage);
    CHECK(run({"sweep", "ic", "x,y"}).code == scpim::cli::kUsage);
    CHECK(run({"sweep", "nbit", "100.5"}).code == scpim::cli::kUsage);
    CHECK(run({"sweep", "ic", "-0.1", "--iters", "10"}).code == scpim::cli::kDomain);
    CHECK(run({"sweep", "bogus", "1"}).code == scpim::cli::kUsage);
}

TEST_CASE("perf: anchors in CSV and JSON") {
    const Run r = run({"perf", "--bits", "10"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("ratio,cycles_sc_over_scpim_apc,,4\n") != std::string::npos);
    CHECK(r.out.find("ratio,cycles_pim_over_scpim_apc,,18\n") != std::string::npos);

    const Run j = run({"perf", "--bits", "8", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["approaches"]["pim"]["cycles"]["total"] == 143.0);
    CHECK(doc["metadata"]["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("perf: zeroed config") {
    const Run r = run({"perf", "--config", data_file("zeroed.yaml"), "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    for (const auto& [name, a] : doc["approaches"].items()) {
        CHECK(a["cycles"]["total"] == 0.0);
        CHECK(a["energy_pj"]["total"] == 0.0);
        CHECK(a["area_um2"]["total"] == 0.0);
    }
    const Run d = run({"perf"});
    CHECK(nlohmann::json::parse(r.out)["metadata"]["config_hash"] !=
          lines(d.out)[0].substr(lines(d.out)[0].find("config_hash=") + 12));
}

TEST_CASE("config and io errors") {
    CHECK(run({"perf", "--config", "/nonexistent.yaml"}).code == scpim::cli::kConfig);
    const std::string bad = temp_path("bad.yaml");
    std::ofstream(bad) << "cycles: {scpim: {presett: 1}}\n";
    const Run r = run({"perf", "--config", bad});
    CHECK(r.code == scpim::cli::kConfig);
    CHECK(r.err.find("presett") != std::string::npos);
    std::remove(bad.c_str());
    CHECK(run({"perf", "--out", "/nonexistent-dir/x.csv"}).code == scpim::cli::kIo);
    CHECK(run({"perf", "--bits", "20"}).code == scpim::cli::kUsage);
}

TEST_CASE("lut-dump") {
    const Run r = run({"lut-dump", "--width", "4"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 1 + 1 + 1 + 16);
    CHECK(l[1] == "# in_width=4 out_width=16 tau_scale_ns=1");
    CHECK(l[2] == "raw,neg_log_fixed");
    CHECK(l[3 + 8] == "8,45426");
}

TEST_CASE("seed comes from the environment when not given") {
    ::setenv("SCPIM_SEED", "99", 1);
    const Run a = run({"mul", "0.3", "0.6"});
    const Run b = run({"mul", "0.3", "0.6", "--seed", "99"});
    ::setenv("SCPIM_SEED", "nope", 1);
    const Run c = run({"mul", "0.3", "0.6"});
    ::unsetenv("SCPIM_SEED");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("seed=99") != std::string::npos);
    CHECK(c.code == scpim::cli::kUsage);
}

TEST_CASE("help exits cleanly") {
    const Run r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sweep") != std::string::npos);
}
